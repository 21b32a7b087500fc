#pragma once

// Numerical core: needs Eigen and Boost headers only.
// The JSON front end lives in io.hpp, commands.hpp and suite.hpp and additionally needs nlohmann_json.

#include "mifht/error.hpp"
#include "mifht/interval.hpp"
#include "mifht/chebyshev.hpp"
#include "mifht/function.hpp"
#include "mifht/fht.hpp"
#include "mifht/theta.hpp"
#include "mifht/solver.hpp"
#include "mifht/gamma.hpp"
#include "mifht/uniform.hpp"
