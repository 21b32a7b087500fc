#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <Eigen/QR>
#include <nlohmann/json.hpp>

#include "mifht/error.hpp"
#include "mifht/function.hpp"
#include "mifht/interval.hpp"
#include "mifht/solver.hpp"
#include "mifht/theta.hpp"

namespace mifht::io {

using json = nlohmann::ordered_json;

inline constexpr std::string_view version = "0.1.0";

enum class Command { forward, invert, range_check, gamma_check, uniform_invert, injectivity_report, selftest };

[[nodiscard]] constexpr std::string_view to_string(Command c) noexcept {
  switch (c) {
    case Command::forward: return "forward";
    case Command::invert: return "invert";
    case Command::range_check: return "range-check";
    case Command::gamma_check: return "gamma-check";
    case Command::uniform_invert: return "uniform-invert";
    case Command::injectivity_report: return "injectivity-report";
    case Command::selftest: return "selftest";
  }
  return "unknown";
}

[[nodiscard]] inline Command parse_command(std::string_view name) {
  for (Command c : {Command::forward, Command::invert, Command::range_check, Command::gamma_check,
                    Command::uniform_invert, Command::injectivity_report, Command::selftest})
    if (to_string(c) == name) return c;
  throw Error(ErrorKind::schema, "unknown command '" + std::string(name) + "'");
}

/// 64-bit FNV-1a.
[[nodiscard]] constexpr std::uint64_t fnv1a(std::string_view bytes) noexcept {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

[[nodiscard]] inline std::string hex64(std::uint64_t v) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xf];
  return s;
}

struct NumericParams {
  std::size_t modes = 64;     ///< Chebyshev modes per interval for projections and output tables
  std::size_t nystrom = 96;   ///< Nystrom nodes per interval
  double t_step = 1.0 / 64.0;
  std::size_t t_points = 4096;
  cplx lambda = 1.0;          ///< spectral parameter for gamma-check
};

struct Tolerances {
  double range = -1.0;          ///< single-interval range tolerance; < 0 selects the per-interval default
  double residual = 1e-6;       ///< relative forward residual and range-condition residuals
  double discrepancy = 1e-6;    ///< solve_phi against invert_via_resolvent
  double jump = 1e-7;
  double determinant = 1e-8;
  double normalization = 1e-5;  ///< ||Gamma(z) - Id|| at |z| = 1e3
  double no_jump = 1e-8;
  double singular = 1e-10;      ///< relative singular-value floor
  double uniform_range = 1e-6;  ///< low-frequency energy relative to ||g||^2
  double lambda0 = 0.25;
  double uniform_residual = 1e-4;
};

struct ProblemSpec {
  Command command = Command::forward;
  IntervalSystem sys;
  ThetaMatrix theta;
  json theta_source;  ///< as written: "uniform", "identity" or a matrix
  json rhs;
  NumericParams grid;
  Tolerances tol;
  std::uint64_t input_hash = 0;

  /// Spec with defaults filled in, as echoed into result provenance.
  [[nodiscard]] json echo() const {
    json intervals = json::array();
    for (const Interval& iv : sys.intervals()) intervals.push_back({iv.a, iv.b});
    return json{{"command", to_string(command)},
                {"intervals", intervals},
                {"theta", theta_source},
                {"theta_class", to_string(theta.classification())},
                {"rhs", rhs},
                {"grid",
                 {{"modes", grid.modes}, {"nystrom", grid.nystrom}, {"t_step", grid.t_step}, {"t_points", grid.t_points}}},
                {"lambda", {grid.lambda.real(), grid.lambda.imag()}},
                {"tolerances",
                 {{"range", tol.range},
                  {"residual", tol.residual},
                  {"discrepancy", tol.discrepancy},
                  {"jump", tol.jump},
                  {"determinant", tol.determinant},
                  {"normalization", tol.normalization},
                  {"no_jump", tol.no_jump},
                  {"singular", tol.singular},
                  {"uniform_range", tol.uniform_range},
                  {"lambda0", tol.lambda0},
                  {"uniform_residual", tol.uniform_residual}}}};
  }
};

namespace detail {

[[noreturn]] inline void schema_fail(std::string_view field, std::string_view msg) {
  throw Error(ErrorKind::schema, "field '" + std::string(field) + "': " + std::string(msg));
}

[[nodiscard]] inline double number(const json& j, std::string_view field) {
  if (!j.is_number()) schema_fail(field, "expected a number");
  return j.get<double>();
}

[[nodiscard]] inline std::size_t count(const json& j, std::string_view field, std::size_t min_value) {
  if (!j.is_number_integer() || j.get<long long>() < static_cast<long long>(min_value))
    schema_fail(field, "expected an integer >= " + std::to_string(min_value));
  return j.get<std::size_t>();
}

[[nodiscard]] inline std::string line_context(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline void reject_unknown(const json& obj, std::string_view where, std::initializer_list<std::string_view> keys) {
  for (const auto& [k, v] : obj.items())
    if (std::find(keys.begin(), keys.end(), k) == keys.end())
      schema_fail(std::string(where) + (where.empty() ? "" : ".") + k, "unknown key");
}

[[nodiscard]] inline ThetaMatrix parse_theta(const json& j, std::size_t n) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "uniform") return ThetaMatrix::uniform(n);
    if (s == "identity") return ThetaMatrix::identity(n);
    schema_fail("theta", "expected \"uniform\", \"identity\" or a matrix");
  }
  if (!j.is_array() || j.size() != n) schema_fail("theta", "expected an " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd e(m, m);
  for (std::size_t r = 0; r < n; ++r) {
    if (!j[r].is_array() || j[r].size() != n) schema_fail("theta", "row " + std::to_string(r + 1) + " has the wrong length");
    for (std::size_t c = 0; c < n; ++c)
      e(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          number(j[r][c], "theta[" + std::to_string(r) + "][" + std::to_string(c) + "]");
  }
  return ThetaMatrix(std::move(e));
}

inline void validate_rhs(const json& rhs, std::size_t n, std::string_view field) {
  if (!rhs.is_object()) schema_fail(field, "expected an object");
  const std::string f(field);
  if (rhs.contains("samples")) {
    reject_unknown(rhs, f, {"samples", "weight"});
    const json& s = rhs["samples"];
    if (!s.is_array() || s.size() != n) schema_fail(f + ".samples", "expected one entry per interval (" + std::to_string(n) + ")");
    for (std::size_t j = 0; j < n; ++j) {
      const std::string sf = f + ".samples[" + std::to_string(j) + "]";
      reject_unknown(s[j], sf, {"x", "re", "im"});
      if (!s[j].contains("x") || !s[j].contains("re")) schema_fail(sf, "needs 'x' and 're' arrays");
      const std::size_t m = s[j]["x"].size();
      if (!s[j]["x"].is_array() || m < 2) schema_fail(sf + ".x", "expected at least two abscissae");
      if (!s[j]["re"].is_array() || s[j]["re"].size() != m) schema_fail(sf + ".re", "length differs from x");
      if (s[j].contains("im") && (!s[j]["im"].is_array() || s[j]["im"].size() != m))
        schema_fail(sf + ".im", "length differs from x");
    }
    if (rhs.contains("weight") && rhs["weight"] != "plain" && rhs["weight"] != "sqrt-vanishing")
      schema_fail(f + ".weight", "expected \"plain\" or \"sqrt-vanishing\"");
    return;
  }
  if (!rhs.contains("preset") || !rhs["preset"].is_string()) schema_fail(f, "needs a 'preset' name or 'samples'");
  const auto name = rhs["preset"].get<std::string>();
  if (name == "const") {
    reject_unknown(rhs, f, {"preset", "value"});
  } else if (name == "linear") {
    reject_unknown(rhs, f, {"preset", "a", "b"});
  } else if (name == "cheb-sqrt") {
    reject_unknown(rhs, f, {"preset", "k"});
    if (!rhs.contains("k")) schema_fail(f + ".k", "missing");
    (void)count(rhs["k"], f + ".k", 0);
  } else if (name == "gaussian-bump") {
    reject_unknown(rhs, f, {"preset", "width", "center"});
  } else if (name == "forward-of") {
    reject_unknown(rhs, f, {"preset", "of", "theta"});
    if (!rhs.contains("of")) schema_fail(f + ".of", "missing");
    validate_rhs(rhs["of"], n, f + ".of");
    if (rhs.contains("theta")) (void)parse_theta(rhs["theta"], n);
  } else {
    schema_fail(f + ".preset", "unknown preset '" + name + "'");
  }
  for (const char* key : {"value", "a", "b", "width", "center"})
    if (rhs.contains(key)) (void)number(rhs[key], f + "." + key);
}

/// Least-squares Chebyshev fit of samples (divided by w for sqrt-vanishing data).
[[nodiscard]] inline cheb::Coeffs fit_samples(const Interval& iv, const std::vector<double>& x,
                                             const std::vector<cplx>& v, Weight weight, std::size_t modes) {
  const auto rows = static_cast<Eigen::Index>(x.size());
  const auto cols = static_cast<Eigen::Index>(std::min(modes, x.size()));
  Eigen::MatrixXd A(rows, cols);
  Eigen::VectorXcd b(rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const double xr = x[static_cast<std::size_t>(r)];
    if (!iv.contains_open(xr))
      throw Error(ErrorKind::domain, "sample abscissa " + std::to_string(xr) + " is not inside its interval");
    const double s = iv.to_reference(xr);
    double prev = 1.0;
    double cur = weight == Weight::plain ? s : 2.0 * s;
    for (Eigen::Index c = 0; c < cols; ++c) {
      A(r, c) = c == 0 ? 1.0 : cur;
      if (c >= 1) {
        const double next = 2.0 * s * cur - prev;
        prev = cur;
        cur = next;
      }
    }
    const cplx val = v[static_cast<std::size_t>(r)];
    b[r] = weight == Weight::plain ? val : val / std::sqrt((xr - iv.a) * (iv.b - xr));
  }
  const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  cheb::Coeffs out(cols);
  out.real() = qr.solve(b.real());
  out.imag() = qr.solve(b.imag());
  return out;
}

}  // namespace detail

/// Parses a JSON problem description. Top-level keys: command, intervals,
/// theta, rhs, grid, lambda, tolerances.
[[nodiscard]] inline ProblemSpec parse_problem(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::schema, detail::line_context(text, e.byte == 0 ? 0 : e.byte - 1) + ": " + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorKind::schema, "problem must be a JSON object");
  detail::reject_unknown(doc, "", {"command", "intervals", "theta", "rhs", "grid", "lambda", "tolerances"});
  ProblemSpec spec;
  spec.input_hash = fnv1a(text);
  if (doc.contains("command")) {
    if (!doc["command"].is_string()) detail::schema_fail("command", "expected a string");
    spec.command = parse_command(doc["command"].get<std::string>());
  }
  if (!doc.contains("intervals") || !doc["intervals"].is_array() || doc["intervals"].empty())
    detail::schema_fail("intervals", "expected a non-empty array of [a, b] pairs");
  std::vector<std::pair<double, double>> ends;
  for (std::size_t j = 0; j < doc["intervals"].size(); ++j) {
    const json& p = doc["intervals"][j];
    const std::string f = "intervals[" + std::to_string(j) + "]";
    if (!p.is_array() || p.size() != 2) detail::schema_fail(f, "expected [a, b]");
    ends.emplace_back(detail::number(p[0], f + "[0]"), detail::number(p[1], f + "[1]"));
  }
  spec.sys = make_interval_system(ends);
  const std::size_t n = spec.sys.size();
  spec.theta_source = doc.contains("theta") ? doc["theta"] : json("identity");
  spec.theta = detail::parse_theta(spec.theta_source, n);
  if (doc.contains("rhs")) {
    detail::validate_rhs(doc["rhs"], n, "rhs");
    spec.rhs = doc["rhs"];
  } else if (spec.command != Command::selftest) {
    detail::schema_fail("rhs", "missing");
  }
  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    if (!g.is_object()) detail::schema_fail("grid", "expected an object");
    detail::reject_unknown(g, "grid", {"modes", "nystrom", "t_step", "t_points"});
    if (g.contains("modes")) spec.grid.modes = detail::count(g["modes"], "grid.modes", 2);
    if (g.contains("nystrom")) spec.grid.nystrom = detail::count(g["nystrom"], "grid.nystrom", 4);
    if (g.contains("t_step")) {
      spec.grid.t_step = detail::number(g["t_step"], "grid.t_step");
      if (!(spec.grid.t_step > 0.0)) detail::schema_fail("grid.t_step", "must be positive");
    }
    if (g.contains("t_points")) {
      spec.grid.t_points = detail::count(g["t_points"], "grid.t_points", 8);
      if ((spec.grid.t_points & (spec.grid.t_points - 1)) != 0) detail::schema_fail("grid.t_points", "must be a power of two");
    }
  }
  if (doc.contains("lambda")) {
    const json& l = doc["lambda"];
    if (l.is_number()) {
      spec.grid.lambda = l.get<double>();
    } else if (l.is_array() && l.size() == 2) {
      spec.grid.lambda = {detail::number(l[0], "lambda[0]"), detail::number(l[1], "lambda[1]")};
    } else {
      detail::schema_fail("lambda", "expected a number or [re, im]");
    }
  }
  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    if (!t.is_object()) detail::schema_fail("tolerances", "expected an object");
    detail::reject_unknown(t, "tolerances",
                           {"range", "residual", "discrepancy", "jump", "determinant", "normalization", "no_jump",
                            "singular", "uniform_range", "lambda0", "uniform_residual"});
    const auto set = [&](const char* key, double& slot) {
      if (t.contains(key)) slot = detail::number(t[key], std::string("tolerances.") + key);
    };
    set("range", spec.tol.range);
    set("residual", spec.tol.residual);
    set("discrepancy", spec.tol.discrepancy);
    set("jump", spec.tol.jump);
    set("determinant", spec.tol.determinant);
    set("normalization", spec.tol.normalization);
    set("no_jump", spec.tol.no_jump);
    set("singular", spec.tol.singular);
    set("uniform_range", spec.tol.uniform_range);
    set("lambda0", spec.tol.lambda0);
    set("uniform_residual", spec.tol.uniform_residual);
  }
  return spec;
}

[[nodiscard]] inline ProblemSpec parse_problem_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::schema, "cannot read problem file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_problem(ss.str());
}

/// Builds the function described by an rhs block on the problem's intervals.
[[nodiscard]] inline PiecewiseFunction build_rhs(const ProblemSpec& spec, const json& rhs) {
  const IntervalSystem& sys = spec.sys;
  const std::size_t modes = spec.grid.modes;
  if (rhs.contains("samples")) {
    const Weight weight = rhs.value("weight", std::string("plain")) == "plain" ? Weight::plain : Weight::sqrt_vanishing;
    std::vector<Piece> pieces(sys.size());
    bool real = true;
    for (std::size_t j = 0; j < sys.size(); ++j) {
      const json& s = rhs["samples"][j];
      const auto x = s["x"].get<std::vector<double>>();
      const auto re = s["re"].get<std::vector<double>>();
      const auto im = s.contains("im") ? s["im"].get<std::vector<double>>() : std::vector<double>(x.size(), 0.0);
      std::vector<cplx> v(x.size());
      for (std::size_t i = 0; i < x.size(); ++i) {
        v[i] = {re[i], im[i]};
        if (im[i] != 0.0) real = false;
      }
      pieces[j] = {weight, detail::fit_samples(sys[j], x, v, weight, modes)};
    }
    return {sys, std::move(pieces), real ? Field::real : Field::complex};
  }
  const auto name = rhs["preset"].get<std::string>();
  if (name == "const") {
    const double value = rhs.value("value", 1.0);
    return project(sys, 2, Weight::plain, Field::real, [&](std::size_t, double) { return cplx(value); });
  }
  if (name == "linear") {
    const double a = rhs.value("a", 0.0);
    const double b = rhs.value("b", 1.0);
    return project(sys, 2, Weight::plain, Field::real, [&](std::size_t, double x) { return cplx(a + b * x); });
  }
  if (name == "cheb-sqrt") {
    const auto k = rhs["k"].get<std::size_t>();
    std::vector<Piece> pieces(sys.size());
    for (Piece& p : pieces) {
      p = {Weight::sqrt_vanishing, cheb::Coeffs::Zero(static_cast<Eigen::Index>(k + 1))};
      p.coeffs[static_cast<Eigen::Index>(k)] = 1.0;
    }
    return {sys, std::move(pieces), Field::real};
  }
  if (name == "gaussian-bump") {
    const double width = rhs.value("width", 0.25);
    const double center = rhs.value("center", 0.0);
    if (!(width > 0.0)) detail::schema_fail("rhs.width", "must be positive");
    return project(sys, modes, Weight::sqrt_vanishing, Field::real, [&](std::size_t j, double x) {
      const double s = (sys[j].to_reference(x) - center) / width;
      return cplx(std::sqrt((x - sys[j].a) * (sys[j].b - x)) * std::exp(-0.5 * s * s));
    });
  }
  // forward-of
  const ThetaMatrix theta = rhs.contains("theta") ? detail::parse_theta(rhs["theta"], sys.size()) : spec.theta;
  return forward_map(theta, build_rhs(spec, rhs["of"]), modes);
}

[[nodiscard]] inline PiecewiseFunction build_rhs(const ProblemSpec& spec) { return build_rhs(spec, spec.rhs); }

// ---------------------------------------------------------------------------
// Function tables: columns interval_index, x, re_value, im_value.
// ---------------------------------------------------------------------------

struct TableRow {
  std::size_t interval = 0;
  double x = 0.0;
  cplx value;
};

[[nodiscard]] inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return {buf, res.ptr};
}

/// Samples f at `samples` first-kind nodes per interval, ascending in x.
[[nodiscard]] inline std::vector<TableRow> sample_table(const PiecewiseFunction& f, std::size_t samples) {
  std::vector<TableRow> rows;
  for (std::size_t j = 0; j < f.size(); ++j) {
    const std::vector<IntervalPoint> pts = first_kind_points(f.system(), j, samples);
    for (auto it = pts.rbegin(); it != pts.rend(); ++it) rows.push_back({j, it->x, f.value(*it)});
  }
  return rows;
}

[[nodiscard]] inline std::string format_table(const std::vector<TableRow>& rows) {
  std::string out = "interval_index\tx\tre_value\tim_value\n";
  for (const TableRow& r : rows)
    out += std::to_string(r.interval) + '\t' + format_double(r.x) + '\t' + format_double(r.value.real()) + '\t' +
           format_double(r.value.imag()) + '\n';
  return out;
}

[[nodiscard]] inline std::vector<TableRow> parse_table(std::string_view text) {
  std::vector<TableRow> rows;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (line.empty() || line_no == 1) continue;
    TableRow r;
    double fields[3];
    const char* p = line.data();
    const char* end = line.data() + line.size();
    std::from_chars_result res = std::from_chars(p, end, r.interval);
    for (double& v : fields) {
      if (res.ec != std::errc{} || res.ptr == end || *res.ptr != '\t')
        throw Error(ErrorKind::schema, "table line " + std::to_string(line_no) + " is malformed");
      res = std::from_chars(res.ptr + 1, end, v);
    }
    if (res.ec != std::errc{} || res.ptr != end)
      throw Error(ErrorKind::schema, "table line " + std::to_string(line_no) + " is malformed");
    r.x = fields[0];
    r.value = {fields[1], fields[2]};
    rows.push_back(r);
  }
  return rows;
}

/// rhs block reproducing a table by sample projection.
[[nodiscard]] inline json samples_from_table(const std::vector<TableRow>& rows, std::size_t n, Weight weight) {
  json samples = json::array();
  for (std::size_t j = 0; j < n; ++j) {
    json x = json::array(), re = json::array(), im = json::array();
    for (const TableRow& r : rows)
      if (r.interval == j) {
        x.push_back(r.x);
        re.push_back(r.value.real());
        im.push_back(r.value.imag());
      }
    samples.push_back({{"x", x}, {"re", re}, {"im", im}});
  }
  return {{"samples", samples}, {"weight", weight == Weight::plain ? "plain" : "sqrt-vanishing"}};
}

// ---------------------------------------------------------------------------
// Result bundle.
// ---------------------------------------------------------------------------

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string relation = "<=";  ///< "<=" or ">"
};

[[nodiscard]] inline Check check_le(std::string name, double value, double tolerance) {
  return {std::move(name), value, tolerance, value <= tolerance, "<="};
}
[[nodiscard]] inline Check check_gt(std::string name, double value, double bound) {
  return {std::move(name), value, bound, value > bound, ">"};
}

struct NamedTable {
  std::string name;
  PiecewiseFunction function;
};

struct ResultBundle {
  Command command = Command::forward;
  int status = 0;  ///< process exit code
  json diagnostics = json::object();
  std::vector<Check> checks;
  std::vector<NamedTable> tables;
  std::vector<std::string> warnings;
  json provenance = json::object();

  [[nodiscard]] bool all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }
};

[[nodiscard]] inline json complex_json(cplx v) { return json::array({v.real(), v.imag()}); }

[[nodiscard]] inline json complex_json(const Eigen::VectorXcd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_json(v[i]));
  return a;
}

[[nodiscard]] inline json to_json(const ResultBundle& b) {
  json checks = json::array();
  for (const Check& c : b.checks)
    checks.push_back({{"name", c.name}, {"value", c.value}, {"relation", c.relation}, {"tolerance", c.tolerance}, {"pass", c.pass}});
  json tables = json::array();
  for (const NamedTable& t : b.tables) tables.push_back(t.name + ".tsv");
  return json{{"command", to_string(b.command)}, {"status", b.status},   {"checks", checks},
              {"diagnostics", b.diagnostics},     {"warnings", b.warnings}, {"tables", tables},
              {"provenance", b.provenance}};
}

/// Writes diagnostics.json and one <name>.tsv per table into dir.
inline void write_bundle(const ResultBundle& b, const std::filesystem::path& dir, std::size_t samples) {
  std::filesystem::create_directories(dir);
  {
    std::ofstream out(dir / "diagnostics.json", std::ios::binary);
    out << to_json(b).dump(2) << '\n';
    if (!out) throw Error(ErrorKind::schema, "cannot write " + (dir / "diagnostics.json").string());
  }
  for (const NamedTable& t : b.tables) {
    std::ofstream out(dir / (t.name + ".tsv"), std::ios::binary);
    out << format_table(sample_table(t.function, samples));
    if (!out) throw Error(ErrorKind::schema, "cannot write table " + t.name);
  }
}

}  // namespace mifht::io
