#pragma once

#include <Eigen/Core>
#include <boost/version.hpp>

#include "mifht/fht.hpp"
#include "mifht/gamma.hpp"
#include "mifht/io.hpp"
#include "mifht/solver.hpp"
#include "mifht/suite.hpp"
#include "mifht/uniform.hpp"

namespace mifht::io {

namespace detail {

[[nodiscard]] inline json kappa_json(const PiecewiseFunction& psi) {
  json k = json::array();
  for (std::size_t j = 0; j < psi.size(); ++j) k.push_back(complex_json(range_scan(psi, j).kappa));
  return k;
}

[[nodiscard]] inline SpectralData spectral_for(const ProblemSpec& spec) {
  return build_spectral_data(spec.sys, UniformGrid{spec.grid.t_step, spec.grid.t_points});
}

/// The uniform pipeline implements the all-ones matrix only.
inline void require_all_ones(const ThetaMatrix& theta) {
  if (!(theta.entries().array() == 1.0).all())
    throw Error(ErrorKind::schema, "uniform-invert needs theta = \"uniform\" (all entries one)");
}

inline void run_forward(const ProblemSpec& spec, ResultBundle& b) {
  const PiecewiseFunction phi = build_rhs(spec);
  const PiecewiseFunction psi = forward_map(spec.theta, phi, spec.grid.modes);
  b.diagnostics["phi_norm"] = l2_norm(phi);
  b.diagnostics["psi_norm"] = l2_norm(psi);
  b.diagnostics["c"] = complex_json(compute_c(psi));
  b.tables.push_back({"psi", psi});
  for (std::size_t j = 0; j < phi.system().size(); ++j)
    if (phi.piece(j).weight == Weight::plain) {
      b.warnings.push_back("input does not vanish at the endpoints of interval " + std::to_string(j) +
                           "; the output has logarithmic endpoint singularities and its Chebyshev projection "
                           "converges only algebraically in --modes");
      break;
    }
  if ((spec.theta.entries().array() == 1.0).all()) {
    const SpectralData sd = spectral_for(spec);
    const UniformTransform u = uniform_forward(sd, phi, spec.grid.modes);
    b.checks.push_back(check_le("uniform route discrepancy", suite::relative_l2(u.result, psi), spec.tol.uniform_residual));
    b.warnings.insert(b.warnings.end(), u.warnings.begin(), u.warnings.end());
  }
}

inline void run_invert(const ProblemSpec& spec, ResultBundle& b) {
  const PiecewiseFunction psi = build_rhs(spec);
  SolveOptions so;
  so.nystrom_nodes = spec.grid.nystrom;
  so.range_tol = spec.tol.range;
  so.singular_threshold = spec.tol.singular;
  const SolveResult res = solve_phi(spec.theta, psi, so);
  b.diagnostics["c"] = complex_json(res.c);
  b.diagnostics["kappa"] = kappa_json(psi);
  b.diagnostics["sigma_min"] = res.diagnostics.sigma_min;
  b.diagnostics["sigma_max"] = res.diagnostics.sigma_max;
  b.diagnostics["nystrom_residual"] = res.diagnostics.residual;
  b.warnings.insert(b.warnings.end(), res.diagnostics.warnings.begin(), res.diagnostics.warnings.end());
  b.tables.push_back({"phi", res.phi});
  b.tables.push_back({"nu", res.nu});
  const double forward_residual = suite::relative_l2(forward_map(spec.theta, res.phi, spec.grid.modes), psi);
  b.checks.push_back(check_le("forward residual ||chi Theta H phi - psi|| / ||psi||", forward_residual, spec.tol.residual));
  if (spec.theta.classification() == ThetaClass::spd_symmetric && !spec.theta.is_diagonal()) {
    ResolventOptions ro;
    ro.nystrom_nodes = spec.grid.nystrom;
    ro.range_tol = spec.tol.range;
    ro.singular_threshold = spec.tol.singular;
    const PiecewiseFunction via = invert_via_resolvent(spec.theta, psi, ro);
    b.tables.push_back({"phi_resolvent", via});
    b.checks.push_back(check_le("solve_phi vs resolvent discrepancy", suite::relative_l2(via, res.phi), spec.tol.discrepancy));
  }
}

inline void run_range_check(const ProblemSpec& spec, ResultBundle& b) {
  const PiecewiseFunction psi = build_rhs(spec);
  const double scale = std::max(l2_norm(psi), 1e-300);
  if ((spec.theta.entries().array() == 1.0).all() && spec.sys.size() >= 2) {
    const UniformRangeReport rep = uniform_range_check(spectral_for(spec), psi, spec.tol.lambda0, spec.tol.uniform_range);
    for (std::size_t m = 0; m < rep.channel_energy.size(); ++m)
      b.checks.push_back(check_le("channel " + std::to_string(m) + " low-frequency energy", rep.channel_energy[m], rep.tolerance));
    b.diagnostics["method"] = "uniform low-frequency test";
  } else {
    const Eigen::VectorXcd c = compute_c(psi);
    b.diagnostics["c"] = complex_json(c);
    b.diagnostics["kappa"] = kappa_json(psi);
    if (spec.theta.is_diagonal()) {
      spec.theta.require_invertible_diagonal();
      b.diagnostics["method"] = "diagonal interaction: every L2 datum is in range";
    } else {
      const PiecewiseFunction nu = compute_nu(psi, c, spec.theta, spec.tol.range);
      const GammaSolution G = build_gamma(spec.sys, spec.theta, spec.grid.nystrom);
      const J12Terms j12 = range_condition_J12(G, nu);
      b.diagnostics["c_J12"] = complex_json(j12.total());
      b.checks.push_back(check_le("|c - c_J12| / ||psi||", (j12.total() - c).cwiseAbs().maxCoeff() / scale, spec.tol.residual));
      if (spec.theta.is_symmetric()) {
        const Eigen::VectorXcd n2 = range_condition_N2(G, nu);
        b.diagnostics["c_N2"] = complex_json(n2);
        if (spec.sys.size() == 2) b.diagnostics["c_two_interval"] = complex_json(range_condition_two_intervals(G, nu));
        b.checks.push_back(check_le("|c - c_N2| / ||psi||", (n2 - c).cwiseAbs().maxCoeff() / scale, spec.tol.residual));
        b.checks.push_back(check_le("eqL1 residual / ||psi||", range_check_L1_variant(G, psi).norm() / scale, spec.tol.residual));
      }
      b.diagnostics["method"] = "range conditions through Gamma";
    }
  }
  b.diagnostics["in_range"] = b.all_pass();
  if (!b.all_pass()) b.status = exit_code(ErrorKind::range);
}

inline void run_gamma_check(const ProblemSpec& spec, ResultBundle& b) {
  const GammaSolution G = build_gamma(spec.sys, spec.theta, spec.grid.nystrom, spec.grid.lambda);
  const std::vector<double> pts = suite::fixtures::interior_points(spec.sys, 20);
  b.checks.push_back(check_le("jump residual", verify_jump(G, pts), spec.tol.jump));
  const double span = spec.sys[spec.sys.size() - 1].b - spec.sys[0].a;
  const double mid = 0.5 * (spec.sys[spec.sys.size() - 1].b + spec.sys[0].a);
  double det = 0.0;
  for (cplx z : {cplx(mid, 0.5 * span), cplx(mid, -0.25 * span), cplx(spec.sys[0].a - 0.5 * span, 0.0),
                 cplx(spec.sys[0].center(), 1e-3 * span)})
    det = std::max(det, std::abs(G.value(z).determinant() - 1.0));
  b.checks.push_back(check_le("|det Gamma - 1|", det, spec.tol.determinant));
  const auto n = static_cast<Eigen::Index>(spec.sys.size());
  double far = 0.0;
  for (cplx z : {cplx(mid + 1e3, 0.0), cplx(mid, 1e3), cplx(mid - 1e3, 0.0), cplx(mid, -1e3)})
    far = std::max(far, (G.value(z) - Eigen::MatrixXcd::Identity(n, n)).norm());
  b.checks.push_back(check_le("||Gamma - Id|| at distance 1e3", far, spec.tol.normalization));
  const NoJumpResidual nj = verify_no_jump(G, pts);
  b.checks.push_back(check_le("Gamma f jump", nj.gamma_f, spec.tol.no_jump));
  b.checks.push_back(check_le("g^t Gamma^-1 jump", nj.g_gamma_inv, spec.tol.no_jump));
  b.diagnostics["lambda"] = complex_json(spec.grid.lambda);
}

inline void run_uniform_invert(const ProblemSpec& spec, ResultBundle& b) {
  require_all_ones(spec.theta);
  const PiecewiseFunction psi = build_rhs(spec);
  const SpectralData sd = spectral_for(spec);
  const UniformRangeReport rep = uniform_range_check(sd, psi, spec.tol.lambda0, spec.tol.uniform_range);
  for (std::size_t m = 0; m < rep.channel_energy.size(); ++m)
    b.checks.push_back(check_le("channel " + std::to_string(m) + " low-frequency energy", rep.channel_energy[m], rep.tolerance));
  b.diagnostics["in_range"] = rep.pass;
  if (!rep.pass) {
    b.status = exit_code(ErrorKind::range);
    return;
  }
  const UniformTransform inv = uniform_invert(sd, psi, spec.grid.modes, false);
  b.warnings.insert(b.warnings.end(), inv.warnings.begin(), inv.warnings.end());
  b.diagnostics["tail_fraction"] = inv.tail_fraction;
  b.tables.push_back({"phi", inv.result});
  const UniformTransform back = uniform_forward(sd, inv.result, spec.grid.modes);
  b.checks.push_back(check_le("forward residual ||H phi - psi|| / ||psi||", suite::relative_l2(back.result, psi),
                              spec.tol.uniform_residual));
}

inline void run_injectivity(const ProblemSpec& spec, ResultBundle& b) {
  const InjectivityReport rep = injectivity_report(spec.theta, spec.sys, spec.grid.nystrom);
  b.diagnostics["classification"] = to_string(rep.classification);
  b.diagnostics["sigma_min"] = rep.sigma_min;
  b.diagnostics["sigma_max"] = rep.sigma_max;
  b.diagnostics["min_J_ratio"] = rep.min_j_ratio;
  b.diagnostics["samples"] = rep.samples;
  b.warnings.insert(b.warnings.end(), rep.caveats.begin(), rep.caveats.end());
  if (rep.classification == ThetaClass::spd_symmetric) {
    b.checks.push_back(check_gt("sigma_min(Id - K)", rep.sigma_min, 1e-6));
    b.checks.push_back(check_gt("min J(f,f)/||f||^2", rep.min_j_ratio, 0.0));
  }
}

inline void run_selftest(ResultBundle& b) {
  const suite::SuiteSize size = suite::SuiteSize::reduced();
  json per = json::array();
  for (const suite::CriterionSpec& c : suite::criteria()) {
    const suite::CriterionResult r = suite::run_criterion(c, size, false);
    for (const Check& ch : r.checks) {
      Check named = ch;
      named.name = std::to_string(r.id) + ". " + ch.name;
      b.checks.push_back(std::move(named));
    }
    per.push_back({{"criterion", r.id}, {"title", r.title}, {"pass", r.pass()}});
  }
  b.diagnostics["suites"] = per;
}

}  // namespace detail

[[nodiscard]] inline json provenance(const ProblemSpec* spec) {
  json p = {{"tool", "mifht"},
            {"version", version},
            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION)},
            {"boost", BOOST_LIB_VERSION}};
  if (spec != nullptr) {
    p["input_hash"] = "fnv1a64:" + hex64(spec->input_hash);
    p["parameters"] = spec->echo();
  }
  return p;
}

/// Runs the requested command. Failed checks set status 1 unless the command
/// assigned a more specific exit code; library errors propagate.
[[nodiscard]] inline ResultBundle run_command(const ProblemSpec& spec) {
  ResultBundle b;
  b.command = spec.command;
  b.provenance = provenance(&spec);
  b.diagnostics["theta_class"] = to_string(spec.theta.classification());
  switch (spec.command) {
    case Command::forward: detail::run_forward(spec, b); break;
    case Command::invert: detail::run_invert(spec, b); break;
    case Command::range_check: detail::run_range_check(spec, b); break;
    case Command::gamma_check: detail::run_gamma_check(spec, b); break;
    case Command::uniform_invert: detail::run_uniform_invert(spec, b); break;
    case Command::injectivity_report: detail::run_injectivity(spec, b); break;
    case Command::selftest: detail::run_selftest(b); break;
  }
  if (b.status == 0 && !b.all_pass()) b.status = 1;
  return b;
}

/// Self-test without a problem file.
[[nodiscard]] inline ResultBundle run_selftest() {
  ResultBundle b;
  b.command = Command::selftest;
  b.provenance = provenance(nullptr);
  detail::run_selftest(b);
  if (!b.all_pass()) b.status = 1;
  return b;
}

}  // namespace mifht::io
