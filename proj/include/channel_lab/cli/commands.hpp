#pragma once

// The channel-lab commands. Each returns a structured report (JSON), a
// human-readable summary and the process exit code.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <exception>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>

#include "channel_lab/channel.hpp"
#include "channel_lab/cli/spec_file.hpp"
#include "channel_lab/hamiltonian.hpp"
#include "channel_lab/optimizer.hpp"
#include "channel_lab/purity.hpp"

namespace channel_lab::cli {

inline constexpr const char* kToolName = "channel-lab";
inline constexpr const char* kToolVersion = "1.0.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitParse = 2,
  kExitValidation = 3,
  kExitNumerical = 4,
  kExitCodeCondition = 5,
};

// Maps a caught exception onto the documented exit codes.
inline int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParseError*>(&e)) return kExitParse;
  if (dynamic_cast<const NumericalError*>(&e)) return kExitNumerical;
  if (dynamic_cast<const ValidationError*>(&e)) return kExitValidation;
  if (dynamic_cast<const DimensionError*>(&e)) return kExitValidation;
  return kExitNumerical;
}

enum class Direction { min, max };

struct CommandOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> samples;
  std::optional<std::size_t> restarts;
  Direction direction = Direction::min;
  Quantity quantity = Quantity::purity;
  double tol = kDefaultTolerance;  // trace-preservation tolerance
};

struct CommandOutput {
  json report;
  std::string text;
  int exit_code = kExitOk;
};

inline constexpr std::size_t kDefaultSamples = 10000;
inline constexpr std::size_t kOracleResolution = 200;

namespace detail {

inline json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline json to_json(const ComplexVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

inline json to_json(const ComplexMatrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

inline json to_json(const RealVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

inline json columns_to_json(const ComplexMatrix& m) {
  json out = json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(to_json(ComplexVector(m.col(c))));
  return out;
}

inline std::uint64_t seed_of(const ChannelSpecFile& spec, const CommandOptions& opts) {
  return opts.seed.value_or(spec.seed.value_or(0));
}

inline json envelope(const char* command, const ChannelSpecFile& spec, std::uint64_t seed) {
  json doc;
  doc["tool"] = kToolName;
  doc["version"] = kToolVersion;
  doc["command"] = command;
  doc["seed"] = seed;
  doc["input"] = spec.document;
  doc["results"] = json::object();
  return doc;
}

inline KrausChannel validated_channel(const ChannelSpecFile& spec, const CommandOptions& opts) {
  auto t = build_channel(spec);
  require_valid(t, opts.tol);
  return t;
}

inline json channel_summary(const KrausChannel& t, const CommandOptions& opts) {
  const auto v = validate(t, opts.tol);
  const auto u = is_unital(t);
  return {{"label", t.label()},
          {"dim", t.dim()},
          {"kraus_count", t.size()},
          {"trace_preservation_deviation", v.deviation},
          {"unital", u.unital},
          {"unital_deviation", u.deviation}};
}

// Direct and dual constructions of Omega must agree and be finite.
inline ChannelHamiltonian checked_purity_hamiltonian(const KrausChannel& t, double* deviation) {
  const auto direct = purity_hamiltonian(t);
  const auto via_dual = purity_hamiltonian_dual(t);
  if (!all_finite(direct.matrix) || !all_finite(via_dual.matrix)) {
    throw NumericalError("purity Hamiltonian: non-finite entries (overflow in the Kraus products)");
  }
  const double dev = max_abs(direct.matrix - via_dual.matrix);
  if (!(dev <= kCrossRouteTolerance)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "purity Hamiltonian: direct and dual constructions disagree (max deviation " << dev
        << ")";
    throw NumericalError(msg.str());
  }
  if (deviation) *deviation = dev;
  return direct;
}

inline std::string fmt(double x) {
  std::ostringstream out;
  out << std::setprecision(10) << x;
  return out.str();
}

inline std::string fmt(const RealVector& v) {
  std::ostringstream out;
  out << "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) out << (i ? ", " : "") << fmt(v(i));
  out << "]";
  return out.str();
}

}  // namespace detail

inline CommandOutput cmd_analyze(const ChannelSpecFile& spec, const CommandOptions& opts = {}) {
  using namespace detail;
  const auto seed = seed_of(spec, opts);
  const auto t = validated_channel(spec, opts);
  const auto c = subspace_of(spec, t.dim());

  double route_dev = 0.0;
  const auto omega = checked_purity_hamiltonian(t, &route_dev);
  const auto omega1 = fidelity_hamiltonian(t);
  const auto omega_prime = fidelity_hamiltonian_hermitian(t);
  const double fidelity_route_dev =
      max_abs(omega_prime.matrix - omega1.matrix * swap_operator(t.dim()));
  if (!(fidelity_route_dev <= kCrossRouteTolerance)) {
    throw NumericalError("fidelity Hamiltonian: Omega' and Omega1 S disagree");
  }

  const auto full = full_spectrum(omega);
  const auto sym = symmetric_sector_spectrum(omega);
  const auto bounds = purity_bounds(t, c);
  const double avg_p = average_purity(t);
  const double avg_f = average_fidelity(t);
  const auto inv = invariant_subspace(omega);

  CommandOutput out;
  out.report = envelope("analyze", spec, seed);
  json& r = out.report["results"]["analyze"];
  r["channel"] = channel_summary(t, opts);
  r["purity_hamiltonian"] = {{"full_spectrum", to_json(full.eigenvalues)},
                             {"symmetric_spectrum", to_json(sym.eigenvalues)},
                             {"min_symmetric_eigenvalue", sym.min_eigenvalue},
                             {"operator_norm", operator_norm(omega.matrix)},
                             {"route_deviation", route_dev}};
  r["fidelity_hamiltonian"] = {{"route_deviation", fidelity_route_dev},
                               {"symmetric_spectrum",
                                to_json(symmetric_sector_spectrum(omega_prime).eigenvalues)}};
  r["bounds"] = {{"subspace_dim", c.dim()},
                 {"upper", bounds.upper},
                 {"lower_global", bounds.lower_global},
                 {"lower_subspace", bounds.lower_subspace}};
  r["average_purity"] = avg_p;
  r["average_fidelity"] = avg_f;
  r["invariant_subspace"] = {{"dim", inv.dim()},
                             {"eigenvalue_tolerance", inv.eigenvalue_tolerance},
                             {"basis", columns_to_json(inv.basis)}};

  std::ostringstream text;
  text << "channel            " << t.label() << "  (d = " << t.dim() << ", " << t.size()
       << " Kraus operators" << (is_unital(t).unital ? ", unital" : "") << ")\n"
       << "Omega spectrum     " << fmt(full.eigenvalues) << "\n"
       << "symmetric sector   " << fmt(sym.eigenvalues) << "\n"
       << "omega0+            " << fmt(sym.min_eigenvalue) << "\n"
       << "bounds (dim C = " << c.dim() << ")  upper " << fmt(bounds.upper) << "  lower "
       << fmt(bounds.lower_subspace) << "  global lower " << fmt(bounds.lower_global) << "\n"
       << "average purity     " << fmt(avg_p) << "\n"
       << "average fidelity   " << fmt(avg_f) << "\n"
       << "dim H^Omega        " << inv.dim() << "\n";
  out.text = text.str();
  return out;
}

inline CommandOutput cmd_optimize(const ChannelSpecFile& spec, const CommandOptions& opts = {}) {
  using namespace detail;
  const auto seed = seed_of(spec, opts);
  const auto t = validated_channel(spec, opts);
  const auto c = subspace_of(spec, t.dim());

  const auto h = opts.quantity == Quantity::purity ? checked_purity_hamiltonian(t, nullptr)
                                                   : fidelity_hamiltonian_hermitian(t);
  OptimizerConfig cfg;
  cfg.seed = seed;
  if (opts.restarts) cfg.restarts = *opts.restarts;
  const auto res = opts.direction == Direction::min ? minimize_product_expectation(h, c, cfg)
                                                    : maximize_product_expectation(h, c, cfg);

  CommandOutput out;
  out.report = envelope("optimize", spec, seed);
  json& r = out.report["results"]["optimize"];
  r["direction"] = opts.direction == Direction::min ? "min" : "max";
  r["quantity"] = to_string(opts.quantity);
  r["hamiltonian"] = to_string(h.kind);
  r["subspace_dim"] = c.dim();
  r["value"] = res.value;
  r["state"] = to_json(res.state.amplitudes());
  r["converged"] = res.converged;
  r["iterations_used"] = res.iterations_used;
  r["best_restart"] = res.best_restart;
  r["restarts"] = cfg.restarts;
  r["restart_values"] = res.restart_values;
  if (opts.direction == Direction::max) r["candidate_dfs"] = res.candidate_dfs;

  json oracle = {{"ran", false}};
  if (c.dim() == 2) {
    const auto grid = brute_force_grid(compress(h, c), kOracleResolution);
    oracle = {{"ran", true},
              {"resolution", kOracleResolution},
              {"min_value", grid.min_value},
              {"max_value", grid.max_value}};
  }
  r["oracle"] = oracle;

  std::ostringstream text;
  text << (opts.direction == Direction::min ? "minimum " : "maximum ") << to_string(opts.quantity)
       << " over dim C = " << c.dim() << ": " << fmt(res.value)
       << (res.converged ? "" : "  (not converged)") << "\n"
       << "state              " << to_json(res.state.amplitudes()).dump() << "\n"
       << "restarts           " << cfg.restarts << " (best #" << res.best_restart << ", "
       << res.iterations_used << " iterations)\n";
  if (oracle["ran"].get<bool>()) {
    text << "grid oracle        min " << fmt(oracle["min_value"].get<double>()) << "  max "
         << fmt(oracle["max_value"].get<double>()) << "\n";
  }
  out.text = text.str();
  return out;
}

inline CommandOutput cmd_dfs(const ChannelSpecFile& spec, const CommandOptions& opts = {}) {
  using namespace detail;
  const auto seed = seed_of(spec, opts);
  const auto t = validated_channel(spec, opts);
  const auto c = subspace_of(spec, t.dim());
  OptimizerConfig cfg;
  cfg.seed = seed;
  if (opts.restarts) cfg.restarts = *opts.restarts;

  const auto cert = dfs_check(t, c, kEigenvalueOneTolerance, cfg);

  CommandOutput out;
  out.report = envelope("dfs", spec, seed);
  json& r = out.report["results"]["dfs"];
  r["subspace_dim"] = c.dim();
  r["subspace_given"] = spec.subspace.has_value();
  r["is_dfs"] = cert.is_dfs;
  r["criterion"] = cert.unital_criterion ? "unital-eigenvector" : "sampled";
  r["tolerance"] = kEigenvalueOneTolerance;
  r["eigen_residual"] = cert.eigen_residual;
  r["sampled_purities"] = cert.sampled_purities;
  r["min_sampled_purity"] = cert.min_sampled_purity;
  r["optimizer_min"] = cert.optimizer_min;
  r["optimizer_argmin"] = to_json(cert.optimizer_argmin.amplitudes());
  r["upper_bound"] = cert.upper_bound;
  if (!spec.subspace) {
    const auto inv = invariant_subspace(purity_hamiltonian(t));
    r["invariant_subspace"] = {{"dim", inv.dim()},
                               {"eigenvalue_tolerance", inv.eigenvalue_tolerance},
                               {"basis", columns_to_json(inv.basis)}};
  }

  std::ostringstream text;
  text << "subspace dim " << c.dim() << (spec.subspace ? "" : " (whole space)") << ": "
       << (cert.is_dfs ? "DFS" : "not a DFS") << "\n"
       << "criterion          "
       << (cert.unital_criterion ? "eigenvalue-one test (unital channel)"
                                 : "sampled purities + optimizer (non-unital channel)")
       << "\n"
       << "eigen residual     " << fmt(cert.eigen_residual) << "\n"
       << "min sampled purity " << fmt(cert.min_sampled_purity) << "\n"
       << "optimizer minimum  " << fmt(cert.optimizer_min) << "\n";
  if (r.contains("invariant_subspace")) {
    text << "dim H^Omega        " << r["invariant_subspace"]["dim"].get<std::size_t>() << "\n";
  }
  out.text = text.str();
  return out;
}

inline CommandOutput cmd_qecc(const ChannelSpecFile& spec, const CommandOptions& opts = {}) {
  using namespace detail;
  const auto seed = seed_of(spec, opts);
  const auto t = validated_channel(spec, opts);
  const auto code = code_of(spec, t.dim());
  const auto cm = qecc_code_matrix(t, code);

  CommandOutput out;
  out.report = envelope("qecc", spec, seed);
  json& r = out.report["results"]["qecc"];
  r["codewords"] = code.dim();
  r["code_matrix"] = to_json(cm.c);
  r["kl_residual"] = cm.kl_residual;
  r["tolerance"] = kCodeConditionTolerance;
  r["satisfies_condition"] = cm.satisfies_condition;
  r["codeword_purities"] = cm.codeword_purities;
  if (cm.satisfies_condition) r["trace_c_squared"] = cm.purity;

  std::ostringstream text;
  text << "codewords          " << code.dim() << "\n"
       << "residual           " << fmt(cm.kl_residual) << "\n";
  if (cm.satisfies_condition) {
    text << "Tr(c^2)            " << fmt(cm.purity) << "\n";
  } else {
    text << "error-correction condition violated (tolerance " << fmt(kCodeConditionTolerance)
         << ")\n";
    out.exit_code = kExitCodeCondition;
  }
  for (std::size_t a = 0; a < cm.codeword_purities.size(); ++a) {
    text << "purity codeword " << a << "  " << fmt(cm.codeword_purities[a]) << "\n";
  }
  out.text = text.str();
  return out;
}

inline CommandOutput cmd_montecarlo(const ChannelSpecFile& spec, const CommandOptions& opts = {}) {
  using namespace detail;
  const auto seed = seed_of(spec, opts);
  const auto t = validated_channel(spec, opts);
  const std::size_t n = opts.samples.value_or(spec.samples.value_or(kDefaultSamples));
  if (n < 2) throw ValidationError("montecarlo: need at least 2 samples");

  const auto mc = monte_carlo_average(t, opts.quantity, n, seed);
  const double analytic =
      opts.quantity == Quantity::purity ? average_purity(t) : average_fidelity(t);
  const double z = z_score(mc, analytic);

  CommandOutput out;
  out.report = envelope("montecarlo", spec, seed);
  json& r = out.report["results"]["montecarlo"];
  r["quantity"] = to_string(opts.quantity);
  r["samples"] = mc.samples;
  r["estimate"] = mc.estimate;
  r["standard_error"] = mc.standard_error;
  r["analytic"] = analytic;
  r["z_score"] = z;

  std::ostringstream text;
  text << "Haar average " << to_string(opts.quantity) << " (" << n << " samples)\n"
       << "estimate           " << fmt(mc.estimate) << " +- " << fmt(mc.standard_error) << "\n"
       << "analytic           " << fmt(analytic) << "\n"
       << "z-score            " << fmt(z) << "\n";
  out.text = text.str();
  return out;
}

inline CommandOutput run_command(std::string_view command, const ChannelSpecFile& spec,
                                 const CommandOptions& opts) {
  if (command == "analyze") return cmd_analyze(spec, opts);
  if (command == "optimize") return cmd_optimize(spec, opts);
  if (command == "dfs") return cmd_dfs(spec, opts);
  if (command == "qecc") return cmd_qecc(spec, opts);
  if (command == "montecarlo") return cmd_montecarlo(spec, opts);
  throw ParseError("unknown command '" + std::string(command) + "'");
}

// Reports are written with two-space indentation and a trailing newline.
// Doubles use the shortest representation that round-trips exactly.
inline std::string serialize_report(const json& report) { return report.dump(2) + "\n"; }

}  // namespace channel_lab::cli
