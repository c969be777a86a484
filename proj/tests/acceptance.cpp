// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "channel_lab/cli/spec_file.hpp"
#include "channel_lab/purity.hpp"
#include "support.hpp"

using namespace channel_lab;
using namespace channel_lab::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the worst observed deviation for a check and any hard failures.
class Tally {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok && failures_.size() < 3) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  void within(double value, double tol, const std::string& what) {
    worst_ = std::max(worst_, value);
    std::ostringstream msg;
    msg << what << " deviates by " << value;
    require(value <= tol, msg.str());
  }
  Outcome outcome(const std::string& summary) const {
    std::ostringstream out;
    out << summary;
    if (worst_ > 0.0) out << "; worst deviation " << worst_;
    for (const auto& f : failures_) out << "; " << f;
    if (failed_ > failures_.size()) out << "; (" << failed_ - failures_.size() << " more)";
    return {failed_ == 0, out.str()};
  }

 private:
  double worst_ = 0.0;
  std::size_t failed_ = 0;
  std::vector<std::string> failures_;
};

double direct_purity(const KrausChannel& t, const PureState& psi) {
  const ComplexMatrix out = apply(t, psi.density());
  return (out * out).trace().real();
}

double direct_fidelity(const KrausChannel& t, const PureState& psi) {
  const ComplexVector& v = psi.amplitudes();
  return v.dot(apply(t, psi.density()) * v).real();
}

SubspaceBasis line(const ComplexVector& v) {
  return SubspaceBasis::span_of(static_cast<std::size_t>(v.size()), {v});
}

ComplexVector basis_ket(std::size_t d, std::size_t i) { return PureState::basis(d, i).amplitudes(); }

SubspaceBasis random_subspace(std::size_t d, std::size_t k, std::mt19937_64& rng) {
  const auto g = random_gaussian_matrix(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(k), rng);
  std::vector<ComplexVector> cols;
  for (Eigen::Index j = 0; j < g.cols(); ++j) cols.push_back(g.col(j));
  return SubspaceBasis::span_of(d, cols);
}

std::vector<KrausChannel> random_channels(std::size_t n, std::mt19937_64& rng) {
  std::vector<KrausChannel> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_channel(2 + i % 3, 1 + i % 4, rng));
  return out;
}

std::vector<ComplexMatrix> pauli_group(std::size_t n_qubits) {
  std::vector<std::string> words = {""};
  for (std::size_t q = 0; q < n_qubits; ++q) {
    std::vector<std::string> next;
    for (const auto& w : words) {
      for (char c : std::string("IXYZ")) next.push_back(w + c);
    }
    words = next;
  }
  std::vector<ComplexMatrix> out;
  for (const auto& w : words) out.push_back(pauli_string(w));
  return out;
}

OptimizerConfig config(std::size_t restarts, std::uint64_t seed = 0) {
  OptimizerConfig cfg;
  cfg.restarts = restarts;
  cfg.seed = seed;
  return cfg;
}

// ---------------------------------------------------------------------------

Outcome bit_flip_hamiltonian() {
  Tally tally;
  const auto omega = purity_hamiltonian(pauli_channel({0.5, 0.5, 0.0, 0.0}));
  const ComplexMatrix x = pauli_matrix(1);
  const ComplexMatrix expected = 0.5 * (ComplexMatrix::Identity(4, 4) + tensor_product(x, x));
  tally.within(max_abs(omega.matrix - expected), 1e-12, "bit-flip Omega");

  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_probabilities(rng);
    const auto a = pauli_alphas(p);
    const auto h = purity_hamiltonian(pauli_channel(p));
    const std::pair<PureState, double> cases[] = {
        {psi_minus(), 2.0 * a[0] - 1.0},
        {phi_minus(), 1.0 - 2.0 * a[1]},
        {psi_plus(), 1.0 - 2.0 * a[3]},
        {phi_plus(), 1.0 - 2.0 * a[2]},
    };
    for (const auto& [v, lambda] : cases) {
      tally.within((h.matrix * v.amplitudes() - lambda * v.amplitudes()).norm(), 1e-10,
                   "Bell eigenpair");
    }
  }
  return tally.outcome("bit-flip Omega entrywise; Bell eigenvalues on 50 random Pauli channels");
}

Outcome route_equivalence() {
  Tally tally;
  std::mt19937_64 rng(102);
  auto channels = builtin_family_channels();
  for (auto& t : random_channels(20, rng)) channels.push_back(std::move(t));
  for (const auto& t : channels) {
    const auto direct = purity_hamiltonian(t);
    const auto dual = purity_hamiltonian_dual(t);
    tally.within(max_abs(direct.matrix - dual.matrix), 1e-10, t.label());
  }
  return tally.outcome(std::to_string(channels.size()) + " channels");
}

Outcome purity_and_fidelity_identities() {
  Tally tally;
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t d = 2 + trial % 3;
    const auto t = random_channel(d, 1 + trial % 4, rng);
    const auto psi = haar_random_state(d, rng);
    const double omega_route = product_expectation(purity_hamiltonian(t), psi).real();
    tally.within(std::abs(direct_purity(t, psi) - omega_route), 1e-10, "purity");
    const Complex omega1_route = product_expectation(fidelity_hamiltonian(t), psi);
    tally.within(std::abs(direct_fidelity(t, psi) - omega1_route), 1e-10, "fidelity");
  }
  return tally.outcome("100 (channel, state) pairs, purity via Omega and fidelity via Omega1");
}

Outcome purity_bounds_sandwich() {
  Tally tally;
  const double slack = 1e-9;
  std::mt19937_64 rng(104);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 2 + trial % 3;
    const auto t = random_channel(d, 1 + trial % 4, rng);
    const auto c = random_subspace(d, 1 + trial % d, rng);
    const auto b = purity_bounds(t, c);
    double sampled_min = 2.0;
    for (int s = 0; s < 200; ++s) {
      const auto coeffs = haar_random_state(c.dim(), rng);
      sampled_min = std::min(sampled_min,
                             direct_purity(t, PureState::normalized(c.embed(coeffs.amplitudes()))));
    }
    tally.require(sampled_min <= b.upper + slack, "sampled minimum above Tr[Pi+ Omega]");
    tally.require(b.lower_subspace <= sampled_min + slack, "sampled minimum below omega0+");
    tally.require(b.lower_global <= b.lower_subspace + slack, "global omega0+ above subspace value");
  }

  // Equality of the upper bound and the minimum on subspaces certified as DFS.
  std::vector<std::pair<KrausChannel, SubspaceBasis>> dfs_cases = {
      {pauli_channel({0.5, 0.5, 0.0, 0.0}), line(plus().amplitudes())},
      {pauli_channel({0.5, 0.5, 0.0, 0.0}), line(minus().amplitudes())},
      {partial_replacement_channel(3, 0.5), line(basis_ket(3, 0))},
      {builtin_family_channels()[4], SubspaceBasis::span_of(4, {basis_ket(4, 0), basis_ket(4, 1)})},
  };
  for (const auto& bell : {phi_plus(), phi_minus(), psi_plus(), psi_minus()}) {
    dfs_cases.emplace_back(correlated_pauli2_channel({0.4, 0.3, 0.2, 0.1}), line(bell.amplitudes()));
  }
  std::size_t certified = 0;
  for (const auto& [t, c] : dfs_cases) {
    const auto cert = dfs_check(t, c, kEigenvalueOneTolerance, config(8));
    if (!cert.is_dfs) continue;
    ++certified;
    tally.within(std::abs(cert.upper_bound - cert.optimizer_min), 1e-8, "DFS upper bound vs minimum");
  }
  tally.require(certified == dfs_cases.size(), "a known DFS was not certified");
  return tally.outcome("50 random (channel, subspace) pairs; " + std::to_string(certified) +
                       " certified DFS equalities");
}

Outcome closed_form_averages() {
  Tally tally;
  std::mt19937_64 rng(105);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = random_probabilities(rng);
    const double a0 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2] + p[3] * p[3];
    tally.within(std::abs(average_purity(pauli_channel(p)) - (1.0 + 2.0 * a0) / 3.0), 1e-12,
                 "Pauli purity");
  }
  for (std::size_t d = 2; d <= 5; ++d) {
    const double dd = static_cast<double>(d);
    for (double p : {0.0, 0.2, 0.5, 0.85, 1.0}) {
      const auto t = partial_replacement_channel(d, p);
      const double purity = (1 - p) * (1 - p) + p * p + 2 * p * (1 - p) / dd;
      tally.within(std::abs(average_purity(t) - purity), 1e-12, "replacement purity");
      tally.within(std::abs(average_fidelity(t) - (1.0 - p * (1.0 - 1.0 / dd))), 1e-12,
                   "replacement fidelity");
    }
  }
  {
    // Blocks of rank 3, 1, 1 in d = 5.
    const auto t = projective_channel(
        {diagonal_projector(5, {0, 1, 2}), diagonal_projector(5, {3}), diagonal_projector(5, {4})});
    const double expected = (5.0 + 9.0 + 1.0 + 1.0) / (5.0 * 6.0);
    tally.within(std::abs(average_purity(t) - expected), 1e-12, "projective purity");
    tally.within(std::abs(average_fidelity(t) - expected), 1e-12, "projective fidelity");
  }
  {
    // Z_3 acting on C^3 by phases; the output purity weights are the
    // self-convolution q_g = sum_h p_h p_{h - g}.
    const double pi = std::acos(-1.0);
    std::vector<ComplexMatrix> us;
    for (int k = 0; k < 3; ++k) {
      ComplexMatrix u = ComplexMatrix::Identity(3, 3);
      u(1, 1) = std::polar(1.0, 2.0 * pi * k / 3.0);
      u(2, 2) = std::polar(1.0, 4.0 * pi * k / 3.0);
      us.push_back(u);
    }
    for (int trial = 0; trial < 5; ++trial) {
      const auto p = random_probabilities(3, rng);
      double sum = 0.0;
      for (int g = 0; g < 3; ++g) {
        double q = 0.0;
        for (int h = 0; h < 3; ++h) q += p[h] * p[(h + 3 - g) % 3];
        sum += q * std::norm(us[g].trace());
      }
      tally.within(std::abs(average_purity(unitary_mixture_channel(p, us)) - (3.0 + sum) / 12.0),
                   1e-12, "group mixture purity");
    }
  }
  for (std::size_t n : {1u, 2u}) {
    const auto group = pauli_group(n);
    const auto p = random_probabilities(group.size(), rng);
    const double dim = static_cast<double>(std::size_t{1} << n);
    tally.within(std::abs(average_fidelity(unitary_mixture_channel(p, group)) -
                          (1.0 + dim * p[0]) / (dim + 1.0)),
                 1e-12, "Pauli group fidelity N=" + std::to_string(n));
  }
  return tally.outcome("Pauli, replacement, projective, group mixture, Pauli-group fidelity");
}

Outcome monte_carlo_agreement() {
  Tally tally;
  double worst_z = 0.0;
  for (const auto& t : builtin_family_channels()) {
    for (auto q : {Quantity::purity, Quantity::fidelity}) {
      const auto mc = monte_carlo_average(t, q, 10000, 20240601);
      const double analytic = q == Quantity::purity ? average_purity(t) : average_fidelity(t);
      const double z = z_score(mc, analytic);
      worst_z = std::max(worst_z, z);
      tally.require(z <= 3.0, t.label() + " " + to_string(q) + " z=" + std::to_string(z));
    }
  }
  return tally.outcome("6 families x {purity, fidelity}, n=10000; max z " + std::to_string(worst_z));
}

Outcome correlated_pauli_optimum() {
  Tally tally;
  const auto t = correlated_pauli2_channel({0.25, 0.25, 0.25, 0.25});
  const auto omega = purity_hamiltonian(t);
  const auto result = minimize_product_expectation(omega, SubspaceBasis::full(4), config(32, 7));
  tally.within(std::abs(result.value - 0.25), 1e-6, "minimum purity");
  for (const auto& bell : {phi_plus(), phi_minus(), psi_plus(), psi_minus()}) {
    tally.within(std::abs(direct_purity(t, bell) - 1.0), 1e-10, "Bell purity");
  }

  // The two planes spanned by pairs of Bell states named as the minimizers.
  const auto plane_a = SubspaceBasis::span_of(4, {phi_plus().amplitudes(), psi_minus().amplitudes()});
  const auto plane_b = SubspaceBasis::span_of(4, {phi_minus().amplitudes(), psi_plus().amplitudes()});
  const ComplexVector& v = result.state.amplitudes();
  const double overlap_a = (plane_a.projector() * v).squaredNorm();
  const double overlap_b = (plane_b.projector() * v).squaredNorm();
  const double overlap = std::max(overlap_a, overlap_b);
  std::ostringstream what;
  what << "argmin overlap with Bell-pair plane " << overlap;
  tally.require(overlap >= 1.0 - 1e-6, what.str());

  std::ostringstream summary;
  summary << "min " << result.value << ", Bell-basis weights";
  for (const auto& bell : {phi_plus(), psi_minus(), phi_minus(), psi_plus()}) {
    summary << " " << std::norm(bell.amplitudes().dot(v));
  }
  summary << ", plane overlaps " << overlap_a << " / " << overlap_b;
  return tally.outcome(summary.str());
}

Outcome dfs_fixtures() {
  Tally tally;
  const auto cfg = config(8);
  auto expect = [&](const KrausChannel& t, const SubspaceBasis& c, bool dfs, const std::string& what) {
    tally.require(dfs_check(t, c, kEigenvalueOneTolerance, cfg).is_dfs == dfs, what);
  };

  const auto flip = pauli_channel({0.5, 0.5, 0.0, 0.0});
  expect(flip, line(plus().amplitudes()), true, "|+> under bit flip");
  expect(flip, line(minus().amplitudes()), true, "|-> under bit flip");
  expect(flip, line(basis_ket(2, 0)), false, "|0> under bit flip");
  expect(flip, line(basis_ket(2, 1)), false, "|1> under bit flip");

  std::mt19937_64 rng(108);
  const std::vector<std::vector<ComplexMatrix>> projective_sets = {
      {diagonal_projector(4, {0, 1}), diagonal_projector(4, {2}), diagonal_projector(4, {3})},
      {diagonal_projector(3, {0}), diagonal_projector(3, {1}), diagonal_projector(3, {2})},
      {diagonal_projector(5, {0, 2, 4}), diagonal_projector(5, {1, 3})},
  };
  for (const auto& ps : projective_sets) {
    const auto t = projective_channel(ps);
    const auto d = t.dim();
    for (std::size_t i = 0; i < ps.size(); ++i) {
      // A random vector in the range of Pi_i is an eigenvector of Pi_i.
      const ComplexVector v = ps[i] * random_gaussian_matrix(static_cast<Eigen::Index>(d), 1, rng).col(0);
      expect(t, line(v), true, t.label() + " eigenvector of block " + std::to_string(i));
    }
    // A superposition across two blocks decoheres.
    const ComplexVector across = ps[0] * ComplexVector::Ones(static_cast<Eigen::Index>(d)) +
                                 ps[1] * ComplexVector::Ones(static_cast<Eigen::Index>(d));
    expect(t, line(across), false, t.label() + " cross-block superposition");
  }

  for (std::size_t d = 2; d <= 4; ++d) {
    const auto t = partial_replacement_channel(d, 0.5);
    for (std::size_t i = 0; i < d; ++i) {
      expect(t, line(basis_ket(d, i)), i == 0,
             "replacement d=" + std::to_string(d) + " basis " + std::to_string(i));
    }
  }
  return tally.outcome("bit flip, 3 projective channels, replacement d=2..4");
}

Outcome code_matrix_identity() {
  Tally tally;
  {
    const auto spec = cli::load_channel_spec(std::string(CHANNEL_LAB_FIXTURES) + "/bitflip_code.json");
    const auto t = cli::build_channel(spec);
    const auto cm = qecc_code_matrix(t, cli::code_of(spec, t.dim()));
    tally.require(cm.satisfies_condition, "bit-flip code violates the condition");
    for (double v : cm.codeword_purities) tally.within(std::abs(v - cm.purity), 1e-9, "bit-flip code");
  }

  std::mt19937_64 rng(109);
  const std::vector<std::string> bit_errors = {"III", "XII", "IXI", "IIX", "ZZI", "IZZ"};
  const std::vector<std::string> phase_errors = {"III", "ZII", "IZI", "IIZ", "XXI"};
  const ComplexVector p = plus().amplitudes(), m = minus().amplitudes();
  const ComplexVector plus3 = tensor_product(tensor_product(p, p), p);
  const ComplexVector minus3 = tensor_product(tensor_product(m, m), m);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::acos(-1.0));
  for (int trial = 0; trial < 5; ++trial) {
    const bool phase = trial % 2 == 1;
    const auto& words = phase ? phase_errors : bit_errors;
    const auto probs = random_probabilities(words.size(), rng);
    std::vector<ComplexMatrix> kraus;
    for (std::size_t i = 0; i < words.size(); ++i) {
      kraus.push_back(std::polar(std::sqrt(probs[i]), angle(rng)) * pauli_string(words[i]));
    }
    const KrausChannel t(kraus);
    const auto code = phase ? SubspaceBasis::from_orthonormal(8, {plus3, minus3})
                            : SubspaceBasis::from_orthonormal(8, {basis_ket(8, 0), basis_ket(8, 7)});
    const auto cm = qecc_code_matrix(t, code);
    tally.require(cm.satisfies_condition, "stabilizer trial " + std::to_string(trial));
    for (double v : cm.codeword_purities) tally.within(std::abs(v - cm.purity), 1e-9, "stabilizer code");
  }

  const auto cm = qecc_code_matrix(correlated_pauli2_channel({0.4, 0.3, 0.2, 0.1}),
                                   line(phi_plus().amplitudes()));
  tally.require(cm.satisfies_condition, "DFS code violates the condition");
  tally.within(std::abs(cm.purity - 1.0), 1e-9, "DFS code Tr(c^2)");
  return tally.outcome("bit-flip fixture, 5 stabilizer codes, DFS as code");
}

Outcome norm_bounds() {
  Tally tally;
  std::mt19937_64 rng(110);
  double worst_norm = 0.0;
  for (const auto& t : random_channels(50, rng)) {
    const double n = operator_norm(purity_hamiltonian(t).matrix);
    worst_norm = std::max(worst_norm, n);
    tally.require(n <= 1.0 + 1e-9, t.label() + " norm " + std::to_string(n));
  }

  std::vector<KrausChannel> unital = {pauli_channel({0.3, 0.3, 0.2, 0.2}), depolarizing_channel(0.05),
                                      correlated_pauli2_channel({0.1, 0.2, 0.3, 0.4})};
  for (std::size_t d = 2; d <= 4; ++d) {
    std::vector<ComplexMatrix> us;
    for (int k = 0; k < 3; ++k) us.push_back(haar_random_unitary(d, rng));
    unital.push_back(unitary_mixture_channel(random_probabilities(3, rng), us));
  }
  double worst_image = 0.0;
  for (const auto& t : unital) {
    tally.require(is_unital(t).unital, t.label() + " is not unital");
    const auto h = purity_hamiltonian(t);
    for (int s = 0; s < 50; ++s) {
      const double n = (h.matrix * haar_random_state(t.dim(), rng).doubled()).norm();
      worst_image = std::max(worst_image, n);
      tally.require(n <= 1.0 + 1e-9, t.label() + " image norm " + std::to_string(n));
    }
  }
  return tally.outcome("max ||Omega|| " + std::to_string(worst_norm) + " over 50 channels; max " +
                       "||Omega psi psi|| " + std::to_string(worst_image) + " over " +
                       std::to_string(unital.size()) + " unital channels x 50 states");
}

Outcome optimizer_soundness() {
  Tally tally;
  std::mt19937_64 rng(111);
  const double step = 1e-5;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 2 + trial % 3;
    const auto t = random_channel(d, 1 + trial % 4, rng);
    const detail::QuarticObjective f(purity_hamiltonian(t).matrix, d);
    const ComplexVector psi = haar_random_state(d, rng).amplitudes();
    const ComplexVector g = f.tangent_gradient(psi);
    ComplexVector delta = random_gaussian_matrix(static_cast<Eigen::Index>(d), 1, rng).col(0);
    delta -= psi.dot(delta).real() * psi;
    const double fd = (f.value(psi + step * delta) - f.value(psi - step * delta)) / (2.0 * step);
    const double analytic = delta.dot(g).real();
    tally.within(std::abs(fd - analytic) / std::max(1.0, std::abs(analytic)), 1e-6,
                 "gradient trial " + std::to_string(trial));
  }
  for (int trial = 0; trial < 20; ++trial) {
    const auto t = random_channel(2, 1 + trial % 4, rng);
    const auto h = purity_hamiltonian(t);
    const auto grid = brute_force_grid(h, 200);
    const auto cfg = config(16, static_cast<std::uint64_t>(trial));
    const auto lo = minimize_product_expectation(h, SubspaceBasis::full(2), cfg);
    const auto hi = maximize_product_expectation(h, SubspaceBasis::full(2), cfg);
    tally.within(std::abs(lo.value - grid.min_value), 1e-3, "grid minimum");
    tally.within(std::abs(hi.value - grid.max_value), 1e-3, "grid maximum");
  }
  return tally.outcome("20 gradient checks, 20 qubit channels against a 200x400 grid");
}

Outcome representation_independence() {
  Tally tally;
  std::mt19937_64 rng(112);
  auto channels = builtin_family_channels();
  for (auto& t : random_channels(6, rng)) channels.push_back(std::move(t));
  for (const auto& t : channels) {
    const auto reference = purity_hamiltonian(t).matrix;
    for (int k = 0; k < 10; ++k) {
      const auto u = haar_random_unitary(t.size(), rng);
      tally.within(max_abs(purity_hamiltonian(mix_kraus(t, u)).matrix - reference), 1e-10, t.label());
    }
  }
  return tally.outcome(std::to_string(channels.size()) + " channels x 10 mixing unitaries");
}

int run_cli(const std::string& args) {
  const std::string command = std::string("\"") + CHANNEL_LAB_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome cli_determinism_and_exit_codes() {
  Tally tally;
  const std::string fixtures = CHANNEL_LAB_FIXTURES;
  const auto dir = std::filesystem::temp_directory_path() /
                   ("channel_lab_acceptance_" + std::to_string(::getpid()));
  std::filesystem::create_directories(dir);

  const std::vector<std::pair<std::string, std::string>> runs = {
      {"montecarlo", "pauli_generic.json"},
      {"optimize", "pauli_generic.json"},
      {"dfs", "replacement_ground.json"},
      {"analyze", "raw_amplitude_damping.json"},
  };
  for (const auto& [command, fixture] : runs) {
    const auto first = dir / (command + "_1.json");
    const auto second = dir / (command + "_2.json");
    const std::string base = command + " --spec \"" + fixtures + "/" + fixture + "\" --seed 42 --out ";
    const int a = run_cli(base + "\"" + first.string() + "\"");
    const int b = run_cli(base + "\"" + second.string() + "\"");
    tally.require(a == 0 && b == 0, command + " exited " + std::to_string(a) + "/" + std::to_string(b));
    const std::string ra = slurp(first), rb = slurp(second);
    tally.require(!ra.empty() && ra == rb, command + " reports differ");
  }
  std::filesystem::remove_all(dir);

  const std::vector<std::pair<std::string, int>> exits = {
      {"analyze --spec \"" + fixtures + "/malformed.json\"", 2},
      {"analyze --spec \"" + fixtures + "/not_trace_preserving.json\"", 3},
      {"analyze --spec \"" + fixtures + "/overflow.json\" --tol 1e300", 4},
      {"qecc --spec \"" + fixtures + "/code_violation.json\"", 5},
  };
  std::ostringstream codes;
  for (const auto& [args, expected] : exits) {
    const int got = run_cli(args);
    codes << " " << got;
    tally.require(got == expected, args + " exited " + std::to_string(got) + ", expected " +
                                       std::to_string(expected));
  }
  return tally.outcome("4 commands byte-identical across runs; exit codes" + codes.str());
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Omega of the bit-flip and Pauli channels", bit_flip_hamiltonian},
      {"direct and dual Omega routes", route_equivalence},
      {"output purity and fidelity identities", purity_and_fidelity_identities},
      {"purity bounds", purity_bounds_sandwich},
      {"average purity and fidelity closed forms", closed_form_averages},
      {"Monte-Carlo averages", monte_carlo_agreement},
      {"uniform correlated Pauli optimization", correlated_pauli_optimum},
      {"DFS classification", dfs_fixtures},
      {"code matrix purity", code_matrix_identity},
      {"operator norm bounds", norm_bounds},
      {"optimizer gradient and grid oracle", optimizer_soundness},
      {"Kraus representation independence", representation_independence},
      {"CLI determinism and exit codes", cli_determinism_and_exit_codes},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failed;
    std::printf("AC%zu %s: %s (%s)\n", i + 1, outcome.pass ? "PASS" : "FAIL",
                criteria[i].first.c_str(), outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
