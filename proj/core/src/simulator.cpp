#include "qdmol/simulator.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace qdmol {

namespace {

void check_qubit_count(int n, int cap, const char* who) {
  if (n < 1) throw std::invalid_argument(std::string(who) + ": need at least one qubit");
  if (n > cap) {
    throw std::invalid_argument(std::string(who) + ": " + std::to_string(n) +
                                " qubits exceeds the supported maximum of " + std::to_string(cap));
  }
}

struct PairPhase {
  std::size_t mask;
  double theta;
};

// Nonzero entries only; evolution and overlap sums skip decoupled pairs.
std::vector<PairPhase> nonzero_pairs(const PhaseMatrix& theta) {
  std::vector<PairPhase> pairs;
  const int n = theta.num_qubits();
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      const double t = theta.at(p, q);
      if (t != 0.0) {
        pairs.push_back(PairPhase{(std::size_t{1} << p) | (std::size_t{1} << q), t});
      }
    }
  }
  return pairs;
}

}  // namespace

QuantumState::QuantumState(int num_qubits, std::vector<std::complex<double>> amplitudes)
    : num_qubits_(num_qubits), amplitudes_(std::move(amplitudes)) {
  check_qubit_count(num_qubits_, kMaxQubits, "quantum state");
  if (amplitudes_.size() != (std::size_t{1} << num_qubits_)) {
    throw std::invalid_argument("quantum state needs 2^n amplitudes");
  }
}

double QuantumState::norm_squared() const {
  long double acc = 0.0L;
  for (const auto& a : amplitudes_) acc += static_cast<long double>(std::norm(a));
  return static_cast<double>(acc);
}

QuantumState initial_state(int num_qubits) {
  check_qubit_count(num_qubits, kMaxQubits, "initial state");
  const double amp = 1.0 / std::sqrt(std::ldexp(1.0, num_qubits));
  return QuantumState(num_qubits, std::vector<std::complex<double>>(
                                      std::size_t{1} << num_qubits, std::complex<double>(amp, 0.0)));
}

PhaseMatrix::PhaseMatrix(int num_qubits) : n_(num_qubits) {
  check_qubit_count(n_, kMaxAnalyticQubits, "phase matrix");
  upper_.assign(static_cast<std::size_t>(n_) * (static_cast<std::size_t>(n_) - 1) / 2, 0.0);
}

std::size_t PhaseMatrix::index(int p, int q) const {
  if (p < 0 || q < 0 || p >= n_ || q >= n_ || p == q) {
    throw std::out_of_range("phase matrix index out of range");
  }
  if (p > q) std::swap(p, q);
  return static_cast<std::size_t>(p) * (2 * static_cast<std::size_t>(n_) - p - 1) / 2 +
         static_cast<std::size_t>(q - p - 1);
}

double PhaseMatrix::at(int p, int q) const { return upper_[index(p, q)]; }
void PhaseMatrix::set(int p, int q, double theta) { upper_[index(p, q)] = theta; }
void PhaseMatrix::add(int p, int q, double delta) { upper_[index(p, q)] += delta; }

PhaseMatrix phases(const CouplingMatrix& coupling, const MoleculeGeometry& geom) {
  const Lattice& lattice = coupling.lattice();
  const int n = lattice.num_sites();
  PhaseMatrix theta(n);
  const double pi = std::acos(-1.0);
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      const double c = to_double(coupling.at(p, q));
      if (c == 0.0) continue;
      theta.set(p, q, pi * c * coupling_ratio(geom, lattice.separation(p, q)));
    }
  }
  return theta;
}

PhaseMatrix residual_phases(const CouplingMatrix& coupling, const MoleculeGeometry& geom) {
  const Lattice& lattice = coupling.lattice();
  PhaseMatrix theta = phases(coupling, geom);
  const double pi = std::acos(-1.0);
  for (const auto& [p, q] : lattice.nearest_pairs()) theta.add(p, q, -pi);
  return theta;
}

QuantumState evolve(QuantumState state, const PhaseMatrix& theta) {
  if (theta.num_qubits() != state.num_qubits()) {
    throw std::invalid_argument("phase matrix size does not match state");
  }
  const std::vector<PairPhase> pairs = nonzero_pairs(theta);
  auto& amps = state.amplitudes();
  const std::size_t dim = amps.size();
  for (std::size_t z = 0; z < dim; ++z) {
    double phi = 0.0;
    for (const PairPhase& pp : pairs) {
      if ((z & pp.mask) == pp.mask) phi += pp.theta;
    }
    if (phi != 0.0) amps[z] *= std::complex<double>(std::cos(phi), std::sin(phi));
  }
  return state;
}

QuantumState evolve(QuantumState state, const CouplingMatrix& coupling,
                    const MoleculeGeometry& geom) {
  if (coupling.num_sites() != state.num_qubits()) {
    throw std::invalid_argument("coupling matrix size does not match state");
  }
  return evolve(std::move(state), phases(coupling, geom));
}

QuantumState cluster_state(const Lattice& lattice) {
  const int n = lattice.num_sites();
  check_qubit_count(n, kMaxQubits, "cluster state");

  std::vector<std::size_t> edge_masks;
  for (const auto& [p, q] : lattice.nearest_pairs()) {
    edge_masks.push_back((std::size_t{1} << p) | (std::size_t{1} << q));
  }

  const double amp = 1.0 / std::sqrt(std::ldexp(1.0, n));
  std::vector<std::complex<double>> amps(std::size_t{1} << n);
  for (std::size_t z = 0; z < amps.size(); ++z) {
    int bonds = 0;
    for (const std::size_t mask : edge_masks) {
      if ((z & mask) == mask) ++bonds;
    }
    amps[z] = (bonds % 2 == 0) ? amp : -amp;
  }
  return QuantumState(n, std::move(amps));
}

double fidelity(const QuantumState& psi, const QuantumState& phi) {
  if (psi.num_qubits() != phi.num_qubits()) {
    throw std::invalid_argument("fidelity of states with different qubit counts");
  }
  std::complex<long double> overlap = 0.0L;
  for (std::size_t z = 0; z < psi.dim(); ++z) {
    const auto& a = phi.amplitude(z);
    const auto& b = psi.amplitude(z);
    overlap += std::conj(std::complex<long double>(a.real(), a.imag())) *
               std::complex<long double>(b.real(), b.imag());
  }
  return static_cast<double>(std::norm(overlap));
}

double fidelity_analytic(const PhaseMatrix& residual) {
  const int n = residual.num_qubits();
  const std::vector<PairPhase> pairs = nonzero_pairs(residual);
  const std::size_t dim = std::size_t{1} << n;
  std::complex<long double> acc = 0.0L;
  for (std::size_t z = 0; z < dim; ++z) {
    double phi = 0.0;
    for (const PairPhase& pp : pairs) {
      if ((z & pp.mask) == pp.mask) phi += pp.theta;
    }
    acc += std::complex<long double>(std::cos(static_cast<long double>(phi)),
                                     std::sin(static_cast<long double>(phi)));
  }
  acc /= static_cast<long double>(dim);
  return static_cast<double>(std::norm(acc));
}

double perturbed_run(const Schedule& schedule, const MoleculeGeometry& geom,
                     const JitterOptions& options) {
  if (!(options.relative >= 0.0) || options.relative >= 1.0) {
    throw std::domain_error("relative jitter must lie in [0, 1) to keep distances positive");
  }
  const Lattice& lattice = schedule.lattice();
  const int n = lattice.num_sites();
  check_qubit_count(n, kMaxQubits, "perturbed run");

  const auto matches_filter = [&](double separation) {
    if (!options.only_separations) return true;
    for (const double s : *options.only_separations) {
      if (std::abs(separation - s) < 1e-9) return true;
    }
    return false;
  };

  const CouplingMatrix coupling = net_coupling(schedule);
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> eta(-options.relative, options.relative);

  const double pi = std::acos(-1.0);
  PhaseMatrix theta(n);
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      double d = lattice.separation(p, q);
      if (options.relative > 0.0 && matches_filter(d)) d *= 1.0 + eta(rng);
      // An exactly canceled pair stays exactly silent: 0 * g is 0 whatever
      // happened to the distance.
      theta.set(p, q, pi * to_double(coupling.at(p, q)) * coupling_ratio(geom, d));
    }
  }

  const QuantumState final_state = evolve(initial_state(n), theta);
  return fidelity(final_state, cluster_state(lattice));
}

}  // namespace qdmol
