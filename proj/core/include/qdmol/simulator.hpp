#pragma once

#include "qdmol/geometry.hpp"
#include "qdmol/lattice.hpp"
#include "qdmol/schedule.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace qdmol {

// Dense-statevector cap: 2^20 amplitudes (16 MiB) keeps every exact check in
// this library interactive.
inline constexpr int kMaxQubits = 20;
// The closed-form fidelity is a single sum over basis strings and can go a
// little further than the statevector path.
inline constexpr int kMaxAnalyticQubits = 30;

// Amplitudes over computational basis strings z in {0,1}^n. Bit p of the
// index is qubit p: 0 for the triplet |T>, 1 for the singlet |S>.
class QuantumState {
 public:
  QuantumState(int num_qubits, std::vector<std::complex<double>> amplitudes);

  int num_qubits() const { return num_qubits_; }
  std::size_t dim() const { return amplitudes_.size(); }
  const std::complex<double>& amplitude(std::size_t z) const { return amplitudes_[z]; }
  const std::vector<std::complex<double>>& amplitudes() const { return amplitudes_; }
  std::vector<std::complex<double>>& amplitudes() { return amplitudes_; }

  double norm_squared() const;

 private:
  int num_qubits_;
  std::vector<std::complex<double>> amplitudes_;
};

// Uniform superposition (|T> + |S>)^{tensor n} / 2^{n/2}: every molecule is
// prepared in (|T> + |S>)/sqrt(2) before the couplings are switched on.
QuantumState initial_state(int num_qubits);

// Symmetric per-pair phases theta_pq in radians. Evolution is diagonal:
// amp(z) *= exp(i * sum_{p<q} theta_pq z_p z_q).
class PhaseMatrix {
 public:
  explicit PhaseMatrix(int num_qubits);

  int num_qubits() const { return n_; }
  double at(int p, int q) const;
  void set(int p, int q, double theta);
  void add(int p, int q, double delta);

 private:
  std::size_t index(int p, int q) const;

  int n_;
  std::vector<double> upper_;
};

// theta_pq = pi * c_pq * g(separation(p, q)).
PhaseMatrix phases(const CouplingMatrix& coupling, const MoleculeGeometry& geom);

// The same minus the target pi on every nearest-neighbor pair: what is left
// over after a perfect cluster-state entangler.
PhaseMatrix residual_phases(const CouplingMatrix& coupling, const MoleculeGeometry& geom);

QuantumState evolve(QuantumState state, const PhaseMatrix& theta);
QuantumState evolve(QuantumState state, const CouplingMatrix& coupling,
                    const MoleculeGeometry& geom);

// Ideal cluster state: amplitude 2^{-n/2} (-1)^{sum over nearest pairs z_p z_q}.
QuantumState cluster_state(const Lattice& lattice);

// |<phi|psi>|^2.
double fidelity(const QuantumState& psi, const QuantumState& phi);

// Overlap with the ideal cluster state from the residual phases alone:
// |2^-n sum_z exp(i sum_{p<q} delta_pq z_p z_q)|^2. Independent of the
// statevector path, so the two routes cross-check each other.
double fidelity_analytic(const PhaseMatrix& residual);

struct JitterOptions {
  double relative = 0.0;    // each pair distance becomes d(1 + eta), eta ~ U(-relative, relative)
  std::uint64_t seed = 0;
  // When set, only pairs whose separation (units of b) matches an entry are
  // perturbed; everything else keeps its nominal distance.
  std::optional<std::vector<double>> only_separations;
};

// Fidelity of the schedule against the ideal cluster state with per-pair
// distance jitter applied to the phase map. Pairs with exactly zero net
// coupling contribute exactly zero phase whatever their distance, so jitter
// restricted to such pairs reproduces the unperturbed fidelity bit for bit.
double perturbed_run(const Schedule& schedule, const MoleculeGeometry& geom,
                     const JitterOptions& options);

}  // namespace qdmol
