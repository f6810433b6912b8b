#pragma once

#include "qdmol/rational.hpp"

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace qdmol {

// Dot spacings in dimensionless units. The Coulomb prefactor 2e^2/(4 pi eps)
// is normalized to 1 throughout: every schedule-level quantity consumes only
// the ratio g(k) = e_plus(k*b)/e_plus(b), where the prefactor cancels anyway.
struct MoleculeGeometry {
  double a = 1.0;   // dot separation inside one molecule
  double b = 10.0;  // nearest-neighbor spacing between molecules

  MoleculeGeometry() = default;
  MoleculeGeometry(double a_, double b_);  // requires a > 0 and b > 0
};

// Interaction energy of two molecules a distance d apart when at most one of
// them holds a displaced charge: e_zero = 2/d + 2/sqrt(a^2 + d^2).
double e_zero(const MoleculeGeometry& geom, double d);

// Coupling picked up when both molecules hold displaced charges on the same
// side: e_plus = 2/d - 2/sqrt(a^2 + d^2) > 0. Evaluated as
// 2 a^2 / (d * s * (s + d)) with s = sqrt(a^2 + d^2), which is free of the
// catastrophic cancellation the textbook form suffers for d >> a.
double e_plus(const MoleculeGeometry& geom, double d);

// Opposite-side displacements contribute the negated coupling.
double e_minus(const MoleculeGeometry& geom, double d);

// e_plus at distance multiple*b, normalized by the nearest-neighbor value.
// Accepts any real multiple > 0 (perturbed distances may dip below 1).
double coupling_ratio(const MoleculeGeometry& geom, double multiple);

// g(k) = e_plus(a, k*b) / e_plus(a, b) for lattice separations k >= 1.
// g(1) == 1 exactly; decays like k^-3 for k*b >> a.
double g(const MoleculeGeometry& geom, double k);

// Periodic magnitude weights for residual tails: the weight applied to
// separation k is weight_by_residue[k % period]. at(k) is only meaningful for
// k >= 2; nearest neighbors are never part of a residual.
struct ResidualWeights {
  int period = 1;
  std::vector<Rational> weight_by_residue;  // size == period, entries >= 0

  static ResidualWeights uniform();  // weight 1 at every separation
  const Rational& at(std::int64_t k) const;
  Rational max_weight() const;
};

// Thrown when the requested truncation cannot certify the tolerance.
class TruncationError : public std::runtime_error {
 public:
  explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

// Sum of weight(k) * g(k) over k = 2..k_max. The discarded tail is bounded by
// max_weight * C / (2 k_max^2) with C = a^2 / (b^3 e_plus(a, b)), using
// e_plus(d) <= a^2/d^3 and an integral comparison; if that bound exceeds tol,
// a TruncationError asks for a larger k_max instead of returning a value the
// caller cannot trust.
double residual_sum(const MoleculeGeometry& geom, const ResidualWeights& weights,
                    std::int64_t k_max, double tol);

}  // namespace qdmol
