#include "qdmol/geometry.hpp"

#include <cmath>
#include <string>

namespace qdmol {

MoleculeGeometry::MoleculeGeometry(double a_, double b_) : a(a_), b(b_) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::domain_error("molecule geometry requires a > 0 and b > 0");
  }
}

namespace {

void check_distance(double d) {
  if (!(d > 0.0)) throw std::domain_error("distance must be positive");
}

}  // namespace

double e_zero(const MoleculeGeometry& geom, double d) {
  check_distance(d);
  return 2.0 / d + 2.0 / std::sqrt(geom.a * geom.a + d * d);
}

double e_plus(const MoleculeGeometry& geom, double d) {
  check_distance(d);
  // 2/d - 2/s rewritten as 2(s - d)/(d s) = 2 a^2 / (d s (s + d)).
  const double s = std::sqrt(geom.a * geom.a + d * d);
  return 2.0 * geom.a * geom.a / (d * s * (s + d));
}

double e_minus(const MoleculeGeometry& geom, double d) { return -e_plus(geom, d); }

double coupling_ratio(const MoleculeGeometry& geom, double multiple) {
  if (!(multiple > 0.0)) throw std::domain_error("distance multiple must be positive");
  return e_plus(geom, multiple * geom.b) / e_plus(geom, geom.b);
}

double g(const MoleculeGeometry& geom, double k) {
  if (!(k >= 1.0)) throw std::domain_error("lattice separation k must be >= 1");
  if (k == 1.0) return 1.0;
  return coupling_ratio(geom, k);
}

ResidualWeights ResidualWeights::uniform() {
  ResidualWeights w;
  w.period = 1;
  w.weight_by_residue = {Rational(1)};
  return w;
}

const Rational& ResidualWeights::at(std::int64_t k) const {
  if (period <= 0 || weight_by_residue.size() != static_cast<std::size_t>(period)) {
    throw std::invalid_argument("residual weights: weight_by_residue must have `period` entries");
  }
  const std::int64_t r = ((k % period) + period) % period;
  return weight_by_residue[static_cast<std::size_t>(r)];
}

Rational ResidualWeights::max_weight() const {
  Rational m = 0;
  for (const Rational& w : weight_by_residue) {
    if (w < 0) throw std::invalid_argument("residual weights must be nonnegative");
    if (w > m) m = w;
  }
  return m;
}

double residual_sum(const MoleculeGeometry& geom, const ResidualWeights& weights,
                    std::int64_t k_max, double tol) {
  if (k_max < 2) throw std::invalid_argument("residual_sum requires k_max >= 2");
  if (!(tol > 0.0)) throw std::invalid_argument("residual_sum requires tol > 0");

  const double w_max = to_double(weights.max_weight());
  // g(k) <= C / k^3 with C = a^2 / (b^3 e_plus(b)); sum_{k > K} k^-3 <= 1/(2K^2).
  const double c_over = geom.a * geom.a / (std::pow(geom.b, 3) * e_plus(geom, geom.b));
  const double tail_bound =
      w_max * c_over / (2.0 * static_cast<double>(k_max) * static_cast<double>(k_max));
  if (tail_bound > tol) {
    throw TruncationError("residual_sum: truncation at k_max=" + std::to_string(k_max) +
                          " only certifies a tail below " + std::to_string(tail_bound) +
                          ", which exceeds tol=" + std::to_string(tol) +
                          "; increase k_max");
  }

  long double acc = 0.0L;
  for (std::int64_t k = 2; k <= k_max; ++k) {
    const double w = to_double(weights.at(k));
    if (w == 0.0) continue;
    acc += static_cast<long double>(w) * static_cast<long double>(g(geom, static_cast<double>(k)));
  }
  return static_cast<double>(acc);
}

}  // namespace qdmol
