#pragma once

#include "qdmol/rational.hpp"

#include <vector>

namespace qdmol::detail {

// Exact two-phase simplex for  min cost.x  s.t.  A x = rhs, x >= 0.
// columns[j] is the j-th column of A (all the same length as rhs). Bland's
// rule everywhere, so the run is deterministic and cannot cycle; redundant
// equality rows are detected in phase one and dropped.
struct LpResult {
  enum class Status { Optimal, Infeasible, Unbounded };
  Status status = Status::Infeasible;
  std::vector<Rational> x;  // primal solution when Optimal
  Rational objective = 0;
};

LpResult solve_lp_min(const std::vector<std::vector<Rational>>& columns,
                      const std::vector<Rational>& rhs,
                      const std::vector<Rational>& cost);

}  // namespace qdmol::detail
