#include "simplex.hpp"

#include <stdexcept>

namespace qdmol::detail {

namespace {

// Dense tableau over exact rationals. Row width is n original columns plus
// one artificial column per original constraint; dropping a redundant row
// never shrinks the width.
class Tableau {
 public:
  Tableau(const std::vector<std::vector<Rational>>& columns, const std::vector<Rational>& rhs)
      : n_(columns.size()), width_(columns.size() + rhs.size()) {
    const std::size_t m = rhs.size();
    rows_.assign(m, std::vector<Rational>(width_, Rational(0)));
    b_.resize(m);
    basis_.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
      const bool flip = rhs[i] < 0;
      for (std::size_t j = 0; j < n_; ++j) {
        if (columns[j].size() != m) {
          throw std::invalid_argument("simplex: ragged constraint matrix");
        }
        rows_[i][j] = flip ? -columns[j][i] : columns[j][i];
      }
      rows_[i][n_ + i] = 1;  // artificial
      b_[i] = flip ? -rhs[i] : rhs[i];
      basis_[i] = n_ + i;
    }
  }

  std::size_t num_rows() const { return rows_.size(); }
  std::size_t basis(std::size_t i) const { return basis_[i]; }
  const Rational& rhs(std::size_t i) const { return b_[i]; }
  const Rational& entry(std::size_t i, std::size_t j) const { return rows_[i][j]; }

  // Bland's rule throughout: entering column is the lowest admissible index
  // with a negative reduced cost, ties in the ratio test go to the lowest
  // basis index. Returns false when the objective is unbounded below.
  template <typename Allowed>
  bool minimize(const std::vector<Rational>& cost, Allowed allow) {
    std::vector<Rational> d(width_, Rational(0));
    for (std::size_t j = 0; j < width_; ++j) {
      if (!allow(j)) continue;
      Rational z = 0;
      for (std::size_t i = 0; i < num_rows(); ++i) z += cost[basis_[i]] * rows_[i][j];
      d[j] = cost[j] - z;
    }

    for (;;) {
      std::size_t enter = width_;
      for (std::size_t j = 0; j < width_; ++j) {
        if (allow(j) && d[j] < 0) {
          enter = j;
          break;
        }
      }
      if (enter == width_) return true;  // optimal

      std::size_t leave = num_rows();
      Rational best_ratio = 0;
      for (std::size_t i = 0; i < num_rows(); ++i) {
        if (rows_[i][enter] <= 0) continue;
        const Rational ratio = b_[i] / rows_[i][enter];
        if (leave == num_rows() || ratio < best_ratio ||
            (ratio == best_ratio && basis_[i] < basis_[leave])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave == num_rows()) return false;  // unbounded

      pivot(leave, enter, &d);
    }
  }

  void pivot(std::size_t row, std::size_t col, std::vector<Rational>* d) {
    const Rational piv = rows_[row][col];
    for (auto& v : rows_[row]) v /= piv;
    b_[row] /= piv;
    for (std::size_t r = 0; r < num_rows(); ++r) {
      if (r == row || rows_[r][col] == 0) continue;
      const Rational f = rows_[r][col];
      for (std::size_t j = 0; j < width_; ++j) rows_[r][j] -= f * rows_[row][j];
      b_[r] -= f * b_[row];
    }
    if (d != nullptr && (*d)[col] != 0) {
      const Rational f = (*d)[col];
      for (std::size_t j = 0; j < width_; ++j) (*d)[j] -= f * rows_[row][j];
    }
    basis_[row] = col;
  }

  Rational objective(const std::vector<Rational>& cost) const {
    Rational z = 0;
    for (std::size_t i = 0; i < num_rows(); ++i) z += cost[basis_[i]] * b_[i];
    return z;
  }

  void drop_row(std::size_t row) {
    rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(row));
    b_.erase(b_.begin() + static_cast<std::ptrdiff_t>(row));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(row));
  }

 private:
  std::size_t n_;
  std::size_t width_;
  std::vector<std::vector<Rational>> rows_;
  std::vector<Rational> b_;
  std::vector<std::size_t> basis_;
};

}  // namespace

LpResult solve_lp_min(const std::vector<std::vector<Rational>>& columns,
                      const std::vector<Rational>& rhs,
                      const std::vector<Rational>& cost) {
  if (columns.size() != cost.size()) {
    throw std::invalid_argument("simplex: one cost entry per column required");
  }
  const std::size_t n = columns.size();
  const std::size_t m = rhs.size();

  Tableau t(columns, rhs);

  // Phase one: minimize the sum of artificials.
  std::vector<Rational> phase1(n + m, Rational(0));
  for (std::size_t j = n; j < n + m; ++j) phase1[j] = 1;
  if (!t.minimize(phase1, [](std::size_t) { return true; })) {
    throw std::logic_error("simplex: phase one cannot be unbounded");
  }

  LpResult result;
  if (t.objective(phase1) != 0) {
    result.status = LpResult::Status::Infeasible;
    return result;
  }

  // Drive leftover artificials out of the basis; a row where no original
  // column can take over is a redundant equality and is dropped.
  for (std::size_t i = t.num_rows(); i-- > 0;) {
    if (t.basis(i) < n) continue;
    std::size_t col = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (t.entry(i, j) != 0) {
        col = j;
        break;
      }
    }
    if (col == n) {
      t.drop_row(i);
    } else {
      t.pivot(i, col, nullptr);
    }
  }

  // Phase two over the original columns only.
  std::vector<Rational> phase2(n + m, Rational(0));
  for (std::size_t j = 0; j < n; ++j) phase2[j] = cost[j];
  if (!t.minimize(phase2, [n](std::size_t j) { return j < n; })) {
    result.status = LpResult::Status::Unbounded;
    return result;
  }

  result.status = LpResult::Status::Optimal;
  result.x.assign(n, Rational(0));
  for (std::size_t i = 0; i < t.num_rows(); ++i) {
    if (t.basis(i) < n) result.x[t.basis(i)] = t.rhs(i);
  }
  result.objective = t.objective(phase2);
  return result;
}

}  // namespace qdmol::detail
