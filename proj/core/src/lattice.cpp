#include "qdmol/lattice.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace qdmol {

Lattice Lattice::chain(int n) {
  if (n < 2) throw std::invalid_argument("chain lattice needs at least 2 sites");
  return Lattice(LatticeKind::Chain1D, 1, n);
}

Lattice Lattice::grid(int rows, int cols) {
  if (rows < 2 || cols < 2) throw std::invalid_argument("grid lattice needs at least 2x2 sites");
  return Lattice(LatticeKind::Grid2D, rows, cols);
}

int Lattice::site(int row, int col) const {
  if (row < 0 || row >= rows_ || col < 0 || col >= cols_) {
    throw std::out_of_range("lattice coordinates out of range");
  }
  return row * cols_ + col;
}

std::pair<int, int> Lattice::coords(int site) const {
  if (site < 0 || site >= num_sites()) throw std::out_of_range("lattice site out of range");
  return {site / cols_, site % cols_};
}

double Lattice::separation(int p, int q) const {
  const auto [pr, pc] = coords(p);
  const auto [qr, qc] = coords(q);
  const double dr = static_cast<double>(pr - qr);
  const double dc = static_cast<double>(pc - qc);
  if (kind_ == LatticeKind::Chain1D) return std::abs(dc);
  return std::sqrt(dr * dr + dc * dc);
}

bool Lattice::nearest(int p, int q) const {
  const auto [pr, pc] = coords(p);
  const auto [qr, qc] = coords(q);
  const int dr = std::abs(pr - qr);
  const int dc = std::abs(pc - qc);
  return dr + dc == 1;
}

bool Lattice::diagonal(int p, int q) const {
  if (kind_ != LatticeKind::Grid2D) return false;
  const auto [pr, pc] = coords(p);
  const auto [qr, qc] = coords(q);
  return std::abs(pr - qr) == 1 && std::abs(pc - qc) == 1;
}

std::vector<std::pair<int, int>> Lattice::nearest_pairs() const {
  std::vector<std::pair<int, int>> pairs;
  const int n = num_sites();
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) {
      if (nearest(p, q)) pairs.emplace_back(p, q);
    }
  }
  return pairs;
}

}  // namespace qdmol
