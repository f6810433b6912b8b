#pragma once

#include <utility>
#include <vector>

namespace qdmol {

enum class LatticeKind { Chain1D, Grid2D };

// Qubit layout with unit spacing b between nearest neighbors. Chain sites are
// 0..n-1 left to right; grid sites are row-major, site = row*cols + col.
class Lattice {
 public:
  static Lattice chain(int n);              // n >= 2
  static Lattice grid(int rows, int cols);  // rows >= 2 and cols >= 2

  LatticeKind kind() const { return kind_; }
  int num_sites() const { return rows_ * cols_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  int site(int row, int col) const;             // bounds-checked row-major index
  std::pair<int, int> coords(int site) const;   // inverse of site()

  // Center-to-center distance between two sites, in units of b.
  double separation(int p, int q) const;

  // Nearest neighbors: separation exactly 1 (adjacent chain sites, or grid
  // sites differing by 1 in exactly one coordinate).
  bool nearest(int p, int q) const;

  // Grid pairs offset by (+-1, +-1); always false on a chain.
  bool diagonal(int p, int q) const;

  // All unordered nearest-neighbor pairs (p < q), lexicographic order.
  std::vector<std::pair<int, int>> nearest_pairs() const;

  bool operator==(const Lattice& other) const = default;

 private:
  Lattice(LatticeKind kind, int rows, int cols) : kind_(kind), rows_(rows), cols_(cols) {}

  LatticeKind kind_;
  int rows_;  // 1 for chains
  int cols_;  // chain length for chains
};

}  // namespace qdmol
