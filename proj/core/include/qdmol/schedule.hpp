#pragma once

#include "qdmol/geometry.hpp"
#include "qdmol/lattice.hpp"
#include "qdmol/rational.hpp"

#include <cstdint>
#include <vector>

namespace qdmol {

// Charge arrangement of one molecule: Neutral = (1,1), Up = (0,2) with both
// electrons on the far dot, Down = (2,0) with both on the near dot.
enum class ChargeState : std::uint8_t { Neutral = 0, Up = 1, Down = 2 };

char to_char(ChargeState s);              // 'N', 'U', 'D'
ChargeState charge_from_char(char c);     // inverse; throws on anything else

// Sign of the effective coupling between two molecules: 0 when either is
// Neutral (a (1,1) molecule carries no displaced pair), +1 when both are
// displaced the same way, -1 when they are displaced oppositely.
int pair_sign(ChargeState s1, ChargeState s2);

// A charge state for every site of a lattice.
class ChargeConfig {
 public:
  explicit ChargeConfig(Lattice lattice, ChargeState fill = ChargeState::Neutral);
  ChargeConfig(Lattice lattice, std::vector<ChargeState> states);

  const Lattice& lattice() const { return lattice_; }
  int size() const { return static_cast<int>(states_.size()); }
  ChargeState at(int site) const;
  void set(int site, ChargeState s);
  const std::vector<ChargeState>& states() const { return states_; }

  bool operator==(const ChargeConfig& other) const = default;

 private:
  Lattice lattice_;
  std::vector<ChargeState> states_;
};

// One hold: a charge configuration applied for a duration (units of t0, the
// nearest-neighbor pi-phase time).
struct Step {
  ChargeConfig config;
  Rational duration;  // >= 0

  bool operator==(const Step& other) const = default;
};

// An ordered list of steps over one lattice. Order is recorded for human
// consumption; every derived quantity depends only on per-config total times
// because all steps commute.
class Schedule {
 public:
  explicit Schedule(Lattice lattice) : lattice_(std::move(lattice)) {}

  const Lattice& lattice() const { return lattice_; }
  const std::vector<Step>& steps() const { return steps_; }
  bool empty() const { return steps_.empty(); }

  void append(ChargeConfig config, Rational duration);
  Rational total_time() const;

  bool operator==(const Schedule& other) const = default;

 private:
  Lattice lattice_;
  std::vector<Step> steps_;
};

// Symmetric matrix of net sign-weighted hold times c_pq, exact.
class CouplingMatrix {
 public:
  explicit CouplingMatrix(Lattice lattice);

  const Lattice& lattice() const { return lattice_; }
  int num_sites() const { return lattice_.num_sites(); }

  const Rational& at(int p, int q) const;  // c_pp == 0
  void set(int p, int q, Rational value);
  void add(int p, int q, const Rational& delta);

  bool operator==(const CouplingMatrix& other) const = default;

 private:
  std::size_t index(int p, int q) const;

  Lattice lattice_;
  std::vector<Rational> upper_;  // packed p < q
};

// c_pq = sum over steps of pair_sign * duration. The phase accumulated by a
// pair at separation d (units of b) is then pi * c_pq * g(d).
CouplingMatrix net_coupling(const Schedule& schedule);

// --- generators ------------------------------------------------------------
//
// `anchor` fixes which site the patterns are referenced to; shifting it
// translates every configuration. Chain generators accept chains only, the
// 2D generator accepts grids only.

// Everything Up for one unit of t0: nearest neighbors reach exactly pi, every
// separation k keeps its full g(k) residual.
Schedule gen_one_step(const Lattice& lattice);

// Two half-time steps of period-4 patterns plus one full-time all-Up step;
// total time 2. Cancels k = 2 and k = 6 while doubling k = 4.
Schedule gen_three_step(const Lattice& lattice, int anchor = 0);

// m quarter-time steps sliding a two-site Up window through period m, then an
// all-Up step of duration (8-m)/4 (present with zero duration at m = 8);
// total time 2. Cancels every 2 <= k <= m-2 not divisible by m. Requires
// 4 <= m <= 8: below 4 nothing is canceled, above 8 the closing step would
// need negative time.
Schedule gen_m_step(const Lattice& lattice, int m, int anchor = 0);

// Three unit-time steps on a grid keyed to coordinate parities; total time 3.
// Nearest neighbors reach c = 1 and every diagonal pair cancels exactly.
Schedule gen_2d_three_step(const Lattice& lattice, int anchor_row = 0, int anchor_col = 0);

// --- bulk analysis (chains) -------------------------------------------------

// Net coupling of the schedule's periodic bulk extension: coefficient for
// separation k is coeff[(k - 1) % period].
struct BulkProfile {
  int period = 1;
  std::vector<Rational> coeff;  // size == period

  const Rational& at(std::int64_t k) const;
};

// Detects the minimal spatial period of every step pattern, extends the
// schedule periodically, and returns the per-separation coefficients. Throws
// std::invalid_argument when a step is not periodic with at least three
// repetitions on this chain, or when the coefficients fail to be uniform
// across bulk sites (the schedule has no well-defined bulk).
BulkProfile bulk_profile(const Schedule& schedule);

// |coeff| of separations k >= 2 as periodic residual weights.
ResidualWeights residual_weights(const BulkProfile& profile);

// Figure of merit: (sum over k >= 2 of |c(k)| g(k)) / |c(1)|, evaluated on the
// bulk extension with a certified truncation. Throws std::domain_error when
// the nearest-neighbor coefficient is zero.
double residual_ratio(const Schedule& schedule, const MoleculeGeometry& geom,
                      std::int64_t k_max = 10000, double tol = 1e-6);

}  // namespace qdmol
