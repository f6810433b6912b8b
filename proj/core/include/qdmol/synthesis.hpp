#pragma once

#include "qdmol/geometry.hpp"
#include "qdmol/lattice.hpp"
#include "qdmol/rational.hpp"
#include "qdmol/schedule.hpp"

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace qdmol {

// What the bulk net coupling should look like: a prescribed coefficient at
// k = 1 and exact zeros on a chosen set of larger separations. Separations
// outside the set are unconstrained.
struct TargetProfile {
  Rational nearest = 1;
  std::set<int> cancel;  // each entry >= 2

  void validate() const;
};

// One period of a charge pattern, applied to a chain by periodic extension.
struct Pattern {
  std::vector<ChargeState> cells;

  int period() const { return static_cast<int>(cells.size()); }
  // Smallest rotation that maps the pattern to itself; divides period().
  int minimal_period() const;
  std::string letters() const;

  bool operator==(const Pattern& other) const = default;
};

// Mean of pair_sign over one period between sites k apart; this is the bulk
// net-coupling coefficient per unit of hold time.
Rational sign_vector(const Pattern& pattern, std::int64_t k);

// The candidate patterns a synthesis run may combine. Cyclic shifts of a
// pattern share its sign vector, so families store one representative per
// rotation orbit; realize() expands the orbit again.
struct PatternFamily {
  enum class Kind { Window, Enumerated };

  Kind kind = Kind::Window;
  int period = 4;
  bool allow_neutral = false;
  std::vector<Pattern> patterns;  // orbit representatives, deterministic order

  // Two representatives: a two-site Up window ahead of Downs (orbit size P),
  // and all-Up (orbit size 1). 3 <= period <= 64.
  static PatternFamily shifted_window(int period);

  // Every rotation orbit of {Up, Down}^P (plus Neutral when allowed),
  // represented by its lexicographically least rotation under U < D < N.
  // 2 <= period <= 12; the state space is exponential in P.
  static PatternFamily enumerated(int period, bool allow_neutral = false);
};

// A feasible duration assignment. Realization slices each pattern's total
// duration evenly across its cyclic shifts, which is exactly what makes the
// realized bulk coefficients independent of the reference site.
struct SynthesisResult {
  std::vector<std::pair<Pattern, Rational>> assignments;  // durations > 0, family order
  Rational total_time = 0;
  BulkProfile certificate;  // bulk coefficients of the assignment, period = lcm of orbits

  Schedule realize(const Lattice& lattice, int anchor = 0) const;
};

struct SynthesisOutcome {
  bool feasible = false;
  std::optional<SynthesisResult> result;
};

// Finds nonnegative durations over the family minimizing total time subject
// to the target's equality constraints. Infeasibility is an answer, not an
// error: e.g. a shifted-window family with period 9 cannot hold the k = 1
// coefficient while canceling 2..7 without a negative closing step.
SynthesisOutcome solve_durations(const PatternFamily& family, const TargetProfile& target);

// Independent check of a synthesis result: realizes the schedule on the given
// chain, recomputes net_coupling from scratch, and compares every pair inside
// the bulk margin against the certificate; also reports the residual ratio of
// the realized schedule.
struct VerifyReport {
  struct Mismatch {
    std::int64_t k = 0;
    int site = 0;
    Rational expected;
    Rational actual;
  };

  bool ok = false;
  std::vector<Mismatch> mismatches;
  double residual = 0.0;
};

VerifyReport verify(const SynthesisResult& result, const Lattice& lattice,
                    const MoleculeGeometry& geom, std::int64_t k_max = 10000,
                    double tol = 1e-6);

// JSON form consumed by tooling:
//   {"nearest": "1", "cancel": [2, 3], "family": {"kind": "window", "period": 6}}
// "kind" is "window" or "enum"; "allow_neutral" (default false) only applies
// to "enum"; "nearest" accepts an integer or a "p/q" string and defaults to 1.
struct SynthesisSpec {
  TargetProfile target;
  PatternFamily family;
};

SynthesisSpec parse_synthesis_spec(const std::string& json_text);

}  // namespace qdmol
