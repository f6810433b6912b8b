#include "qdmol/schedule.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace qdmol {

namespace {

int floor_mod(int value, int modulus) { return ((value % modulus) + modulus) % modulus; }

}  // namespace

char to_char(ChargeState s) {
  switch (s) {
    case ChargeState::Neutral: return 'N';
    case ChargeState::Up: return 'U';
    case ChargeState::Down: return 'D';
  }
  throw std::invalid_argument("corrupt charge state");
}

ChargeState charge_from_char(char c) {
  switch (c) {
    case 'N': return ChargeState::Neutral;
    case 'U': return ChargeState::Up;
    case 'D': return ChargeState::Down;
    default: break;
  }
  throw std::invalid_argument(std::string("unknown charge state character '") + c + "'");
}

int pair_sign(ChargeState s1, ChargeState s2) {
  if (s1 == ChargeState::Neutral || s2 == ChargeState::Neutral) return 0;
  return s1 == s2 ? 1 : -1;
}

ChargeConfig::ChargeConfig(Lattice lattice, ChargeState fill)
    : lattice_(std::move(lattice)),
      states_(static_cast<std::size_t>(lattice_.num_sites()), fill) {}

ChargeConfig::ChargeConfig(Lattice lattice, std::vector<ChargeState> states)
    : lattice_(std::move(lattice)), states_(std::move(states)) {
  if (states_.size() != static_cast<std::size_t>(lattice_.num_sites())) {
    throw std::invalid_argument("charge configuration size does not match lattice");
  }
}

ChargeState ChargeConfig::at(int site) const {
  if (site < 0 || site >= size()) throw std::out_of_range("charge config site out of range");
  return states_[static_cast<std::size_t>(site)];
}

void ChargeConfig::set(int site, ChargeState s) {
  if (site < 0 || site >= size()) throw std::out_of_range("charge config site out of range");
  states_[static_cast<std::size_t>(site)] = s;
}

void Schedule::append(ChargeConfig config, Rational duration) {
  if (config.lattice() != lattice_) {
    throw std::invalid_argument("step configuration belongs to a different lattice");
  }
  if (duration < 0) throw std::invalid_argument("step duration must be nonnegative");
  steps_.push_back(Step{std::move(config), std::move(duration)});
}

Rational Schedule::total_time() const {
  Rational t = 0;
  for (const Step& s : steps_) t += s.duration;
  return t;
}

CouplingMatrix::CouplingMatrix(Lattice lattice)
    : lattice_(std::move(lattice)),
      upper_(static_cast<std::size_t>(lattice_.num_sites()) *
                 (static_cast<std::size_t>(lattice_.num_sites()) - 1) / 2,
             Rational(0)) {}

std::size_t CouplingMatrix::index(int p, int q) const {
  const int n = num_sites();
  if (p < 0 || q < 0 || p >= n || q >= n) throw std::out_of_range("coupling index out of range");
  if (p > q) std::swap(p, q);
  return static_cast<std::size_t>(p) * (2 * static_cast<std::size_t>(n) - p - 1) / 2 +
         static_cast<std::size_t>(q - p - 1);
}

const Rational& CouplingMatrix::at(int p, int q) const {
  static const Rational zero = 0;
  if (p == q) {
    if (p < 0 || p >= num_sites()) throw std::out_of_range("coupling index out of range");
    return zero;
  }
  return upper_[index(p, q)];
}

void CouplingMatrix::set(int p, int q, Rational value) {
  if (p == q) throw std::invalid_argument("diagonal coupling entries are identically zero");
  upper_[index(p, q)] = std::move(value);
}

void CouplingMatrix::add(int p, int q, const Rational& delta) {
  if (p == q) throw std::invalid_argument("diagonal coupling entries are identically zero");
  upper_[index(p, q)] += delta;
}

CouplingMatrix net_coupling(const Schedule& schedule) {
  if (schedule.empty()) throw std::invalid_argument("net coupling of an empty schedule");
  CouplingMatrix c(schedule.lattice());
  const int n = c.num_sites();
  for (const Step& step : schedule.steps()) {
    if (step.duration == 0) continue;
    const auto& states = step.config.states();
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const int s = pair_sign(states[static_cast<std::size_t>(p)],
                                states[static_cast<std::size_t>(q)]);
        if (s == 1) {
          c.add(p, q, step.duration);
        } else if (s == -1) {
          c.add(p, q, -step.duration);
        }
      }
    }
  }
  return c;
}

// --- generators ------------------------------------------------------------

namespace {

void require_chain(const Lattice& lattice, const char* who) {
  if (lattice.kind() != LatticeKind::Chain1D) {
    throw std::domain_error(std::string(who) + " is defined for chain lattices only");
  }
}

}  // namespace

Schedule gen_one_step(const Lattice& lattice) {
  Schedule sched(lattice);
  sched.append(ChargeConfig(lattice, ChargeState::Up), Rational(1));
  return sched;
}

Schedule gen_three_step(const Lattice& lattice, int anchor) {
  require_chain(lattice, "gen_three_step");
  const int n = lattice.num_sites();

  ChargeConfig first(lattice), second(lattice);
  for (int j = 0; j < n; ++j) {
    const int r = floor_mod(j - anchor, 4);
    first.set(j, (r == 0 || r == 1) ? ChargeState::Up : ChargeState::Down);
    second.set(j, (r == 0 || r == 3) ? ChargeState::Up : ChargeState::Down);
  }

  Schedule sched(lattice);
  sched.append(std::move(first), Rational(1, 2));
  sched.append(std::move(second), Rational(1, 2));
  sched.append(ChargeConfig(lattice, ChargeState::Up), Rational(1));
  return sched;
}

Schedule gen_m_step(const Lattice& lattice, int m, int anchor) {
  require_chain(lattice, "gen_m_step");
  if (m < 4 || m > 8) {
    throw std::domain_error("gen_m_step needs 4 <= m <= 8: below 4 nothing cancels, above 8 "
                            "the closing all-Up step would need negative duration");
  }
  const int n = lattice.num_sites();

  Schedule sched(lattice);
  for (int s = 1; s <= m; ++s) {
    // A two-site Up window at residues {2-s, 1-s} (mod m); each later step
    // slides the window one site to the left.
    const int w0 = floor_mod(2 - s, m);
    const int w1 = floor_mod(1 - s, m);
    ChargeConfig cfg(lattice);
    for (int j = 0; j < n; ++j) {
      const int r = floor_mod(j - anchor, m);
      cfg.set(j, (r == w0 || r == w1) ? ChargeState::Up : ChargeState::Down);
    }
    sched.append(std::move(cfg), Rational(1, 4));
  }
  sched.append(ChargeConfig(lattice, ChargeState::Up), Rational(8 - m, 4));
  return sched;
}

Schedule gen_2d_three_step(const Lattice& lattice, int anchor_row, int anchor_col) {
  if (lattice.kind() != LatticeKind::Grid2D) {
    throw std::domain_error("gen_2d_three_step is defined for grid lattices only");
  }

  ChargeConfig first(lattice), second(lattice);
  for (int row = 0; row < lattice.rows(); ++row) {
    for (int col = 0; col < lattice.cols(); ++col) {
      const int site = lattice.site(row, col);
      const int pr = floor_mod(row - anchor_row, 2);
      const int pc = floor_mod(col - anchor_col, 2);
      if (pr == 0 && pc == 0) {
        first.set(site, ChargeState::Up);
      } else if (pr == 1 && pc == 1) {
        first.set(site, ChargeState::Down);
      }
      if (pr == 0 && pc == 1) {
        second.set(site, ChargeState::Up);
      } else if (pr == 1 && pc == 0) {
        second.set(site, ChargeState::Down);
      }
    }
  }

  Schedule sched(lattice);
  sched.append(std::move(first), Rational(1));
  sched.append(std::move(second), Rational(1));
  sched.append(ChargeConfig(lattice, ChargeState::Up), Rational(1));
  return sched;
}

// --- bulk analysis -----------------------------------------------------------

const Rational& BulkProfile::at(std::int64_t k) const {
  if (k < 1) throw std::invalid_argument("bulk profile separation must be >= 1");
  if (period <= 0 || coeff.size() != static_cast<std::size_t>(period)) {
    throw std::invalid_argument("bulk profile: coeff must have `period` entries");
  }
  return coeff[static_cast<std::size_t>((k - 1) % period)];
}

namespace {

// Minimal p with states[j] == states[j + p] for all valid j, i.e. the spatial
// period of the pattern as far as this chain can witness it.
int minimal_pattern_period(const std::vector<ChargeState>& states) {
  const int n = static_cast<int>(states.size());
  for (int p = 1; p < n; ++p) {
    bool ok = true;
    for (int j = 0; j + p < n; ++j) {
      if (states[static_cast<std::size_t>(j)] != states[static_cast<std::size_t>(j + p)]) {
        ok = false;
        break;
      }
    }
    if (ok) return p;
  }
  return n;  // no repetition observed
}

}  // namespace

BulkProfile bulk_profile(const Schedule& schedule) {
  if (schedule.empty()) throw std::invalid_argument("bulk profile of an empty schedule");
  if (schedule.lattice().kind() != LatticeKind::Chain1D) {
    throw std::invalid_argument("bulk profile is defined for chain schedules only");
  }
  const int n = schedule.lattice().num_sites();

  std::int64_t big_q = 1;
  std::vector<int> periods;
  periods.reserve(schedule.steps().size());
  for (const Step& step : schedule.steps()) {
    const int p = minimal_pattern_period(step.config.states());
    if (3 * p > n) {
      throw std::invalid_argument(
          "bulk profile: a step pattern shows period " + std::to_string(p) +
          " on a chain of " + std::to_string(n) +
          " sites; need at least three repetitions to certify periodicity");
    }
    periods.push_back(p);
    big_q = std::lcm(big_q, static_cast<std::int64_t>(p));
  }
  if (3 * big_q > n) {
    throw std::invalid_argument("bulk profile: combined period " + std::to_string(big_q) +
                                " needs a chain of at least " + std::to_string(3 * big_q) +
                                " sites");
  }
  const int q = static_cast<int>(big_q);

  BulkProfile profile;
  profile.period = q;
  profile.coeff.assign(static_cast<std::size_t>(q), Rational(0));

  for (int k = 1; k <= q; ++k) {
    bool have_ref = false;
    Rational ref = 0;
    for (int j = 0; j < q; ++j) {
      Rational c = 0;
      for (std::size_t s = 0; s < schedule.steps().size(); ++s) {
        const Step& step = schedule.steps()[s];
        const int p = periods[s];
        const auto& states = step.config.states();
        const int sgn = pair_sign(states[static_cast<std::size_t>(j % p)],
                                  states[static_cast<std::size_t>((j + k) % p)]);
        if (sgn == 1) {
          c += step.duration;
        } else if (sgn == -1) {
          c -= step.duration;
        }
      }
      if (!have_ref) {
        ref = c;
        have_ref = true;
      } else if (c != ref) {
        throw std::invalid_argument(
            "bulk profile: coefficient at separation " + std::to_string(k) +
            " depends on the reference site (" + format_rational(ref) + " vs " +
            format_rational(c) + "); the schedule has no site-independent bulk");
      }
    }
    profile.coeff[static_cast<std::size_t>(k - 1)] = ref;
  }
  return profile;
}

ResidualWeights residual_weights(const BulkProfile& profile) {
  ResidualWeights w;
  w.period = profile.period;
  w.weight_by_residue.resize(static_cast<std::size_t>(profile.period));
  for (int r = 0; r < profile.period; ++r) {
    std::int64_t k = r;
    while (k < 2) k += profile.period;
    w.weight_by_residue[static_cast<std::size_t>(r)] = abs(profile.at(k));
  }
  return w;
}

double residual_ratio(const Schedule& schedule, const MoleculeGeometry& geom,
                      std::int64_t k_max, double tol) {
  const BulkProfile profile = bulk_profile(schedule);
  const Rational c1 = profile.at(1);
  if (c1 == 0) {
    throw std::domain_error("residual ratio undefined: nearest-neighbor net coupling is zero");
  }
  const double numerator = residual_sum(geom, residual_weights(profile), k_max, tol);
  return numerator / std::abs(to_double(c1));
}

}  // namespace qdmol
