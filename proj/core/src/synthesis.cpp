#include "qdmol/synthesis.hpp"

#include "simplex.hpp"

#include <json.hpp>

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace qdmol {

void TargetProfile::validate() const {
  for (const int k : cancel) {
    if (k < 2) {
      throw std::invalid_argument("target cancel set may only contain separations >= 2");
    }
  }
}

int Pattern::minimal_period() const {
  const int p = period();
  if (p == 0) throw std::invalid_argument("empty pattern");
  for (int cand = 1; cand <= p; ++cand) {
    if (p % cand != 0) continue;
    bool ok = true;
    for (int j = 0; j < p && ok; ++j) {
      ok = cells[static_cast<std::size_t>(j)] == cells[static_cast<std::size_t>((j + cand) % p)];
    }
    if (ok) return cand;
  }
  return p;  // unreachable: cand == p always matches
}

std::string Pattern::letters() const {
  std::string s;
  s.reserve(cells.size());
  for (const ChargeState c : cells) s += to_char(c);
  return s;
}

Rational sign_vector(const Pattern& pattern, std::int64_t k) {
  const int p = pattern.period();
  if (p == 0) throw std::invalid_argument("empty pattern");
  if (k < 0) throw std::invalid_argument("sign vector needs k >= 0");
  long sum = 0;
  for (int j = 0; j < p; ++j) {
    sum += pair_sign(pattern.cells[static_cast<std::size_t>(j)],
                     pattern.cells[static_cast<std::size_t>((j + k) % p)]);
  }
  return Rational(sum, p);
}

namespace {

Pattern all_up(int period) {
  return Pattern{std::vector<ChargeState>(static_cast<std::size_t>(period), ChargeState::Up)};
}

// Order used for orbit representatives: U < D < N.
int rank(ChargeState s) {
  switch (s) {
    case ChargeState::Up: return 0;
    case ChargeState::Down: return 1;
    case ChargeState::Neutral: return 2;
  }
  throw std::invalid_argument("corrupt charge state");
}

bool is_least_rotation(const std::vector<ChargeState>& cells) {
  const int p = static_cast<int>(cells.size());
  for (int s = 1; s < p; ++s) {
    for (int j = 0; j < p; ++j) {
      const int lhs = rank(cells[static_cast<std::size_t>((j + s) % p)]);
      const int rhs = rank(cells[static_cast<std::size_t>(j)]);
      if (lhs != rhs) {
        if (lhs < rhs) return false;  // a rotation sorts earlier
        break;
      }
    }
  }
  return true;
}

}  // namespace

PatternFamily PatternFamily::shifted_window(int period) {
  if (period < 3 || period > 64) {
    throw std::invalid_argument("shifted-window family needs 3 <= period <= 64");
  }
  Pattern window = all_up(period);
  for (int j = 2; j < period; ++j) window.cells[static_cast<std::size_t>(j)] = ChargeState::Down;

  PatternFamily family;
  family.kind = Kind::Window;
  family.period = period;
  family.patterns = {std::move(window), all_up(period)};
  return family;
}

PatternFamily PatternFamily::enumerated(int period, bool allow_neutral) {
  if (period < 2 || period > 12) {
    throw std::invalid_argument("enumerated family needs 2 <= period <= 12");
  }
  const std::vector<ChargeState> alphabet =
      allow_neutral ? std::vector<ChargeState>{ChargeState::Up, ChargeState::Down, ChargeState::Neutral}
                    : std::vector<ChargeState>{ChargeState::Up, ChargeState::Down};

  PatternFamily family;
  family.kind = Kind::Enumerated;
  family.period = period;
  family.allow_neutral = allow_neutral;

  std::vector<std::size_t> digits(static_cast<std::size_t>(period), 0);
  for (;;) {
    std::vector<ChargeState> cells(static_cast<std::size_t>(period));
    for (int j = 0; j < period; ++j) cells[static_cast<std::size_t>(j)] = alphabet[digits[static_cast<std::size_t>(j)]];
    if (is_least_rotation(cells)) family.patterns.push_back(Pattern{std::move(cells)});

    int pos = period - 1;
    while (pos >= 0 && digits[static_cast<std::size_t>(pos)] == alphabet.size() - 1) {
      digits[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++digits[static_cast<std::size_t>(pos)];
  }
  return family;
}

SynthesisOutcome solve_durations(const PatternFamily& family, const TargetProfile& target) {
  target.validate();
  if (family.patterns.empty()) throw std::invalid_argument("empty pattern family");

  std::vector<std::int64_t> ks;
  ks.push_back(1);
  for (const int k : target.cancel) ks.push_back(k);

  std::vector<std::vector<Rational>> columns;
  columns.reserve(family.patterns.size());
  for (const Pattern& pattern : family.patterns) {
    std::vector<Rational> col;
    col.reserve(ks.size());
    for (const std::int64_t k : ks) col.push_back(sign_vector(pattern, k));
    columns.push_back(std::move(col));
  }

  std::vector<Rational> rhs(ks.size(), Rational(0));
  rhs[0] = target.nearest;
  const std::vector<Rational> cost(columns.size(), Rational(1));

  const detail::LpResult lp = detail::solve_lp_min(columns, rhs, cost);
  if (lp.status == detail::LpResult::Status::Infeasible) {
    return SynthesisOutcome{};
  }
  if (lp.status != detail::LpResult::Status::Optimal) {
    throw std::logic_error("duration synthesis: nonnegative total time cannot be unbounded");
  }

  SynthesisResult result;
  std::int64_t lcm_orbits = 1;
  for (std::size_t i = 0; i < family.patterns.size(); ++i) {
    if (lp.x[i] == 0) continue;
    result.assignments.emplace_back(family.patterns[i], lp.x[i]);
    result.total_time += lp.x[i];
    lcm_orbits = std::lcm(lcm_orbits,
                          static_cast<std::int64_t>(family.patterns[i].minimal_period()));
  }

  result.certificate.period = static_cast<int>(lcm_orbits);
  result.certificate.coeff.assign(static_cast<std::size_t>(lcm_orbits), Rational(0));
  for (std::int64_t k = 1; k <= lcm_orbits; ++k) {
    Rational c = 0;
    for (const auto& [pattern, tau] : result.assignments) c += tau * sign_vector(pattern, k);
    result.certificate.coeff[static_cast<std::size_t>(k - 1)] = c;
  }

  // The LP already enforced these; a failure here would mean the certificate
  // construction and the constraint matrix disagree.
  if (result.certificate.at(1) != target.nearest) {
    throw std::logic_error("duration synthesis: certificate violates the k = 1 constraint");
  }
  for (const int k : target.cancel) {
    if (result.certificate.at(k) != 0) {
      throw std::logic_error("duration synthesis: certificate violates a cancellation constraint");
    }
  }

  return SynthesisOutcome{true, std::move(result)};
}

Schedule SynthesisResult::realize(const Lattice& lattice, int anchor) const {
  if (lattice.kind() != LatticeKind::Chain1D) {
    throw std::domain_error("synthesis results realize on chain lattices only");
  }
  if (assignments.empty()) throw std::invalid_argument("empty synthesis result");

  const int n = lattice.num_sites();
  Schedule sched(lattice);
  for (const auto& [pattern, tau] : assignments) {
    const int p = pattern.period();
    const int orbit = pattern.minimal_period();
    const Rational slice = tau / orbit;
    for (int s = 0; s < orbit; ++s) {
      ChargeConfig cfg(lattice);
      for (int j = 0; j < n; ++j) {
        const int r = (((j - anchor) % p) + p) % p;
        cfg.set(j, pattern.cells[static_cast<std::size_t>((r + s) % p)]);
      }
      sched.append(std::move(cfg), slice);
    }
  }
  return sched;
}

VerifyReport verify(const SynthesisResult& result, const Lattice& lattice,
                    const MoleculeGeometry& geom, std::int64_t k_max, double tol) {
  if (lattice.kind() != LatticeKind::Chain1D) {
    throw std::domain_error("synthesis verification runs on chain lattices only");
  }
  const int n = lattice.num_sites();
  const int q = result.certificate.period;
  if (n < 4 * q) {
    throw std::invalid_argument("verification chain must span at least four periods");
  }

  const Schedule sched = result.realize(lattice, 0);
  const CouplingMatrix coupling = net_coupling(sched);

  VerifyReport report;
  const int margin = q;
  const int k_hi = std::min(2 * q + 2, n - 1 - 2 * margin);
  for (int k = 1; k <= k_hi; ++k) {
    const Rational& expected = result.certificate.at(k);
    for (int j = margin; j + k <= n - 1 - margin; ++j) {
      const Rational& actual = coupling.at(j, j + k);
      if (actual != expected) {
        report.mismatches.push_back(VerifyReport::Mismatch{k, j, expected, actual});
      }
    }
  }
  report.ok = report.mismatches.empty();
  try {
    report.residual = residual_ratio(sched, geom, k_max, tol);
  } catch (const std::exception&) {
    // A target with nearest == 0 has no meaningful ratio; a corrupted result
    // may not even have a uniform bulk. The mismatch list already tells the
    // story in both cases.
    report.residual = std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

SynthesisSpec parse_synthesis_spec(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw std::invalid_argument(std::string("synthesis spec is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw std::invalid_argument("synthesis spec must be a JSON object");

  SynthesisSpec spec;
  if (doc.contains("nearest")) {
    const auto& v = doc["nearest"];
    if (v.is_number_integer()) {
      spec.target.nearest = Rational(v.get<std::int64_t>());
    } else if (v.is_string()) {
      spec.target.nearest = parse_rational(v.get<std::string>());
    } else {
      throw std::invalid_argument("'nearest' must be an integer or a rational string");
    }
  }
  if (doc.contains("cancel")) {
    if (!doc["cancel"].is_array()) throw std::invalid_argument("'cancel' must be an array");
    for (const auto& v : doc["cancel"]) {
      if (!v.is_number_integer()) throw std::invalid_argument("'cancel' entries must be integers");
      spec.target.cancel.insert(v.get<int>());
    }
  }
  spec.target.validate();

  if (!doc.contains("family") || !doc["family"].is_object()) {
    throw std::invalid_argument("synthesis spec needs a 'family' object");
  }
  const auto& fam = doc["family"];
  if (!fam.contains("kind") || !fam["kind"].is_string()) {
    throw std::invalid_argument("'family.kind' must be \"window\" or \"enum\"");
  }
  if (!fam.contains("period") || !fam["period"].is_number_integer()) {
    throw std::invalid_argument("'family.period' must be an integer");
  }
  const std::string kind = fam["kind"].get<std::string>();
  const int period = fam["period"].get<int>();
  if (kind == "window") {
    if (fam.contains("allow_neutral") && fam["allow_neutral"].get<bool>()) {
      throw std::invalid_argument("'allow_neutral' applies to enumerated families only");
    }
    spec.family = PatternFamily::shifted_window(period);
  } else if (kind == "enum") {
    const bool neutral = fam.contains("allow_neutral") && fam["allow_neutral"].get<bool>();
    spec.family = PatternFamily::enumerated(period, neutral);
  } else {
    throw std::invalid_argument("'family.kind' must be \"window\" or \"enum\"");
  }
  return spec;
}

}  // namespace qdmol
