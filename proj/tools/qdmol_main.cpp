// Command-line front end for the double-dot molecule scheduling library.
//
// Exit codes: 0 success, 2 usage or input error, 3 infeasible synthesis,
// 4 verification failure. Every output is deterministic given the flags
// (and the seed, where one applies).

#include <CLI11.hpp>
#include <json.hpp>

#include "qdmol/geometry.hpp"
#include "qdmol/lattice.hpp"
#include "qdmol/schedule.hpp"
#include "qdmol/schedule_io.hpp"
#include "qdmol/simulator.hpp"
#include "qdmol/synthesis.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace qdmol;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct VerificationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream file(out_path);
  if (!file) throw UsageError("cannot open output file: " + out_path);
  file << content;
}

std::string read_file(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw UsageError("cannot read file: " + path);
  std::ostringstream buf;
  buf << file.rdbuf();
  return buf.str();
}

std::string fmt(const char* format, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, value);
  return buf;
}

// Signed rendering used by the tables: "0", "+1", "-1/2".
std::string signed_rational(const Rational& r) {
  if (r == 0) return "0";
  return (r > 0 ? "+" : "") + format_rational(r);
}

// Flags shared by the schedule-consuming commands.
struct ScheduleFlags {
  std::string spec;
  int n = 0;
  int rows = 0;
  int cols = 0;
  int m = 0;
  int anchor = 0;
  int anchor_row = 0;
  int anchor_col = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--schedule", spec,
                    "Schedule source: gen:one-step | gen:three-step | gen:m-step (with --m) | "
                    "gen:2d-three-step | file:PATH")
        ->required();
    cmd->add_option("--n", n, "Chain length for generated schedules");
    cmd->add_option("--rows", rows, "Grid rows for generated schedules");
    cmd->add_option("--cols", cols, "Grid columns for generated schedules");
    cmd->add_option("--m", m, "Window period for gen:m-step")->check(CLI::Range(4, 8));
    cmd->add_option("--anchor", anchor, "Pattern anchor site (chain generators)");
    cmd->add_option("--anchor-row", anchor_row, "Pattern anchor row (grid generator)");
    cmd->add_option("--anchor-col", anchor_col, "Pattern anchor column (grid generator)");
  }

  bool has_lattice_flags() const { return n != 0 || rows != 0 || cols != 0; }

  Lattice lattice() const {
    const bool chain = n != 0;
    const bool grid = rows != 0 || cols != 0;
    if (chain && grid) throw UsageError("give either --n or --rows/--cols, not both");
    if (chain) return Lattice::chain(n);
    if (grid) {
      if (rows == 0 || cols == 0) throw UsageError("grids need both --rows and --cols");
      return Lattice::grid(rows, cols);
    }
    throw UsageError("generated schedules need --n (chain) or --rows/--cols (grid)");
  }

  Schedule resolve() const {
    if (spec.rfind("file:", 0) == 0) {
      if (has_lattice_flags()) {
        throw UsageError("--n/--rows/--cols apply to generated schedules; the file fixes its own lattice");
      }
      return parse_schedule(read_file(spec.substr(5)));
    }
    if (spec.rfind("gen:", 0) != 0) {
      throw UsageError("schedule spec must start with gen: or file:, got '" + spec + "'");
    }

    // gen:name[:key=value]... — inline parameters override the flags, so
    // "gen:m-step:m=6" and "gen:m-step --m 6" mean the same thing.
    std::string rest = spec.substr(4);
    std::string name = rest;
    int gen_m = m, gen_anchor = anchor, gen_row = anchor_row, gen_col = anchor_col;
    if (const auto cut = rest.find(':'); cut != std::string::npos) {
      name = rest.substr(0, cut);
      std::istringstream params(rest.substr(cut + 1));
      std::string item;
      while (std::getline(params, item, ':')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) {
          throw UsageError("schedule parameter '" + item + "' is not key=value");
        }
        const std::string key = item.substr(0, eq);
        const std::string value = item.substr(eq + 1);
        try {
          if (key == "m") {
            gen_m = std::stoi(value);
          } else if (key == "anchor" && value.find(',') != std::string::npos) {
            const auto comma = value.find(',');
            gen_row = std::stoi(value.substr(0, comma));
            gen_col = std::stoi(value.substr(comma + 1));
          } else if (key == "anchor") {
            gen_anchor = std::stoi(value);
          } else {
            throw UsageError("unknown schedule parameter '" + key + "'");
          }
        } catch (const UsageError&) {
          throw;
        } catch (const std::exception&) {
          throw UsageError("schedule parameter '" + item + "' has a malformed value");
        }
      }
    }

    if (name == "one-step") return gen_one_step(lattice());
    if (name == "three-step") return gen_three_step(lattice(), gen_anchor);
    if (name == "m-step") {
      if (gen_m == 0) throw UsageError("gen:m-step needs m (4..8), via --m or gen:m-step:m=M");
      return gen_m_step(lattice(), gen_m, gen_anchor);
    }
    if (name == "2d-three-step") return gen_2d_three_step(lattice(), gen_row, gen_col);
    throw UsageError("unknown generator '" + name +
                     "' (available: one-step, three-step, m-step, 2d-three-step)");
  }
};

// --- couplings ---------------------------------------------------------------

int run_couplings(const MoleculeGeometry& geom, int count, const std::string& format,
                  const std::string& out) {
  if (count < 1) throw UsageError("--count must be positive");
  std::ostringstream os;
  if (format == "csv") {
    os << "k,distance,e_zero,e_plus,g\n";
    for (int k = 1; k <= count; ++k) {
      const double d = k * geom.b;
      os << k << ',' << fmt("%.12g", d) << ',' << fmt("%.12g", e_zero(geom, d)) << ','
         << fmt("%.12g", e_plus(geom, d)) << ',' << fmt("%.12g", g(geom, k)) << '\n';
    }
  } else {
    nlohmann::json rows = nlohmann::json::array();
    for (int k = 1; k <= count; ++k) {
      const double d = k * geom.b;
      rows.push_back({{"k", k},
                      {"distance", d},
                      {"e_zero", e_zero(geom, d)},
                      {"e_plus", e_plus(geom, d)},
                      {"g", g(geom, k)}});
    }
    os << rows.dump(2) << '\n';
  }
  emit(out, os.str());
  return 0;
}

// --- table -------------------------------------------------------------------

int run_table(const std::string& kind, int m, const std::string& out) {
  std::ostringstream os;
  const auto cell = [](const std::string& s) {
    std::string padded = s;
    while (padded.size() < 6) padded.insert(padded.begin(), ' ');
    return padded;
  };

  if (kind == "table1") {
    const Lattice chain = Lattice::chain(32);
    const Schedule sched = gen_three_step(chain);
    const int j = 16;  // reference site congruent to the anchor (mod 4)
    const int k_max = 7;

    os << "separation-resolved contributions of the three-step schedule (units of t0)\n";
    os << "     k";
    for (int k = 1; k <= k_max; ++k) os << cell(std::to_string(k));
    os << '\n';
    const char* labels[3] = {"(a)", "(b)", "(c)"};
    std::vector<Rational> total(static_cast<std::size_t>(k_max), Rational(0));
    for (int s = 0; s < 3; ++s) {
      const Step& step = sched.steps()[static_cast<std::size_t>(s)];
      os << "  " << labels[s] << ' ';
      for (int k = 1; k <= k_max; ++k) {
        const Rational v = step.duration * pair_sign(step.config.at(j), step.config.at(j + k));
        total[static_cast<std::size_t>(k - 1)] += v;
        os << cell(signed_rational(v));
      }
      os << '\n';
    }
    os << " Total";
    for (int k = 1; k <= k_max; ++k) os << cell(signed_rational(total[static_cast<std::size_t>(k - 1)]));
    os << '\n';
  } else if (kind == "table2") {
    if (m < 4 || m > 8) throw UsageError("--kind table2 needs --m in 4..8");
    const Lattice chain = Lattice::chain(8 * m);
    const Schedule sched = gen_m_step(chain, m);
    const int j = 4 * m;
    const int k_max = m + 2;

    os << "separation-resolved contributions of the " << m
       << "-window schedule (units of t0/4)\n";
    os << "      k";
    for (int k = 1; k <= k_max; ++k) os << cell(std::to_string(k));
    os << '\n';
    std::vector<Rational> window_sum(static_cast<std::size_t>(k_max), Rational(0));
    std::vector<Rational> total(static_cast<std::size_t>(k_max), Rational(0));
    for (int s = 0; s <= m; ++s) {
      const Step& step = sched.steps()[static_cast<std::size_t>(s)];
      std::string label = "(" + std::to_string(s + 1) + ")";
      while (label.size() < 5) label.insert(label.begin(), ' ');
      os << ' ' << label << ' ';
      for (int k = 1; k <= k_max; ++k) {
        const Rational v =
            4 * step.duration * pair_sign(step.config.at(j), step.config.at(j + k));
        total[static_cast<std::size_t>(k - 1)] += v;
        if (s < m) window_sum[static_cast<std::size_t>(k - 1)] += v;
        os << cell(signed_rational(v));
      }
      os << '\n';
    }
    os << " (1-" << m << ")";
    for (int k = 1; k <= k_max; ++k) os << cell(signed_rational(window_sum[static_cast<std::size_t>(k - 1)]));
    os << '\n';
    os << " Total ";
    for (int k = 1; k <= k_max; ++k) os << cell(signed_rational(total[static_cast<std::size_t>(k - 1)]));
    os << '\n';
  } else {
    throw UsageError("--kind must be table1 or table2");
  }
  emit(out, os.str());
  return 0;
}

// --- schedule-gen ------------------------------------------------------------

int run_schedule_gen(const ScheduleFlags& flags, const std::string& out) {
  emit(out, format_schedule(flags.resolve()));
  return 0;
}

// --- schedule-verify ---------------------------------------------------------

struct TargetJson {
  Rational nearest = 1;
  std::set<int> cancel;
};

TargetJson parse_target_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw UsageError(std::string("target is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw UsageError("target must be a JSON object");
  TargetJson target;
  if (doc.contains("nearest")) {
    if (doc["nearest"].is_number_integer()) {
      target.nearest = Rational(doc["nearest"].get<std::int64_t>());
    } else if (doc["nearest"].is_string()) {
      target.nearest = parse_rational(doc["nearest"].get<std::string>());
    } else {
      throw UsageError("'nearest' must be an integer or a rational string");
    }
  }
  if (doc.contains("cancel")) {
    if (!doc["cancel"].is_array()) throw UsageError("'cancel' must be an array");
    for (const auto& v : doc["cancel"]) {
      if (!v.is_number_integer() || v.get<int>() < 2) {
        throw UsageError("'cancel' entries must be integers >= 2");
      }
      target.cancel.insert(v.get<int>());
    }
  }
  return target;
}

int run_schedule_verify(const ScheduleFlags& flags, const MoleculeGeometry& geom,
                        std::int64_t k_max, double tol, const std::string& target_text,
                        const std::string& format, const std::string& out) {
  const Schedule sched = flags.resolve();
  const Lattice& lattice = sched.lattice();
  std::ostringstream os;
  nlohmann::json doc;
  std::vector<std::string> problems;

  if (lattice.kind() == LatticeKind::Chain1D) {
    const int n = lattice.num_sites();
    BulkProfile profile;
    try {
      profile = bulk_profile(sched);
    } catch (const std::exception& e) {
      throw VerificationError(e.what());
    }

    // The profile is derived from the periodic extension; cross-check it
    // against the finite-lattice couplings, which are computed pair by pair.
    const CouplingMatrix coupling = net_coupling(sched);
    const int margin = profile.period;
    int checked = 0;
    for (int k = 1; k <= std::min(2 * profile.period + 2, n - 1 - 2 * margin); ++k) {
      for (int j = margin; j + k <= n - 1 - margin; ++j) {
        ++checked;
        if (coupling.at(j, j + k) != profile.at(k)) {
          problems.push_back("net coupling at (" + std::to_string(j) + "," +
                             std::to_string(j + k) + ") = " +
                             format_rational(coupling.at(j, j + k)) +
                             " differs from the bulk profile value " +
                             format_rational(profile.at(k)));
        }
      }
    }

    std::optional<double> residual;
    if (profile.at(1) != 0) residual = residual_ratio(sched, geom, k_max, tol);

    if (!target_text.empty()) {
      const TargetJson target = parse_target_json(target_text);
      if (profile.at(1) != target.nearest) {
        problems.push_back("nearest-neighbor coefficient " + format_rational(profile.at(1)) +
                           " differs from target " + format_rational(target.nearest));
      }
      for (const int k : target.cancel) {
        if (profile.at(k) != 0) {
          problems.push_back("separation " + std::to_string(k) + " has coefficient " +
                             format_rational(profile.at(k)) + ", target demands 0");
        }
      }
    }

    if (format == "json") {
      doc["lattice"] = "chain " + std::to_string(n);
      doc["steps"] = sched.steps().size();
      doc["total_time"] = format_rational(sched.total_time());
      doc["bulk_period"] = profile.period;
      nlohmann::json coeff = nlohmann::json::array();
      for (const Rational& c : profile.coeff) coeff.push_back(format_rational(c));
      doc["coefficients"] = coeff;
      doc["checked_pairs"] = checked;
      if (residual) doc["residual_ratio"] = *residual;
      doc["problems"] = problems;
      doc["ok"] = problems.empty();
      os << doc.dump(2) << '\n';
    } else {
      os << "lattice: chain " << n << '\n';
      os << "steps: " << sched.steps().size() << ", total time " << format_rational(sched.total_time())
         << '\n';
      os << "bulk period: " << profile.period << '\n';
      os << "coefficients:";
      for (int k = 1; k <= profile.period; ++k) {
        os << " k=" << k << ": " << format_rational(profile.at(k));
      }
      os << '\n';
      if (residual) {
        os << "residual ratio: " << fmt("%.6g", *residual) << '\n';
      } else {
        os << "residual ratio: undefined (nearest coefficient is zero)\n";
      }
      os << "cross-checked " << checked << " bulk pairs against the profile\n";
      for (const std::string& p : problems) os << "problem: " << p << '\n';
      os << (problems.empty() ? "ok\n" : "FAILED\n");
    }
  } else {
    if (!target_text.empty()) {
      throw UsageError("--target applies to chain schedules only");
    }
    // Grids have no one-dimensional bulk profile; report coefficients by
    // separation class instead.
    const CouplingMatrix coupling = net_coupling(sched);
    const int n = lattice.num_sites();
    std::map<long long, std::pair<double, std::set<std::string>>> classes;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double d = lattice.separation(p, q);
        const long long key = std::llround(d * 1e6);
        classes[key].first = d;
        classes[key].second.insert(format_rational(coupling.at(p, q)));
      }
    }
    if (format == "json") {
      doc["lattice"] = "grid " + std::to_string(lattice.rows()) + " " + std::to_string(lattice.cols());
      doc["steps"] = sched.steps().size();
      doc["total_time"] = format_rational(sched.total_time());
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& [key, entry] : classes) {
        nlohmann::json values = nlohmann::json::array();
        for (const std::string& v : entry.second) values.push_back(v);
        rows.push_back({{"separation", entry.first}, {"coefficients", values}});
      }
      doc["classes"] = rows;
      doc["ok"] = true;
      os << doc.dump(2) << '\n';
    } else {
      os << "lattice: grid " << lattice.rows() << " " << lattice.cols() << '\n';
      os << "steps: " << sched.steps().size() << ", total time "
         << format_rational(sched.total_time()) << '\n';
      for (const auto& [key, entry] : classes) {
        os << "separation " << fmt("%.6g", entry.first) << ": {";
        bool first = true;
        for (const std::string& v : entry.second) {
          os << (first ? "" : ", ") << v;
          first = false;
        }
        os << "}\n";
      }
      os << "ok\n";
    }
  }

  emit(out, os.str());
  if (!problems.empty()) {
    throw VerificationError(std::to_string(problems.size()) + " check(s) failed");
  }
  return 0;
}

// --- ratio -------------------------------------------------------------------

int run_ratio(const ScheduleFlags& flags, const MoleculeGeometry& geom, std::int64_t k_max,
              double tol, const std::string& format, const std::string& out) {
  const Schedule sched = flags.resolve();
  const double r = residual_ratio(sched, geom, k_max, tol);
  std::ostringstream os;
  if (format == "csv") {
    os << "# ratio quoted to three significant digits\n";
    os << "schedule,b_over_a,ratio\n";
    os << flags.spec << ',' << fmt("%.6g", geom.b / geom.a) << ',' << fmt("%.3g", r) << '\n';
  } else {
    nlohmann::json doc{{"schedule", flags.spec},
                       {"b_over_a", geom.b / geom.a},
                       {"ratio", r}};
    os << doc.dump(2) << '\n';
  }
  emit(out, os.str());
  return 0;
}

// --- simulate ----------------------------------------------------------------

int run_simulate(const ScheduleFlags& flags, const MoleculeGeometry& geom,
                 const std::string& format, const std::string& out) {
  const Schedule sched = flags.resolve();
  const int n = sched.lattice().num_sites();
  if (n > kMaxQubits) {
    throw UsageError("simulate handles at most " + std::to_string(kMaxQubits) + " sites, got " +
                     std::to_string(n));
  }

  const CouplingMatrix coupling = net_coupling(sched);
  const QuantumState final_state = evolve(initial_state(n), coupling, geom);
  const double f = fidelity(final_state, cluster_state(sched.lattice()));

  // Second, independent route to the same number; a disagreement means the
  // engine is broken, and no output is better than a wrong one.
  const double f_closed = fidelity_analytic(residual_phases(coupling, geom));
  if (std::abs(f - f_closed) > 1e-12) {
    throw VerificationError("statevector fidelity " + fmt("%.17g", f) +
                            " disagrees with the closed form " + fmt("%.17g", f_closed));
  }

  std::ostringstream os;
  if (format == "csv") {
    os << "N,schedule,fidelity\n";
    os << n << ',' << flags.spec << ',' << fmt("%.17g", f) << '\n';
  } else {
    nlohmann::json doc{{"N", n}, {"schedule", flags.spec}, {"fidelity", f}};
    os << doc.dump(2) << '\n';
  }
  emit(out, os.str());
  return 0;
}

// --- synth -------------------------------------------------------------------

int run_synth(const std::string& target_text, const MoleculeGeometry& geom,
              const std::string& format, const std::string& out) {
  const SynthesisSpec spec = [&] {
    try {
      return parse_synthesis_spec(target_text);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }();

  const SynthesisOutcome outcome = solve_durations(spec.family, spec.target);
  if (!outcome.feasible) {
    throw InfeasibleError("no nonnegative durations over this family meet the target");
  }
  const SynthesisResult& result = *outcome.result;

  const int n = std::max(32, 8 * result.certificate.period);
  const Lattice chain = Lattice::chain(n);
  const VerifyReport report = verify(result, chain, geom);
  if (!report.ok) {
    throw VerificationError("realized schedule disagrees with its certificate on " +
                            std::to_string(report.mismatches.size()) + " pairs");
  }

  const Schedule sched = result.realize(chain);
  std::ostringstream os;
  if (format == "json") {
    nlohmann::json assignments = nlohmann::json::array();
    for (const auto& [pattern, tau] : result.assignments) {
      assignments.push_back({{"pattern", pattern.letters()},
                             {"duration", format_rational(tau)},
                             {"orbit", pattern.minimal_period()}});
    }
    nlohmann::json coeff = nlohmann::json::array();
    for (const Rational& c : result.certificate.coeff) coeff.push_back(format_rational(c));
    nlohmann::json doc{{"feasible", true},
                       {"assignments", assignments},
                       {"total_time", format_rational(result.total_time)},
                       {"certificate", {{"period", result.certificate.period}, {"coefficients", coeff}}},
                       {"residual_ratio", report.residual},
                       {"verified_sites", n},
                       {"schedule", format_schedule(sched)}};
    os << doc.dump(2) << '\n';
  } else {
    os << "feasible: yes\n";
    for (const auto& [pattern, tau] : result.assignments) {
      os << "pattern " << pattern.letters() << ": duration " << format_rational(tau)
         << " over " << pattern.minimal_period() << " shift(s)\n";
    }
    os << "total time: " << format_rational(result.total_time) << '\n';
    os << "certificate (period " << result.certificate.period << "):";
    for (int k = 1; k <= result.certificate.period; ++k) {
      os << " k=" << k << ": " << format_rational(result.certificate.at(k));
    }
    os << '\n';
    os << "residual ratio: " << fmt("%.6g", report.residual) << '\n';
    os << "verified on a " << n << "-site chain: ok\n";
    os << format_schedule(sched);
  }
  emit(out, os.str());
  return 0;
}

// --- jitter ------------------------------------------------------------------

int run_jitter(const ScheduleFlags& flags, const MoleculeGeometry& geom, double jitter,
               std::uint64_t seed, int samples, const std::vector<double>& only_k,
               const std::string& format, const std::string& out) {
  if (samples < 1) throw UsageError("--samples must be positive");
  const Schedule sched = flags.resolve();
  const int n = sched.lattice().num_sites();
  if (n > kMaxQubits) {
    throw UsageError("jitter handles at most " + std::to_string(kMaxQubits) + " sites, got " +
                     std::to_string(n));
  }

  JitterOptions options;
  options.relative = jitter;
  if (!only_k.empty()) options.only_separations = only_k;

  std::ostringstream os;
  nlohmann::json rows = nlohmann::json::array();
  if (format == "csv") os << "schedule,n,jitter,sample,seed,fidelity\n";
  for (int i = 0; i < samples; ++i) {
    options.seed = seed + static_cast<std::uint64_t>(i);
    const double f = perturbed_run(sched, geom, options);
    if (format == "csv") {
      os << flags.spec << ',' << n << ',' << fmt("%.6g", jitter) << ',' << i << ','
         << options.seed << ',' << fmt("%.17g", f) << '\n';
    } else {
      rows.push_back({{"sample", i}, {"seed", options.seed}, {"fidelity", f}});
    }
  }
  if (format == "json") {
    nlohmann::json doc{{"schedule", flags.spec}, {"n", n}, {"jitter", jitter}, {"runs", rows}};
    os << doc.dump(2) << '\n';
  }
  emit(out, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Charge-configuration schedules for double-dot molecule cluster states"};
  app.require_subcommand(1);

  double a = 1.0, b = 10.0;
  std::int64_t k_max = 10000;
  double tol = 1e-6;

  const auto add_geometry = [&](CLI::App* cmd) {
    cmd->add_option("--a", a, "Intra-molecule dot separation")->capture_default_str();
    cmd->add_option("--b", b, "Nearest-neighbor molecule spacing")->capture_default_str();
  };
  const auto add_tail = [&](CLI::App* cmd) {
    cmd->add_option("--kmax", k_max, "Residual sum truncation")->capture_default_str();
    cmd->add_option("--tol", tol, "Certified residual tolerance")->capture_default_str();
  };
  const auto add_output = [](CLI::App* cmd, std::string& format, std::string& out) {
    cmd->add_option("--out", out, "Write output to this file instead of stdout");
    cmd->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json", "text"}))
        ->capture_default_str();
  };

  int exit_code = 0;

  // couplings
  {
    auto* cmd = app.add_subcommand("couplings", "Tabulate e_zero, e_plus and g(k)");
    static int count = 10;
    static std::string format = "csv", out;
    add_geometry(cmd);
    cmd->add_option("--count", count, "Number of separations to list")->capture_default_str();
    add_output(cmd, format, out);
    cmd->callback([&] { exit_code = run_couplings(MoleculeGeometry(a, b), count, format, out); });
  }

  // table
  {
    auto* cmd = app.add_subcommand("table", "Print the per-step contribution tables");
    static std::string kind;
    static int table_m = 0;
    static std::string format = "text", out;
    cmd->add_option("--kind", kind, "table1 (three-step) or table2 (m windows)")->required();
    cmd->add_option("--m", table_m, "Window period for table2")->check(CLI::Range(4, 8));
    add_output(cmd, format, out);
    cmd->callback([&] { exit_code = run_table(kind, table_m, out); });
  }

  // schedule-gen
  {
    auto* cmd = app.add_subcommand("schedule-gen", "Emit a schedule in the text format");
    static ScheduleFlags flags;
    static std::string format = "text", out;
    flags.attach(cmd);
    add_output(cmd, format, out);
    cmd->callback([&] { exit_code = run_schedule_gen(flags, out); });
  }

  // schedule-verify
  {
    auto* cmd = app.add_subcommand("schedule-verify",
                                   "Check bulk uniformity and optionally a target profile");
    static ScheduleFlags flags;
    static std::string target_file, target_json;
    static std::string format = "text", out;
    flags.attach(cmd);
    add_geometry(cmd);
    add_tail(cmd);
    cmd->add_option("--target", target_file, "JSON file with {nearest, cancel}");
    cmd->add_option("--target-json", target_json, "Inline JSON target")->excludes("--target");
    add_output(cmd, format, out);
    cmd->callback([&] {
      const std::string text = !target_file.empty() ? read_file(target_file) : target_json;
      exit_code = run_schedule_verify(flags, MoleculeGeometry(a, b), k_max, tol, text, format, out);
    });
  }

  // ratio
  {
    auto* cmd = app.add_subcommand("ratio", "Residual-to-nearest coupling ratio of a schedule");
    static ScheduleFlags flags;
    static std::string format = "csv", out;
    flags.attach(cmd);
    add_geometry(cmd);
    add_tail(cmd);
    add_output(cmd, format, out);
    cmd->callback([&] {
      exit_code = run_ratio(flags, MoleculeGeometry(a, b), k_max, tol, format, out);
    });
  }

  // simulate
  {
    auto* cmd = app.add_subcommand("simulate", "Cluster-state fidelity of a schedule");
    static ScheduleFlags flags;
    static std::string format = "csv", out;
    flags.attach(cmd);
    add_geometry(cmd);
    add_output(cmd, format, out);
    cmd->callback([&] { exit_code = run_simulate(flags, MoleculeGeometry(a, b), format, out); });
  }

  // synth
  {
    auto* cmd = app.add_subcommand("synth", "Solve step durations for a target profile");
    static std::string target_file, target_json;
    static std::string format = "json", out;
    cmd->add_option("--target", target_file, "JSON file with {nearest, cancel, family}");
    cmd->add_option("--target-json", target_json, "Inline JSON target")->excludes("--target");
    add_geometry(cmd);
    add_output(cmd, format, out);
    cmd->callback([&] {
      if (target_file.empty() && target_json.empty()) {
        throw UsageError("synth needs --target FILE or --target-json STRING");
      }
      const std::string text = !target_file.empty() ? read_file(target_file) : target_json;
      exit_code = run_synth(text, MoleculeGeometry(a, b), format, out);
    });
  }

  // jitter
  {
    auto* cmd = app.add_subcommand("jitter", "Fidelity under random per-pair distance jitter");
    static ScheduleFlags flags;
    static double jitter = 0.0;
    static std::uint64_t seed = 0;
    static int samples = 1;
    static std::vector<double> only_k;
    static std::string format = "csv", out;
    flags.attach(cmd);
    add_geometry(cmd);
    cmd->add_option("--jitter", jitter, "Relative distance jitter in [0, 1)")->required();
    cmd->add_option("--seed", seed, "Base seed; sample i uses seed + i")->capture_default_str();
    cmd->add_option("--samples", samples, "Number of independent runs")->capture_default_str();
    cmd->add_option("--only-k", only_k, "Jitter only these separations (units of b)")
        ->delimiter(',');
    add_output(cmd, format, out);
    cmd->callback([&] {
      exit_code =
          run_jitter(flags, MoleculeGeometry(a, b), jitter, seed, samples, only_k, format, out);
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return 3;
  } catch (const VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return 4;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return exit_code;
}
