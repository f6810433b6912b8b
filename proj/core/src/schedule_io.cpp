#include "qdmol/schedule_io.hpp"

#include <optional>
#include <sstream>
#include <vector>

namespace qdmol {

std::string format_schedule(const Schedule& schedule) {
  std::string out;
  const Lattice& lattice = schedule.lattice();
  if (lattice.kind() == LatticeKind::Chain1D) {
    out += "chain " + std::to_string(lattice.num_sites()) + "\n";
  } else {
    out += "grid " + std::to_string(lattice.rows()) + " " + std::to_string(lattice.cols()) + "\n";
  }
  for (const Step& step : schedule.steps()) {
    out += format_rational(step.duration);
    out += ' ';
    for (ChargeState s : step.config.states()) out += to_char(s);
    out += '\n';
  }
  return out;
}

namespace {

struct Line {
  int number;
  std::string text;
};

std::vector<Line> significant_lines(const std::string& text) {
  std::vector<Line> lines;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const auto first = raw.find_first_not_of(" \t");
    if (first == std::string::npos || raw[first] == '#') continue;
    const auto last = raw.find_last_not_of(" \t");
    lines.push_back(Line{number, raw.substr(first, last - first + 1)});
  }
  return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::istringstream in(line);
  std::string field;
  while (in >> field) fields.push_back(field);
  return fields;
}

int parse_count(const std::string& field, const Line& line, const char* what) {
  try {
    std::size_t used = 0;
    const int value = std::stoi(field, &used);
    if (used != field.size()) throw std::invalid_argument(field);
    return value;
  } catch (const std::exception&) {
    throw ScheduleParseError(line.number, std::string("bad ") + what + " '" + field + "'");
  }
}

}  // namespace

Schedule parse_schedule(const std::string& text) {
  const std::vector<Line> lines = significant_lines(text);
  if (lines.empty()) throw ScheduleParseError(1, "missing lattice header");

  const Line& header = lines.front();
  const std::vector<std::string> fields = split_fields(header.text);
  std::optional<Lattice> lattice;
  if (fields.size() == 2 && fields[0] == "chain") {
    const int n = parse_count(fields[1], header, "chain length");
    if (n < 2) throw ScheduleParseError(header.number, "chain needs at least 2 sites");
    lattice = Lattice::chain(n);
  } else if (fields.size() == 3 && fields[0] == "grid") {
    const int rows = parse_count(fields[1], header, "grid row count");
    const int cols = parse_count(fields[2], header, "grid column count");
    if (rows < 2 || cols < 2) throw ScheduleParseError(header.number, "grid needs at least 2x2 sites");
    lattice = Lattice::grid(rows, cols);
  } else {
    throw ScheduleParseError(header.number,
                             "expected a 'chain N' or 'grid R C' header, got '" + header.text + "'");
  }

  Schedule schedule(*lattice);
  const std::size_t n_sites = static_cast<std::size_t>(lattice->num_sites());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const Line& line = lines[i];
    const std::vector<std::string> parts = split_fields(line.text);
    if (parts.size() != 2) {
      throw ScheduleParseError(line.number,
                               "expected '<duration> <states>', got '" + line.text + "'");
    }
    Rational duration;
    try {
      duration = parse_rational(parts[0]);
    } catch (const std::invalid_argument& e) {
      throw ScheduleParseError(line.number, e.what());
    }
    if (duration < 0) throw ScheduleParseError(line.number, "step duration must be nonnegative");

    const std::string& letters = parts[1];
    if (letters.size() != n_sites) {
      throw ScheduleParseError(line.number, "expected " + std::to_string(n_sites) +
                                                " site letters, got " +
                                                std::to_string(letters.size()));
    }
    std::vector<ChargeState> states;
    states.reserve(n_sites);
    for (char c : letters) {
      try {
        states.push_back(charge_from_char(c));
      } catch (const std::invalid_argument& e) {
        throw ScheduleParseError(line.number, e.what());
      }
    }
    schedule.append(ChargeConfig(*lattice, std::move(states)), std::move(duration));
  }
  return schedule;
}

}  // namespace qdmol
