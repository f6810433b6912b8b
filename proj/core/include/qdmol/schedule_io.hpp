#pragma once

#include "qdmol/schedule.hpp"

#include <stdexcept>
#include <string>

namespace qdmol {

// Plain-text schedule format, one step per line:
//
//   chain 8
//   1/2 UUDDUUDD
//   1/2 UDDUUDDU
//   1 UUUUUUUU
//
// The header is `chain N` or `grid R C` (grid states listed row-major). Each
// step line is an exact rational duration followed by one U/D/N letter per
// site. Blank lines and lines starting with '#' are ignored when parsing and
// never emitted when formatting, so format -> parse -> format is the
// identity on the emitted text and parse(format(s)) == s exactly.
std::string format_schedule(const Schedule& schedule);

class ScheduleParseError : public std::runtime_error {
 public:
  ScheduleParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

Schedule parse_schedule(const std::string& text);

}  // namespace qdmol
