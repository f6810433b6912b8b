#include "qdmol/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace qdmol {

double to_double(const Rational& r) { return static_cast<double>(r); }

std::string format_rational(const Rational& r) {
  std::string out = numerator(r).str();
  if (denominator(r) != 1) {
    out += '/';
    out += denominator(r).str();
  }
  return out;
}

namespace {

bool all_digits(const std::string& s, std::size_t first, std::size_t last) {
  if (first >= last) return false;
  for (std::size_t i = first; i < last; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  const auto bad = [&] {
    return std::invalid_argument("not a rational number: '" + text + "'");
  };

  std::size_t pos = 0;
  bool negative = false;
  if (pos < text.size() && text[pos] == '-') {
    negative = true;
    ++pos;
  }

  const std::size_t slash = text.find('/', pos);
  const std::size_t num_end = (slash == std::string::npos) ? text.size() : slash;
  if (!all_digits(text, pos, num_end)) throw bad();

  boost::multiprecision::cpp_int num(text.substr(pos, num_end - pos));
  boost::multiprecision::cpp_int den = 1;
  if (slash != std::string::npos) {
    if (!all_digits(text, slash + 1, text.size())) throw bad();
    den = boost::multiprecision::cpp_int(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator: '" + text + "'");
  }
  if (negative) num = -num;
  return Rational(num, den);
}

}  // namespace qdmol
