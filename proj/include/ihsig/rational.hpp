#ifndef IHSIG_RATIONAL_HPP
#define IHSIG_RATIONAL_HPP

#include <boost/multiprecision/gmp.hpp>

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ihsig {

// GMP rationals are kept in lowest terms with a positive denominator.
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;
using Vector = std::vector<Rational>;

/// Raised when spectral or simplicial data contradicts itself (a containment,
/// chain-map or derivation check fails).
class InconsistentData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses "p", "-p" or "p/q". Anything with a decimal point or exponent is
/// rejected so floating-point literals cannot sneak into exact data.
inline Rational parse_rational(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational literal");
  for (char ch : text) {
    bool ok = (ch >= '0' && ch <= '9') || ch == '-' || ch == '+' || ch == '/';
    if (!ok) {
      throw std::invalid_argument("malformed rational literal '" + std::string(text) +
                                  "' (expected p or p/q)");
    }
  }
  auto slash = text.find('/');
  auto parse_int = [&](std::string_view part) {
    if (part.empty() || part == "-" || part == "+") {
      throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
    }
    std::string s(part);
    if (s.front() == '+') s.erase(0, 1);
    if (s.find_first_of("+-", 1) != std::string::npos) {
      throw std::invalid_argument("malformed rational literal '" + std::string(text) + "'");
    }
    return Integer(s);
  };
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  Integer num = parse_int(text.substr(0, slash));
  Integer den = parse_int(text.substr(slash + 1));
  if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  return Rational(num, den);
}

inline std::string to_string(const Rational& q) {
  return q.str();
}

inline int sign(const Rational& q) {
  return q.sign();
}

/// Greatest integer <= q.
inline Integer floor(const Rational& q) {
  Integer num = boost::multiprecision::numerator(q);
  Integer den = boost::multiprecision::denominator(q);
  Integer quot = num / den;  // truncates toward zero
  if (num < 0 && quot * den != num) quot -= 1;
  return quot;
}

/// Least integer >= q.
inline Integer ceil(const Rational& q) {
  return -floor(-q);
}

}  // namespace ihsig

#endif  // IHSIG_RATIONAL_HPP
