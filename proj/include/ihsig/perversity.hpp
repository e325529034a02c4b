#ifndef IHSIG_PERVERSITY_HPP
#define IHSIG_PERVERSITY_HPP

#include <ihsig/complex.hpp>

#include <algorithm>
#include <string>

namespace ihsig {

/// Greatest integer strictly less than x.
inline long bracket(const Rational& x) {
  return (ceil(x) - 1).convert_to<long>();
}

/// Smallest integer >= x.
inline long ceiling(const Rational& x) {
  return ceil(x).convert_to<long>();
}

/**
 * Extended perversity index j for a stratum with fiber dimension f: j <= -1
 * means absolute cohomology of the end, j >= f relative, anything between an
 * ordinary perversity value. Internally everything is a cutoff degree: the
 * local table keeps fiber degrees strictly below cutoff().
 */
struct ExtPerversity {
  long j = 0;
  std::size_t f = 0;

  long clamped() const { return std::clamp(j, -1L, static_cast<long>(f)); }
  std::size_t cutoff() const { return static_cast<std::size_t>(static_cast<long>(f) - clamped()); }
  bool absolute() const { return j <= -1; }
  bool relative() const { return j >= static_cast<long>(f); }

  friend bool operator==(const ExtPerversity& a, const ExtPerversity& b) {
    return a.f == b.f && a.clamped() == b.clamped();
  }
};

/// Upper middle perversity value: f/2 - 1 (f even), (f-1)/2 (f odd).
inline ExtPerversity upper_middle(std::size_t f) {
  const long v = (f % 2 == 0) ? static_cast<long>(f / 2) - 1 : static_cast<long>((f - 1) / 2);
  return {v, f};
}

/// Lower middle perversity value: f/2 (f even), (f-1)/2 (f odd).
inline ExtPerversity lower_middle(std::size_t f) {
  const long v = (f % 2 == 0) ? static_cast<long>(f / 2) : static_cast<long>((f - 1) / 2);
  return {v, f};
}

/// The index whose cutoff is complementary: cutoff(p) + cutoff(dual(p)) = f + 1.
inline ExtPerversity dual(const ExtPerversity& p) {
  return {static_cast<long>(p.f) - p.clamped() - 1, p.f};
}

/// The pair (lower middle + k, upper middle - k).
struct MiddleOffsets {
  std::size_t f = 0;
  std::size_t k = 0;

  ExtPerversity lower_index() const { return {lower_middle(f).j + static_cast<long>(k), f}; }
  ExtPerversity upper_index() const { return {upper_middle(f).j - static_cast<long>(k), f}; }
};

/// Fiber cohomology truncated to degrees below the cutoff of p.
inline GradedDims local_ih_table(const GradedDims& fiber, const ExtPerversity& p) {
  GradedDims out = fiber;
  for (std::size_t i = p.cutoff(); i < out.size(); ++i) out[i] = 0;
  return out;
}

/// Cone parameter c in (0, 1] for fiber dimension f.
struct ConeParameter {
  Rational c;
  std::size_t f = 0;

  ConeParameter(Rational c_, std::size_t f_) : c(std::move(c_)), f(f_) {
    if (c <= 0 || c > 1) {
      throw std::invalid_argument("cone parameter c must lie in (0, 1], got " + to_string(c));
    }
  }
};

/// Fiber degrees i with i < f/2 + 1/(2c) carry L^2 cohomology on the cone.
inline Rational l2_cutoff(const ConeParameter& cp) {
  return Rational(static_cast<long>(cp.f), 2) + Rational(1) / (2 * cp.c);
}

inline bool l2_survives(const ConeParameter& cp, std::size_t degree) {
  return Rational(static_cast<long>(degree)) < l2_cutoff(cp);
}

/// Fiber cohomology restricted to the degrees that survive on the cone.
inline GradedDims l2_table(const GradedDims& fiber, const ConeParameter& cp) {
  GradedDims out = fiber;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (!l2_survives(cp, i)) out[i] = 0;
  return out;
}

struct ShiftAudit {
  Rational cutoff;         // f/2 + 1/(2c)
  long vanishing_degree;   // first fiber degree that dies on the cone
  long upper_middle_vanishing;
  long normative;          // vanishing_degree - upper_middle_vanishing
  long literal;            // the bracket expression, evaluated as written
  bool discrepancy() const { return normative != literal; }
};

/**
 * The offset k such that the cone metric with parameter c computes the
 * perversity upper middle - k. The normative value comes from the L^2
 * cutoff; the bracket formula [[1/2 + 1/(2c)]] (f odd) or [[1 + 1/(2c)]]
 * (f even) is evaluated alongside.
 */
inline ShiftAudit hodge_shift(const ConeParameter& cp) {
  ShiftAudit a;
  a.cutoff = l2_cutoff(cp);
  a.vanishing_degree = ceiling(a.cutoff);
  a.upper_middle_vanishing = static_cast<long>(upper_middle(cp.f).cutoff());
  a.normative = a.vanishing_degree - a.upper_middle_vanishing;
  const Rational inv = Rational(1) / (2 * cp.c);
  a.literal = (cp.f % 2 == 1) ? bracket(Rational(1, 2) + inv) : bracket(1 + inv);
  return a;
}

}  // namespace ihsig

#endif  // IHSIG_PERVERSITY_HPP
