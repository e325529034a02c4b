#ifndef IHSIG_RING_HPP
#define IHSIG_RING_HPP

#include <ihsig/complex.hpp>

#include <map>
#include <utility>
#include <vector>

namespace ihsig {

/**
 * Finite-dimensional graded-commutative algebra over Q. products(p, q) is
 * the (dims[p+q] x dims[p]*dims[q]) matrix whose column a*dims[q]+b is the
 * product of basis elements a (degree p) and b (degree q). The volume is a
 * vector in the top degree.
 */
struct GradedRing {
  GradedDims dims;
  std::map<std::pair<std::size_t, std::size_t>, Matrix> products;
  Vector volume;

  std::size_t top() const { return dims.size() - 1; }

  Matrix product(std::size_t p, std::size_t q) const {
    auto it = products.find({p, q});
    if (it != products.end()) return it->second;
    return Matrix(p + q < dims.size() ? dims[p + q] : 0, dims.at(p) * dims.at(q));
  }

  /// Coefficient of the volume in x*y for x in degree p, y in degree top-p.
  Matrix top_pairing(std::size_t p) const {
    if (dims.at(top()) != 1 || volume.size() != 1 || volume[0] == 0) {
      throw std::invalid_argument("ring needs a one-dimensional top degree with nonzero volume");
    }
    const std::size_t q = top() - p;
    Matrix prod = product(p, q);
    Matrix out(dims[p], dims[q]);
    for (std::size_t a = 0; a < dims[p]; ++a)
      for (std::size_t b = 0; b < dims[q]; ++b) out(a, b) = prod(0, a * dims[q] + b) / volume[0];
    return out;
  }

  /// Graded commutativity and Poincare duality of the top pairing.
  void check() const {
    for (const auto& [pq, m] : products) {
      const auto [p, q] = pq;
      Matrix other = product(q, p);
      const Rational sgn = (p * q % 2 == 0) ? 1 : -1;
      for (std::size_t a = 0; a < dims[p]; ++a)
        for (std::size_t b = 0; b < dims[q]; ++b)
          for (std::size_t r = 0; r < m.rows(); ++r)
            if (m(r, a * dims[q] + b) != sgn * other(r, b * dims[p] + a)) {
              throw InconsistentData("ring product is not graded commutative");
            }
    }
    for (std::size_t p = 0; p <= top(); ++p) {
      if (dims[p] != dims[top() - p] || rank(top_pairing(p)) != dims[p]) {
        throw InconsistentData("ring has a degenerate top pairing in degree " + std::to_string(p));
      }
    }
  }
};

/// Q in degree 0.
inline GradedRing point_ring() {
  GradedRing r;
  r.dims = {1};
  r.products[{0, 0}] = Matrix{{1}};
  r.volume = {1};
  return r;
}

/**
 * Cohomology ring of a product of spheres of the given dimensions: one
 * generator g_k per sphere with g_k^2 = 0, and basis the monomials
 * g_{k1} ... g_{km} with k1 < ... < km (as bitmasks). Within a degree,
 * monomials are ordered by increasing mask.
 */
class SphereProductRing {
 public:
  explicit SphereProductRing(std::vector<std::size_t> sphere_dims) : gens_(std::move(sphere_dims)) {
    for (auto d : gens_)
      if (d == 0) throw std::invalid_argument("sphere dimensions must be positive");
    if (gens_.size() > 16) throw std::invalid_argument("too many sphere factors");
    std::size_t top = 0;
    for (auto d : gens_) top += d;
    by_degree_.assign(top + 1, {});
    index_.assign(std::size_t{1} << gens_.size(), 0);
    for (unsigned mask = 0; mask < (1u << gens_.size()); ++mask) {
      const std::size_t deg = degree(mask);
      index_[mask] = by_degree_[deg].size();
      by_degree_[deg].push_back(mask);
    }
  }

  const std::vector<std::size_t>& generator_degrees() const { return gens_; }
  std::size_t top() const { return by_degree_.size() - 1; }
  unsigned full_mask() const { return (1u << gens_.size()) - 1; }

  std::size_t degree(unsigned mask) const {
    std::size_t d = 0;
    for (std::size_t k = 0; k < gens_.size(); ++k)
      if (mask & (1u << k)) d += gens_[k];
    return d;
  }
  std::size_t index(unsigned mask) const { return index_[mask]; }
  const std::vector<unsigned>& monomials(std::size_t deg) const { return by_degree_.at(deg); }

  /// Sign of e_S e_T = sign * e_{S u T}, or 0 if S and T meet.
  int multiply_sign(unsigned s, unsigned t) const {
    if (s & t) return 0;
    int sgn = 1;
    for (std::size_t a = 0; a < gens_.size(); ++a) {
      if (!(s & (1u << a))) continue;
      for (std::size_t b = 0; b < a; ++b)
        if ((t & (1u << b)) && gens_[a] % 2 == 1 && gens_[b] % 2 == 1) sgn = -sgn;
    }
    return sgn;
  }

  GradedRing ring() const {
    GradedRing r;
    for (const auto& ms : by_degree_) r.dims.push_back(ms.size());
    for (std::size_t p = 0; p <= top(); ++p) {
      for (std::size_t q = 0; p + q <= top(); ++q) {
        if (r.dims[p] == 0 || r.dims[q] == 0) continue;
        Matrix m(r.dims[p + q], r.dims[p] * r.dims[q]);
        bool any = false;
        for (std::size_t a = 0; a < r.dims[p]; ++a) {
          for (std::size_t b = 0; b < r.dims[q]; ++b) {
            const unsigned s = by_degree_[p][a], t = by_degree_[q][b];
            const int sgn = multiply_sign(s, t);
            if (sgn == 0) continue;
            m(index_[s | t], a * r.dims[q] + b) = sgn;
            any = true;
          }
        }
        if (any) r.products[{p, q}] = std::move(m);
      }
    }
    r.volume = {1};
    return r;
  }

 private:
  std::vector<std::size_t> gens_;
  std::vector<std::vector<unsigned>> by_degree_;
  std::vector<std::size_t> index_;
};

}  // namespace ihsig

#endif  // IHSIG_RING_HPP
