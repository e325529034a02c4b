#ifndef IHSIG_COMPLEX_HPP
#define IHSIG_COMPLEX_HPP

#include <ihsig/matrix.hpp>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ihsig {

using GradedDims = std::vector<std::size_t>;

inline long euler_characteristic(const GradedDims& dims) {
  long chi = 0;
  for (std::size_t k = 0; k < dims.size(); ++k)
    chi += (k % 2 == 0 ? 1 : -1) * static_cast<long>(dims[k]);
  return chi;
}

/**
 * Bounded cochain complex C^0 -> C^1 -> ... -> C^top of rational vector
 * spaces. differential(k) is the (dims[k+1] x dims[k]) matrix of d_k; the
 * last differential maps into the zero space. d_{k+1} d_k = 0 is checked.
 */
class CochainComplex {
 public:
  CochainComplex() = default;

  CochainComplex(GradedDims dims, std::vector<Matrix> differentials)
      : dims_(std::move(dims)), differentials_(std::move(differentials)) {
    if (dims_.empty()) throw std::invalid_argument("complex needs at least one degree");
    if (differentials_.size() + 1 == dims_.size()) differentials_.emplace_back(0, dims_.back());
    if (differentials_.size() != dims_.size()) {
      throw std::invalid_argument("complex: expected one differential per degree");
    }
    for (std::size_t k = 0; k < dims_.size(); ++k) {
      const std::size_t target = k + 1 < dims_.size() ? dims_[k + 1] : 0;
      if (differentials_[k].rows() != target || differentials_[k].cols() != dims_[k]) {
        throw std::invalid_argument("complex: differential " + std::to_string(k) +
                                    " has the wrong shape");
      }
    }
    for (std::size_t k = 0; k + 1 < dims_.size(); ++k) {
      if (!(differentials_[k + 1] * differentials_[k]).is_zero()) {
        throw InconsistentData("complex: d o d != 0 at degree " + std::to_string(k));
      }
    }
  }

  /// Q in degree 0 with nothing else.
  static CochainComplex point() { return CochainComplex({1}, {Matrix(0, 1)}); }

  std::size_t top_degree() const { return dims_.size() - 1; }
  const GradedDims& dims() const { return dims_; }
  std::size_t dim(std::size_t k) const { return k < dims_.size() ? dims_[k] : 0; }
  const Matrix& differential(std::size_t k) const { return differentials_.at(k); }

  /// d_{k-1}, or the zero map from the zero space when k == 0.
  Matrix incoming(std::size_t k) const {
    return k == 0 ? Matrix(dims_[0], 0) : differentials_[k - 1];
  }

 private:
  GradedDims dims_;
  std::vector<Matrix> differentials_;
};

struct Cohomology {
  GradedDims dims;
  std::vector<Matrix> representatives;  // cocycles whose classes form a basis
  std::vector<Subspace> cocycles;
  std::vector<Subspace> coboundaries;
};

/// dim H^k = dim ker d_k - rank d_{k-1}, with representatives from quotient_basis.
inline Cohomology cohomology(const CochainComplex& c) {
  Cohomology h;
  for (std::size_t k = 0; k <= c.top_degree(); ++k) {
    Subspace z = kernel(c.differential(k));
    Subspace b = image(c.incoming(k));
    Matrix reps = quotient_basis(z, b);
    h.dims.push_back(reps.cols());
    h.representatives.push_back(std::move(reps));
    h.cocycles.push_back(std::move(z));
    h.coboundaries.push_back(std::move(b));
  }
  return h;
}

/**
 * Total complex of c1 (x) c2 with d(a (x) b) = da (x) b + (-1)^{deg a} a (x) db.
 * The basis of degree n lists blocks (p, n-p) for increasing p, each block in
 * row-major order (index of a) * dim + (index of b).
 */
inline CochainComplex tensor(const CochainComplex& c1, const CochainComplex& c2) {
  const std::size_t top = c1.top_degree() + c2.top_degree();
  std::vector<std::vector<std::size_t>> offset(top + 1);
  GradedDims dims(top + 1, 0);
  for (std::size_t n = 0; n <= top; ++n) {
    offset[n].assign(c1.top_degree() + 1, 0);
    for (std::size_t p = 0; p <= c1.top_degree(); ++p) {
      offset[n][p] = dims[n];
      if (n >= p && n - p <= c2.top_degree()) dims[n] += c1.dim(p) * c2.dim(n - p);
    }
  }
  std::vector<Matrix> diffs;
  for (std::size_t n = 0; n <= top; ++n) {
    Matrix d(n < top ? dims[n + 1] : 0, dims[n]);
    if (n < top) {
      for (std::size_t p = 0; p <= c1.top_degree(); ++p) {
        if (n < p || n - p > c2.top_degree()) continue;
        const std::size_t q = n - p;
        const std::size_t da = c1.dim(p), db = c2.dim(q);
        const Rational sgn = (p % 2 == 0) ? 1 : -1;
        for (std::size_t a = 0; a < da; ++a) {
          for (std::size_t b = 0; b < db; ++b) {
            const std::size_t col = offset[n][p] + a * db + b;
            if (p < c1.top_degree()) {
              const Matrix& d1 = c1.differential(p);
              const std::size_t db2 = c2.dim(q);
              for (std::size_t a2 = 0; a2 < d1.rows(); ++a2) {
                if (d1(a2, a) != 0) d(offset[n + 1][p + 1] + a2 * db2 + b, col) += d1(a2, a);
              }
            }
            if (q < c2.top_degree()) {
              const Matrix& d2 = c2.differential(q);
              const std::size_t db2 = c2.dim(q + 1);
              for (std::size_t b2 = 0; b2 < d2.rows(); ++b2) {
                if (d2(b2, b) != 0) d(offset[n + 1][p] + a * db2 + b2, col) += sgn * d2(b2, b);
              }
            }
          }
        }
      }
    }
    diffs.push_back(std::move(d));
  }
  return CochainComplex(dims, std::move(diffs));
}

/// A degreewise linear map C -> B; component(k) is (dim B^k x dim C^k).
struct ChainMap {
  CochainComplex source;
  CochainComplex target;
  std::vector<Matrix> components;

  const Matrix& component(std::size_t k) const { return components.at(k); }

  void check() const {
    if (components.size() != source.top_degree() + 1) {
      throw std::invalid_argument("chain map needs one component per source degree");
    }
    for (std::size_t k = 0; k <= source.top_degree(); ++k) {
      if (components[k].rows() != target.dim(k) || components[k].cols() != source.dim(k)) {
        throw std::invalid_argument("chain map component " + std::to_string(k) +
                                    " has the wrong shape");
      }
    }
    for (std::size_t k = 0; k <= source.top_degree(); ++k) {
      // f_{k+1} d_C = d_B f_k as maps C^k -> B^{k+1}
      Matrix lhs(target.dim(k + 1), source.dim(k));
      if (k + 1 <= source.top_degree()) lhs = components[k + 1] * source.differential(k);
      Matrix rhs(target.dim(k + 1), source.dim(k));
      if (k <= target.top_degree() && target.dim(k + 1) > 0) {
        rhs = target.differential(k) * components[k];
      }
      if (!(lhs - rhs).is_zero()) {
        throw InconsistentData("map does not commute with differentials at degree " +
                               std::to_string(k));
      }
    }
  }
};

/**
 * Cone of f: C -> B. Degree k is B^{k-1} (+) C^k, and
 *   d(theta, alpha) = (f(alpha) - d_B theta, d_C alpha),
 * so H(cone) sits in the long exact sequence
 *   ... -> H^{k-1}(C) -> H^{k-1}(B) -> H^k(cone) -> H^k(C) -> H^k(B) -> ...
 * For a restriction map this computes relative cohomology.
 */
inline CochainComplex mapping_cone(const ChainMap& f) {
  f.check();
  const auto& c = f.source;
  const auto& b = f.target;
  const std::size_t top = std::max(c.top_degree(), b.top_degree() + 1);
  GradedDims dims(top + 1);
  for (std::size_t k = 0; k <= top; ++k) dims[k] = (k >= 1 ? b.dim(k - 1) : 0) + c.dim(k);
  std::vector<Matrix> diffs;
  for (std::size_t k = 0; k <= top; ++k) {
    const std::size_t bsrc = k >= 1 ? b.dim(k - 1) : 0;
    Matrix d(k < top ? dims[k + 1] : 0, dims[k]);
    if (k < top) {
      const std::size_t btgt = b.dim(k);
      // -d_B on the B^{k-1} block
      if (k >= 1 && k - 1 < b.top_degree()) {
        const Matrix& db = b.differential(k - 1);
        for (std::size_t r = 0; r < db.rows(); ++r)
          for (std::size_t s = 0; s < db.cols(); ++s) d(r, s) = -db(r, s);
      }
      // f on the C^k block, landing in B^k
      if (k <= c.top_degree()) {
        const Matrix& fk = f.component(k);
        for (std::size_t r = 0; r < fk.rows(); ++r)
          for (std::size_t s = 0; s < fk.cols(); ++s) d(r, bsrc + s) = fk(r, s);
        if (k < c.top_degree()) {
          const Matrix& dc = c.differential(k);
          for (std::size_t r = 0; r < dc.rows(); ++r)
            for (std::size_t s = 0; s < dc.cols(); ++s) d(btgt + r, bsrc + s) = dc(r, s);
        }
      }
    }
    diffs.push_back(std::move(d));
  }
  return CochainComplex(dims, std::move(diffs));
}

/// Matrix of the map H^k(C) -> H^k(B) induced by f, in the representative bases.
inline Matrix induced_map(const ChainMap& f, const Cohomology& hc, const Cohomology& hb,
                          std::size_t k) {
  const std::size_t src = k < hc.dims.size() ? hc.dims[k] : 0;
  const std::size_t tgt = k < hb.dims.size() ? hb.dims[k] : 0;
  Matrix out(tgt, src);
  if (src == 0 || tgt == 0) return out;
  Matrix images = f.component(k) * hc.representatives[k];
  for (std::size_t c = 0; c < src; ++c) {
    Vector coords =
        coordinates_mod(hb.representatives[k], hb.coboundaries[k].basis(), images.column(c));
    for (std::size_t r = 0; r < tgt; ++r) out(r, c) = coords[r];
  }
  return out;
}

}  // namespace ihsig

#endif  // IHSIG_COMPLEX_HPP
