#ifndef IHSIG_SPECTRAL_HPP
#define IHSIG_SPECTRAL_HPP

#include <ihsig/ring.hpp>

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ihsig {

/// (i, j) = (base degree, fiber degree).
using Slot = std::pair<std::size_t, std::size_t>;
using SlotPair = std::pair<Slot, Slot>;
using DifferentialSet = std::map<Slot, Matrix>;
using DimGrid = std::vector<std::vector<std::size_t>>;  // [i][j]

inline std::string show(const Slot& s) {
  return std::to_string(s.first) + "," + std::to_string(s.second);
}

/// Kronecker product; row index a * rows(b) + c, column index x * cols(b) + y.
inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t c = 0; c < a.cols(); ++c) {
      if (a(r, c) == 0) continue;
      for (std::size_t r2 = 0; r2 < b.rows(); ++r2)
        for (std::size_t c2 = 0; c2 < b.cols(); ++c2)
          out(r * b.rows() + r2, c * b.cols() + c2) = a(r, c) * b(r2, c2);
    }
  return out;
}

/**
 * Page E_r of a multiplicative spectral sequence in the rectangle
 * 0 <= i <= b, 0 <= j <= f, together with its differential d_r of bidegree
 * (r, 1-r). Besides its own basis the page remembers, per slot, the E_2
 * vectors representing that basis and the E_2 subspace killed so far.
 */
class SpectralPage {
 public:
  SpectralPage(std::size_t b, std::size_t f, DimGrid dims, std::map<SlotPair, Matrix> products,
               std::optional<Vector> volume)
      : b_(b), f_(f), dims_(std::move(dims)), products_(std::move(products)),
        volume_(std::move(volume)) {
    if (dims_.size() != b_ + 1) throw std::invalid_argument("dimension grid needs b+1 columns");
    for (const auto& col : dims_)
      if (col.size() != f_ + 1) throw std::invalid_argument("dimension grid needs f+1 rows");
    for (const auto& [pair, m] : products_) {
      auto s3 = product_slot(pair.first, pair.second);
      if (!s3 || !in_range(pair.first) || !in_range(pair.second)) {
        throw std::invalid_argument("product between " + show(pair.first) + " and " +
                                    show(pair.second) + " leaves the rectangle");
      }
      if (m.rows() != dim(*s3) || m.cols() != dim(pair.first) * dim(pair.second)) {
        throw std::invalid_argument("product matrix for " + show(pair.first) + " x " +
                                    show(pair.second) + " has the wrong shape");
      }
    }
    if (volume_ && volume_->size() != dim({b_, f_})) {
      throw std::invalid_argument("volume must be a vector in the top slot");
    }
    for (auto s : slots()) {
      reps_[s] = Matrix::identity(dim(s));
      killed_[s] = Matrix(dim(s), 0);
    }
    check_structure();
  }

  std::size_t b() const { return b_; }
  std::size_t f() const { return f_; }
  std::size_t r() const { return r_; }
  const DimGrid& dims() const { return dims_; }
  std::size_t dim(Slot s) const { return in_range(s) ? dims_[s.first][s.second] : 0; }
  bool in_range(Slot s) const { return s.first <= b_ && s.second <= f_; }

  std::vector<Slot> slots() const {
    std::vector<Slot> out;
    for (std::size_t i = 0; i <= b_; ++i)
      for (std::size_t j = 0; j <= f_; ++j) out.push_back({i, j});
    return out;
  }

  /// Dimensions summed along total degree i + j.
  GradedDims total_dims() const {
    GradedDims out(b_ + f_ + 1, 0);
    for (auto s : slots()) out[s.first + s.second] += dim(s);
    return out;
  }

  std::optional<Slot> target(Slot s) const { return target(s, r_); }
  std::optional<Slot> target(Slot s, std::size_t r) const {
    if (s.first + r > b_ || s.second + 1 < r) return std::nullopt;
    return Slot{s.first + r, s.second + 1 - r};
  }
  std::optional<Slot> source(Slot s) const {
    if (s.first < r_ || s.second + r_ - 1 > f_) return std::nullopt;
    return Slot{s.first - r_, s.second + r_ - 1};
  }
  std::optional<Slot> product_slot(Slot a, Slot c) const {
    Slot s{a.first + c.first, a.second + c.second};
    if (!in_range(s)) return std::nullopt;
    return s;
  }

  /// Structure constants for a x c, zero when not supplied.
  Matrix product(Slot a, Slot c) const {
    auto it = products_.find({a, c});
    if (it != products_.end()) return it->second;
    auto s = product_slot(a, c);
    return Matrix(s ? dim(*s) : 0, dim(a) * dim(c));
  }
  const std::map<SlotPair, Matrix>& products() const { return products_; }

  Vector multiply(Slot a, const Vector& x, Slot c, const Vector& y) const {
    Matrix xy = kron(Matrix::column_vector(x), Matrix::column_vector(y));
    return (product(a, c) * xy).column(0);
  }

  const std::optional<Vector>& volume() const { return volume_; }

  /// The same page with the opposite orientation class.
  SpectralPage reversed() const {
    SpectralPage out = *this;
    if (out.volume_)
      for (auto& x : *out.volume_) x = -x;
    return out;
  }

  /// d_r on slot s, zero when not supplied.
  Matrix differential(Slot s) const {
    auto it = diffs_.find(s);
    if (it != diffs_.end()) return it->second;
    auto t = target(s);
    return Matrix(t ? dim(*t) : 0, dim(s));
  }
  const DifferentialSet& differentials() const { return diffs_; }

  /// Installs d_r after checking shapes, d o d = 0 and the Leibniz rule.
  void set_differentials(DifferentialSet d) {
    for (const auto& [s, m] : d) {
      auto t = target(s);
      if (!in_range(s) || !t) {
        throw std::invalid_argument("d_" + std::to_string(r_) + " on " + show(s) +
                                    " has no target slot");
      }
      if (m.rows() != dim(*t) || m.cols() != dim(s)) {
        throw std::invalid_argument("d_" + std::to_string(r_) + " on " + show(s) +
                                    " has the wrong shape");
      }
    }
    std::swap(diffs_, d);
    try {
      check_differentials();
    } catch (...) {
      std::swap(diffs_, d);
      throw;
    }
  }

  /// E_2 vectors representing this page's basis, per slot.
  const Matrix& representatives(Slot s) const { return reps_.at(s); }
  /// Basis of the E_2 subspace killed by earlier differentials, per slot.
  const Matrix& killed(Slot s) const { return killed_.at(s); }

  /// Matrix of x, y -> (coefficient of the volume in x y), x in s, y in the
  /// complementary slot.
  Matrix volume_pairing(Slot s) const {
    if (!volume_) throw std::invalid_argument("page E_" + std::to_string(r_) + " has no volume class");
    if (dim({b_, f_}) != 1 || (*volume_)[0] == 0) {
      throw InconsistentData("volume pairing needs a one-dimensional top slot");
    }
    Slot c{b_ - s.first, f_ - s.second};
    Matrix prod = product(s, c);
    Matrix out(dim(s), dim(c));
    for (std::size_t a = 0; a < dim(s); ++a)
      for (std::size_t e = 0; e < dim(c); ++e) out(a, e) = prod(0, a * dim(c) + e) / (*volume_)[0];
    return out;
  }

  /// Graded commutativity, and nondegeneracy of the volume pairing when a
  /// volume class is present.
  void check_structure() const {
    for (const auto& [pair, m] : products_) {
      const auto [a, c] = pair;
      Matrix other = product(c, a);
      const bool odd = ((a.first + a.second) * (c.first + c.second)) % 2 == 1;
      for (std::size_t x = 0; x < dim(a); ++x)
        for (std::size_t y = 0; y < dim(c); ++y)
          for (std::size_t row = 0; row < m.rows(); ++row) {
            const Rational& lhs = m(row, x * dim(c) + y);
            const Rational& rhs = other(row, y * dim(a) + x);
            if (lhs != (odd ? Rational(-rhs) : rhs)) {
              throw InconsistentData("product " + show(a) + " x " + show(c) +
                                     " is not graded commutative");
            }
          }
    }
    if (!volume_) return;
    for (auto s : slots()) {
      Slot c{b_ - s.first, f_ - s.second};
      if (dim(s) != dim(c) || rank(volume_pairing(s)) != dim(s)) {
        throw InconsistentData("volume pairing on E_" + std::to_string(r_) + " is degenerate at " +
                               show(s));
      }
    }
  }

  /// E_{r+1} = ker d_r / im d_r with the induced product and volume.
  SpectralPage turn() const {
    SpectralPage next = *this;
    next.r_ = r_ + 1;
    next.diffs_.clear();
    std::map<Slot, Matrix> newreps, images;
    for (auto s : slots()) {
      Subspace ker = kernel(differential(s));
      auto src = source(s);
      Subspace im = image(src ? differential(*src) : Matrix(dim(s), 0));
      newreps[s] = quotient_basis(ker, im);
      images[s] = im.basis();
      next.dims_[s.first][s.second] = newreps[s].cols();
      next.reps_[s] = reps_.at(s) * newreps[s];
      next.killed_[s] = hstack(killed_.at(s), reps_.at(s) * im.basis());
    }
    next.products_.clear();
    for (const auto& [pair, m] : products_) {
      const auto [a, c] = pair;
      const Slot s3 = *product_slot(a, c);
      if (newreps[a].cols() == 0 || newreps[c].cols() == 0 || newreps[s3].cols() == 0) continue;
      Matrix values = m * kron(newreps[a], newreps[c]);
      next.products_[pair] = coordinates_mod_columns(newreps[s3], images[s3], values);
    }
    if (volume_) {
      const Slot top{b_, f_};
      Vector v = coordinates_mod(newreps[top], images[top], *volume_);
      next.volume_ = is_zero(v) ? std::nullopt : std::optional<Vector>(v);
    }
    next.check_structure();
    return next;
  }

 private:
  void check_differentials() const {
    for (auto s : slots()) {
      auto t = target(s);
      if (!t) continue;
      auto u = target(*t);
      if (!u) continue;
      if (!(differential(*t) * differential(s)).is_zero()) {
        throw InconsistentData("d_" + std::to_string(r_) + " o d_" + std::to_string(r_) +
                               " != 0 starting at " + show(s));
      }
    }
    // d(xy) = dx y + (-1)^{i+j} x dy
    for (auto a : slots()) {
      for (auto c : slots()) {
        auto s3 = product_slot(a, c);
        if (!s3 || dim(a) == 0 || dim(c) == 0) continue;
        auto t3 = target(*s3);
        if (!t3) continue;
        Matrix lhs = differential(*s3) * product(a, c);
        Matrix rhs(dim(*t3), dim(a) * dim(c));
        if (auto ta = target(a)) {
          rhs = rhs + product(*ta, c) * kron(differential(a), Matrix::identity(dim(c)));
        }
        if (auto tc = target(c)) {
          const Rational sgn = ((a.first + a.second) % 2 == 0) ? 1 : -1;
          rhs = rhs + sgn * (product(a, *tc) * kron(Matrix::identity(dim(a)), differential(c)));
        }
        if (!(lhs - rhs).is_zero()) {
          throw InconsistentData("d_" + std::to_string(r_) + " is not a derivation on " + show(a) +
                                 " x " + show(c));
        }
      }
    }
  }

  std::size_t b_, f_;
  std::size_t r_ = 2;
  DimGrid dims_;
  std::map<SlotPair, Matrix> products_;
  std::optional<Vector> volume_;
  DifferentialSet diffs_;
  std::map<Slot, Matrix> reps_;
  std::map<Slot, Matrix> killed_;
};

/**
 * E_2 = H(B) (x) H(F) with zero differentials, product
 * (a (x) x)(c (x) y) = (-1)^{deg x deg c} ac (x) xy and volume top (x) top.
 * Basis of slot (i, j): index(a) * dim H^j(F) + index(x).
 */
inline SpectralPage product_bundle_page(const GradedRing& base, const GradedRing& fiber) {
  base.check();
  fiber.check();
  const std::size_t b = base.top(), f = fiber.top();
  DimGrid dims(b + 1, std::vector<std::size_t>(f + 1));
  for (std::size_t i = 0; i <= b; ++i)
    for (std::size_t j = 0; j <= f; ++j) dims[i][j] = base.dims[i] * fiber.dims[j];
  std::map<SlotPair, Matrix> products;
  for (std::size_t i1 = 0; i1 <= b; ++i1)
    for (std::size_t j1 = 0; j1 <= f; ++j1)
      for (std::size_t i2 = 0; i1 + i2 <= b; ++i2)
        for (std::size_t j2 = 0; j1 + j2 <= f; ++j2) {
          if (dims[i1][j1] == 0 || dims[i2][j2] == 0 || dims[i1 + i2][j1 + j2] == 0) continue;
          Matrix pb = base.product(i1, i2), pf = fiber.product(j1, j2);
          if (pb.is_zero() || pf.is_zero()) continue;
          // reorder (a, x, c, y) -> (a, c, x, y) on the column side
          const std::size_t na = base.dims[i1], nx = fiber.dims[j1];
          const std::size_t nc = base.dims[i2], ny = fiber.dims[j2];
          Matrix both = kron(pb, pf);
          Matrix m(both.rows(), dims[i1][j1] * dims[i2][j2]);
          const Rational sgn = (j1 * i2 % 2 == 0) ? 1 : -1;
          for (std::size_t a = 0; a < na; ++a)
            for (std::size_t x = 0; x < nx; ++x)
              for (std::size_t c = 0; c < nc; ++c)
                for (std::size_t y = 0; y < ny; ++y) {
                  const std::size_t col = (a * nx + x) * (nc * ny) + (c * ny + y);
                  const std::size_t src = (a * nc + c) * (nx * ny) + (x * ny + y);
                  for (std::size_t row = 0; row < both.rows(); ++row)
                    m(row, col) = sgn * both(row, src);
                }
          products[{{i1, j1}, {i2, j2}}] = std::move(m);
        }
  Vector volume;
  for (const auto& u : base.volume)
    for (const auto& v : fiber.volume) volume.push_back(u * v);
  return SpectralPage(b, f, std::move(dims), std::move(products), volume);
}

/// Supplies d_r for a page; slots left out carry the zero map.
using DifferentialHook = std::function<DifferentialSet(const SpectralPage&)>;

/// Hook reading fixed matrices per page index, given in the page's own basis.
inline DifferentialHook schedule_hook(std::map<std::size_t, DifferentialSet> schedule) {
  return [schedule = std::move(schedule)](const SpectralPage& page) {
    auto it = schedule.find(page.r());
    return it == schedule.end() ? DifferentialSet{} : it->second;
  };
}

/// Every page from E_2 to E_infinity, each with the differential used on it.
class LimitRecord {
 public:
  explicit LimitRecord(std::vector<SpectralPage> pages) : pages_(std::move(pages)) {}

  std::size_t b() const { return pages_.front().b(); }
  std::size_t f() const { return pages_.front().f(); }
  /// Index of the stable page.
  std::size_t limit_index() const { return pages_.back().r(); }

  /// E_s, or the limit page for s past stabilization.
  const SpectralPage& page(std::size_t s) const {
    if (s < 2) throw std::invalid_argument("pages start at E_2");
    return s - 2 < pages_.size() ? pages_[s - 2] : pages_.back();
  }
  const SpectralPage& limit() const { return pages_.back(); }
  const std::vector<SpectralPage>& pages() const { return pages_; }

  Matrix differential(std::size_t s, Slot slot) const { return page(s).differential(slot); }
  std::size_t rank(std::size_t s, Slot slot) const { return ihsig::rank(differential(s, slot)); }
  /// Basis of Im(d_s) on slot, inside the target slot of E_s.
  Matrix image(std::size_t s, Slot slot) const { return ihsig::image(differential(s, slot)).basis(); }
  /// A complement of ker(d_s) in the slot of E_s (row-reduced rows of d_s).
  Matrix preimage(std::size_t s, Slot slot) const { return row_space_complement(differential(s, slot)); }

  LimitRecord reversed() const {
    std::vector<SpectralPage> out;
    for (const auto& p : pages_) out.push_back(p.reversed());
    return LimitRecord(std::move(out));
  }

  std::size_t einf_dim(Slot slot) const { return limit().dim(slot); }
  GradedDims einf_total_dims() const { return limit().total_dims(); }

 private:
  std::vector<SpectralPage> pages_;
};

/// Runs pages E_2 .. E_{max(b+1,f+1)} with differentials from the hook; the
/// following page is E_infinity.
inline LimitRecord run_to_limit(SpectralPage page, const DifferentialHook& hook) {
  const std::size_t last = std::max(page.b() + 1, page.f() + 1);
  std::vector<SpectralPage> pages;
  while (page.r() <= last) {
    if (hook) page.set_differentials(hook(page));
    pages.push_back(page);
    page = page.turn();
  }
  pages.push_back(page);
  return LimitRecord(std::move(pages));
}

inline LimitRecord run_to_limit(SpectralPage page) { return run_to_limit(std::move(page), {}); }

}  // namespace ihsig

#endif  // IHSIG_SPECTRAL_HPP
