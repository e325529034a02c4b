#ifndef IHSIG_MODEL_HPP
#define IHSIG_MODEL_HPP

#include <ihsig/spectral.hpp>

#include <memory>
#include <random>

namespace ihsig {

/// One term c * e_S (x) x_T of a transgression, S and T as generator bitmasks.
struct MonomialTerm {
  Rational coefficient;
  unsigned base = 0;
  unsigned fiber = 0;
};

/// D x_k for fiber generator k.
struct Transgression {
  std::size_t generator = 0;
  std::vector<MonomialTerm> terms;
};

/**
 * A small differential graded algebra model of a fibration over a product of
 * spheres with fiber a product of spheres: A = H(B) (x) H(F) with a
 * differential D that kills H(B), sends fiber generators to elements of
 * strictly higher base degree, and obeys the Leibniz rule. Filtering by base
 * degree gives a multiplicative spectral sequence with E_2 = A; the model
 * computes every d_r from (A, D). An optional invertible change of basis per
 * slot hides the monomial basis from the page.
 */
class FibrationModel {
 public:
  FibrationModel(SphereProductRing base, SphereProductRing fiber,
                 std::vector<Transgression> transgressions)
      : base_(std::move(base)), fiber_(std::move(fiber)),
        page_(product_bundle_page(base_.ring(), fiber_.ring())) {
    const auto& fdeg = fiber_.generator_degrees();
    std::vector<std::map<Slot, Vector>> values(fdeg.size());
    for (const auto& t : transgressions) {
      if (t.generator >= fdeg.size()) throw std::invalid_argument("transgression of unknown generator");
      for (const auto& term : t.terms) {
        if (term.base > base_.full_mask() || term.fiber > fiber_.full_mask()) {
          throw std::invalid_argument("transgression term uses an unknown generator");
        }
        if (term.fiber >> t.generator) {
          throw std::invalid_argument("transgression of a fiber generator may only involve earlier ones");
        }
        const std::size_t bd = base_.degree(term.base), fd = fiber_.degree(term.fiber);
        if (bd < 2 || bd + fd != fdeg[t.generator] + 1) {
          throw std::invalid_argument("transgression term has the wrong bidegree");
        }
        const Slot s{bd, fd};
        auto& v = values[t.generator][s];
        if (v.empty()) v.assign(page_.dim(s), 0);
        v[basis_index(term.base, term.fiber)] += term.coefficient;
      }
    }
    transgressions_ = std::move(values);
    for (auto s : page_.slots()) {
      basis_change_[s] = Matrix::identity(page_.dim(s));
      basis_change_inv_[s] = Matrix::identity(page_.dim(s));
    }
    build_differential();
    check_differential();
  }

  const SphereProductRing& base() const { return base_; }
  const SphereProductRing& fiber() const { return fiber_; }
  std::size_t b() const { return page_.b(); }
  std::size_t f() const { return page_.f(); }

  /// The E_2 page in the (possibly changed) basis.
  const SpectralPage& e2() const { return page_; }

  /// Replaces the basis of each slot by the columns of changes[slot]
  /// (expressed in the current basis).
  void change_basis(const std::map<Slot, Matrix>& changes) {
    std::map<Slot, Matrix> inv;
    for (auto s : page_.slots()) {
      const Matrix& p = changes.at(s);
      if (p.rows() != page_.dim(s) || !p.is_square()) throw std::invalid_argument("basis change shape");
      inv[s] = inverse(p);
    }
    std::map<SlotPair, Matrix> products;
    for (const auto& [pair, m] : page_.products()) {
      const Slot s3 = *page_.product_slot(pair.first, pair.second);
      products[pair] = inv[s3] * m * kron(changes.at(pair.first), changes.at(pair.second));
    }
    std::optional<Vector> volume;
    if (page_.volume()) volume = (inv[{b(), f()}] * Matrix::column_vector(*page_.volume())).column(0);
    page_ = SpectralPage(b(), f(), page_.dims(), std::move(products), volume);
    for (auto s : page_.slots()) {
      basis_change_[s] = basis_change_[s] * changes.at(s);
      basis_change_inv_[s] = inv[s] * basis_change_inv_[s];
    }
  }

  /// d_r for a page of this model's spectral sequence.
  DifferentialSet differentials(const SpectralPage& page) const {
    DifferentialSet out;
    const std::size_t r = page.r();
    for (auto s : page.slots()) {
      auto t = page.target(s);
      if (!t || page.dim(s) == 0 || page.dim(*t) == 0) continue;
      Matrix reps = page.representatives(s);
      Matrix d(page.dim(*t), page.dim(s));
      for (std::size_t c = 0; c < reps.cols(); ++c) {
        Vector w = leading_differential(s, basis_change_.at(s) * reps.column(c), r);
        Vector local = (basis_change_inv_.at(*t) * Matrix::column_vector(w)).column(0);
        Vector coords = coordinates_mod(page.representatives(*t), page.killed(*t), local);
        for (std::size_t row = 0; row < coords.size(); ++row) d(row, c) = coords[row];
      }
      if (!d.is_zero()) out[s] = std::move(d);
    }
    return out;
  }

  DifferentialHook hook() const {
    return [this](const SpectralPage& page) { return differentials(page); };
  }

  LimitRecord run() const { return run_to_limit(page_, hook()); }

  /// Cohomology of (A, D) by total degree, for cross-checks against E_infinity.
  GradedDims total_cohomology() const {
    const std::size_t top = b() + f();
    std::vector<Matrix> diffs;
    GradedDims dims;
    for (std::size_t t = 0; t <= top; ++t) dims.push_back(total_dim(t));
    for (std::size_t t = 0; t <= top; ++t) {
      Matrix d(t < top ? dims[t + 1] : 0, dims[t]);
      if (t < top) {
        for (auto s : slots_of_degree(t)) {
          for (std::size_t a = 0; a < page_.dim(s); ++a) {
            for (const auto& [s2, v] : d_basis_.at(s)[a]) {
              for (std::size_t row = 0; row < v.size(); ++row)
                d(offset(t + 1, s2) + row, offset(t, s) + a) = v[row];
            }
          }
        }
      }
      diffs.push_back(std::move(d));
    }
    return cohomology(CochainComplex(dims, std::move(diffs))).dims;
  }

 private:
  using TotalVector = std::map<Slot, Vector>;  // monomial coordinates per slot

  std::size_t basis_index(unsigned base_mask, unsigned fiber_mask) const {
    const std::size_t j = fiber_.degree(fiber_mask);
    return base_.index(base_mask) * fiber_.monomials(j).size() + fiber_.index(fiber_mask);
  }

  std::vector<Slot> slots_of_degree(std::size_t t) const {
    std::vector<Slot> out;
    for (std::size_t i = 0; i <= std::min(t, b()); ++i)
      if (t - i <= f()) out.push_back({i, t - i});
    return out;
  }
  std::size_t total_dim(std::size_t t) const {
    std::size_t n = 0;
    for (auto s : slots_of_degree(t)) n += page_.dim(s);
    return n;
  }
  std::size_t offset(std::size_t t, Slot s) const {
    std::size_t n = 0;
    for (auto x : slots_of_degree(t)) {
      if (x == s) return n;
      n += page_.dim(x);
    }
    throw std::logic_error("slot not in total degree");
  }

  // Products and sums of total vectors in monomial coordinates, using the
  // original monomial ring (kept in mono_).
  TotalVector multiply(const TotalVector& x, const TotalVector& y) const {
    TotalVector out;
    for (const auto& [s1, v1] : x)
      for (const auto& [s2, v2] : y) {
        auto s3 = mono_->product_slot(s1, s2);
        if (!s3) continue;
        Vector p = mono_->multiply(s1, v1, s2, v2);
        add_into(out, *s3, p, 1);
      }
    return out;
  }
  void add_into(TotalVector& acc, Slot s, const Vector& v, const Rational& scale) const {
    if (is_zero(v)) return;
    auto& slot = acc[s];
    if (slot.empty()) slot.assign(v.size(), 0);
    for (std::size_t i = 0; i < v.size(); ++i) slot[i] += scale * v[i];
  }
  TotalVector basis_vector(Slot s, std::size_t a) const {
    Vector v(page_.dim(s), 0);
    v[a] = 1;
    return {{s, v}};
  }
  TotalVector apply_d(const TotalVector& x) const {
    TotalVector out;
    for (const auto& [s, v] : x)
      for (std::size_t a = 0; a < v.size(); ++a)
        if (v[a] != 0)
          for (const auto& [s2, w] : d_basis_.at(s)[a]) add_into(out, s2, w, v[a]);
    return out;
  }
  static bool is_zero_total(const TotalVector& x) {
    for (const auto& [s, v] : x)
      if (!is_zero(v)) return false;
    return true;
  }

  // D on each monomial e_S x_T via D(u x_t) = Du x_t + (-1)^{|u|} u D x_t,
  // t the last fiber generator in T.
  void build_differential() {
    mono_ = std::make_shared<SpectralPage>(page_);
    for (auto s : page_.slots()) d_basis_[s].assign(page_.dim(s), {});
    const auto& fdeg = fiber_.generator_degrees();
    for (unsigned fm = 0; fm <= fiber_.full_mask(); ++fm) {
      if (fm == 0) continue;
      std::size_t last = 0;
      for (std::size_t k = 0; k < fdeg.size(); ++k)
        if (fm & (1u << k)) last = k;
      const unsigned rest = fm & ~(1u << last);
      const TotalVector gen = basis_vector({0, fdeg[last]}, basis_index(0, 1u << last));
      TotalVector dgen;
      for (const auto& [s, v] : transgressions_[last]) add_into(dgen, s, v, 1);
      for (unsigned bm = 0; bm <= base_.full_mask(); ++bm) {
        const Slot su{base_.degree(bm), fiber_.degree(rest)};
        const TotalVector u = basis_vector(su, basis_index(bm, rest));
        TotalVector du = apply_d(u);  // rest < fm, already built
        TotalVector value = multiply(du, gen);
        const Rational sgn = ((su.first + su.second) % 2 == 0) ? 1 : -1;
        TotalVector tail = multiply(u, dgen);
        for (const auto& [s, v] : tail) add_into(value, s, v, sgn);
        const Slot sx{base_.degree(bm), fiber_.degree(fm)};
        d_basis_[sx][basis_index(bm, fm)] = value;
      }
    }
  }

  void check_differential() const {
    for (auto s : page_.slots()) {
      for (std::size_t a = 0; a < page_.dim(s); ++a) {
        if (!is_zero_total(apply_d(apply_d(basis_vector(s, a))))) {
          throw InconsistentData("model differential does not square to zero");
        }
      }
    }
    for (auto s1 : page_.slots())
      for (std::size_t a = 0; a < page_.dim(s1); ++a)
        for (auto s2 : page_.slots())
          for (std::size_t c = 0; c < page_.dim(s2); ++c) {
            TotalVector x = basis_vector(s1, a), y = basis_vector(s2, c);
            TotalVector lhs = apply_d(multiply(x, y));
            TotalVector rhs = multiply(apply_d(x), y);
            const Rational sgn = ((s1.first + s1.second) % 2 == 0) ? 1 : -1;
            for (const auto& [s, v] : multiply(x, apply_d(y))) add_into(rhs, s, v, sgn);
            for (const auto& [s, v] : lhs) add_into(rhs, s, v, -1);
            if (!is_zero_total(rhs)) throw InconsistentData("model differential is not a derivation");
          }
  }

  // Leading term of D(x) for a lift x of v in F^p with D x in F^{p+r}.
  Vector leading_differential(Slot s, const Vector& v, std::size_t r) const {
    const auto [p, q] = s;
    std::vector<Slot> unknowns, conditions;
    for (std::size_t m = 1; m + 1 < r; ++m)
      if (p + m <= b() && q >= m) unknowns.push_back({p + m, q - m});
    for (std::size_t m = 1; m < r; ++m)
      if (p + m <= b() && q + 1 >= m) conditions.push_back({p + m, q + 1 - m});
    std::size_t ncols = 0, nrows = 0;
    for (auto u : unknowns) ncols += page_.dim(u);
    for (auto c : conditions) nrows += page_.dim(c);
    auto row_of = [&](Slot c) {
      std::size_t off = 0;
      for (auto x : conditions) {
        if (x == c) return off;
        off += page_.dim(x);
      }
      return nrows;
    };
    Matrix m(nrows, ncols);
    std::size_t col = 0;
    for (auto u : unknowns) {
      for (std::size_t a = 0; a < page_.dim(u); ++a, ++col)
        for (const auto& [s2, w] : d_basis_.at(u)[a]) {
          const std::size_t off = row_of(s2);
          if (off == nrows) continue;
          for (std::size_t i = 0; i < w.size(); ++i) m(off + i, col) = w[i];
        }
    }
    TotalVector dv = apply_d({{s, v}});
    Vector rhs(nrows, 0);
    for (const auto& [s2, w] : dv) {
      const std::size_t off = row_of(s2);
      if (off == nrows) continue;
      for (std::size_t i = 0; i < w.size(); ++i) rhs[off + i] = -w[i];
    }
    auto y = solve(m, rhs);
    if (!y) throw InconsistentData("page element does not lift to the model");
    TotalVector x{{s, v}};
    col = 0;
    for (auto u : unknowns) {
      Vector part(page_.dim(u));
      for (std::size_t a = 0; a < part.size(); ++a) part[a] = (*y)[col++];
      add_into(x, u, part, 1);
    }
    TotalVector dx = apply_d(x);
    const Slot t{p + r, q + 1 - r};
    auto it = dx.find(t);
    return it == dx.end() ? Vector(page_.dim(t), 0) : it->second;
  }

  SphereProductRing base_, fiber_;
  SpectralPage page_;
  std::shared_ptr<const SpectralPage> mono_;
  std::vector<std::map<Slot, Vector>> transgressions_;
  std::map<Slot, std::vector<TotalVector>> d_basis_;
  std::map<Slot, Matrix> basis_change_, basis_change_inv_;
};

/// Sphere bundle over S^2 with fiber S^1 and Euler number e: D x = e u.
inline FibrationModel circle_bundle_over_s2(const Rational& e) {
  return FibrationModel(SphereProductRing({2}), SphereProductRing({1}),
                        {Transgression{0, {{e, 1u, 0u}}}});
}

/// Random invertible change of basis on every slot of the model.
inline void randomize_basis(FibrationModel& model, std::mt19937_64& rng) {
  std::map<Slot, Matrix> changes;
  std::uniform_int_distribution<int> entry(-2, 2);
  std::bernoulli_distribution flip(0.5);
  for (auto s : model.e2().slots()) {
    const std::size_t n = model.e2().dim(s);
    Matrix lower = Matrix::identity(n), upper = Matrix::identity(n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < r; ++c) lower(r, c) = entry(rng);
      for (std::size_t c = r + 1; c < n; ++c) upper(r, c) = entry(rng);
      if (flip(rng)) upper(r, r) = -1;
    }
    changes[s] = lower * upper;
  }
  model.change_basis(changes);
}

struct RandomModelOptions {
  std::size_t max_total_base = 6;
  std::size_t max_total_fiber = 6;
  std::size_t max_generators = 3;
  std::size_t max_degree = 4;
  /// Require b + f odd, so the total space of the end has even dimension b+f+1.
  bool even_total_dimension = true;
  bool change_basis = true;
  /// Exact dimensions to draw, or 0 for any.
  std::size_t base_total = 0;
  std::size_t fiber_total = 0;
};

/**
 * A random valid model: spheres for base and fiber, random transgressions
 * of the odd fiber generators with coefficients in [-2, 2], rejected and
 * redrawn until D^2 = 0.
 */
inline FibrationModel random_model(std::mt19937_64& rng, const RandomModelOptions& opt = {}) {
  std::uniform_int_distribution<std::size_t> count(1, opt.max_generators);
  std::uniform_int_distribution<std::size_t> degree(1, opt.max_degree);
  std::uniform_int_distribution<int> coeff(-2, 2);
  std::bernoulli_distribution use(0.75);
  auto draw_spheres = [&](std::size_t max_total, std::size_t exact) {
    for (;;) {
      std::vector<std::size_t> dims(count(rng));
      std::size_t total = 0;
      for (auto& d : dims) total += (d = degree(rng));
      if (exact ? total == exact : total <= max_total) return dims;
    }
  };
  for (int attempt = 0; attempt < 10000; ++attempt) {
    auto bd = draw_spheres(opt.max_total_base, opt.base_total);
    auto fd = draw_spheres(opt.max_total_fiber, opt.fiber_total);
    std::size_t b = 0, f = 0;
    for (auto d : bd) b += d;
    for (auto d : fd) f += d;
    if (opt.even_total_dimension && (b + f) % 2 == 0) continue;
    SphereProductRing base(bd), fiber(fd);
    std::vector<Transgression> ts;
    for (std::size_t k = 0; k < fd.size(); ++k) {
      if (fd[k] % 2 == 0) continue;  // an even generator cannot transgress when g^2 = 0
      Transgression t{k, {}};
      for (unsigned bm = 1; bm <= base.full_mask(); ++bm) {
        const std::size_t bdeg = base.degree(bm);
        if (bdeg < 2) continue;
        for (unsigned fm = 0; fm < (1u << k); ++fm) {
          if (bdeg + fiber.degree(fm) != fd[k] + 1 || !use(rng)) continue;
          const int c = coeff(rng);
          if (c != 0) t.terms.push_back({c, bm, fm});
        }
      }
      if (!t.terms.empty()) ts.push_back(std::move(t));
    }
    try {
      FibrationModel model(std::move(base), std::move(fiber), std::move(ts));
      if (opt.change_basis) randomize_basis(model, rng);
      return model;
    } catch (const InconsistentData&) {
      continue;
    }
  }
  throw std::runtime_error("could not draw a valid random model");
}

}  // namespace ihsig

#endif  // IHSIG_MODEL_HPP
