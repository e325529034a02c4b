#ifndef IHSIG_CONE_END_HPP
#define IHSIG_CONE_END_HPP

#include <ihsig/perversity.hpp>
#include <ihsig/spectral.hpp>

#include <sstream>

namespace ihsig {

/// Sign applied to the end's own signature when it is glued onto the interior.
inline constexpr int kGlueOrientation = -1;

/**
 * The three truncated spectral sequences of the coned-off end:
 *   abs_q  absolute, perversity q = upper middle - k
 *   rel_q  relative to the boundary, perversity q
 *   rel_p  relative to the boundary, perversity p = lower middle + k
 */
enum class Variant { abs_q, rel_q, rel_p };

inline std::string to_string(Variant v) {
  switch (v) {
    case Variant::abs_q: return "abs_q";
    case Variant::rel_q: return "rel_q";
    case Variant::rel_p: return "rel_p";
  }
  return "?";
}

struct TruncationSpec {
  std::size_t b = 0;
  std::size_t f = 0;
  std::size_t k = 0;
  Variant variant = Variant::abs_q;

  /// Highest fiber row kept by abs_q.
  long abs_top() const {
    return (f % 2 == 1) ? static_cast<long>((f - 1) / 2 + k) : static_cast<long>(f / 2 + k);
  }
  /// abs_top for the dual perversity; abs_top() + dual_top() = f - 1.
  long dual_top() const { return static_cast<long>(f) - 1 - abs_top(); }

  /// Lowest fiber row of Y that survives into a relative table.
  long first_kept_row() const {
    const long l = (variant == Variant::rel_q ? abs_top() : dual_top()) + 1;
    return std::max(l, 0L);
  }

  bool relative() const { return variant != Variant::abs_q; }
  std::size_t table_rows() const { return relative() ? f + 2 : f + 1; }

  /// Whether slot (i, y) of Y survives the truncation.
  bool keeps(Slot y) const {
    if (y.first > b || y.second > f) return false;
    if (!relative()) return static_cast<long>(y.second) <= abs_top();
    return static_cast<long>(y.second) >= first_kept_row();
  }

  /// The table slot carrying Y slot y (relative tables shift up one row).
  Slot table_slot(Slot y) const { return relative() ? Slot{y.first, y.second + 1} : y; }

  /// The Y slot feeding table slot t, if any.
  std::optional<Slot> y_slot(Slot t) const {
    if (!relative()) return keeps(t) ? std::optional<Slot>(t) : std::nullopt;
    if (t.second == 0) return std::nullopt;
    Slot y{t.first, t.second - 1};
    return keeps(y) ? std::optional<Slot>(y) : std::nullopt;
  }

  void check(const LimitRecord& rec) const {
    if (rec.b() != b || rec.f() != f) {
      throw std::invalid_argument("truncation spec (b, f) = (" + std::to_string(b) + ", " +
                                  std::to_string(f) + ") does not match the spectral data");
    }
  }
};

struct Summand {
  enum class Kind { einf, image, preimage };
  Kind kind = Kind::einf;
  std::size_t page = 0;  // s of d_s; 0 for E_infinity
  Slot slot;             // Y slot: the E_infinity slot, or the source of d_s
  std::size_t dim = 0;
  Matrix basis;          // E_infinity basis, Im(d_s) in the target of E_s, or a complement of ker d_s

  std::string label() const {
    const std::string ij = std::to_string(slot.first) + "," + std::to_string(slot.second);
    switch (kind) {
      case Kind::einf: return "E_inf^{" + ij + "}(Y)";
      case Kind::image: return "Im(d_" + std::to_string(page) + "^{" + ij + "})";
      case Kind::preimage: return "Im(d_" + std::to_string(page) + "^{" + ij + "})*";
    }
    return "?";
  }
};

struct EndEntry {
  std::vector<Summand> summands;

  std::size_t dim() const {
    std::size_t d = 0;
    for (const auto& s : summands) d += s.dim;
    return d;
  }
  std::string label() const {
    std::string out;
    for (const auto& s : summands) out += (out.empty() ? "" : " + ") + s.label();
    return out.empty() ? "0" : out;
  }
};

/// Dimensions of a truncated table, [i][j] in table coordinates.
struct EndDims {
  TruncationSpec spec;
  DimGrid dims;

  std::size_t dim(Slot t) const {
    return t.first < dims.size() && t.second < dims[t.first].size() ? dims[t.first][t.second] : 0;
  }
  GradedDims total_dims() const {
    GradedDims out(spec.b + spec.table_rows(), 0);
    for (std::size_t i = 0; i < dims.size(); ++i)
      for (std::size_t j = 0; j < dims[i].size(); ++j) out[i + j] += dims[i][j];
    return out;
  }
  friend bool operator==(const EndDims& a, const EndDims& b) { return a.dims == b.dims; }
};

struct EndTable {
  TruncationSpec spec;
  std::map<Slot, EndEntry> entries;  // table coordinates; missing entries are zero

  const EndEntry& entry(Slot t) const {
    static const EndEntry empty;
    auto it = entries.find(t);
    return it == entries.end() ? empty : it->second;
  }
  EndDims dims() const {
    EndDims d{spec, DimGrid(spec.b + 1, std::vector<std::size_t>(spec.table_rows(), 0))};
    for (const auto& [t, e] : entries) d.dims[t.first][t.second] = e.dim();
    return d;
  }
};

/**
 * Literal run of the truncated spectral sequence, tracked inside E_2(Y).
 * On page s a kept slot has cycles Z_s(Y) plus extra permanent cycles and
 * boundaries; d_s acts as in Y when its target is kept and as zero otherwise.
 */
inline EndDims truncated_run(const LimitRecord& rec, const TruncationSpec& spec) {
  spec.check(rec);
  const SpectralPage& e2 = rec.page(2);
  std::map<Slot, Matrix> extra, bounds;
  for (auto y : e2.slots()) {
    if (!spec.keeps(y)) continue;
    extra[y] = Matrix(e2.dim(y), 0);
    bounds[y] = Matrix(e2.dim(y), 0);
  }
  for (std::size_t s = 2; s < rec.limit_index(); ++s) {
    const SpectralPage& page = rec.page(s);
    const SpectralPage& next = rec.page(s + 1);
    std::map<Slot, Matrix> new_extra = extra, new_bounds = bounds;
    for (auto& [y, ext] : extra) {
      // basis of the truncated cycles: [reps | killed | extra]
      Matrix basis = hstack(hstack(page.representatives(y), page.killed(y)), ext);
      auto t = page.target(y);
      Matrix action(t && spec.keeps(*t) ? e2.dim(*t) : 0, basis.cols());
      if (t && spec.keeps(*t)) {
        Matrix image = page.representatives(*t) * page.differential(y);
        for (std::size_t r = 0; r < image.rows(); ++r)
          for (std::size_t c = 0; c < image.cols(); ++c) action(r, c) = image(r, c);
        new_bounds[*t] = hstack(new_bounds[*t], image);
      }
      Subspace cycles = Subspace::span(basis * kernel(action).basis());
      Subspace inherited = Subspace::span(hstack(next.representatives(y), next.killed(y)));
      new_extra[y] = quotient_basis(cycles, inherited);
    }
    extra = std::move(new_extra);
    bounds = std::move(new_bounds);
  }
  EndDims out{spec, DimGrid(spec.b + 1, std::vector<std::size_t>(spec.table_rows(), 0))};
  const SpectralPage& last = rec.limit();
  for (const auto& [y, ext] : extra) {
    Subspace cycles = Subspace::span(hstack(hstack(last.representatives(y), last.killed(y)), ext));
    Subspace boundaries = Subspace::span(bounds[y]);
    const Slot t = spec.table_slot(y);
    out.dims[t.first][t.second] = quotient_basis(cycles, boundaries).cols();
  }
  return out;
}

/**
 * Closed-form E_infinity of a truncated sequence, with labeled summands:
 *   abs_q  (i,j):   E_inf^{i,j}(Y) + sum of Im(d_s^{i-s,j+s-1}) whose source row was cut
 *   rel    (i,j):   E_inf^{i,j-1}(Y) + sum of Im(d_s^{i,j-1})* whose target row was cut
 */
inline EndTable einf_closed_form(const LimitRecord& rec, const TruncationSpec& spec) {
  spec.check(rec);
  EndTable table{spec, {}};
  const SpectralPage& lim = rec.limit();
  const std::size_t last = rec.limit_index();
  for (auto y : lim.slots()) {
    if (!spec.keeps(y)) continue;
    EndEntry entry;
    entry.summands.push_back({Summand::Kind::einf, 0, y, lim.dim(y), Matrix::identity(lim.dim(y))});
    for (std::size_t s = 2; s < last; ++s) {
      const SpectralPage& page = rec.page(s);
      if (!spec.relative()) {
        if (y.first < s || y.second + s - 1 > spec.f) continue;
        const Slot src{y.first - s, y.second + s - 1};
        if (spec.keeps(src)) continue;
        Matrix im = rec.image(s, src);
        entry.summands.push_back({Summand::Kind::image, s, src, im.cols(), im});
      } else {
        auto t = page.target(y);
        if (!t || spec.keeps(*t)) continue;
        Matrix pre = rec.preimage(s, y);
        entry.summands.push_back({Summand::Kind::preimage, s, y, pre.cols(), pre});
      }
    }
    table.entries[spec.table_slot(y)] = std::move(entry);
  }
  return table;
}

inline EndDims closed_form_dims(const LimitRecord& rec, const TruncationSpec& spec) {
  return einf_closed_form(rec, spec).dims();
}

/// Middle total degree of Y, (b + f - 1) / 2; requires b + f odd.
inline std::size_t middle_degree(std::size_t b, std::size_t f) {
  if ((b + f) % 2 == 0) {
    throw std::invalid_argument("the end has odd dimension " + std::to_string(b + f + 1) +
                                "; signatures need b + f odd");
  }
  return (b + f - 1) / 2;
}

/**
 * Image of the relative (perversity p) middle cohomology in the absolute
 * (perversity q) one, as labeled Im(d_t^{i,j-1}) summands at relative table
 * slots (i, j) with i + j = n/2. Each summand pairs with its complement
 * Im(d_t^{i,j-1})* (stored in basis()).
 */
inline EndTable middle_image(const LimitRecord& rec, std::size_t k) {
  const std::size_t b = rec.b(), f = rec.f();
  const std::size_t m = middle_degree(b, f);
  TruncationSpec q{b, f, k, Variant::abs_q};
  TruncationSpec p{b, f, k, Variant::rel_p};
  EndTable table{p, {}};
  for (std::size_t i = 0; i <= std::min(b, m); ++i) {
    const std::size_t y = m - i;
    if (y > f) continue;
    const Slot src{i, y};
    // the source row must be cut from the absolute table and kept in the relative one
    if (static_cast<long>(y) <= q.abs_top() || !p.keeps(src)) continue;
    EndEntry entry;
    for (std::size_t t = 2; t < rec.limit_index(); ++t) {
      auto tgt = rec.page(t).target(src);
      if (!tgt || p.keeps(*tgt)) continue;
      Summand sm{Summand::Kind::image, t, src, rec.rank(t, src), rec.preimage(t, src)};
      entry.summands.push_back(std::move(sm));
    }
    if (!entry.summands.empty()) table.entries[p.table_slot(src)] = std::move(entry);
  }
  return table;
}

/// First page whose tau enters the end signature.
inline std::size_t first_contributing_page(std::size_t f, std::size_t k) {
  return (f % 2 == 1) ? 2 + 2 * k : 3 + 2 * k;
}

/// Pages s with s = f + 1 mod 2 can carry a nonzero tau_s.
inline bool contributing_parity(std::size_t f, std::size_t s) { return (s + f) % 2 == 1; }

struct TauBlock {
  std::size_t page;
  std::vector<Slot> slots;   // middle-degree source slots, in basis order
  std::vector<std::size_t> offsets;
  Matrix form;               // F(w_a, w_b) = coefficient of the volume in w_a . d_s w_b
  bool symmetric_expected;
  Matrix symmetrized;
  Inertia inertia;
  long value() const { return inertia.signature(); }
};

/// Volume coefficient of x . y for x in slot a and y in slot c of a page.
inline Rational volume_coefficient(const SpectralPage& page, Slot a, const Vector& x, Slot c,
                                   const Vector& y) {
  const Slot top{page.b(), page.f()};
  if (!page.volume() || page.dim(top) != 1) {
    throw InconsistentData("the volume class does not survive to E_" + std::to_string(page.r()));
  }
  if (page.product_slot(a, c) != top) return 0;
  Vector xy = page.multiply(a, x, c, y);
  return xy[0] / (*page.volume())[0];
}

/**
 * tau_s: the signature of (w, w') -> coefficient of the volume in w . d_s w'
 * on the complements Im(d_s)* of every middle-degree slot of E_s.
 */
inline TauBlock tau_block(const LimitRecord& rec, std::size_t s) {
  const std::size_t b = rec.b(), f = rec.f();
  const std::size_t m = middle_degree(b, f);
  const SpectralPage& page = rec.page(s);
  if (!page.volume() || page.dim({b, f}) != 1) {
    throw InconsistentData("tau_" + std::to_string(s) + " needs the volume class on E_" +
                           std::to_string(s));
  }
  TauBlock blk;
  blk.page = s;
  blk.symmetric_expected = (m % 2 == 1);
  std::vector<Matrix> bases;
  std::size_t total = 0;
  for (std::size_t i = 0; i <= std::min(b, m); ++i) {
    if (m - i > f) continue;
    const Slot slot{i, m - i};
    Matrix pre = rec.preimage(s, slot);
    if (pre.cols() == 0) continue;
    blk.slots.push_back(slot);
    blk.offsets.push_back(total);
    bases.push_back(pre);
    total += pre.cols();
  }
  blk.form = Matrix(total, total);
  for (std::size_t u = 0; u < blk.slots.size(); ++u) {
    for (std::size_t v = 0; v < blk.slots.size(); ++v) {
      const Slot tv = *page.target(blk.slots[v]);
      Matrix dv = page.differential(blk.slots[v]) * bases[v];
      for (std::size_t a = 0; a < bases[u].cols(); ++a)
        for (std::size_t c = 0; c < bases[v].cols(); ++c)
          blk.form(blk.offsets[u] + a, blk.offsets[v] + c) =
              volume_coefficient(page, blk.slots[u], bases[u].column(a), tv, dv.column(c));
    }
  }
  const Matrix t = blk.form.transpose();
  const bool ok = blk.symmetric_expected ? (t == blk.form) : (t == Rational(-1) * blk.form);
  if (!ok) {
    throw InconsistentData("tau_" + std::to_string(s) + " form is not " +
                           (blk.symmetric_expected ? "symmetric" : "antisymmetric") +
                           "; the product data is inconsistent");
  }
  blk.symmetrized = Rational(1, 2) * (blk.form + t);
  blk.inertia = sylvester_signature(blk.symmetrized);
  return blk;
}

inline long tau(const LimitRecord& rec, std::size_t s) { return tau_block(rec, s).value(); }

/// tau_s for every page s = 2 .. last page with a differential.
inline std::map<std::size_t, long> tau_list(const LimitRecord& rec) {
  std::map<std::size_t, long> out;
  for (std::size_t s = 2; s < rec.limit_index(); ++s) out[s] = tau(rec, s);
  return out;
}

/// Signature of the coned-off end: -(tau_{s0} + tau_{s0+2} + ...).
inline long end_signature(const LimitRecord& rec, std::size_t k) {
  long sum = 0;
  for (std::size_t s = first_contributing_page(rec.f(), k); s < rec.limit_index(); s += 2)
    sum += tau(rec, s);
  return kGlueOrientation * sum;
}

struct AssemblyBlock {
  std::size_t page;
  Slot row_slot, col_slot;
  std::string label;  // "tau_s" for a self-paired slot, otherwise the pair of summand labels
  Matrix matrix;
};

struct CancellingPair {
  std::size_t page;
  std::string first, second;
  long signature;  // of the 2x2 block form; always 0
};

struct BlockAssembly {
  std::vector<std::string> summands;  // labels in basis order
  Matrix form;
  std::vector<AssemblyBlock> diagonal;
  std::vector<CancellingPair> pairs;
  long signature = 0;
};

/**
 * The intersection form on the middle image, one block per pair of
 * Im(d_t)* summands. Summands from different pages are orthogonal; on page
 * t the entry is -(coefficient of the volume in w . d_t w'). A slot paired
 * with itself carries -tau_t; two distinct partner slots form a hyperbolic
 * block of signature zero.
 */
inline BlockAssembly block_matrix_assembly(const LimitRecord& rec, std::size_t k) {
  EndTable img = middle_image(rec, k);
  struct Part {
    std::size_t page;
    Slot slot;
    Matrix basis;
    std::string label;
    std::size_t offset;
  };
  std::vector<Part> parts;
  std::size_t total = 0;
  for (const auto& [t, entry] : img.entries)
    for (const auto& sm : entry.summands) {
      if (sm.dim == 0) continue;
      Summand pre = sm;
      pre.kind = Summand::Kind::preimage;
      parts.push_back({sm.page, sm.slot, sm.basis, pre.label(), total});
      total += sm.dim;
    }
  BlockAssembly out;
  out.form = Matrix(total, total);
  for (const auto& p : parts)
    for (std::size_t a = 0; a < p.basis.cols(); ++a) out.summands.push_back(p.label);
  for (const auto& u : parts) {
    for (const auto& v : parts) {
      if (u.page != v.page) continue;
      const SpectralPage& page = rec.page(u.page);
      const Slot tv = *page.target(v.slot);
      Matrix dv = page.differential(v.slot) * v.basis;
      Matrix blk(u.basis.cols(), v.basis.cols());
      for (std::size_t a = 0; a < u.basis.cols(); ++a)
        for (std::size_t c = 0; c < v.basis.cols(); ++c)
          blk(a, c) = -volume_coefficient(page, u.slot, u.basis.column(a), tv, dv.column(c));
      for (std::size_t a = 0; a < blk.rows(); ++a)
        for (std::size_t c = 0; c < blk.cols(); ++c) out.form(u.offset + a, v.offset + c) = blk(a, c);
      if (u.slot == v.slot) {
        out.diagonal.push_back({u.page, u.slot, v.slot, "tau_" + std::to_string(u.page), blk});
      }
    }
  }
  // hyperbolic pairs: distinct slots on one page whose products reach the volume
  for (std::size_t x = 0; x < parts.size(); ++x)
    for (std::size_t y = x + 1; y < parts.size(); ++y) {
      const auto& u = parts[x];
      const auto& v = parts[y];
      if (u.page != v.page || u.slot == v.slot) continue;
      if (u.slot.first + v.slot.first + u.page != rec.b()) continue;
      std::vector<std::size_t> idx;
      for (std::size_t a = 0; a < u.basis.cols(); ++a) idx.push_back(u.offset + a);
      for (std::size_t a = 0; a < v.basis.cols(); ++a) idx.push_back(v.offset + a);
      Matrix sub = out.form.select_rows(idx).select_columns(idx);
      Matrix sym = Rational(1, 2) * (sub + sub.transpose());
      out.pairs.push_back({u.page, u.label, v.label, sylvester_signature(sym).signature()});
    }
  Matrix sym = Rational(1, 2) * (out.form + out.form.transpose());
  out.signature = sylvester_signature(sym).signature();
  return out;
}

}  // namespace ihsig

#endif  // IHSIG_CONE_END_HPP
