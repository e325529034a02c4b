#ifndef IHSIG_ASSEMBLE_HPP
#define IHSIG_ASSEMBLE_HPP

#include <ihsig/cone_end.hpp>
#include <ihsig/simplicial.hpp>

namespace ihsig {

/// Rational cohomology dimensions of a simplicial complex given by its simplices per dimension.
inline GradedDims complex_cohomology_dims(const std::vector<std::vector<Simplex>>& bases) {
  GradedDims dims;
  for (const auto& b : bases) dims.push_back(b.size());
  std::vector<Matrix> diffs;
  for (std::size_t k = 0; k < bases.size(); ++k) {
    if (k + 1 == bases.size()) {
      diffs.emplace_back(0, dims[k]);
      break;
    }
    std::map<Simplex, std::size_t> index;
    for (std::size_t i = 0; i < bases[k].size(); ++i) index[bases[k][i]] = i;
    Matrix d(dims[k + 1], dims[k]);
    for (std::size_t r = 0; r < bases[k + 1].size(); ++r) {
      const Simplex& s = bases[k + 1][r];
      for (std::size_t i = 0; i < s.size(); ++i) d(r, index.at(detail::drop(s, i))) += (i % 2 == 0) ? 1 : -1;
    }
    diffs.push_back(std::move(d));
  }
  if (dims.empty()) return {};
  return cohomology(CochainComplex(dims, std::move(diffs))).dims;
}

/// Cohomology dimensions of the boundary subcomplex L, degrees 0 .. dim - 1.
inline GradedDims boundary_cohomology_dims(const SimplicialPair& p) {
  const std::size_t n = p.dimension();
  std::vector<std::vector<Simplex>> bases(n);
  for (std::size_t k = 0; k < n; ++k)
    for (const auto& s : p.simplices(k))
      if (p.in_boundary(s)) bases[k].push_back(s);
  return complex_cohomology_dims(bases);
}

/**
 * Whether the complex of the given simplices (closed under faces, pure of
 * dimension d) is a rational homology manifold: the link of every simplex
 * of dimension e has the rational cohomology of a (d - e - 1)-sphere.
 */
inline bool is_rational_homology_manifold(const std::set<Simplex>& simplices, std::size_t d) {
  for (const auto& sigma : simplices) {
    const std::size_t e = sigma.size() - 1;
    if (e >= d) continue;
    const std::size_t sphere = d - e - 1;
    std::vector<std::vector<Simplex>> link(sphere + 1);
    for (const auto& tau : simplices) {
      if (tau.size() + sigma.size() > d + 1) continue;
      Simplex joined;
      std::set_union(sigma.begin(), sigma.end(), tau.begin(), tau.end(), std::back_inserter(joined));
      if (joined.size() != sigma.size() + tau.size() || !simplices.count(joined)) continue;
      link[tau.size() - 1].push_back(tau);
    }
    GradedDims h = complex_cohomology_dims(link);
    GradedDims expected(sphere + 1, 0);
    expected[0] += 1;
    expected[sphere] += 1;
    if (h != expected) return false;
  }
  return true;
}

/**
 * X = M glued along Y to the coned-off end C_phi Y. The interior M is an
 * oriented simplicial manifold with boundary Y; the end is the spectral
 * sequence of the fibration Y -> B. The offset k comes from the cone
 * parameter when one is given.
 */
struct SpaceAssembly {
  OrientedPair interior;
  LimitRecord end;
  std::optional<ConeParameter> cone;
  std::size_t k = 0;

  std::size_t dimension() const { return end.b() + end.f() + 1; }

  std::size_t offset() const {
    if (!cone) return k;
    return static_cast<std::size_t>(hodge_shift(*cone).normative);
  }

  SpaceAssembly reversed() const { return {interior.reversed(), end.reversed(), cone, k}; }

  void check() const {
    const std::size_t n = dimension();
    if (interior.pair.dimension() != n) {
      throw std::invalid_argument("interior has dimension " + std::to_string(interior.pair.dimension()) +
                                  " but b + f + 1 = " + std::to_string(n));
    }
    if (n % 2 == 1) throw std::invalid_argument("signature needs even dimension, got " + std::to_string(n));
    if (cone && cone->f != end.f()) {
      throw std::invalid_argument("cone parameter was given for fiber dimension " + std::to_string(cone->f) +
                                  ", the end has f = " + std::to_string(end.f()));
    }
    check_fundamental_cycle(interior.pair, interior.cycle);
    GradedDims boundary = boundary_cohomology_dims(interior.pair);
    GradedDims einf = end.einf_total_dims();
    boundary.resize(n, 0);
    einf.resize(n, 0);
    if (boundary != einf) {
      throw InconsistentData("boundary of the interior has cohomology " + show(boundary) +
                             " but the end converges to " + show(einf));
    }
  }

 private:
  static std::string show(const GradedDims& d) {
    std::string out = "(";
    for (std::size_t i = 0; i < d.size(); ++i) out += (i ? "," : "") + std::to_string(d[i]);
    return out + ")";
  }
};

struct SignatureReport {
  std::size_t n = 0, b = 0, f = 0, k = 0;
  long interior = 0;
  std::map<std::size_t, long> taus;
  std::size_t first_page = 0;
  long end_signature = 0;    // signature of the coned-off end
  long block_signature = 0;  // the same through the block assembly
  long global = 0;
  std::optional<ShiftAudit> shift;

  bool paths_agree() const { return end_signature == block_signature; }
};

/// sigma(X) = sigma(M) + sum of tau_s over s >= s0 of the contributing parity.
inline SignatureReport global_signature(const SpaceAssembly& a) {
  a.check();
  SignatureReport r;
  r.n = a.dimension();
  r.b = a.end.b();
  r.f = a.end.f();
  r.k = a.offset();
  if (a.cone) r.shift = hodge_shift(*a.cone);
  r.interior = a.interior.signature();
  r.taus = tau_list(a.end);
  r.first_page = first_contributing_page(r.f, r.k);
  r.end_signature = end_signature(a.end, r.k);
  r.block_signature = block_matrix_assembly(a.end, r.k).signature;
  r.global = r.interior + kGlueOrientation * r.end_signature;
  return r;
}

struct NovikovReport {
  long closed = 0;
  long first = 0;
  long second = 0;
  bool holds() const { return closed == first + second; }
};

/// sigma(X) against sigma(Z) + sigma(Z') for the split X = Z u Z' given by a facet marker.
inline NovikovReport novikov_check(const OrientedPair& x, const std::vector<bool>& marker) {
  if (!x.pair.closed()) throw std::invalid_argument("the split space must be closed");
  if (marker.size() != x.pair.facets().size()) {
    throw std::invalid_argument("facet marker needs one entry per facet");
  }
  const auto chosen = std::count(marker.begin(), marker.end(), true);
  if (chosen == 0 || static_cast<std::size_t>(chosen) == marker.size()) {
    throw std::invalid_argument("the marker does not separate: one side is empty");
  }
  std::vector<bool> rest(marker.size());
  for (std::size_t i = 0; i < marker.size(); ++i) rest[i] = !marker[i];
  // the interface: faces shared by the two sides
  const auto& facets = x.pair.facets();
  const std::size_t n = x.pair.dimension();
  std::map<Simplex, int> sides;
  for (std::size_t i = 0; i < facets.size(); ++i)
    for (std::size_t j = 0; j < facets[i].size(); ++j) sides[detail::drop(facets[i], j)] |= marker[i] ? 1 : 2;
  std::set<Simplex> interface;
  for (const auto& [face, mask] : sides) {
    if (mask != 3) continue;
    for (unsigned sub = 1; sub < (1u << face.size()); ++sub) {
      Simplex s;
      for (std::size_t v = 0; v < face.size(); ++v)
        if (sub & (1u << v)) s.push_back(face[v]);
      interface.insert(s);
    }
  }
  if (n >= 1 && !is_rational_homology_manifold(interface, n - 1)) {
    throw std::invalid_argument("the split is not along a closed rational homology manifold");
  }
  NovikovReport r;
  r.closed = x.signature();
  r.first = restrict_to(x, marker).signature();
  r.second = restrict_to(x, rest).signature();
  return r;
}

struct HodgeRow {
  Rational c;
  std::size_t f = 0;
  ShiftAudit audit;
  bool normative_agrees = false;
  bool literal_agrees = false;
};

struct HodgeReport {
  std::vector<HodgeRow> rows;
  bool passed() const {
    return std::all_of(rows.begin(), rows.end(), [](const HodgeRow& r) { return r.normative_agrees; });
  }
  std::size_t literal_discrepancies() const {
    return std::count_if(rows.begin(), rows.end(), [](const HodgeRow& r) { return r.audit.discrepancy(); });
  }
};

inline std::vector<Rational> default_cone_grid() {
  return {Rational(1), Rational(3, 4), Rational(1, 2), Rational(1, 3), Rational(1, 4), Rational(1, 8)};
}

/**
 * For each (c, f), compares the L^2 truncation of a fiber with one class in
 * every degree against the local intersection cohomology at the shifted
 * perversity, for the normative and the literal offsets.
 */
inline HodgeReport verify_hodge_consistency(const std::vector<Rational>& cs, std::size_t f_min,
                                            std::size_t f_max) {
  HodgeReport out;
  for (const auto& c : cs)
    for (std::size_t f = f_min; f <= f_max; ++f) {
      ConeParameter cp(c, f);
      HodgeRow row{c, f, hodge_shift(cp)};
      const GradedDims fiber(f + 1, 1);
      const GradedDims l2 = l2_table(fiber, cp);
      auto at = [&](long k) {
        return k >= 0 && local_ih_table(fiber, MiddleOffsets{f, static_cast<std::size_t>(k)}.upper_index()) == l2;
      };
      row.normative_agrees = at(row.audit.normative);
      row.literal_agrees = at(row.audit.literal);
      out.rows.push_back(std::move(row));
    }
  return out;
}

struct DualityRow {
  std::size_t degree = 0;
  std::size_t relative = 0;       // rel_p table at this degree
  std::size_t absolute_dual = 0;  // abs_q table at n - degree
};

struct DualityReport {
  std::size_t n = 0;
  std::size_t k = 0;
  std::vector<DualityRow> rows;
  bool holds() const {
    return std::all_of(rows.begin(), rows.end(),
                       [](const DualityRow& r) { return r.relative == r.absolute_dual; });
  }
};

/// Degree-wise comparison of the two truncated runs, rel_p at t against abs_q at n - t.
inline DualityReport verify_duality(const LimitRecord& rec, std::size_t k) {
  DualityReport out;
  out.n = rec.b() + rec.f() + 1;
  out.k = k;
  GradedDims rel = truncated_run(rec, {rec.b(), rec.f(), k, Variant::rel_p}).total_dims();
  GradedDims abs = truncated_run(rec, {rec.b(), rec.f(), k, Variant::abs_q}).total_dims();
  rel.resize(out.n + 1, 0);
  abs.resize(out.n + 1, 0);
  for (std::size_t t = 0; t <= out.n; ++t) out.rows.push_back({t, rel[t], abs[out.n - t]});
  return out;
}

}  // namespace ihsig

#endif  // IHSIG_ASSEMBLE_HPP
