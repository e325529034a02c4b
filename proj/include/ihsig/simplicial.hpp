#ifndef IHSIG_SIMPLICIAL_HPP
#define IHSIG_SIMPLICIAL_HPP

#include <ihsig/complex.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <string>
#include <vector>

namespace ihsig {

/// Vertex indices in increasing order.
using Simplex = std::vector<std::size_t>;

namespace detail {

// Sorts the tuple in place and returns the sign of the sorting permutation.
inline int sort_with_sign(Simplex& s) {
  int sgn = 1;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j + 1 < s.size() - i; ++j)
      if (s[j] > s[j + 1]) {
        std::swap(s[j], s[j + 1]);
        sgn = -sgn;
      }
  return sgn;
}

inline Simplex drop(const Simplex& s, std::size_t i) {
  Simplex out;
  out.reserve(s.size() - 1);
  for (std::size_t j = 0; j < s.size(); ++j)
    if (j != i) out.push_back(s[j]);
  return out;
}

inline std::string show(const Simplex& s) {
  std::string out = "[";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out + "]";
}

}  // namespace detail

/**
 * A pseudomanifold K with a boundary subcomplex L, given by top-dimensional
 * facets and the codimension-1 faces making up L. Facet tuples may come in
 * any order; they are stored sorted and the parity of the sort is kept as
 * the facet's given orientation.
 */
class SimplicialPair {
 public:
  SimplicialPair(std::size_t vertex_count, std::vector<Simplex> facets,
                 std::vector<Simplex> boundary_facets = {})
      : vertex_count_(vertex_count) {
    if (facets.empty()) throw std::invalid_argument("simplicial pair needs at least one facet");
    dimension_ = facets.front().size() - 1;
    if (facets.front().empty()) throw std::invalid_argument("empty facet");
    for (auto& f : facets) {
      if (f.size() != dimension_ + 1) {
        throw std::invalid_argument("facet " + detail::show(f) + " has the wrong dimension");
      }
      int sgn = detail::sort_with_sign(f);
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] >= vertex_count_) {
          throw std::invalid_argument("facet " + detail::show(f) + " uses a vertex out of range");
        }
        if (i > 0 && f[i] == f[i - 1]) {
          throw std::invalid_argument("facet " + detail::show(f) + " repeats a vertex");
        }
      }
      facets_.push_back(f);
      given_orientation_.push_back(sgn);
    }
    if (std::set<Simplex>(facets_.begin(), facets_.end()).size() != facets_.size()) {
      throw std::invalid_argument("duplicate facet");
    }

    simplices_.assign(dimension_ + 1, {});
    for (const auto& f : facets_) add_faces(f, simplices_);
    std::vector<bool> used(vertex_count_, false);
    for (const auto& v : simplices_[0]) used[v[0]] = true;
    for (std::size_t v = 0; v < vertex_count_; ++v) {
      if (!used[v]) throw std::invalid_argument("vertex " + std::to_string(v) + " lies in no facet");
    }

    // codimension-1 faces: interior ones lie in two facets, boundary ones in one
    std::map<Simplex, int> incidence;
    if (dimension_ > 0) {
      for (const auto& f : facets_)
        for (std::size_t i = 0; i <= dimension_; ++i) ++incidence[detail::drop(f, i)];
    }
    std::set<Simplex> marked;
    for (auto& b : boundary_facets) {
      detail::sort_with_sign(b);
      if (dimension_ == 0 || b.size() != dimension_) {
        throw std::invalid_argument("boundary facet " + detail::show(b) + " has the wrong dimension");
      }
      auto it = incidence.find(b);
      if (it == incidence.end() || it->second != 1) {
        throw std::invalid_argument("boundary facet " + detail::show(b) +
                                    " is not a free face of exactly one facet");
      }
      marked.insert(b);
    }
    for (const auto& [face, count] : incidence) {
      if (count > 2) {
        throw std::invalid_argument("face " + detail::show(face) + " lies in " +
                                    std::to_string(count) + " facets");
      }
      if (count == 1 && !marked.count(face)) {
        throw std::invalid_argument("face " + detail::show(face) +
                                    " lies in one facet but is not marked as boundary");
      }
    }
    boundary_facets_.assign(marked.begin(), marked.end());
    boundary_.assign(dimension_ + 1, {});
    for (const auto& b : boundary_facets_) add_faces(b, boundary_);
  }

  std::size_t dimension() const { return dimension_; }
  std::size_t vertex_count() const { return vertex_count_; }
  const std::vector<Simplex>& facets() const { return facets_; }
  const std::vector<Simplex>& boundary_facets() const { return boundary_facets_; }
  bool closed() const { return boundary_facets_.empty(); }
  /// +1 or -1: parity of the order in which each facet was supplied.
  const std::vector<int>& given_orientation() const { return given_orientation_; }

  const std::set<Simplex>& simplices(std::size_t k) const { return simplices_.at(k); }
  bool in_boundary(const Simplex& s) const {
    return !s.empty() && s.size() <= boundary_.size() && boundary_[s.size() - 1].count(s) > 0;
  }

  std::vector<std::size_t> f_vector() const {
    std::vector<std::size_t> out;
    for (const auto& s : simplices_) out.push_back(s.size());
    return out;
  }

 private:
  static void add_faces(const Simplex& s, std::vector<std::set<Simplex>>& into) {
    const std::size_t n = s.size();
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
      Simplex face;
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (1u << i)) face.push_back(s[i]);
      into[face.size() - 1].insert(face);
    }
  }

  std::size_t vertex_count_ = 0;
  std::size_t dimension_ = 0;
  std::vector<Simplex> facets_;
  std::vector<int> given_orientation_;
  std::vector<Simplex> boundary_facets_;
  std::vector<std::set<Simplex>> simplices_;
  std::vector<std::set<Simplex>> boundary_;
};

enum class CochainMode { absolute, relative };

/// Basis of C^k in the given mode: all k-simplices, or those not in L.
inline std::vector<Simplex> cochain_basis(const SimplicialPair& p, std::size_t k, CochainMode mode) {
  std::vector<Simplex> out;
  for (const auto& s : p.simplices(k))
    if (mode == CochainMode::absolute || !p.in_boundary(s)) out.push_back(s);
  return out;
}

/// (delta phi)(s) = sum_i (-1)^i phi(s without vertex i).
inline CochainComplex cochain_complex(const SimplicialPair& p, CochainMode mode) {
  const std::size_t n = p.dimension();
  std::vector<std::vector<Simplex>> bases;
  GradedDims dims;
  for (std::size_t k = 0; k <= n; ++k) {
    bases.push_back(cochain_basis(p, k, mode));
    dims.push_back(bases.back().size());
  }
  std::vector<Matrix> diffs;
  for (std::size_t k = 0; k <= n; ++k) {
    if (k == n) {
      diffs.emplace_back(0, dims[k]);
      break;
    }
    std::map<Simplex, std::size_t> index;
    for (std::size_t i = 0; i < bases[k].size(); ++i) index[bases[k][i]] = i;
    Matrix d(dims[k + 1], dims[k]);
    for (std::size_t r = 0; r < bases[k + 1].size(); ++r) {
      const Simplex& s = bases[k + 1][r];
      for (std::size_t i = 0; i < s.size(); ++i) {
        auto it = index.find(detail::drop(s, i));
        if (it != index.end()) d(r, it->second) += (i % 2 == 0) ? 1 : -1;
      }
    }
    diffs.push_back(std::move(d));
  }
  return CochainComplex(dims, std::move(diffs));
}

/// Coefficient +-1 per facet (in the pair's facet order, relative to the sorted
/// vertex order of each facet).
struct FundamentalCycle {
  std::vector<int> coefficients;

  FundamentalCycle reversed() const {
    FundamentalCycle out = *this;
    for (int& c : out.coefficients) c = -c;
    return out;
  }
};

/// Throws InconsistentData unless the signed facet sum has boundary inside L.
inline void check_fundamental_cycle(const SimplicialPair& p, const FundamentalCycle& fc) {
  if (fc.coefficients.size() != p.facets().size()) {
    throw std::invalid_argument("fundamental cycle needs one coefficient per facet");
  }
  std::map<Simplex, int> boundary;
  for (std::size_t i = 0; i < p.facets().size(); ++i) {
    const int c = fc.coefficients[i];
    if (c != 1 && c != -1) throw std::invalid_argument("fundamental cycle coefficients must be +-1");
    const Simplex& f = p.facets()[i];
    for (std::size_t j = 0; j < f.size() && p.dimension() > 0; ++j)
      boundary[detail::drop(f, j)] += (j % 2 == 0 ? c : -c);
  }
  for (const auto& [face, coeff] : boundary) {
    if (coeff != 0 && !p.in_boundary(face)) {
      throw InconsistentData("boundary of the fundamental cycle meets the interior at " +
                             detail::show(face));
    }
  }
}

/// Orientation taken from the order in which facets were supplied.
inline FundamentalCycle cycle_from_facet_order(const SimplicialPair& p) {
  FundamentalCycle fc{p.given_orientation()};
  check_fundamental_cycle(p, fc);
  return fc;
}

/**
 * Propagates an orientation across shared codimension-1 faces, starting from
 * the first facet of each connected component with coefficient `seed`.
 * Throws InconsistentData on non-orientable input.
 */
inline FundamentalCycle infer_fundamental_cycle(const SimplicialPair& p, int seed = 1) {
  const auto& facets = p.facets();
  const std::size_t n = facets.size();
  std::map<Simplex, std::vector<std::pair<std::size_t, std::size_t>>> owners;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < facets[i].size() && p.dimension() > 0; ++j)
      owners[detail::drop(facets[i], j)].push_back({i, j});
  std::vector<int> coeff(n, 0);
  for (std::size_t start = 0; start < n; ++start) {
    if (coeff[start] != 0) continue;
    coeff[start] = seed;
    std::queue<std::size_t> todo;
    todo.push(start);
    while (!todo.empty()) {
      const std::size_t i = todo.front();
      todo.pop();
      for (std::size_t j = 0; j < facets[i].size() && p.dimension() > 0; ++j) {
        const auto& own = owners[detail::drop(facets[i], j)];
        if (own.size() != 2) continue;
        const auto other = own[0].first == i ? own[1] : own[0];
        // the two induced face orientations must cancel
        const int want = -coeff[i] * ((j % 2 == 0) ? 1 : -1) * ((other.second % 2 == 0) ? 1 : -1);
        if (coeff[other.first] == 0) {
          coeff[other.first] = want;
          todo.push(other.first);
        } else if (coeff[other.first] != want) {
          throw InconsistentData("triangulation is not orientable");
        }
      }
    }
  }
  FundamentalCycle fc{coeff};
  check_fundamental_cycle(p, fc);
  return fc;
}

namespace detail {

// Value of the cup product a (p-cochain) with b (q-cochain) on the (p+q)-simplex s:
// a on the front p-face times b on the back q-face.
inline Rational cup_on(const Vector& a, const std::map<Simplex, std::size_t>& index_p,
                       const Vector& b, const std::map<Simplex, std::size_t>& index_q,
                       const Simplex& s, std::size_t p) {
  Simplex front(s.begin(), s.begin() + static_cast<long>(p) + 1);
  Simplex back(s.begin() + static_cast<long>(p), s.end());
  auto fa = index_p.find(front);
  auto fb = index_q.find(back);
  if (fa == index_p.end() || fb == index_q.end()) return 0;
  return a[fa->second] * b[fb->second];
}

}  // namespace detail

/// Relative cocycles (in absolute coordinates) whose classes form a basis of
/// Im(H^k(K, L) -> H^k(K)).
inline Matrix image_representatives(const SimplicialPair& p, std::size_t k) {
  CochainComplex abs = cochain_complex(p, CochainMode::absolute);
  CochainComplex rel = cochain_complex(p, CochainMode::relative);
  Cohomology hrel = cohomology(rel);
  const auto abs_basis = cochain_basis(p, k, CochainMode::absolute);
  const auto rel_basis = cochain_basis(p, k, CochainMode::relative);
  std::map<Simplex, std::size_t> abs_index;
  for (std::size_t i = 0; i < abs_basis.size(); ++i) abs_index[abs_basis[i]] = i;

  // inclusion C^k(K, L) -> C^k(K)
  Matrix incl(abs_basis.size(), rel_basis.size());
  for (std::size_t i = 0; i < rel_basis.size(); ++i) incl(abs_index.at(rel_basis[i]), i) = 1;

  Matrix reps = incl * hrel.representatives[k];
  Matrix chosen = image(abs.incoming(k)).basis();
  std::vector<std::size_t> keep;
  std::size_t r = chosen.cols();
  for (std::size_t c = 0; c < reps.cols(); ++c) {
    Matrix trial = hstack(chosen, reps.select_columns({c}));
    std::size_t tr = rank(trial);
    if (tr > r) {
      chosen = std::move(trial);
      r = tr;
      keep.push_back(c);
    }
  }
  return reps.select_columns(keep);
}

/**
 * Matrix of <a, b> = (a cup b)(fc) on a basis of Im(H^k(K, L) -> H^k(K)),
 * k = dimension / 2. Symmetric for k even, antisymmetric for k odd.
 */
inline Matrix cup_pairing_matrix(const SimplicialPair& p, const FundamentalCycle& fc) {
  if (p.dimension() % 2 != 0) {
    throw std::invalid_argument("intersection pairing needs even dimension, got " +
                                std::to_string(p.dimension()));
  }
  check_fundamental_cycle(p, fc);
  const std::size_t k = p.dimension() / 2;
  Matrix reps = image_representatives(p, k);
  const auto basis = cochain_basis(p, k, CochainMode::absolute);
  std::map<Simplex, std::size_t> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index[basis[i]] = i;

  const std::size_t m = reps.cols();
  std::vector<Vector> cols = reps.columns();
  Matrix out(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t i = 0; i < p.facets().size(); ++i)
        out(a, b) += fc.coefficients[i] *
                     detail::cup_on(cols[a], index, cols[b], index, p.facets()[i], k);

  const bool ok = (k % 2 == 0) ? out.is_symmetric() : (out.transpose() == Rational(-1) * out);
  if (!ok) throw InconsistentData("cup pairing has the wrong symmetry");
  return out;
}

inline long interior_signature(const SimplicialPair& p, const FundamentalCycle& fc) {
  Matrix m = cup_pairing_matrix(p, fc);
  if (p.dimension() / 2 % 2 == 1) return 0;  // antisymmetric forms have signature 0
  return sylvester_signature(m).signature();
}

/// A pair together with its orientation.
struct OrientedPair {
  SimplicialPair pair;
  FundamentalCycle cycle;

  OrientedPair(SimplicialPair p, FundamentalCycle fc) : pair(std::move(p)), cycle(std::move(fc)) {
    check_fundamental_cycle(pair, cycle);
  }

  OrientedPair reversed() const { return {pair, cycle.reversed()}; }
  long signature() const { return interior_signature(pair, cycle); }
};

inline OrientedPair oriented(SimplicialPair p, int seed = 1) {
  FundamentalCycle fc = infer_fundamental_cycle(p, seed);
  return {std::move(p), std::move(fc)};
}

/// Applies the vertex permutation v -> perm[v]; orientation is carried along.
inline OrientedPair relabel(const OrientedPair& x, const std::vector<std::size_t>& perm) {
  std::vector<Simplex> facets, boundary;
  std::vector<int> coeff;
  for (std::size_t i = 0; i < x.pair.facets().size(); ++i) {
    Simplex f;
    for (auto v : x.pair.facets()[i]) f.push_back(perm.at(v));
    coeff.push_back(x.cycle.coefficients[i] * detail::sort_with_sign(f));
    facets.push_back(f);
  }
  for (const auto& b : x.pair.boundary_facets()) {
    Simplex f;
    for (auto v : b) f.push_back(perm.at(v));
    boundary.push_back(f);
  }
  return {SimplicialPair(x.pair.vertex_count(), facets, boundary), FundamentalCycle{coeff}};
}

/// Vertices of the second summand are shifted past those of the first.
inline OrientedPair disjoint_union(const OrientedPair& x, const OrientedPair& y) {
  if (x.pair.dimension() != y.pair.dimension()) {
    throw std::invalid_argument("disjoint union of pairs of different dimension");
  }
  const std::size_t shift = x.pair.vertex_count();
  auto facets = x.pair.facets();
  auto boundary = x.pair.boundary_facets();
  auto coeff = x.cycle.coefficients;
  for (std::size_t i = 0; i < y.pair.facets().size(); ++i) {
    Simplex f = y.pair.facets()[i];
    for (auto& v : f) v += shift;
    facets.push_back(f);
    coeff.push_back(y.cycle.coefficients[i]);
  }
  for (Simplex b : y.pair.boundary_facets()) {
    for (auto& v : b) v += shift;
    boundary.push_back(b);
  }
  return {SimplicialPair(shift + y.pair.vertex_count(), facets, boundary),
          FundamentalCycle{coeff}};
}

/**
 * Staircase triangulation of the product. Vertex (v, w) gets index
 * v * |V(y)| + w, the lexicographic order, and the boundary is
 * dK x K' together with K x dK'.
 */
inline OrientedPair product(const OrientedPair& x, const OrientedPair& y) {
  const std::size_t p = x.pair.dimension(), q = y.pair.dimension();
  const std::size_t ny = y.pair.vertex_count();

  // one simplex per monotone lattice path from (0,0) to (da,db), signed by its shuffle
  auto staircase = [&](const Simplex& a, const Simplex& b, std::size_t da, std::size_t db) {
    std::vector<std::pair<Simplex, int>> out;
    for (unsigned mask = 0; mask < (1u << (da + db)); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) != db) continue;
      Simplex s{a[0] * ny + b[0]};
      std::size_t i = 0, j = 0, ups = 0;
      int sgn = 1;
      for (std::size_t step = 0; step < da + db; ++step) {
        if (mask & (1u << step)) {
          ++j;
          ++ups;
        } else {
          ++i;
          if (ups % 2 == 1) sgn = -sgn;
        }
        s.push_back(a[i] * ny + b[j]);
      }
      out.push_back({s, sgn});
    }
    return out;
  };

  std::vector<Simplex> facets, boundary;
  std::vector<int> coeff;
  for (std::size_t s = 0; s < x.pair.facets().size(); ++s) {
    for (std::size_t t = 0; t < y.pair.facets().size(); ++t) {
      for (auto& [simplex, sgn] : staircase(x.pair.facets()[s], y.pair.facets()[t], p, q)) {
        facets.push_back(simplex);
        coeff.push_back(sgn * x.cycle.coefficients[s] * y.cycle.coefficients[t]);
      }
    }
  }
  if (p > 0) {
    for (const auto& a : x.pair.boundary_facets())
      for (const auto& b : y.pair.facets())
        for (auto& [simplex, sgn] : staircase(a, b, p - 1, q)) boundary.push_back(simplex);
  }
  if (q > 0) {
    for (const auto& a : x.pair.facets())
      for (const auto& b : y.pair.boundary_facets())
        for (auto& [simplex, sgn] : staircase(a, b, p, q - 1)) boundary.push_back(simplex);
  }
  return {SimplicialPair(x.pair.vertex_count() * ny, facets, boundary), FundamentalCycle{coeff}};
}

/**
 * The piece made of the selected facets, with vertices renumbered in
 * increasing order. Its boundary is the old boundary it touches plus every
 * face it shares with an unselected facet.
 */
inline OrientedPair restrict_to(const OrientedPair& x, const std::vector<bool>& selected) {
  const auto& facets = x.pair.facets();
  if (selected.size() != facets.size()) {
    throw std::invalid_argument("facet marker needs one entry per facet");
  }
  std::map<Simplex, int> count;
  std::set<Simplex> mine;
  for (std::size_t i = 0; i < facets.size(); ++i) {
    if (!selected[i]) continue;
    for (std::size_t j = 0; j < facets[i].size(); ++j) mine.insert(detail::drop(facets[i], j));
  }
  std::vector<bool> used(x.pair.vertex_count(), false);
  for (std::size_t i = 0; i < facets.size(); ++i)
    if (selected[i])
      for (auto v : facets[i]) used[v] = true;
  std::vector<std::size_t> renumber(x.pair.vertex_count(), 0);
  std::size_t next = 0;
  for (std::size_t v = 0; v < used.size(); ++v)
    if (used[v]) renumber[v] = next++;
  auto map_simplex = [&](const Simplex& s) {
    Simplex out;
    for (auto v : s) out.push_back(renumber[v]);
    return out;
  };

  std::vector<Simplex> new_facets, new_boundary;
  std::vector<int> coeff;
  std::set<Simplex> boundary_set;
  for (std::size_t i = 0; i < facets.size(); ++i) {
    if (selected[i]) {
      new_facets.push_back(map_simplex(facets[i]));
      coeff.push_back(x.cycle.coefficients[i]);
    } else {
      for (std::size_t j = 0; j < facets[i].size(); ++j) {
        Simplex face = detail::drop(facets[i], j);
        if (mine.count(face)) boundary_set.insert(face);
      }
    }
  }
  for (const auto& b : x.pair.boundary_facets())
    if (mine.count(b)) boundary_set.insert(b);
  for (const auto& b : boundary_set) new_boundary.push_back(map_simplex(b));
  return {SimplicialPair(next, new_facets, new_boundary), FundamentalCycle{coeff}};
}

/// Facets containing vertex v.
inline std::vector<bool> star_marker(const SimplicialPair& p, std::size_t v) {
  std::vector<bool> out;
  for (const auto& f : p.facets()) out.push_back(std::find(f.begin(), f.end(), v) != f.end());
  return out;
}

}  // namespace ihsig

#endif  // IHSIG_SIMPLICIAL_HPP
