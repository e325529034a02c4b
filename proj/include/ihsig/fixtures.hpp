#ifndef IHSIG_FIXTURES_HPP
#define IHSIG_FIXTURES_HPP

#include <ihsig/simplicial.hpp>

namespace ihsig::fixtures {

/// Boundary of the (n+1)-simplex: an n-sphere on n+2 vertices.
inline OrientedPair sphere(std::size_t n) {
  std::vector<Simplex> facets;
  for (std::size_t skip = 0; skip < n + 2; ++skip) {
    Simplex f;
    for (std::size_t v = 0; v < n + 2; ++v)
      if (v != skip) f.push_back(v);
    facets.push_back(f);
  }
  return oriented(SimplicialPair(n + 2, facets));
}

/// The n-simplex with its whole boundary as L.
inline OrientedPair ball(std::size_t n) {
  Simplex top(n + 1);
  std::iota(top.begin(), top.end(), 0);
  std::vector<Simplex> boundary;
  for (std::size_t i = 0; i <= n && n > 0; ++i) boundary.push_back(detail::drop(top, i));
  return {SimplicialPair(n + 1, {top}, boundary), FundamentalCycle{{1}}};
}

/**
 * Kuhnel's 9-vertex triangulation of the complex projective plane (vertices
 * renumbered from 0). The orientation is the one whose intersection form is +1.
 */
inline OrientedPair cp2() {
  static const std::vector<Simplex> facets = {
      {1, 2, 3, 4, 5}, {1, 2, 3, 4, 7}, {1, 2, 3, 5, 8}, {1, 2, 3, 7, 8}, {1, 2, 4, 5, 6},
      {1, 2, 4, 6, 7}, {1, 2, 5, 6, 8}, {1, 2, 6, 7, 9}, {1, 2, 6, 8, 9}, {1, 2, 7, 8, 9},
      {1, 3, 4, 5, 9}, {1, 3, 4, 7, 8}, {1, 3, 4, 8, 9}, {1, 3, 5, 6, 8}, {1, 3, 5, 6, 9},
      {1, 3, 6, 8, 9}, {1, 4, 5, 6, 7}, {1, 4, 5, 7, 9}, {1, 4, 7, 8, 9}, {1, 5, 6, 7, 9},
      {2, 3, 4, 5, 9}, {2, 3, 4, 6, 7}, {2, 3, 4, 6, 9}, {2, 3, 5, 7, 8}, {2, 3, 5, 7, 9},
      {2, 3, 6, 7, 9}, {2, 4, 5, 6, 8}, {2, 4, 5, 8, 9}, {2, 4, 6, 8, 9}, {2, 5, 7, 8, 9},
      {3, 4, 6, 7, 8}, {3, 4, 6, 8, 9}, {3, 5, 6, 7, 8}, {3, 5, 6, 7, 9}, {4, 5, 6, 7, 8},
      {4, 5, 7, 8, 9}};
  std::vector<Simplex> zero_based = facets;
  for (auto& f : zero_based)
    for (auto& v : f) v -= 1;
  return oriented(SimplicialPair(9, zero_based), -1);
}

/// Closed star of vertex 0 in cp2(): a 4-ball bounded by the link, a 3-sphere.
inline OrientedPair cp2_ball() {
  auto x = cp2();
  return restrict_to(x, star_marker(x.pair, 0));
}

/// The complement of cp2_ball(): the disk bundle of Euler number 1 over S^2.
inline OrientedPair cp2_disk_bundle() {
  auto x = cp2();
  auto m = star_marker(x.pair, 0);
  m.flip();
  return restrict_to(x, m);
}

/// D^2 x S^2 with boundary S^1 x S^2.
inline OrientedPair disk_times_sphere() { return product(ball(2), sphere(2)); }

}  // namespace ihsig::fixtures

#endif  // IHSIG_FIXTURES_HPP
