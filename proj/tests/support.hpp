#ifndef IHSIG_TESTS_SUPPORT_HPP
#define IHSIG_TESTS_SUPPORT_HPP

#include <ihsig/matrix.hpp>

#include <random>

namespace ihsig::testing {

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                            int lo = -3, int hi = 3, double zero_bias = 0.3) {
  std::uniform_int_distribution<int> entry(lo, hi);
  std::bernoulli_distribution zero(zero_bias);
  Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = zero(rng) ? 0 : entry(rng);
  return m;
}

/// Random matrix of prescribed rank: product of random rows x rank and rank x cols
/// factors with unit-triangular blocks, so the rank is exact.
inline Matrix random_rank_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                                 std::size_t rk) {
  Matrix left = random_matrix(rng, rows, rk);
  Matrix right = random_matrix(rng, rk, cols);
  for (std::size_t k = 0; k < rk; ++k) {
    for (std::size_t c = 0; c < rk; ++c) left(k, c) = (k == c) ? 1 : (c > k ? 0 : left(k, c));
    for (std::size_t c = 0; c < rk; ++c) right(k, c) = (k == c) ? 1 : (c < k ? 0 : right(k, c));
  }
  return left * right;
}

/// Random invertible matrix: lower unit-triangular times upper with +-1 diagonal.
inline Matrix random_invertible(std::mt19937_64& rng, std::size_t n) {
  Matrix lower = random_matrix(rng, n, n, -2, 2);
  Matrix upper = random_matrix(rng, n, n, -2, 2);
  std::bernoulli_distribution flip(0.5);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      if (c > r) lower(r, c) = 0;
      if (c < r) upper(r, c) = 0;
    }
    lower(r, r) = 1;
    upper(r, r) = flip(rng) ? 1 : -1;
  }
  return lower * upper;
}

inline Matrix random_symmetric(std::mt19937_64& rng, std::size_t n) {
  Matrix m = random_matrix(rng, n, n, -4, 4, 0.4);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < r; ++c) m(r, c) = m(c, r);
  return m;
}

}  // namespace ihsig::testing

#endif
