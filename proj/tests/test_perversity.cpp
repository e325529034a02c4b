#include <catch_amalgamated.hpp>

#include <ihsig/perversity.hpp>

#include <random>

using namespace ihsig;

TEST_CASE("bracket is the greatest integer strictly below", "[perversity]") {
  CHECK(bracket(1) == 0);
  CHECK(bracket(Rational(3, 2)) == 1);
  CHECK(bracket(Rational(-1, 2)) == -1);
  CHECK(bracket(0) == -1);
  CHECK(bracket(Rational(7, 3)) == 2);
}

TEST_CASE("L2 cutoff", "[perversity]") {
  CHECK(l2_cutoff({1, 2}) == Rational(3, 2));
  CHECK(l2_table({1, 0, 1}, {1, 2}) == GradedDims{1, 0, 0});
  CHECK(l2_cutoff({1, 5}) == 3);
  CHECK(l2_table({1, 1, 1, 1, 1, 1}, {1, 5}) == GradedDims{1, 1, 1, 0, 0, 0});
  CHECK(l2_cutoff({Rational(1, 2), 2}) == 2);
  CHECK(l2_survives({Rational(1, 2), 2}, 1));
  CHECK_FALSE(l2_survives({Rational(1, 2), 2}, 2));
  CHECK_THROWS_AS(ConeParameter(0, 3), std::invalid_argument);
  CHECK_THROWS_AS(ConeParameter(Rational(3, 2), 3), std::invalid_argument);
}

TEST_CASE("hodge shift", "[perversity]") {
  for (std::size_t f : {1, 3, 5, 7}) {
    auto a = hodge_shift({1, f});
    CHECK(a.normative == 0);
    CHECK(a.literal == 0);
  }
  auto half = hodge_shift({Rational(1, 2), 5});
  CHECK(half.normative == 1);
  CHECK(half.literal == 1);
  CHECK(half.vanishing_degree == 4);

  auto even = hodge_shift({1, 2});
  CHECK(even.normative == 0);
  CHECK(even.literal == 1);
  CHECK(even.discrepancy());
  CHECK(hodge_shift({Rational(1, 3), 4}).normative == 1);
}

TEST_CASE("extended indices and local tables", "[perversity]") {
  const GradedDims s2{1, 0, 1};
  CHECK(local_ih_table(s2, {-1, 2}) == s2);
  CHECK(local_ih_table(s2, {-5, 2}) == s2);
  CHECK(local_ih_table(s2, {2, 2}) == GradedDims{0, 0, 0});
  CHECK(local_ih_table(s2, upper_middle(2)) == GradedDims{1, 0, 0});
  CHECK(local_ih_table(s2, lower_middle(2)) == GradedDims{1, 0, 0});
  CHECK(upper_middle(2).cutoff() == 2);
  CHECK(lower_middle(2).cutoff() == 1);

  CHECK(dual({-1, 4}).relative());
  CHECK(dual({4, 4}).absolute());
  CHECK(dual(lower_middle(4)) == upper_middle(4));
  CHECK(dual(upper_middle(4)) == lower_middle(4));
  CHECK(dual(upper_middle(5)) == upper_middle(5));
  CHECK(lower_middle(5) == upper_middle(5));
}

TEST_CASE("perversity properties", "[perversity][property]") {
  for (std::size_t f = 0; f <= 8; ++f) {
    for (long j = -4; j <= 12; ++j) {
      ExtPerversity p{j, f};
      CHECK(p.cutoff() <= f + 1);
      CHECK(dual(dual(p)) == p);
      CHECK(p.cutoff() + dual(p).cutoff() == f + 1);
    }
    for (std::size_t k = 0; k <= 3; ++k) {
      MiddleOffsets m{f, k};
      CHECK(m.lower_index().cutoff() + m.upper_index().cutoff() == f + 1);
      if (f % 2 == 1 && k == 0) CHECK(m.lower_index() == m.upper_index());
    }
  }
  // Dense grid c = p/q: the shifted table is the cone truncation, k is
  // monotone in c, and the odd-f bracket formula agrees.
  for (std::size_t f = 1; f <= 8; ++f) {
    GradedDims fiber(f + 1, 1);
    long previous = -1;
    for (long q = 40; q >= 1; --q) {  // increasing c = 1/q .. 1
      ConeParameter cp(Rational(1, q), f);
      auto a = hodge_shift(cp);
      ExtPerversity shifted{upper_middle(f).j - a.normative, f};
      CHECK(local_ih_table(fiber, shifted) == l2_table(fiber, cp));
      if (f % 2 == 1) CHECK(a.literal == a.normative);
      if (previous >= 0) CHECK(a.normative <= previous);
      previous = a.normative;
    }
    for (long q = 1; q <= 12; ++q)
      for (long p = 1; p <= q; ++p) {
        ConeParameter cp(Rational(p, q), f);
        auto a = hodge_shift(cp);
        CHECK(a.normative >= 0);
        ExtPerversity shifted{upper_middle(f).j - a.normative, f};
        CHECK(local_ih_table(fiber, shifted) == l2_table(fiber, cp));
        if (f % 2 == 1) CHECK(a.literal == a.normative);
        if (f % 2 == 0) CHECK(a.literal == a.normative + 1);
      }
  }
  // k grows without bound as c -> 0
  CHECK(hodge_shift({Rational(1, 1000), 3}).normative >= 400);
}
