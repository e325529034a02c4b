// One PASS/FAIL line per acceptance criterion. All comparisons are exact.

#include "support.hpp"

#include <ihsig/assemble.hpp>
#include <ihsig/fixtures.hpp>
#include <ihsig/model.hpp>

#include <chrono>
#include <functional>
#include <iostream>

using namespace ihsig;

namespace {

constexpr std::size_t kCorpus = 100;
constexpr double kEndToEndSeconds = 30.0;

struct Outcome {
  bool ok;
  std::string detail;
};

std::vector<LimitRecord> corpus(std::uint64_t seed, bool even_total_dimension) {
  std::mt19937_64 rng(seed);
  RandomModelOptions opt;
  opt.max_total_base = 6;
  opt.max_total_fiber = 6;
  opt.even_total_dimension = even_total_dimension;
  std::vector<LimitRecord> out;
  for (std::size_t i = 0; i < kCorpus; ++i) out.push_back(random_model(rng, opt).run());
  return out;
}

const std::vector<LimitRecord>& any_corpus() {
  static const auto c = corpus(2026, false);
  return c;
}

const std::vector<LimitRecord>& even_corpus() {
  static const auto c = corpus(4052, true);
  return c;
}

Outcome worked_example() {
  std::mt19937_64 rng(6151);
  RandomModelOptions opt;
  opt.base_total = 6;
  opt.fiber_total = 5;
  const std::size_t trials = 10;
  std::size_t good = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    LimitRecord rec = random_model(rng, opt).run();
    const bool a = einf_closed_form(rec, {6, 5, 1, Variant::rel_q}).entry({2, 5}).label() ==
                   "E_inf^{2,4}(Y) + Im(d_2^{2,4})* + Im(d_3^{2,4})* + Im(d_4^{2,4})*";
    const bool b = einf_closed_form(rec, {6, 5, 1, Variant::abs_q}).entry({3, 3}).label() ==
                   "E_inf^{3,3}(Y) + Im(d_2^{1,4}) + Im(d_3^{0,5})";
    const bool c = einf_closed_form(rec, {6, 5, 1, Variant::rel_p}).entry({2, 5}).label() ==
                   "E_inf^{2,4}(Y) + Im(d_4^{2,4})*";
    good += a && b && c;
  }
  return {good == trials, std::to_string(good) + "/" + std::to_string(trials) + " random b=6 f=5 data sets"};
}

Outcome shift() {
  bool c1 = true;
  for (std::size_t f = 1; f <= 9; f += 2) {
    ShiftAudit a = hodge_shift(ConeParameter(1, f));
    c1 = c1 && a.normative == 0 && a.literal == 0;
  }
  HodgeReport h = verify_hodge_consistency(default_cone_grid(), 1, 8);
  std::size_t agree = 0, even_flagged = 0, even = 0;
  for (const auto& r : h.rows) {
    agree += r.normative_agrees;
    if (r.f % 2 == 0) {
      ++even;
      even_flagged += r.audit.discrepancy();
    }
  }
  const bool ok = c1 && h.passed() && h.rows.size() == 48 && h.literal_discrepancies() > 0;
  return {ok, "c=1 f odd -> k=0: " + std::string(c1 ? "yes" : "no") + "; sweep " + std::to_string(agree) + "/" +
                  std::to_string(h.rows.size()) + "; literal f-even discrepancy reported on " +
                  std::to_string(even_flagged) + "/" + std::to_string(even) + " rows"};
}

Outcome oracle() {
  std::size_t good = 0, comparisons = 0;
  for (const auto& rec : any_corpus()) {
    bool all = rec.b() <= 6 && rec.f() <= 6;
    for (std::size_t k = 0; k <= 2; ++k)
      for (auto v : {Variant::abs_q, Variant::rel_q, Variant::rel_p}) {
        TruncationSpec spec{rec.b(), rec.f(), k, v};
        all = all && closed_form_dims(rec, spec) == truncated_run(rec, spec);
        ++comparisons;
      }
    good += all;
  }
  return {good == kCorpus, std::to_string(good) + "/" + std::to_string(kCorpus) + " data sets, " +
                               std::to_string(comparisons) + " table comparisons"};
}

Outcome duality() {
  std::size_t good = 0;
  for (const auto& rec : any_corpus()) {
    bool all = true;
    for (std::size_t k = 0; k <= 2; ++k) all = all && verify_duality(rec, k).holds();
    good += all;
  }
  return {good == kCorpus, std::to_string(good) + "/" + std::to_string(kCorpus) + " data sets, k = 0..2"};
}

Outcome parity() {
  std::size_t good = 0, nonzero = 0;
  for (const auto& rec : even_corpus()) {
    bool all = true;
    for (auto [s, t] : tau_list(rec)) {
      if (!contributing_parity(rec.f(), s)) all = all && t == 0;
      nonzero += t != 0;
    }
    for (std::size_t k = 0; k <= 2; ++k) {
      BlockAssembly a = block_matrix_assembly(rec, k);
      all = all && a.signature == end_signature(rec, k);
      for (const auto& p : a.pairs) all = all && p.signature == 0;
    }
    good += all;
  }
  return {good == kCorpus, std::to_string(good) + "/" + std::to_string(kCorpus) +
                               " data sets (n even); nonzero tau values seen: " + std::to_string(nonzero)};
}

Outcome end_to_end() {
  const auto start = std::chrono::steady_clock::now();
  const long closed = fixtures::cp2().signature();
  SignatureReport cp2 = global_signature({fixtures::cp2_ball(), circle_bundle_over_s2(1).run(), std::nullopt, 0});
  bool trivial = true;
  for (std::size_t k = 0; k <= 2; ++k) {
    SignatureReport r =
        global_signature({fixtures::disk_times_sphere(), circle_bundle_over_s2(0).run(), std::nullopt, k});
    for (auto [s, t] : r.taus) trivial = trivial && t == 0;
    trivial = trivial && r.global == r.interior && r.paths_agree();
  }
  const auto triv_end = run_to_limit(product_bundle_page(SphereProductRing({3}).ring(), point_ring()));
  SignatureReport bundle = global_signature({fixtures::cp2_disk_bundle(), triv_end, std::nullopt, 0});
  trivial = trivial && bundle.global == bundle.interior;
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool ok = cp2.global == 1 && cp2.global == closed && cp2.paths_agree() && trivial && secs < kEndToEndSeconds;
  return {ok, "projective plane assembly " + std::to_string(cp2.global) + ", closed triangulation " +
                  std::to_string(closed) + "; trivial ends reduce to the interior: " + (trivial ? "yes" : "no") +
                  "; " + std::to_string(secs).substr(0, 5) + " s"};
}

Outcome novikov() {
  std::string detail;
  bool ok = true;
  auto s = fixtures::sphere(4);
  NovikovReport rs = novikov_check(s, star_marker(s.pair, 0));
  ok = ok && rs.holds();
  detail += "sphere " + std::to_string(rs.closed) + " = " + std::to_string(rs.first) + " + " +
            std::to_string(rs.second);
  auto x = fixtures::cp2();
  for (std::size_t v = 0; v < 9; ++v) {
    NovikovReport r = novikov_check(x, star_marker(x.pair, v));
    ok = ok && r.holds();
    if (v == 0)
      detail += "; projective plane " + std::to_string(r.closed) + " = " + std::to_string(r.first) + " + " +
                std::to_string(r.second) + " (all 9 vertex stars checked)";
  }
  return {ok, detail};
}

Outcome substrate() {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<std::size_t> size(1, 7);
  std::size_t congruences = 0, prescribed = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = size(rng);
    Matrix s = testing::random_symmetric(rng, n);
    Matrix p = testing::random_invertible(rng, n);
    Inertia a = sylvester_signature(s), b = sylvester_signature(p.transpose() * s * p);
    congruences += a.n_plus == b.n_plus && a.n_minus == b.n_minus && a.n_zero == b.n_zero;
    // a congruent copy of a diagonal form with known inertia
    std::uniform_int_distribution<int> kind(-1, 1);
    Matrix d(n, n);
    std::size_t plus = 0, minus = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const int k = kind(rng);
      d(i, i) = k;
      plus += k > 0;
      minus += k < 0;
    }
    Inertia c = sylvester_signature(p.transpose() * d * p);
    prescribed += c.n_plus == plus && c.n_minus == minus && c.n_zero == n - plus - minus;
  }
  std::size_t nullity = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t rows = size(rng), cols = size(rng);
    const std::size_t rk = std::uniform_int_distribution<std::size_t>(0, std::min(rows, cols))(rng);
    Matrix m = testing::random_rank_matrix(rng, rows, cols, rk);
    nullity += rank(m) == rk && kernel(m).dim() == cols - rk && rank(m) + kernel(m).dim() == cols;
  }
  const bool ok = congruences == 1000 && prescribed == 1000 && nullity == 1000;
  return {ok, "congruences " + std::to_string(congruences) + "/1000, prescribed inertia " +
                  std::to_string(prescribed) + "/1000, rank-nullity " + std::to_string(nullity) + "/1000"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"worked example b=6 f=5 k=1", worked_example},
      {"shift reproduction and sweep", shift},
      {"oracle equivalence", oracle},
      {"duality", duality},
      {"tau parity and cancellation", parity},
      {"end-to-end signature", end_to_end},
      {"Novikov additivity", novikov},
      {"linear algebra substrate", substrate},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.ok;
    std::cout << (o.ok ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  return failures == 0 ? 0 : 1;
}
