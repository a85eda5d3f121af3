#include <doctest.h>

#include <cmath>
#include <functional>

#include "ldlab/error.hpp"
#include "ldlab/raresim.hpp"
#include "ldlab/tailpredict.hpp"

using namespace ldlab;
using doctest::Approx;

namespace {

Ensemble make(const char* family, const char* model, double Q) {
  return Ensemble(WeightFamily::parse(family), ModelAssignment::parse(model), Q);
}

// Brute-force P(sum y_i w_i > V) over the product of finite laws.
double brute(const Ensemble& e, double V) {
  double total = 0.0;
  std::function<void(std::size_t, double, double)> rec = [&](std::size_t i, double h, double pr) {
    if (i == e.size()) {
      if (h > V) total += pr;
      return;
    }
    const auto& m = e.model(i);
    for (std::size_t k = 0; k < m.values().size(); ++k) rec(i + 1, h + m.values()[k] * e.inv_q()[i], pr * m.probs()[k]);
  };
  rec(0, 0.0, 1.0);
  return total;
}

}  // namespace

TEST_CASE("single coin") {
  const auto e = make("integers", "rademacher", 1);
  const auto r = direct_estimate(e, 0.5, 1'000'000, 1);
  CHECK(std::abs(std::exp(r.log_p_hat) - 0.5) < 0.0015);
  CHECK(r.method == EstimateMethod::direct);
  CHECK(r.n_samples == 1'000'000);
}

TEST_CASE("exact enumeration against brute force") {
  const auto e = make("integers", "rademacher", 3);
  const auto ex = exact_enumeration(e, 1.5);
  // only (+,+,+) = 11/6 exceeds 3/2
  CHECK(std::exp(ex.log_p_hat) == Approx(0.125).epsilon(1e-14));
  CHECK(std::exp(ex.log_p_hat) == Approx(brute(e, 1.5)).epsilon(1e-14));
  CHECK(ex.stderr_rel == 0.0);

  const auto rz = make("primes", "radzero:3", 5);
  CHECK(std::exp(exact_enumeration(rz, 0.0).log_p_hat) == Approx(brute(rz, 0.0)).epsilon(1e-14));
  const auto rp = make("primes", "radzero:p", 30);
  CHECK(std::exp(exact_enumeration(rp, 0.4).log_p_hat) == Approx(brute(rp, 0.4)).epsilon(1e-12));

  CHECK(std::isinf(exact_enumeration(e, 2.0).log_p_hat));
  CHECK_THROWS_WITH(exact_enumeration(make("integers", "rademacher", 40), 1.0),
                    doctest::Contains("state space too large"));
  CHECK_THROWS(exact_enumeration(make("integers", "circle", 3), 1.0));
}

TEST_CASE("zero hits above the maximum") {
  const auto e = make("primes", "circle", 100);
  const auto r = direct_estimate(e, e.H() + 0.01, 10000, 3);
  CHECK(r.zero_hits);
  CHECK(std::isinf(r.log_p_hat));
  CHECK(r.upper_95 == Approx(3.0 / 10000));
}

TEST_CASE("zero tilt is the direct estimator") {
  const auto e = make("integers", "rademacher", 10);
  const auto d = direct_estimate(e, 1.0, 50000, 9);
  const auto t = tilted_estimate(e, 1.0, 0.0, 50000, 9);
  CHECK(d.log_p_hat == t.log_p_hat);
  CHECK(d.stderr_rel == t.stderr_rel);
}

TEST_CASE("tilted estimate of a tiny instance") {
  const auto e = make("integers", "rademacher", 3);
  const auto t = tilted_estimate(e, 1.5, 5.0, 100000, 4);
  const double p = std::exp(t.log_p_hat);
  CHECK(std::abs(p - 0.125) <= 3 * t.stderr_rel * p);
  CHECK(t.method == EstimateMethod::tilted);
  CHECK(t.log_p_hat <= 0.0);
}

TEST_CASE("unbiasedness over seeded runs") {
  int ok = 0;
  for (int run = 0; run < 100; ++run) {
    const double Q = run % 2 ? 8 + run % 10 : 5 + run % 5;
    const auto e = make("integers", run % 2 ? "rademacher" : "radzero:3", Q);
    const double V = 0.4 * e.H();
    const double exact = brute(e, V);
    const auto t = tilted_estimate(e, V, 3.0, 20000, 1000 + std::uint64_t(run));
    ok += std::abs(std::exp(t.log_p_hat) - exact) <= 3 * t.stderr_rel * std::exp(t.log_p_hat);
  }
  CHECK(ok >= 99);
}

TEST_CASE("direct and tilted agree when p is not small") {
  const auto f = calibrated(WeightFamily::primes());
  const Ensemble e(f, ModelAssignment::parse("circle"), 1000);
  RangeSpec r;
  r.Q = 1000;
  for (double V : {0.3, 0.8, 1.2}) {
    const double s = predict_tail_main(f, RandomModel::circle(), V, r).s;
    const auto d = direct_estimate(e, V, 200000, 5);
    const auto t = tilted_estimate(e, V, s, 200000, 6);
    const double pd = std::exp(d.log_p_hat), pt = std::exp(t.log_p_hat);
    REQUIRE(pd >= 1e-3);
    CHECK(std::abs(pd - pt) <= 4 * std::hypot(d.stderr_rel * pd, t.stderr_rel * pt));
  }
}

TEST_CASE("the saddle tilt is near variance-optimal") {
  const auto f = calibrated(WeightFamily::primes());
  const Ensemble e(f, ModelAssignment::parse("circle"), 1000);
  const double V = 1.9;
  RangeSpec r;
  r.Q = 1000;
  const double s0 = predict_tail_main(f, RandomModel::circle(), V, r).s;
  const double at_saddle = tilted_estimate(e, V, s0, 20000, 8).stderr_rel;
  double best = at_saddle;
  for (double m : {0.25, 0.5, 0.75, 1.5, 2.0, 4.0})
    best = std::min(best, tilted_estimate(e, V, s0 * m, 20000, 8).stderr_rel);
  CHECK(at_saddle <= 3 * best);
}

TEST_CASE("reproducible for fixed seed and workers") {
  const auto e = make("primes", "circle", 1e4);
  for (int w : {1, 3}) {
    SimOptions o;
    o.workers = w;
    const auto a = tilted_estimate(e, 1.9, 150.0, 20000, 77, o);
    const auto b = tilted_estimate(e, 1.9, 150.0, 20000, 77, o);
    CHECK(a.log_p_hat == b.log_p_hat);
    CHECK(a.stderr_rel == b.stderr_rel);
    CHECK(a.hits == b.hits);
  }
  SimOptions g;
  g.head_cutoff = 100;
  g.reuse = 10;
  const auto a = tilted_estimate(e, 1.9, 150.0, 20000, 77, g);
  const auto b = tilted_estimate(e, 1.9, 150.0, 20000, 77, g);
  CHECK(a.log_p_hat == b.log_p_hat);
  g.reuse = 7;
  CHECK_THROWS_WITH(tilted_estimate(e, 1.9, 150.0, 20000, 77, g), doctest::Contains("multiple of the reuse"));
  CHECK_THROWS(direct_estimate(e, 1.0, 0, 1));
}

TEST_CASE("grouped tails stay unbiased") {
  const auto e = make("integers", "rademacher", 12);
  const double exact = brute(e, 1.9);
  SimOptions g;
  g.head_cutoff = 4;
  g.reuse = 8;
  const auto t = tilted_estimate(e, 1.9, 4.0, 80000, 21, g);
  const double p = std::exp(t.log_p_hat);
  CHECK(std::abs(p - exact) <= 3 * t.stderr_rel * p);
}

TEST_CASE("empirical CDFs and the convergence budget") {
  const auto e = make("primes", "circle", 1000);
  const auto a = empirical_cdf(e, 20000, 1);
  CHECK(compare_cdfs(a, a).sup_distance == 0.0);
  CHECK(a.at(-100) == 0.0);
  CHECK(a.at(100) == 1.0);
  CHECK_THROWS(empirical_cdf(e, 100, 1));
  // H(1e5) from sympy/mpmath; second term (log 1e5)^(-1/3) / 1e5^(1/3)
  CHECK(berry_esseen_budget(2.705272179047264, 0.0, 1e5, 1e3) ==
        Approx(2.705272179047264e-3 + 0.009541238874598887).epsilon(1e-12));
  const auto b = empirical_cdf(e, 20000, 2);
  const auto c = compare_cdfs(a, b, 1e3);
  CHECK(c.sup_distance > 0.0);
  CHECK(c.sup_distance <= 1.0);
  CHECK(c.berry_esseen_budget == Approx(berry_esseen_budget(e.H(), 0.0, 1000, 1e3)));
}

TEST_CASE("nested CDFs share draws across truncation levels") {
  const auto e = make("primes", "circle", 1000);
  const std::vector<double> levels{10, 100, 1000};
  const auto c = empirical_cdf_nested(e, levels, 20000, 4);
  REQUIRE(c.size() == 3);
  CHECK(c[2].values == empirical_cdf(e, 20000, 4).values);
  CHECK(c[0].H == Approx(1.0 / 2 + 1.0 / 3 + 1.0 / 5 + 1.0 / 7).epsilon(1e-14));
  // H(10) sums four terms bounded by 1/p each
  CHECK(c[0].values.front() >= -c[0].H - 1e-12);
  CHECK(c[0].values.back() <= c[0].H + 1e-12);
  // coupled levels: adding primes in (100, 1000] barely moves the CDF
  CHECK(compare_cdfs(c[1], c[2]).sup_distance < compare_cdfs(c[0], c[2]).sup_distance);
  CHECK_THROWS(empirical_cdf_nested(e, std::vector<double>{100, 10}, 20000, 1));
  CHECK_THROWS(empirical_cdf_nested(e, std::vector<double>{1e4}, 20000, 1));
}
