#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "ldlab/aih.hpp"
#include "ldlab/empirical.hpp"
#include "ldlab/error.hpp"
#include "ldlab/kernels.hpp"
#include "ldlab/numeric.hpp"
#include "ldlab/primes.hpp"
#include "ldlab/tailpredict.hpp"

using namespace ldlab;
using doctest::Approx;

TEST_CASE("zeta scan") {
  const auto t = scan_G_zeta(1e3, 1e3, 0.01);
  CHECK(t.count() == 100001);
  CHECK(t.bound == Approx(2.198080127175088).epsilon(1e-13));  // sympy/mpmath
  CHECK(t.values.back() <= t.bound);
  CHECK(t.values.front() >= -t.bound);
  const double above = t.tail(0.0);
  CHECK(above >= 0.4);
  CHECK(above <= 0.6);
  const auto primes = primes_up_to(1000);
  const std::vector<double> zero{0.0};
  CHECK(kernels::zeta_scan(primes, zero)[0] == Approx(t.bound).epsilon(1e-14));
  double prev = 1.0;
  for (double V = -3; V < 3; V += 0.1) {
    CHECK(t.tail(V) <= prev);
    prev = t.tail(V);
  }
}

TEST_CASE("character scan") {
  const auto t = scan_G_characters(101, 97);
  CHECK(t.count() == 99);
  CHECK(t.bound == Approx(1.802817201048871).epsilon(1e-13));
  for (double v : t.values) CHECK(std::abs(v) <= t.bound);
  double mean = 0;
  for (double v : t.values) mean += v;
  mean /= 99;
  // sum over all characters of chi(p) vanishes for p != 1 mod q, so the non-principal mean is -H(P)/(q-2)
  CHECK(mean == Approx(-1.802817201048871 / 99).epsilon(1e-12));

  const auto two = scan_G_characters(101, 2);
  const CharacterTable tab(101);
  std::vector<double> echo;
  for (std::uint64_t j = 1; j < 100; ++j) echo.push_back(std::cos(2 * kPi * double(j * tab.index(2) % 100) / 100) / 2);
  std::sort(echo.begin(), echo.end());
  REQUIRE(two.values.size() == echo.size());
  for (std::size_t k = 0; k < echo.size(); ++k) CHECK(two.values[k] == Approx(echo[k]).scale(1).epsilon(1e-14));
  CHECK_THROWS(scan_G_characters(100, 10));
}

TEST_CASE("character scan moments match the circle model") {
  const std::uint64_t q = 1009;
  const auto t = scan_G_characters(q, 7);
  const double principal = t.bound;
  const double ip[] = {0.5, 1.0 / 3, 0.2, 1.0 / 7};
  double model2 = 0;
  for (double x : ip) model2 += 0.5 * x * x;
  for (int k = 1; k <= 3; ++k) {
    double m = std::pow(principal, k);
    for (double v : t.values) m += std::pow(v, k);
    m /= double(q - 1);
    const double model = k == 2 ? model2 : 0.0;
    CHECK(m == Approx(model).scale(1).epsilon(1e-10));
  }
}

TEST_CASE("quadratic scan") {
  const auto t = scan_G_quadratic(1e4, 100);
  const auto discs = fundamental_discriminants(10000);
  CHECK(t.count() == discs.size());
  for (double v : t.values) CHECK(std::abs(v) <= t.bound);
  const auto two = scan_G_quadratic(1e4, 2);
  std::vector<double> echo;
  for (auto d : discs) echo.push_back(kronecker(d, 2) / 2.0);
  std::sort(echo.begin(), echo.end());
  CHECK(two.values == echo);
  // first moment: sum_p (1/p) * average of kronecker(d, p), each within its moment budget of 0
  double mean = 0, budget = 0;
  for (double v : t.values) mean += v;
  mean /= double(t.count());
  for (auto p : primes_up_to(100)) {
    const auto m = moment_quadchar(1e4, {std::int64_t(p)});
    budget += m.budget / double(p);
  }
  CHECK(std::abs(mean) <= budget);
}

TEST_CASE("psi by prime powers") {
  const PsiTable t(1000);
  CHECK(t.psi(10) == Approx(7.832014180505469).epsilon(1e-14));  // log 2520
  CHECK(t.psi(1.5) == 0.0);
  CHECK_THROWS_WITH(t.psi(2000), doctest::Contains("beyond sieve range"));
}

TEST_CASE("explicit formula") {
  const auto zeros = load_zero_table(default_zero_table_path());
  const auto none = psi_error_compare({1e3, 5e4}, zeros, 0);
  CHECK(none[0].model == 0.0);
  CHECK(none[1].model == 0.0);
  const auto rows = psi_error_compare(log_spaced(1e3, 1e5, 200), zeros, 2000);
  std::vector<double> a, b;
  for (const auto& r : rows) a.push_back(r.actual), b.push_back(r.model);
  CHECK(pearson_correlation(a, b) >= 0.9);
  CHECK_THROWS(psi_error_compare({50.0}, zeros, 10));
  CHECK_THROWS(psi_error_compare({1e3}, zeros, 5000));
}

TEST_CASE("character tails follow the prediction trend") {
  const std::uint64_t q = 10007;
  const auto t = scan_G_characters(q, 1e4);
  const auto f = calibrated(WeightFamily::primes());
  const double e = eta(RandomModel::circle()).eta;
  RangeSpec r;
  r.Q = 1e4;
  int checked = 0;
  // upper tail only: the formula describes large deviations, not the bulk
  for (double V = 0.0; V < t.values.back(); V += 0.02) {
    const double frac = t.tail(V);
    if (frac > 0.25) continue;
    if (frac < 100.0 / double(q - 2)) break;
    const double lam = -std::log(frac);
    const double pred = predict_tail_main(f, e, V, r).lambda;
    CHECK(std::abs(std::log(lam / pred)) <= 1.0);
    ++checked;
  }
  CHECK(checked >= 20);
}
