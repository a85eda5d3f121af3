#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include "ldlab/aih.hpp"
#include "ldlab/error.hpp"
#include "ldlab/numeric.hpp"
#include "ldlab/primes.hpp"

using namespace ldlab;
using doctest::Approx;

namespace {

// All multisets of size 1..3 from `base`.
std::vector<std::vector<std::int64_t>> multisets(const std::vector<std::int64_t>& base, int max_len = 3) {
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> cur;
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    if (!cur.empty()) out.push_back(cur);
    if (int(cur.size()) == max_len) return;
    for (std::size_t i = from; i < base.size(); ++i) {
      cur.push_back(base[i]);
      rec(i);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

double product(const std::vector<std::int64_t>& v) {
  double p = 1;
  for (auto x : v) p *= double(x);
  return p;
}

// Character average by brute force: primitive root by order search, index by walking powers.
double brute_character_moment(std::uint64_t q, const std::vector<std::int64_t>& primes) {
  std::uint64_t g = 2;
  for (;; ++g) {
    std::uint64_t x = 1, order = 0;
    do {
      x = x * g % q;
      ++order;
    } while (x != 1);
    if (order == q - 1) break;
  }
  std::vector<std::uint64_t> ind(q);
  std::uint64_t x = 1;
  for (std::uint64_t k = 0; k + 1 < q; ++k) {
    ind[x] = k;
    x = x * g % q;
  }
  double sum = 0;
  for (std::uint64_t j = 0; j + 1 < q; ++j) {
    double prod = 1;
    for (auto p : primes) prod *= std::cos(2 * kPi * double(j * ind[std::uint64_t(p) % q] % (q - 1)) / double(q - 1));
    sum += prod;
  }
  return sum / double(q - 1);
}

}  // namespace

TEST_CASE("p^it moments") {
  const auto a = moment_pit({2}, 1000);
  CHECK(a.model == 0.0);
  CHECK(std::abs(a.empirical) <= 2.0 / (1000 * std::log(2.0)));
  CHECK(a.budget == Approx(2.0 / (1000 * std::log(2.0))));
  CHECK(a.pass);
  const auto b = moment_pit({2, 2}, 1e4);
  CHECK(b.model == 0.5);
  CHECK(std::abs(b.empirical - 0.5) < 1e-4);
  const auto c = moment_pit({2, 3}, 1e4);
  CHECK(c.model == 0.0);
  CHECK(std::abs(c.empirical) < 1e-3);
  CHECK(c.ell == 2);
}

TEST_CASE("p^it closed form against Simpson") {
  for (const auto& m : multisets({2, 3, 5, 7})) {
    const auto r = moment_pit(m, 1000);
    CHECK(std::abs(r.empirical - moment_pit_numeric(m, 1000)) <= 1e-8);
    CHECK(std::abs(r.empirical - r.model) <= r.budget);
  }
}

TEST_CASE("character moments") {
  CHECK(moment_characters(7, {2, 3}).empirical == Approx(0.0).scale(1));
  CHECK(moment_characters(7, {2, 3}).model == 0.0);
  const auto two = moment_characters(7, {2, 2});
  CHECK(two.empirical == Approx(0.5).epsilon(1e-14));
  CHECK(two.model == 0.5);
  CHECK(two.pass);
  CHECK(std::abs(moment_characters(7, {2}).empirical) < 1e-15);

  for (std::uint64_t q : {101, 1009}) {
    const CharacterTable table(q);
    CHECK(table.orthogonality_residual() < 1e-12);
    for (const auto& m : multisets({2, 3, 5, 7, 11, 13})) {
      if (product(m) >= double(q)) continue;
      const auto r = moment_characters(table, m);
      CHECK(r.in_range);
      CHECK(r.pass);
      CHECK(std::abs(r.empirical - r.model) <= 1e-10);
      CHECK(r.empirical == Approx(brute_character_moment(q, m)).scale(1).epsilon(1e-12));
    }
  }
  const auto out = moment_characters(101, {7, 11, 13});
  CHECK_FALSE(out.in_range);
  CHECK(out.note.find("range violated") != std::string::npos);
}

TEST_CASE("character table basics") {
  const CharacterTable t(7);
  CHECK(t.primitive_root() == 3);
  CHECK(t.index(1) == 0);
  CHECK(t.index(3) == 1);
  CHECK(std::abs(t.chi(0, 5) - std::complex<double>(1, 0)) < 1e-15);
  CHECK(std::abs(std::abs(t.chi(2, 4)) - 1.0) < 1e-15);
}

TEST_CASE("quadratic character moments") {
  const double x = 1e4;
  const auto discs = fundamental_discriminants(std::uint64_t(x));
  double coprime3 = 0;
  for (auto d : discs) coprime3 += (d % 3 != 0);
  const auto nine = moment_quadchar(x, {3, 3});
  CHECK(nine.model == Approx(0.75).epsilon(1e-15));
  CHECK(nine.empirical == Approx(coprime3 / double(discs.size())).epsilon(1e-14));
  CHECK(std::abs(nine.empirical - 0.75) <= std::pow(x, -0.25));
  CHECK(nine.pass);
  CHECK(moment_quadchar(x, {2, 2}).model == Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(moment_quadchar(x, {3}).model == 0.0);
  for (const auto& m : multisets({2, 3, 5, 7, 11, 13})) CHECK(moment_quadchar(x, m).pass);
}

TEST_CASE("quadratic character budget") {
  // mpmath transcription of the bound at (1e4, 10, 6, 2) and with n = 1
  CHECK(quadchar_error_budget(1e4, 10, 6, 2) == Approx(10.671514350092519).epsilon(1e-12));
  CHECK(quadchar_error_budget(1e4, 10, 1, 2) == Approx(1.2115276586285884).epsilon(1e-12));
  double prev = kInf;
  for (double x = 1e3; x < 1e9; x *= 10) {
    const double b = quadchar_error_budget(x, 10, 30, 2);
    CHECK(b < prev);
    prev = b;
  }
  CHECK(quadchar_default_k(1e4) >= 1);
}

TEST_CASE("Kloosterman sums") {
  CHECK(kloosterman(3, 1, 1) == Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(kloosterman(5, 0, 1) == Approx(-1.0 / std::sqrt(5.0)).epsilon(1e-14));
  std::mt19937_64 gen(17);
  const auto primes = primes_up_to(2000);
  for (int k = 0; k < 10000; ++k) {
    const std::uint64_t q = primes[3 + gen() % (primes.size() - 3)];
    const auto a = std::int64_t(gen() % q), b = std::int64_t(1 + gen() % (q - 1));
    const double v = kloosterman(q, a, b);  // throws on a large imaginary part
    CHECK(std::abs(v) <= 2.0 + 1e-9);
    if (k % 50 == 0) CHECK(v == Approx(kloosterman(q, b, a)).scale(1).epsilon(1e-12));
  }
}

TEST_CASE("Kloosterman moments against Sato-Tate") {
  const auto one = moment_kloosterman(499, {0});
  CHECK(one.model == 0.0);
  CHECK(one.budget == Approx(10 * 2 * 1 / std::sqrt(499.0)));
  CHECK(one.pass);
  const auto eq = moment_kloosterman(499, {0, 0});
  CHECK(eq.model == 1.0);
  CHECK(eq.pass);
  const auto ds = moment_kloosterman(499, {0, 1});
  CHECK(ds.model == 0.0);
  CHECK(ds.pass);
  CHECK_THROWS_WITH(moment_kloosterman(1009, {0}), doctest::Contains("sampled mode"));
  const auto sm = moment_kloosterman(1009, {0, 0}, KloostermanSampling{20000, 7});
  CHECK(sm.pass);
  CHECK(sm.budget > 10 * 4 * 2 / std::sqrt(1009.0));
  CHECK_THROWS(moment_kloosterman(101, {0, 1, 2, 3}));
}

TEST_CASE("Chebyshev coefficients and the Hecke identity") {
  CHECK(std::abs(chebyshev_coeff(1, 0)) < 1e-15);
  CHECK(chebyshev_coeff(1, 1) == Approx(0.5).epsilon(1e-14));
  CHECK(chebyshev_coeff(2, 0) == Approx(0.25).epsilon(1e-14));
  std::vector<double> grid;
  for (int k = 1; k < 200; ++k) grid.push_back(kPi * k / 200);
  CHECK(hecke_identity_check(3, grid) < 1e-12);
  CHECK(hecke_identity_check(12, grid) < 1e-12);
  for (int a = 0; a <= 20; ++a) {
    CHECK(chebyshev_coeff(a, 0) == Approx(sato_tate_moment(a)).scale(1).epsilon(1e-12));
    // quadrature oracle for the moment
    const double q = integrate_simpson(
        [a](double t) { return 2 / kPi * std::pow(std::cos(t), a) * std::sin(t) * std::sin(t); }, 0, kPi, 20000);
    CHECK(sato_tate_moment(a) == Approx(q).scale(1).epsilon(1e-10));
  }
  CHECK(sato_tate_moment(0) == 1.0);
  CHECK(sato_tate_moment(1) == 0.0);
  CHECK(sato_tate_moment(4) == Approx(0.125).epsilon(1e-15));
}

TEST_CASE("moment-generating comparison") {
  const auto z = moment_match_check(ArithmeticFamily::characters, 1009, 7, 0.0);
  CHECK(z.empirical == Approx(1.0).epsilon(1e-14));
  CHECK(z.model == 1.0);
  CHECK(std::abs(z.difference) < 1e-14);
  const auto one = moment_match_check(ArithmeticFamily::characters, 1009, 7, 1.0);
  CHECK(one.L == 3.0);
  CHECK(one.budget == Approx(10 * std::exp(-1.5)));
  CHECK(std::abs(one.difference) <= one.budget);
  const auto pit = moment_match_check(ArithmeticFamily::pit, 1e4, 7, 0.5);
  CHECK(std::abs(pit.difference) <= pit.budget);
}
