#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "ldlab/error.hpp"
#include "ldlab/numeric.hpp"
#include "ldlab/primes.hpp"
#include "ldlab/weights.hpp"

using namespace ldlab;
using doctest::Approx;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& body) {
  const auto p = std::filesystem::temp_directory_path() / name;
  std::ofstream(p) << body;
  return p;
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an ldlab::Error");
  return ErrorKind::numeric;
}

}  // namespace

TEST_CASE("sieve agrees with the plain reference") {
  CHECK(primes_up_to(10) == std::vector<std::uint64_t>{2, 3, 5, 7});
  CHECK(primes_up_to(1'000'003) == primes_up_to_reference(1'000'003));
  CHECK(primes_up_to(1).empty());
}

TEST_CASE("enumerate integers and primes") {
  CHECK(enumerate_weights(WeightFamily::integers(), 3.5) == std::vector<double>{1, 2, 3});
  CHECK(enumerate_weights(WeightFamily::primes(), 10) == std::vector<double>{2, 3, 5, 7});
}

TEST_CASE("local factor weight at p = 2, m = 2") {
  // mpmath: 1/(log 2 + log(3/4)/2)
  CHECK(lfunction_local_weight(2, 2) == Approx(1.8204784532536748).epsilon(1e-14));
  const auto w = enumerate_labeled(WeightFamily::lfunction_local(2), 3.0);
  REQUIRE(w.size() >= 1);
  CHECK(w.label[0] == 2);
  CHECK(w.q[0] == Approx(1.8204784532536748).epsilon(1e-14));
}

TEST_CASE("counting") {
  CHECK(counting(WeightFamily::primes(), 10) == 4);
  CHECK(counting(WeightFamily::integers(), 0.5) == 0);
  auto zeros = std::make_shared<const ZeroTable>(load_zero_table(default_zero_table_path()));
  CHECK(counting(WeightFamily::zeta_zeros(zeros), 20) == 2);
}

TEST_CASE("harmonic sums") {
  CHECK(harmonic_sum(WeightFamily::primes(), 10) == Approx(247.0 / 210.0).epsilon(1e-15));
  CHECK(harmonic_sum(WeightFamily::integers(), 10) == Approx(7381.0 / 2520.0).epsilon(1e-15));
  CHECK(harmonic_sum(WeightFamily::integers(), 0.9) == 0.0);
  CHECK(harmonic_sum(WeightFamily::primes(), 0.9) == 0.0);
  // sympy sieve + mpmath summation
  CHECK(harmonic_sum(WeightFamily::primes(), 1e5) == Approx(2.705272179047264).epsilon(1e-13));
}

TEST_CASE("harmonic asymptotic") {
  const auto primes = WeightFamily::primes().with_c_A(0.2614972128);
  CHECK(harmonic_asymptotic(primes, 1e6) == Approx(2.8872891272760108).epsilon(1e-12));
  const auto ints = WeightFamily::integers().with_c_A(kEulerGamma);
  CHECK(harmonic_asymptotic(ints, std::exp(10.0)) == Approx(10.0 + kEulerGamma).epsilon(1e-13));

  auto zeros = std::make_shared<const ZeroTable>(load_zero_table(default_zero_table_path()));
  const auto zeta = WeightFamily::zeta_zeros(zeros).with_c_A(0.25);
  CHECK(harmonic_asymptotic(zeta, 1000) == Approx(1.7766365217317267 + 0.25).epsilon(1e-12));
  // below the domain x >= 4 (2 + beta)^2
  CHECK(kind_of([&] { harmonic_asymptotic(zeta, 100); }) == ErrorKind::precondition);
  CHECK_THROWS_WITH(harmonic_asymptotic(WeightFamily::synthetic(1, 1, 2), 1e4),
                    doctest::Contains("constant not calibrated"));
}

TEST_CASE("residuals against the asymptotic shrink along the grid") {
  const auto primes = WeightFamily::primes().with_c_A(0.2614972128);
  double prev = kInf;
  for (double x : {1e3, 1e4, 1e5, 1e6}) {
    const double r = std::abs(harmonic_sum(primes, x) - harmonic_asymptotic(primes, x));
    CHECK(r < prev);
    prev = r;
  }
}

TEST_CASE("constant estimation") {
  const std::vector<double> g{1e4, 1e5, 1e6};
  CHECK(estimate_CA(WeightFamily::primes(), g).c_A == Approx(0.2614972128).epsilon(0.01 / 0.2615));
  const std::vector<double> gi{1e3, 1e4};
  CHECK(std::abs(estimate_CA(WeightFamily::integers(), gi).c_A - kEulerGamma) < 1e-3);
  const auto lfl = WeightFamily::lfunction_local(2);
  // mpmath: gamma - log(zeta(2))/2
  CHECK(lfunction_local_constant(2) == Approx(0.3283655136661602).epsilon(1e-13));
  const auto cal = estimate_CA(lfl, default_calibration_grid(lfl));
  CHECK(std::abs(cal.c_A - 0.3283655136661602) < 5e-3);
  const std::vector<double> bad{1e5, 1e4};
  CHECK(kind_of([&] { estimate_CA(WeightFamily::primes(), bad); }) == ErrorKind::precondition);
}

TEST_CASE("harmonic differences") {
  const auto d0 = harmonic_diff(WeightFamily::primes(), 1e4, 1e4);
  CHECK(d0.exact == 0.0);
  CHECK(d0.predicted == 0.0);

  const auto dp = harmonic_diff(WeightFamily::primes(), 2e5, 1e5);
  CHECK(dp.exact == Approx(0.05834195333597616).epsilon(1e-12));
  CHECK(dp.predicted == Approx(0.06020599913279624).epsilon(1e-13));

  const auto di = harmonic_diff(WeightFamily::integers(), std::exp(1.0) * 100, 100);
  CHECK(di.exact == Approx(0.9938008518956492).epsilon(1e-13));
  CHECK(di.predicted == Approx(1.0).epsilon(1e-13));

  CHECK_THROWS_WITH(harmonic_diff(WeightFamily::primes(), 1e6, 10), doctest::Contains("hypothesis violated"));
}

TEST_CASE("difference estimate consistency with a modest constant") {
  for (const auto& f : {WeightFamily::primes(), WeightFamily::integers()}) {
    for (double v : {1e3, 1e4, 1e5}) {
      for (double tau : {-0.5, 0.25, 1.0, 2.0}) {
        const double u = v * std::exp(tau);
        const auto d = harmonic_diff(f, u, v);
        const double lv = std::log(v);
        const double scale = (std::abs(tau) + tau * tau) * std::pow(lv, f.A - 2) + std::pow(lv, f.A - f.B);
        CHECK(std::abs(d.exact - d.predicted) <= 20 * scale);
      }
    }
  }
}

TEST_CASE("zero table loading") {
  const auto one = write_temp("ldlab_z1.txt", "14.134725142\n");
  const auto t = load_zero_table(one);
  REQUIRE(t.size() == 1);
  CHECK(t.gamma(0) == 14.134725142);
  CHECK(t.rho_abs(0) > t.gamma(0));

  const auto empty = write_temp("ldlab_z0.txt", "");
  auto et = std::make_shared<const ZeroTable>(load_zero_table(empty));
  CHECK(et->empty());
  CHECK_THROWS_WITH(counting(WeightFamily::zeta_zeros(et), 20), doctest::Contains("fixture range exceeded"));

  const auto bad = write_temp("ldlab_z2.txt", "2.0\n1.0\n");
  CHECK(kind_of([&] { load_zero_table(bad); }) == ErrorKind::fixture);
  CHECK(kind_of([&] { load_zero_table("/nonexistent/zeros.txt"); }) == ErrorKind::fixture);
}

TEST_CASE("bundled zero table") {
  const auto t = load_zero_table(default_zero_table_path());
  CHECK(t.size() == 2000);
  CHECK(t.gamma(0) == Approx(14.134725141734695).epsilon(1e-12));
  CHECK(t.gamma(1999) == Approx(2515.28648292471).epsilon(1e-12));
  auto zeros = std::make_shared<const ZeroTable>(t);
  CHECK_THROWS_WITH(counting(WeightFamily::zeta_zeros(zeros), 3000), doctest::Contains("fixture range exceeded"));
}

TEST_CASE("counting matches enumeration at random points") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(1.0, 5000.0);
  auto zeros = std::make_shared<const ZeroTable>(load_zero_table(default_zero_table_path()));
  for (const auto& f : {WeightFamily::integers(), WeightFamily::primes(), WeightFamily::synthetic(1, 1, 2),
                        WeightFamily::lfunction_local(3), WeightFamily::zeta_zeros(zeros)}) {
    const double top = f.kind == FamilyKind::zeta_zeros ? 2500.0 : 5000.0;
    const auto all = enumerate_weights(f, top);
    CHECK(std::is_sorted(all.begin(), all.end()));
    CHECK(all.front() >= 1.0);
    for (int k = 0; k < 200; ++k) {
      const double x = std::min(u(gen), top);
      const auto n = std::size_t(std::upper_bound(all.begin(), all.end(), x) - all.begin());
      CHECK(counting(f, x) == n);
    }
  }
}

TEST_CASE("harmonic table") {
  const HarmonicTable t(WeightFamily::primes(), 100);
  CHECK(t.H(10) == Approx(247.0 / 210.0));
  CHECK(*t.smallest_weight_reaching(1.1) == 7.0);
  CHECK(*t.smallest_weight_reaching(0.4) == 2.0);
  CHECK_FALSE(t.smallest_weight_reaching(10.0).has_value());
}

TEST_CASE("kronecker symbol and fundamental discriminants") {
  CHECK(kronecker(17, 1) == 1);
  CHECK(kronecker(5, 3) == -1);
  CHECK(kronecker(-4, 5) == 1);
  CHECK(kronecker(8, 2) == 0);
  // Euler's criterion for odd primes as an oracle
  for (std::uint64_t p : {3, 5, 7, 11, 13, 101}) {
    for (std::int64_t d = -60; d <= 60; ++d) {
      const std::uint64_t r = std::uint64_t(((d % std::int64_t(p)) + std::int64_t(p)) % std::int64_t(p));
      const std::uint64_t e = mod_pow(r, (p - 1) / 2, p);
      const int euler = r == 0 ? 0 : (e == 1 ? 1 : -1);
      CHECK(kronecker(d, p) == euler);
    }
  }
  auto d12 = fundamental_discriminants(12);
  std::sort(d12.begin(), d12.end());
  CHECK(d12 == std::vector<std::int64_t>{-11, -8, -7, -4, -3, 5, 8, 12});
  CHECK(fundamental_discriminants(3) == std::vector<std::int64_t>{-3});
  const auto big = fundamental_discriminants(1000);
  CHECK(std::find(big.begin(), big.end(), 9) == big.end());
  CHECK(std::find(big.begin(), big.end(), 1) == big.end());
}
