#include <doctest.h>

#include <cmath>
#include <vector>

#include "ldlab/error.hpp"
#include "ldlab/models.hpp"
#include "ldlab/numeric.hpp"
#include "ldlab/rng.hpp"

using namespace ldlab;
using doctest::Approx;

namespace {

std::vector<RandomModel> builtins() {
  std::vector<RandomModel> out;
  for (const char* s : {"circle", "roots:3", "roots:6", "rademacher", "radzero:5", "satotate", "lfl:5:2",
                        "lfl:3:inf"})
    out.push_back(RandomModel::parse(s));
  return out;
}

}  // namespace

TEST_CASE("mgf closed forms") {
  for (const auto& m : builtins()) CHECK(m.mgf(0.0) == Approx(1.0).epsilon(1e-15));
  CHECK(RandomModel::rademacher().mgf(1.0) == Approx(1.5430806348152437).epsilon(1e-14));
  // I_1(2), mpmath
  CHECK(RandomModel::satotate().mgf(2.0) == Approx(1.5906368546373291).epsilon(1e-13));
  CHECK(RandomModel::radzero(3).mgf(1.0) == Approx((3 * std::cosh(1.0) + 1) / 4).epsilon(1e-14));
  const auto r3 = RandomModel::roots(3);
  CHECK(r3.mgf(1.5) == Approx((std::exp(1.5) + 2 * std::exp(-0.75)) / 3).epsilon(1e-14));
}

TEST_CASE("log mgf is finite far out") {
  for (const auto& m : builtins()) {
    for (double t : {800.0, 1e5, 1e12, -1e5}) {
      CHECK(std::isfinite(m.log_mgf(t)));
      CHECK(std::isfinite(m.log_mgf_shifted(t)));
    }
  }
}

TEST_CASE("f and its derivative") {
  const auto rad = RandomModel::rademacher();
  for (const auto& m : builtins()) CHECK(m.f(0.0) == 0.0);
  CHECK(rad.f(2.0) == Approx(-0.6749972526421356).epsilon(1e-14));
  CHECK(rad.f_prime(0.5) == Approx(0.46211715726000974).epsilon(1e-14));
  CHECK(rad.f_prime(2.0) == Approx(-0.035972419924183116).epsilon(1e-12));
  CHECK_THROWS_WITH(rad.f_prime(1.0), doctest::Contains("kink"));
  const auto deg = RandomModel::degenerate();
  CHECK(deg.f(0.5) == 0.0);
  CHECK(deg.f(3.0) == -3.0);
  CHECK(deg.f_prime(0.5) == 0.0);
}

TEST_CASE("eta by two schemes against high-precision values") {
  // mpmath quad of f(u)/u^2 at 30 digits
  struct Row {
    const char* spec;
    double eta;
  };
  for (const Row& r : {Row{"rademacher", -0.18121985982797669}, Row{"circle", -1.089326522343551},
                       Row{"satotate", -1.8915854445803078}, Row{"roots:3", -0.70586961181447505}}) {
    const EtaResult e = eta(RandomModel::parse(r.spec));
    CHECK(e.discrepancy <= 1e-8);
    CHECK(e.eta == e.scheme_a);
    CHECK(e.eta == Approx(r.eta).epsilon(1e-8));
  }
  for (const auto& m : builtins()) CHECK(eta(m).discrepancy <= 1e-8);
  CHECK_THROWS_WITH(eta(RandomModel::degenerate()), doctest::Contains("CRVH violated"));
}

TEST_CASE("lower-tail check") {
  const auto rad = check_crvh(RandomModel::rademacher(), {2.0}, 100000, 5);
  CHECK(rad.rows[0].exact == 0.5);
  CHECK(rad.rows[0].holds);
  CHECK(rad.support_ok);
  CHECK(rad.mean_ok);
  const auto circ = check_crvh(RandomModel::circle(), {4.0, 10.0}, 1'000'000, 5);
  // arccos(3/4)/pi
  CHECK(circ.rows[0].exact == Approx(0.23005345616261589).epsilon(1e-12));
  CHECK(std::abs(circ.rows[0].empirical - circ.rows[0].exact) < 0.002);
  const auto deg = check_crvh(RandomModel::degenerate(), {2.0}, 1000, 5);
  CHECK(deg.rows[0].exact == 0.0);
  CHECK_FALSE(deg.rows[0].holds);
  CHECK(std::isinf(RandomModel::degenerate().crvh_c()));
  for (const auto& m : builtins()) {
    CHECK(std::isfinite(m.crvh_c()));
    for (int t = 1; t <= 50; ++t)
      CHECK(m.upper_tail(1.0 - 1.0 / t) >= std::exp(-m.crvh_c() * std::exp(std::sqrt(double(t)))) * (1 - 1e-12));
  }
}

TEST_CASE("sampling laws") {
  Rng rng = make_stream(11, 0);
  const int n = 1'000'000;
  for (const auto& m : builtins()) {
    double sum = 0.0, worst = 0.0;
    for (int k = 0; k < 100'000; ++k) {
      const double y = m.sample(rng);
      sum += y;
      worst = std::max(worst, std::abs(y));
    }
    CHECK(worst <= 1.0 + 1e-12);
    CHECK(std::abs(sum / 1e5) < 5.0 / std::sqrt(1e5));
  }
  double rs = 0, zeros = 0, y2 = 0;
  const auto rad = RandomModel::rademacher(), rz = RandomModel::radzero(3), st = RandomModel::satotate();
  for (int k = 0; k < n; ++k) {
    rs += rad.sample(rng);
    zeros += rz.sample(rng) == 0.0;
    const double y = st.sample(rng);
    y2 += y * y;
  }
  CHECK(std::abs(rs / n) < 0.005);
  CHECK(std::abs(zeros / n - 0.25) < 0.002);
  CHECK(std::abs(y2 / n - 0.25) < 0.002);
}

TEST_CASE("moments") {
  for (const auto& m : builtins()) {
    CHECK(std::abs(m.moment(1)) < 1e-12);
    CHECK(m.moment(2) > 0.0);
  }
  CHECK(RandomModel::circle().moment(2) == Approx(0.5));
  CHECK(RandomModel::satotate().moment(2) == Approx(0.25));
  CHECK(RandomModel::satotate().moment(4) == Approx(0.125));
  CHECK(RandomModel::radzero(3).moment(2) == Approx(0.75));
}

TEST_CASE("tilted sampling") {
  Rng rng = make_stream(12, 0);
  const int n = 1'000'000;
  const TiltedSampler r(RandomModel::rademacher(), std::log(3.0));
  int plus = 0;
  for (int k = 0; k < n; ++k) plus += r(rng) > 0;
  CHECK(std::abs(double(plus) / n - 0.9) < 0.002);

  const TiltedSampler z(RandomModel::radzero(3), 10.0);
  plus = 0;
  for (int k = 0; k < 100'000; ++k) plus += z(rng) == 1.0;
  CHECK(double(plus) / 1e5 > 0.999);

  const TiltedSampler none(RandomModel::circle(), 0.0);
  double s2 = 0;
  for (int k = 0; k < 200'000; ++k) {
    const double y = none(rng);
    s2 += y * y;
  }
  CHECK(std::abs(s2 / 2e5 - 0.5) < 0.005);
}

TEST_CASE("tilted mean identity against a finite difference") {
  Rng rng = make_stream(13, 0);
  for (const auto& m : builtins()) {
    for (double s : {0.5, 2.0, 5.0}) {
      const double h = 1e-4;
      const double oracle = (m.log_mgf(s + h) - m.log_mgf(s - h)) / (2 * h);
      CHECK(m.tilted_mean(s) == Approx(oracle).epsilon(1e-6));
      const TiltedSampler ts(m, s);
      const int n = 200'000;
      double sum = 0, sum2 = 0;
      for (int k = 0; k < n; ++k) {
        const double y = ts(rng);
        sum += y;
        sum2 += y * y;
      }
      const double mean = sum / n;
      const double se = std::sqrt(std::max(sum2 / n - mean * mean, 1e-30) / n);
      CHECK(std::abs(mean - oracle) <= 4 * se);
    }
  }
}

TEST_CASE("bounds on f and f'") {
  for (const auto& m : builtins()) {
    for (double t : {0.1, 0.5, 0.9}) {
      CHECK(std::abs(m.f(t)) <= 2 * t * t);
      CHECK(std::abs(m.f_prime(t)) <= 2 * t);
    }
    for (double t : {2.0, 10.0, 100.0}) {
      const double l = std::log(2 * t);
      CHECK(std::abs(m.f(t)) <= 50 * t / (l * l));
      CHECK(std::abs(m.f_prime(t)) <= 50 / (l * l));
    }
  }
}

TEST_CASE("log mgf convexity and closed form against quadrature") {
  for (const auto& m : builtins()) {
    const double h = 0.05;
    for (double t = -10; t <= 30; t += 0.5)
      CHECK(m.log_mgf(t - h) - 2 * m.log_mgf(t) + m.log_mgf(t + h) >= -1e-9);
    for (double t : {-5.0, 0.3, 1.0, 7.0, 20.0, 30.0})
      CHECK(std::abs(m.log_mgf(t) - m.log_mgf_quadrature(t)) <= 1e-9 * std::max(1.0, std::abs(m.log_mgf(t))));
  }
}

TEST_CASE("model spec parsing") {
  CHECK(RandomModel::parse("roots:6").order() == 6);
  CHECK(RandomModel::parse("radzero:5").prime() == 5);
  CHECK(ModelAssignment::parse("radzero:p").p_indexed());
  CHECK(ModelAssignment::parse("radzero:p").model_for(7).prime() == 7);
  CHECK_THROWS(RandomModel::parse("gaussian"));
  CHECK_THROWS(RandomModel::parse("roots:x"));
}
