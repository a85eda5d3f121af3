#include "ldlab/numeric.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include "ldlab/error.hpp"

namespace ldlab {

double compensated_sum(std::span<const double> xs) {
  CompensatedSum acc;
  for (double x : xs) acc.add(x);
  return acc.value();
}

double log_add_exp(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

namespace {

// Hankel expansion of I_nu(x) e^{-x} for large x.
double bessel_i_scaled_asymptotic(int nu, double x) {
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 40; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (k * 8.0 * x);
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * kPi * x);
}

constexpr double kBesselSwitch = 600.0;

}  // namespace

double bessel_i_scaled(int nu, double x) {
  const double ax = std::abs(x);
  double v;
  if (ax <= kBesselSwitch)
    v = boost::math::cyl_bessel_i(nu, ax) * std::exp(-ax);
  else
    v = bessel_i_scaled_asymptotic(nu, ax);
  return (x < 0 && (nu % 2) != 0) ? -v : v;
}

double log_bessel_i(int nu, double x) {
  require(x >= 0.0, "log_bessel_i needs x >= 0");
  if (x == 0.0) return nu == 0 ? 0.0 : -kInf;
  return x + std::log(bessel_i_scaled(nu, x));
}

double bessel_i0_minus_one(double x) {
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (double(k) * k);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

double bessel_i1_ratio_minus_one(double x) {
  // 2 I_1(x)/x = sum_k (x^2/4)^k / (k! (k+1)!)
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (double(k) * (k + 1));
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}

double pearson_correlation(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size() && a.size() >= 2, "correlation needs two samples of equal size >= 2");
  const double n = double(a.size());
  double ma = 0, mb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double da = a[i] - ma, db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  return sab / std::sqrt(saa * sbb);
}

double iterated_log(double x, int k) {
  for (int i = 0; i < k; ++i) {
    if (!(x > 0.0)) return kNaN;
    x = std::log(x);
  }
  return x;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b, double tol,
                          double* error) {
  double err = 0.0;
  const double v =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 15, tol, &err);
  if (error) *error = err;
  return v;
}

double integrate_tanh_sinh(const std::function<double(double)>& f, double a, double b,
                           double tol) {
  static thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
  auto g = [&f](double x) { return f(x); };
  return integrator.integrate(g, a, b, tol);
}

double integrate_gauss_composite(const std::function<double(double)>& f, double a, double b,
                                 int panels) {
  require(panels >= 1, "need at least one panel");
  const double h = (b - a) / panels;
  CompensatedSum acc;
  for (int i = 0; i < panels; ++i) {
    const double lo = a + i * h;
    const double hi = (i + 1 == panels) ? b : lo + h;
    acc.add(boost::math::quadrature::gauss<double, 20>::integrate(f, lo, hi));
  }
  return acc.value();
}

double integrate_simpson(const std::function<double(double)>& f, double a, double b,
                         long panels) {
  require(panels >= 2 && panels % 2 == 0, "Simpson needs an even panel count");
  const double h = (b - a) / double(panels);
  CompensatedSum acc;
  acc.add(f(a));
  acc.add(f(b));
  for (long i = 1; i < panels; ++i) acc.add((i % 2 ? 4.0 : 2.0) * f(a + double(i) * h));
  return acc.value() * h / 3.0;
}

}  // namespace ldlab
