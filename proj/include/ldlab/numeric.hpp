#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <span>

namespace ldlab {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.57721566490153286061;
inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Neumaier-compensated running sum. Deterministic for a fixed input order.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  void add(const CompensatedSum& other) {
    add(other.sum_);
    add(other.comp_);
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double compensated_sum(std::span<const double> xs);

/// log(exp(a) + exp(b)) without overflow.
double log_add_exp(double a, double b);

/// I_nu(x) * exp(-|x|) for nu in {0, 1, 2}; exact for all finite x.
double bessel_i_scaled(int nu, double x);

/// log I_nu(x) for x >= 0.
double log_bessel_i(int nu, double x);

/// I_0(x) - 1 and 2 I_1(x)/x - 1 by power series; accurate for small |x|.
double bessel_i0_minus_one(double x);
double bessel_i1_ratio_minus_one(double x);

/// Pearson correlation of two equally sized samples.
double pearson_correlation(std::span<const double> a, std::span<const double> b);

/// Iterated natural logarithm log_k(x) (k applications of log).
double iterated_log(double x, int k);

double binomial(int n, int k);

// Quadrature front ends. All of them integrate f over [a, b].

/// Adaptive Gauss-Kronrod (15 point) with a deep subdivision budget.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double tol = 1e-13, double* error = nullptr);

/// Tanh-sinh; tolerant of integrable endpoint singularities.
double integrate_tanh_sinh(const std::function<double(double)>& f, double a, double b,
                           double tol = 1e-13);

/// Composite fixed-order Gauss-Legendre (20 points per panel).
double integrate_gauss_composite(const std::function<double(double)>& f, double a, double b,
                                 int panels);

/// Composite Simpson rule with an even number of panels.
double integrate_simpson(const std::function<double(double)>& f, double a, double b,
                         long panels);

}  // namespace ldlab
