#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "ldlab/rng.hpp"

namespace ldlab {

enum class ModelKind { circle, roots, rademacher, radzero, satotate, lfl, degenerate };

/// A bounded mean-zero random variable Y with values in [-1, 1].
///
/// circle      Re(e^{i phi}), phi uniform
/// roots(m)    Re(omega), omega uniform on the m-th roots of unity
/// rademacher  +-1 with probability 1/2
/// radzero(p)  +-1 with probability p/(2(p+1)) each, 0 with probability 1/(p+1)
/// satotate    cos(theta), theta with density (2/pi) sin^2 on [0, pi]
/// lfl(p, m)   (Re Z - E Z)/(-log(1 - 1/p) - E Z), Z = -log(1 - omega/p), omega uniform
///             on the m-th roots of unity (m = 0: on the unit circle)
/// degenerate  identically 0 (violates the lower-tail hypothesis)
class RandomModel {
 public:
  static RandomModel circle();
  static RandomModel roots(int m);
  static RandomModel rademacher();
  static RandomModel radzero(std::uint64_t p);
  static RandomModel satotate();
  static RandomModel lfl(std::uint64_t p, int m);
  static RandomModel degenerate();

  /// "circle", "roots:<m>", "rademacher", "radzero:<p>", "satotate",
  /// "lfl:<p>:<m>", "lfl:<p>:inf", "degenerate".
  static RandomModel parse(std::string_view spec);

  ModelKind kind() const { return kind_; }
  int order() const { return m_; }
  std::uint64_t prime() const { return p_; }
  std::string name() const;
  bool discrete() const { return !values_.empty(); }

  /// Finite support (discrete models only): values, 1 - value (exact), probabilities.
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& deficits() const { return deficits_; }
  const std::vector<double>& probs() const { return probs_; }

  /// E Y^k for k = 1..4.
  double moment(int k) const;

  double mgf(double t) const;
  /// log E e^{tY}, accurate near t = 0 and free of overflow for large |t|.
  double log_mgf(double t) const;
  /// log E e^{t(Y - 1)} = log_mgf(t) - t, computed without cancellation.
  double log_mgf_shifted(double t) const;
  /// Same quantity by quadrature over the underlying angle (exact sums for discrete models).
  double log_mgf_quadrature(double t) const;

  /// f_Y(t): log_mgf for t < 1, log_mgf - t for t >= 1.
  double f(double t) const;
  /// f_Y'(t) for t > 0, t != 1.
  double f_prime(double t) const;
  /// (d/dt) log E e^{tY} = E(Y e^{tY}) / E(e^{tY}).
  double tilted_mean(double t) const;

  /// E e^{itY}.
  std::complex<double> char_fn(double t) const;

  /// P(Y > a), exact.
  double upper_tail(double a) const;
  /// Smallest c with P(Y > 1 - 1/t) >= exp(-c e^{sqrt t}) for t = 1..50; infinite when
  /// some probability vanishes.
  double crvh_c() const { return crvh_c_; }

  double sample(Rng& rng) const;

  /// For lfl models: y(x) = 1 - deficit(x) where x = 1 - cos(angle).
  double lfl_deficit_from_versine(double x) const;

 private:
  friend class TiltedSampler;
  RandomModel() = default;
  void finish();
  double cumulant_series(double t) const;
  double discrete_log_mgf(double t, bool shifted) const;
  double discrete_tilted_mean(double t) const;
  // Integral over the angle of weight(phi) * h(y) * e^{t (y - ref)}, ref = 1 for t >= 0 and
  // the minimum of y otherwise. Continuous models only.
  template <class H>
  double angle_integral(double t, H h) const;
  double y_min() const;

  ModelKind kind_ = ModelKind::degenerate;
  int m_ = 0;
  std::uint64_t p_ = 0;
  double lfl_scale_ = 0.0;  // -log(1 - 1/p) - E Z(p)
  double lfl_mu_ = 0.0;
  std::vector<double> values_, deficits_, probs_;
  double moments_[5] = {1, 0, 0, 0, 0};
  double crvh_c_ = 0.0;
};

/// eta = int_0^inf f(u)/u^2 du by two independent quadratures.
struct EtaResult {
  double eta = 0.0;
  double scheme_a = 0.0;
  double scheme_b = 0.0;
  double discrepancy = 0.0;
};

/// Throws ErrorKind::precondition for models violating the lower-tail bound and
/// ErrorKind::numeric when the two schemes disagree by more than 1e-8.
EtaResult eta(const RandomModel& model);

struct CrvhRow {
  double t = 0.0;
  double exact = 0.0;      // P(Y > 1 - 1/t)
  double empirical = 0.0;  // fraction of samples above 1 - 1/t
  double bound = 0.0;      // exp(-c e^{sqrt t})
  bool holds = false;      // empirical >= bound
};

struct CrvhReport {
  double c = 0.0;
  std::vector<CrvhRow> rows;
  double largest_t_holding = 0.0;  // 0 if none
  bool support_ok = false;
  bool mean_ok = false;
  double sample_mean = 0.0;
  std::uint64_t samples = 0;
};

CrvhReport check_crvh(const RandomModel& model, const std::vector<double>& t_grid,
                      std::uint64_t samples = 10'000'000, std::uint64_t seed = 1);

/// Draws from the tilted law e^{tY} dP / E e^{tY}. Construction does the setup,
/// so a sampler per coordinate can be reused across many draws.
class TiltedSampler {
 public:
  TiltedSampler() = default;
  TiltedSampler(const RandomModel& model, double t);
  double operator()(Rng& rng) const;
  double t() const { return t_; }

 private:
  enum class Mode : std::uint8_t { zero, discrete, circle, satotate, lfl_circle };
  Mode mode_ = Mode::zero;
  double t_ = 0.0;
  double sign_ = 1.0;
  double kappa_ = 0.0;  // von Mises concentration of the proposal (>= 0)
  double bf_s_ = 0.0;   // Best-Fisher envelope parameter
  // lfl_circle: y = 1 - deficit(x), x = 1 - c; envelope line y ~ a + b c
  double lfl_a_ = 0.0, lfl_b_ = 0.0, lfl_coef_ = 0.0, lfl_inv2scale_ = 0.0;
  std::vector<double> cdf_, out_;

  double von_mises_cos(Rng& rng) const;
};

// cos of an angle with density proportional to exp(kappa cos)
inline double TiltedSampler::von_mises_cos(Rng& rng) const {
  if (kappa_ < 1.0) {
    for (;;) {
      // for a uniform disk point the angle and r^2 are independent, r^2 uniform
      const DiskPoint p = uniform_disk(rng);
      const double c = (p.x * p.x - p.y * p.y) / p.r2;
      const double z = kappa_ * (c - 1.0);
      if (p.r2 <= 1.0 + z || p.r2 < std::exp(z)) return c;
    }
  }
  for (;;) {
    const double z = uniform_angle_cosine(rng);
    const double w = (1.0 + bf_s_ * z) / (bf_s_ + z);
    const double y = kappa_ * (bf_s_ - w);
    const double v = uniform01(rng);
    if (y * (2.0 - y) - v > 0.0 || std::log(y / v) + 1.0 - y >= 0.0) return w;
  }
}

inline double TiltedSampler::operator()(Rng& rng) const {
  switch (mode_) {
    case Mode::zero: return 0.0;
    case Mode::discrete: {
      const double u = uniform01(rng);
      for (std::size_t j = 0; j + 1 < cdf_.size(); ++j)
        if (u < cdf_[j]) return out_[j];
      return out_.back();
    }
    case Mode::circle: return sign_ * von_mises_cos(rng);
    case Mode::satotate:
      if (kappa_ < 1.0) {
        for (;;) {
          const double y = uniform_disk(rng).x;
          const double z = kappa_ * (y - 1.0);
          const double u = uniform01(rng);
          if (u <= 1.0 + z || u < std::exp(z)) return sign_ * y;
        }
      }
      for (;;) {
        const double c = von_mises_cos(rng);
        if (uniform01(rng) < 1.0 - c * c) return sign_ * c;
      }
    case Mode::lfl_circle:
      for (;;) {
        const double c = sign_ * von_mises_cos(rng);
        const double y = 1.0 - std::log1p(lfl_coef_ * (1.0 - c)) * lfl_inv2scale_;
        const double z = t_ * (y - lfl_a_ - lfl_b_ * c);
        const double u = uniform01(rng);
        if (u <= 1.0 + z || u < std::exp(z)) return y;
      }
  }
  return 0.0;
}

/// Y(n) as a function of the weight label: one model for all n, or a p-indexed
/// model (radzero(p), lfl(p, m)) driven by the prime label.
class ModelAssignment {
 public:
  enum class Kind { constant, radzero_by_p, lfl_by_p };

  static ModelAssignment constant(RandomModel model);
  static ModelAssignment radzero_by_p();
  static ModelAssignment lfl_by_p(int m);
  /// Model spec as RandomModel::parse, plus "radzero:p", "lfl:p:<m>", "lfl:p:inf".
  static ModelAssignment parse(std::string_view spec);

  Kind kind() const { return kind_; }
  RandomModel model_for(std::uint64_t label) const;
  /// The law Y that Y(n) converges to; it determines eta.
  const RandomModel& limit() const { return limit_; }
  bool p_indexed() const { return kind_ != Kind::constant; }
  std::string name() const;

 private:
  explicit ModelAssignment(Kind kind, RandomModel limit, int m = 0)
      : kind_(kind), limit_(std::move(limit)), m_(m) {}
  Kind kind_;
  RandomModel limit_;
  int m_ = 0;
};

}  // namespace ldlab
