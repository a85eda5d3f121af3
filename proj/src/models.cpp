#include "ldlab/models.hpp"

#include <algorithm>
#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <cstdlib>

#include "ldlab/error.hpp"
#include "ldlab/numeric.hpp"

namespace ldlab {

namespace {

constexpr double kSeriesCutoff = 1e-3;

std::uint64_t parse_uint(const std::string& s, const std::string& what) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s.c_str(), &end, 10);
  require(!s.empty() && end && *end == '\0', "malformed integer for " + what + ": '" + s + "'");
  return v;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

RandomModel RandomModel::circle() {
  RandomModel r;
  r.kind_ = ModelKind::circle;
  r.finish();
  return r;
}

RandomModel RandomModel::roots(int m) {
  require(m >= 2, "roots of unity model needs m >= 2");
  RandomModel r;
  r.kind_ = ModelKind::roots;
  r.m_ = m;
  for (int j = 0; j < m; ++j) {
    const double s = std::sin(kPi * j / m);
    r.deficits_.push_back(2.0 * s * s);
    r.values_.push_back(j == 0 ? 1.0 : std::cos(2.0 * kPi * j / m));
    r.probs_.push_back(1.0 / m);
  }
  r.finish();
  return r;
}

RandomModel RandomModel::rademacher() {
  RandomModel r;
  r.kind_ = ModelKind::rademacher;
  r.values_ = {1.0, -1.0};
  r.deficits_ = {0.0, 2.0};
  r.probs_ = {0.5, 0.5};
  r.finish();
  return r;
}

RandomModel RandomModel::radzero(std::uint64_t p) {
  require(p >= 1, "radzero model needs p >= 1");
  RandomModel r;
  r.kind_ = ModelKind::radzero;
  r.p_ = p;
  const double pp = double(p);
  r.values_ = {1.0, -1.0, 0.0};
  r.deficits_ = {0.0, 2.0, 1.0};
  r.probs_ = {pp / (2.0 * (pp + 1.0)), pp / (2.0 * (pp + 1.0)), 1.0 / (pp + 1.0)};
  r.finish();
  return r;
}

RandomModel RandomModel::satotate() {
  RandomModel r;
  r.kind_ = ModelKind::satotate;
  r.finish();
  return r;
}

RandomModel RandomModel::lfl(std::uint64_t p, int m) {
  require(p >= 2, "lfl model needs p >= 2");
  require(m == 0 || m >= 2, "lfl model needs m >= 2 (or the circle)");
  RandomModel r;
  r.kind_ = ModelKind::lfl;
  r.p_ = p;
  r.m_ = m;
  const double pp = double(p);
  r.lfl_mu_ = m == 0 ? 0.0 : -std::log1p(-std::pow(pp, -double(m))) / m;
  r.lfl_scale_ = -std::log1p(-1.0 / pp) - r.lfl_mu_;
  if (m > 0) {
    for (int j = 0; j < m; ++j) {
      const double s = std::sin(kPi * j / m);
      const double d = r.lfl_deficit_from_versine(2.0 * s * s);
      r.deficits_.push_back(d);
      r.values_.push_back(1.0 - d);
      r.probs_.push_back(1.0 / m);
    }
  }
  r.finish();
  return r;
}

RandomModel RandomModel::degenerate() {
  RandomModel r;
  r.kind_ = ModelKind::degenerate;
  r.values_ = {0.0};
  r.deficits_ = {1.0};
  r.probs_ = {1.0};
  r.finish();
  return r;
}

RandomModel RandomModel::parse(std::string_view spec) {
  const auto parts = split(spec, ':');
  const std::string& h = parts[0];
  if (h == "circle" && parts.size() == 1) return circle();
  if (h == "rademacher" && parts.size() == 1) return rademacher();
  if (h == "satotate" && parts.size() == 1) return satotate();
  if (h == "degenerate" && parts.size() == 1) return degenerate();
  if (h == "roots" && parts.size() == 2) return roots(int(parse_uint(parts[1], "m")));
  if (h == "radzero" && parts.size() == 2) return radzero(parse_uint(parts[1], "p"));
  if (h == "lfl" && parts.size() == 3) {
    const std::uint64_t p = parse_uint(parts[1], "p");
    if (parts[2] == "inf" || parts[2] == "circle") return lfl(p, 0);
    return lfl(p, int(parse_uint(parts[2], "m")));
  }
  require(false, "unknown model '" + std::string(spec) + "'");
  return {};
}

std::string RandomModel::name() const {
  switch (kind_) {
    case ModelKind::circle: return "circle";
    case ModelKind::roots: return "roots:" + std::to_string(m_);
    case ModelKind::rademacher: return "rademacher";
    case ModelKind::radzero: return "radzero:" + std::to_string(p_);
    case ModelKind::satotate: return "satotate";
    case ModelKind::lfl:
      return "lfl:" + std::to_string(p_) + ":" + (m_ == 0 ? std::string("inf") : std::to_string(m_));
    case ModelKind::degenerate: return "degenerate";
  }
  return "?";
}

double RandomModel::lfl_deficit_from_versine(double x) const {
  const double pm1 = double(p_) - 1.0;
  return std::log1p(2.0 * x * double(p_) / (pm1 * pm1)) / (2.0 * lfl_scale_);
}

namespace {

// Continuous models live on an angle phi in [0, pi].
struct AngleLaw {
  const RandomModel& m;
  double weight(double phi) const {
    if (m.kind() == ModelKind::satotate) {
      const double s = std::sin(phi);
      return 2.0 / kPi * s * s;
    }
    return 1.0 / kPi;
  }
  // 1 - cos(phi), without cancellation near 0
  static double versine(double phi) {
    const double s = std::sin(0.5 * phi);
    return 2.0 * s * s;
  }
  double deficit_x(double x) const {
    return m.kind() == ModelKind::lfl ? m.lfl_deficit_from_versine(x) : x;
  }
  double deficit(double phi) const { return deficit_x(versine(phi)); }
  // derivative of the deficit in x at x = 2 (the far end)
  double deficit_slope_far() const {
    if (m.kind() != ModelKind::lfl) return 1.0;
    const double pm1 = double(m.prime()) - 1.0;
    const double coef = 2.0 * double(m.prime()) / (pm1 * pm1);
    return coef / (1.0 + 2.0 * coef) * deficit_x(2.0) / std::log1p(2.0 * coef);
  }
};

}  // namespace

double RandomModel::y_min() const {
  if (discrete()) return *std::min_element(values_.begin(), values_.end());
  return 1.0 - AngleLaw{*this}.deficit(kPi);
}

template <class H>
double RandomModel::angle_integral(double t, H h) const {
  const AngleLaw law{*this};
  const double dmax = law.deficit(kPi);
  if (t >= 0.0) {
    auto g = [&](double phi) {
      const double d = law.deficit(phi);
      return law.weight(phi) * h(1.0 - d) * std::exp(-t * d);
    };
    // deficit >= dmax * phi^2 / pi^2 on [0, pi] (convexity in cos phi)
    double hi = kPi;
    if (t * dmax > 800.0) hi = kPi * std::sqrt(800.0 / (t * dmax));
    return integrate_adaptive(g, 0.0, hi, 1e-14);
  }
  const double at = -t;
  auto g = [&](double phi) {
    const double d = law.deficit(phi);
    return law.weight(phi) * h(1.0 - d) * std::exp(-at * (dmax - d));
  };
  double lo = 0.0;
  const double slope = law.deficit_slope_far();
  if (at * slope > 400.0) lo = kPi - kPi * std::sqrt(400.0 / (at * slope));
  return integrate_adaptive(g, lo, kPi, 1e-14);
}

void RandomModel::finish() {
  if (discrete()) {
    for (int k = 1; k <= 4; ++k) {
      CompensatedSum acc;
      for (std::size_t j = 0; j < values_.size(); ++j) acc.add(probs_[j] * std::pow(values_[j], k));
      moments_[k] = acc.value();
    }
  } else if (kind_ == ModelKind::circle) {
    moments_[1] = 0.0;
    moments_[2] = 0.5;
    moments_[3] = 0.0;
    moments_[4] = 0.375;
  } else if (kind_ == ModelKind::satotate) {
    moments_[1] = 0.0;
    moments_[2] = 0.25;
    moments_[3] = 0.0;
    moments_[4] = 0.125;
  } else {
    for (int k = 1; k <= 4; ++k)
      moments_[k] = angle_integral(0.0, [k](double y) { return std::pow(y, k); });
  }
  double c = 0.0;
  for (int t = 1; t <= 50; ++t) {
    const double pr = upper_tail(1.0 - 1.0 / t);
    if (!(pr > 0.0)) {
      c = kInf;
      break;
    }
    c = std::max(c, -std::log(pr) / std::exp(std::sqrt(double(t))));
  }
  crvh_c_ = c;
}

double RandomModel::moment(int k) const {
  require(k >= 0 && k <= 4, "moments are stored for k <= 4");
  return moments_[k];
}

double RandomModel::cumulant_series(double t) const {
  const double k2 = moments_[2];
  const double k3 = moments_[3];
  const double k4 = moments_[4] - 3.0 * moments_[2] * moments_[2];
  return t * t * (k2 / 2.0 + t * (k3 / 6.0 + t * k4 / 24.0));
}

double RandomModel::discrete_log_mgf(double t, bool shifted) const {
  if (std::abs(t) < 1.0) {
    CompensatedSum acc;
    for (std::size_t j = 0; j < values_.size(); ++j) acc.add(probs_[j] * std::expm1(t * values_[j]));
    const double v = std::log1p(acc.value());
    return shifted ? v - t : v;
  }
  CompensatedSum acc;
  double ref;
  if (t > 0.0) {
    ref = 1.0;
    for (std::size_t j = 0; j < values_.size(); ++j) acc.add(probs_[j] * std::exp(-t * deficits_[j]));
  } else {
    ref = y_min();
    for (std::size_t j = 0; j < values_.size(); ++j)
      acc.add(probs_[j] * std::exp(t * (values_[j] - ref)));
  }
  const double s = std::log(acc.value());
  return shifted ? t * (ref - 1.0) + s : t * ref + s;
}

double RandomModel::discrete_tilted_mean(double t) const {
  CompensatedSum num, den;
  const double ref = t >= 0.0 ? 1.0 : y_min();
  for (std::size_t j = 0; j < values_.size(); ++j) {
    const double e = t >= 0.0 ? std::exp(-t * deficits_[j]) : std::exp(t * (values_[j] - ref));
    num.add(probs_[j] * values_[j] * e);
    den.add(probs_[j] * e);
  }
  return num.value() / den.value();
}

double RandomModel::log_mgf(double t) const {
  require(std::isfinite(t), "log_mgf needs finite t");
  if (std::abs(t) < kSeriesCutoff) return cumulant_series(t);
  const double at = std::abs(t);
  switch (kind_) {
    case ModelKind::circle:
      if (at < 1.0) return std::log1p(bessel_i0_minus_one(at));
      return at + std::log(bessel_i_scaled(0, at));
    case ModelKind::satotate:
      if (at < 1.0) return std::log1p(bessel_i1_ratio_minus_one(at));
      return at + std::log(2.0 * bessel_i_scaled(1, at)) - std::log(at);
    case ModelKind::lfl:
      if (!discrete()) return log_mgf_quadrature(t);
      [[fallthrough]];
    default:
      return discrete_log_mgf(t, false);
  }
}

double RandomModel::log_mgf_shifted(double t) const {
  require(std::isfinite(t), "log_mgf needs finite t");
  if (t < 1.0) return log_mgf(t) - t;
  switch (kind_) {
    case ModelKind::circle: return std::log(bessel_i_scaled(0, t));
    case ModelKind::satotate: return std::log(2.0 * bessel_i_scaled(1, t)) - std::log(t);
    case ModelKind::lfl:
      if (!discrete()) {
        // Laplace regime: deficit ~ a phi^2 / 2 near phi = 0, relative error O(1/t)
        if (t > 1e8) {
          const double pm1 = double(p_) - 1.0;
          const double a = double(p_) / (pm1 * pm1) / lfl_scale_;
          return -0.5 * std::log(2.0 * kPi * t * a);
        }
        return std::log(angle_integral(t, [](double) { return 1.0; }));
      }
      [[fallthrough]];
    default:
      return discrete_log_mgf(t, true);
  }
}

double RandomModel::log_mgf_quadrature(double t) const {
  if (discrete()) return discrete_log_mgf(t, false);
  const double v = std::log(angle_integral(t, [](double) { return 1.0; }));
  return t >= 0.0 ? t + v : t * y_min() + v;
}

double RandomModel::mgf(double t) const { return std::exp(log_mgf(t)); }

double RandomModel::f(double t) const {
  require(t >= 0.0, "f_Y needs t >= 0");
  return t < 1.0 ? log_mgf(t) : log_mgf_shifted(t);
}

double RandomModel::f_prime(double t) const {
  require(t > 0.0, "f_Y' needs t > 0");
  if (t == 1.0) fail(ErrorKind::precondition, "f_Y' is not defined at the kink t = 1");
  return t < 1.0 ? tilted_mean(t) : tilted_mean(t) - 1.0;
}

double RandomModel::tilted_mean(double t) const {
  if (t == 0.0) return moments_[1];
  const double at = std::abs(t);
  const double sg = t < 0.0 ? -1.0 : 1.0;
  switch (kind_) {
    case ModelKind::circle: return sg * bessel_i_scaled(1, at) / bessel_i_scaled(0, at);
    case ModelKind::satotate: return sg * bessel_i_scaled(2, at) / bessel_i_scaled(1, at);
    case ModelKind::lfl:
      if (!discrete())
        return angle_integral(t, [](double y) { return y; }) /
               angle_integral(t, [](double) { return 1.0; });
      [[fallthrough]];
    default:
      return discrete_tilted_mean(t);
  }
}

std::complex<double> RandomModel::char_fn(double t) const {
  if (t == 0.0) return {1.0, 0.0};
  switch (kind_) {
    case ModelKind::circle: return {boost::math::cyl_bessel_j(0, t), 0.0};
    case ModelKind::satotate: return {2.0 * boost::math::cyl_bessel_j(1, t) / t, 0.0};
    case ModelKind::lfl:
      if (!discrete()) {
        const AngleLaw law{*this};
        auto re = [&](double phi) { return std::cos(t * (1.0 - law.deficit(phi))) / kPi; };
        auto im = [&](double phi) { return std::sin(t * (1.0 - law.deficit(phi))) / kPi; };
        return {integrate_adaptive(re, 0.0, kPi, 1e-13), integrate_adaptive(im, 0.0, kPi, 1e-13)};
      }
      [[fallthrough]];
    default: {
      CompensatedSum re, im;
      for (std::size_t j = 0; j < values_.size(); ++j) {
        re.add(probs_[j] * std::cos(t * values_[j]));
        im.add(probs_[j] * std::sin(t * values_[j]));
      }
      return {re.value(), im.value()};
    }
  }
}

double RandomModel::upper_tail(double a) const {
  if (discrete()) {
    CompensatedSum acc;
    for (std::size_t j = 0; j < values_.size(); ++j)
      if (values_[j] > a) acc.add(probs_[j]);
    return acc.value();
  }
  if (a >= 1.0) return 0.0;
  if (kind_ == ModelKind::lfl) {
    if (a < y_min()) return 1.0;
    const double pm1 = double(p_) - 1.0;
    const double x = std::expm1(2.0 * lfl_scale_ * (1.0 - a)) * pm1 * pm1 / (2.0 * double(p_));
    if (x >= 2.0) return 1.0;
    return 2.0 * std::asin(std::sqrt(0.5 * x)) / kPi;
  }
  if (a <= -1.0) return 1.0;
  const double th = std::acos(a);
  if (kind_ == ModelKind::circle) return th / kPi;
  return (th - std::sin(th) * std::cos(th)) / kPi;
}

double RandomModel::sample(Rng& rng) const {
  switch (kind_) {
    case ModelKind::circle: return uniform_angle_cosine(rng);
    case ModelKind::satotate: return uniform_disk(rng).x;
    case ModelKind::lfl:
      if (!discrete()) return 1.0 - lfl_deficit_from_versine(1.0 - uniform_angle_cosine(rng));
      [[fallthrough]];
    default: {
      const double u = uniform01(rng);
      double acc = 0.0;
      for (std::size_t j = 0; j + 1 < values_.size(); ++j) {
        acc += probs_[j];
        if (u < acc) return values_[j];
      }
      return values_.back();
    }
  }
}

EtaResult eta(const RandomModel& model) {
  if (!std::isfinite(model.crvh_c()))
    fail(ErrorKind::precondition, "CRVH violated: lower-tail bound fails for " + model.name());
  const double k2 = model.moment(2), k3 = model.moment(3);
  const double k4 = model.moment(4) - 3.0 * k2 * k2;
  // below the series cutoff f(u)/u^2 is this polynomial exactly
  auto near = [&](double u) {
    if (u < kSeriesCutoff) return k2 / 2.0 + u * (k3 / 6.0 + u * k4 / 24.0);
    return model.f(u) / (u * u);
  };
  // [1, inf) mapped to (0, 1] by u = 1/v
  auto far_v = [&](double v) { return model.f(1.0 / v); };
  // [1, inf) mapped to [0, inf) by u = e^w
  auto far_w = [&](double w) { return model.f(std::exp(w)) * std::exp(-w); };

  EtaResult r;
  r.scheme_a = integrate_tanh_sinh(near, 0.0, 1.0, 1e-15) + integrate_tanh_sinh(far_v, 0.0, 1.0, 1e-15);
  r.scheme_b = integrate_gauss_composite(near, 0.0, 1.0, 32) +
               integrate_gauss_composite(far_w, 0.0, 64.0, 256);
  r.eta = r.scheme_a;
  r.discrepancy = std::abs(r.scheme_a - r.scheme_b);
  if (!(r.discrepancy <= 1e-8))
    fail(ErrorKind::numeric, "eta quadrature failure for " + model.name() +
                                 ": schemes differ by " + std::to_string(r.discrepancy));
  return r;
}

CrvhReport check_crvh(const RandomModel& model, const std::vector<double>& t_grid,
                      std::uint64_t samples, std::uint64_t seed) {
  for (double t : t_grid) require(t >= 1.0 && t <= 50.0, "CRVH check grid must lie in [1, 50]");
  require(samples >= 1, "CRVH check needs at least one sample");
  CrvhReport rep;
  rep.c = model.crvh_c();
  rep.samples = samples;
  std::vector<double> thresholds;
  for (double t : t_grid) thresholds.push_back(1.0 - 1.0 / t);
  std::vector<std::uint64_t> above(t_grid.size(), 0);
  Rng rng = make_stream(seed, 0);
  CompensatedSum sum;
  bool support = true;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const double y = model.sample(rng);
    if (std::abs(y) > 1.0 + 1e-12) support = false;
    sum.add(y);
    for (std::size_t k = 0; k < thresholds.size(); ++k)
      if (y > thresholds[k]) ++above[k];
  }
  rep.support_ok = support;
  rep.sample_mean = sum.value() / double(samples);
  rep.mean_ok = std::abs(rep.sample_mean) <= 5.0 / std::sqrt(double(samples));
  for (std::size_t k = 0; k < t_grid.size(); ++k) {
    CrvhRow row;
    row.t = t_grid[k];
    row.exact = model.upper_tail(thresholds[k]);
    row.empirical = double(above[k]) / double(samples);
    row.bound = std::isfinite(rep.c) ? std::exp(-rep.c * std::exp(std::sqrt(row.t))) : 0.0;
    row.holds = std::isfinite(rep.c) && row.empirical >= row.bound;
    if (row.holds) rep.largest_t_holding = std::max(rep.largest_t_holding, row.t);
    rep.rows.push_back(row);
  }
  return rep;
}

TiltedSampler::TiltedSampler(const RandomModel& model, double t) : t_(t) {
  require(std::isfinite(t), "tilted sampler needs finite t");
  sign_ = t < 0.0 ? -1.0 : 1.0;
  if (model.kind() == ModelKind::degenerate) {
    mode_ = Mode::zero;
    return;
  }
  if (model.discrete()) {
    mode_ = Mode::discrete;
    const auto& v = model.values();
    const double ref = t >= 0.0 ? 1.0 : *std::min_element(v.begin(), v.end());
    double total = 0.0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      total += model.probs()[j] * std::exp(t * (v[j] - ref));
      cdf_.push_back(total);
    }
    for (double& c : cdf_) c /= total;
    out_ = v;
    return;
  }
  switch (model.kind()) {
    case ModelKind::circle:
      mode_ = Mode::circle;
      kappa_ = std::abs(t);
      break;
    case ModelKind::satotate:
      mode_ = Mode::satotate;
      kappa_ = std::abs(t);
      break;
    default: {
      // lfl on the circle: y(c) is convex in c = cos(phi), so the chord bounds it
      // from above and the tangent at c = -1 from below.
      mode_ = Mode::lfl_circle;
      const AngleLaw law{model};
      const double pm1 = double(model.prime()) - 1.0;
      lfl_coef_ = 2.0 * double(model.prime()) / (pm1 * pm1);
      lfl_inv2scale_ = 1.0 / (2.0 * model.lfl_scale_);
      const double dfar = law.deficit_x(2.0);
      if (t >= 0.0) {
        lfl_b_ = dfar / 2.0;
        lfl_a_ = 1.0 - lfl_b_;
      } else {
        lfl_b_ = lfl_coef_ / (1.0 + 2.0 * lfl_coef_) * lfl_inv2scale_;
        lfl_a_ = 1.0 - dfar + lfl_b_;
      }
      const double k = t * lfl_b_;
      sign_ = k < 0.0 ? -1.0 : 1.0;
      kappa_ = std::abs(k);
      break;
    }
  }
  if (kappa_ >= 1.0) {
    const double r = 1.0 + std::sqrt(1.0 + 4.0 * kappa_ * kappa_);
    const double rho = (r - std::sqrt(2.0 * r)) / (2.0 * kappa_);
    bf_s_ = (1.0 + rho * rho) / (2.0 * rho);
  }
}

ModelAssignment ModelAssignment::constant(RandomModel model) {
  return ModelAssignment(Kind::constant, std::move(model));
}

ModelAssignment ModelAssignment::radzero_by_p() {
  return ModelAssignment(Kind::radzero_by_p, RandomModel::rademacher());
}

ModelAssignment ModelAssignment::lfl_by_p(int m) {
  require(m == 0 || m >= 2, "lfl model needs m >= 2 (or the circle)");
  return ModelAssignment(Kind::lfl_by_p, m == 0 ? RandomModel::circle() : RandomModel::roots(m), m);
}

ModelAssignment ModelAssignment::parse(std::string_view spec) {
  if (spec == "radzero:p") return radzero_by_p();
  if (spec.rfind("lfl:p:", 0) == 0) {
    const std::string tail(spec.substr(6));
    if (tail == "inf" || tail == "circle") return lfl_by_p(0);
    return lfl_by_p(int(parse_uint(tail, "m")));
  }
  return constant(RandomModel::parse(spec));
}

RandomModel ModelAssignment::model_for(std::uint64_t label) const {
  switch (kind_) {
    case Kind::constant: return limit_;
    case Kind::radzero_by_p: return RandomModel::radzero(label);
    case Kind::lfl_by_p: return RandomModel::lfl(label, m_);
  }
  return limit_;
}

std::string ModelAssignment::name() const {
  switch (kind_) {
    case Kind::constant: return limit_.name();
    case Kind::radzero_by_p: return "radzero:p";
    case Kind::lfl_by_p: return m_ == 0 ? "lfl:p:inf" : "lfl:p:" + std::to_string(m_);
  }
  return "?";
}

}  // namespace ldlab
