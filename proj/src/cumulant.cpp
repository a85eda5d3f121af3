#include "ldlab/cumulant.hpp"

#include <algorithm>
#include <cmath>

#include "ldlab/error.hpp"
#include "ldlab/kernels.hpp"

namespace ldlab {

Ensemble::Ensemble(const WeightFamily& family, ModelAssignment models, double Q)
    : models_(std::move(models)), Q_(Q), table_(family, Q) {
  require(Q >= 1.0, "ensemble needs Q >= 1");
  const Weights& w = table_.weights();
  inv_q_.reserve(w.size());
  for (double q : w.q) inv_q_.push_back(1.0 / q);
  if (models_.p_indexed()) {
    per_coord_.reserve(w.size());
    for (std::uint64_t label : w.label) per_coord_.push_back(models_.model_for(label));
  }
  if (std::isfinite(models_.limit().crvh_c())) eta_ = ldlab::eta(models_.limit()).eta;
}

std::size_t Ensemble::count_upto(double x) const {
  const auto& q = table_.weights().q;
  return std::size_t(std::upper_bound(q.begin(), q.end(), x) - q.begin());
}

double Ensemble::eta() const {
  if (!eta_) fail(ErrorKind::precondition, "CRVH violated: lower-tail bound fails for " + models_.name());
  return *eta_;
}

double K_real(const Ensemble& ens, double s, double upto) {
  require(std::isfinite(s), "K_Q needs finite s");
  const std::size_t n = ens.count_upto(upto);
  const auto iq = ens.inv_q();
  return kernels::chunked_sum(n, [&](std::size_t i) { return ens.model(i).log_mgf(s * iq[i]); });
}

double K_real_serial(const Ensemble& ens, double s, double upto) {
  const std::size_t n = ens.count_upto(upto);
  const auto iq = ens.inv_q();
  return kernels::chunked_sum_serial(n, [&](std::size_t i) { return ens.model(i).log_mgf(s * iq[i]); });
}

ImagK K_imag(const Ensemble& ens, double t, double upto) {
  require(std::isfinite(t), "K_Q needs finite s");
  const std::size_t n = ens.count_upto(upto);
  const auto iq = ens.inv_q();
  std::vector<std::complex<double>> cf(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < std::int64_t(n); ++i) cf[i] = ens.model(i).char_fn(t * iq[i]);
  ImagK r;
  for (const auto& c : cf)
    if (std::abs(c) <= 1e-12) r.char_zero = true;
  if (r.char_zero) {
    r.value = {-kInf, 0.0};
    return r;
  }
  const double re = kernels::chunked_sum_serial(n, [&](std::size_t i) { return std::log(std::abs(cf[i])); });
  const double im = kernels::chunked_sum_serial(n, [&](std::size_t i) { return std::arg(cf[i]); });
  r.value = {re, im};
  return r;
}

std::complex<double> K_Q(const Ensemble& ens, std::complex<double> s) {
  if (s.imag() == 0.0) return {K_real(ens, s.real()), 0.0};
  require(s.real() == 0.0, "K_Q is evaluated on the real and imaginary axes only");
  const ImagK k = K_imag(ens, s.imag());
  if (k.char_zero) fail(ErrorKind::numeric, "characteristic function zero");
  return k.value;
}

KLimit K_limit(const Ensemble& ens, double s, double Q_ref, double c) {
  require(Q_ref > std::abs(s), "cumulant limit needs Q_ref > |s|");
  require(Q_ref <= ens.Q(), "cumulant limit needs Q_ref <= Q");
  KLimit r;
  r.value = K_real(ens, s, Q_ref);
  r.tail_bound = c * s * s * std::pow(std::log(Q_ref), ens.family().A - 1.0) / Q_ref;
  return r;
}

KAsymptotic K_asymptotic(const Ensemble& ens, double s) {
  const double Q = ens.Q();
  require(s >= 3.0 && s <= Q / std::log(Q), "cumulant asymptotic requires 3 <= s <= Q/log Q");
  const WeightFamily& f = ens.family();
  KAsymptotic r;
  r.value = s * ens.table().H(s) + f.alpha * ens.eta() * s * std::pow(std::log(s), f.A - 1.0);
  r.exact = K_real(ens, s);
  r.rel_err = std::abs(r.value - r.exact) / std::abs(r.exact);
  return r;
}

double tilted_mean_sum(const Ensemble& ens, double s) {
  const auto iq = ens.inv_q();
  return kernels::chunked_sum(ens.size(),
                              [&](std::size_t i) { return iq[i] * ens.model(i).tilted_mean(s * iq[i]); });
}

namespace {

double envelope_shape(double t, double A) {
  const double at = std::abs(t);
  return at * std::pow(std::log(at), A - 2.0);
}

}  // namespace

CharFnResult char_fn(const Ensemble& ens, double t, double C0) {
  CharFnResult r;
  r.t = t;
  r.C0 = C0;
  const ImagK k = K_imag(ens, t);
  r.char_zero = k.char_zero;
  r.value = k.char_zero ? std::complex<double>(0.0, 0.0) : std::exp(k.value);
  r.envelope = std::abs(t) >= 2.0 ? std::exp(-C0 * envelope_shape(t, ens.family().A)) : 1.0;
  return r;
}

std::vector<double> log_abs_char_fn(const Ensemble& ens, std::span<const double> t_grid) {
  std::vector<const RandomModel*> models(ens.size());
  for (std::size_t i = 0; i < ens.size(); ++i) models[i] = &ens.model(i);
  return kernels::log_abs_char_fn_grid(models, ens.inv_q(), t_grid);
}

C0Fit fit_C0(const Ensemble& ens, double t_min, double t_max, int points) {
  require(t_min >= 2.0 && t_max > t_min && points >= 2, "C0 fit needs 2 <= t_min < t_max");
  const double A = ens.family().A;
  C0Fit fit;
  const double h = (t_max - t_min) / (points - 1);
  for (int k = 0; k < points; ++k) fit.t_grid.push_back(t_min + h * k);
  fit.log_abs_phi = log_abs_char_fn(ens, fit.t_grid);
  fit.raw_min = kInf;
  for (std::size_t k = 0; k < fit.t_grid.size(); ++k)
    fit.raw_min = std::min(fit.raw_min, -fit.log_abs_phi[k] / envelope_shape(fit.t_grid[k], A));
  fit.C0 = 0.95 * fit.raw_min;

  std::vector<double> check;
  for (int k = 0; k + 1 < points; ++k) check.push_back(t_min + h * (k + 0.5));
  const auto logs = log_abs_char_fn(ens, check);
  fit.worst_margin = kInf;
  for (std::size_t k = 0; k < check.size(); ++k)
    fit.worst_margin = std::min(fit.worst_margin, -fit.C0 * envelope_shape(check[k], A) - logs[k]);
  fit.verified = fit.C0 > 0.0 && fit.worst_margin >= 0.0;
  return fit;
}

}  // namespace ldlab
