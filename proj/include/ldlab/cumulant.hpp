#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "ldlab/models.hpp"
#include "ldlab/numeric.hpp"
#include "ldlab/weights.hpp"

namespace ldlab {

/// Weights q_n <= Q together with the law of each Y(n).
class Ensemble {
 public:
  Ensemble(const WeightFamily& family, ModelAssignment models, double Q);

  const WeightFamily& family() const { return table_.family(); }
  const ModelAssignment& models() const { return models_; }
  const HarmonicTable& table() const { return table_; }
  double Q() const { return Q_; }
  std::size_t size() const { return table_.weights().size(); }
  double q(std::size_t i) const { return table_.weights().q[i]; }
  std::span<const double> inv_q() const { return inv_q_; }
  const RandomModel& model(std::size_t i) const {
    return per_coord_.empty() ? models_.limit() : per_coord_[i];
  }
  /// Number of coordinates with q_n <= x.
  std::size_t count_upto(double x) const;
  double H() const { return table_.total(); }
  /// eta of the limiting law; throws for laws violating the lower-tail bound.
  double eta() const;

 private:
  ModelAssignment models_;
  double Q_;
  HarmonicTable table_;
  std::vector<double> inv_q_;
  std::vector<RandomModel> per_coord_;
  std::optional<double> eta_;
};

/// K_Q(s) = sum_{q_n <= upto} log E e^{s Y(n)/q_n} for real s (upto defaults to Q).
double K_real(const Ensemble& ens, double s, double upto = kInf);

struct ImagK {
  std::complex<double> value;  // sum of log E e^{i t Y(n)/q_n} (principal logs)
  bool char_zero = false;      // some factor has modulus <= 1e-12
};
ImagK K_imag(const Ensemble& ens, double t, double upto = kInf);

/// K_Q at a real or purely imaginary s; other complex s are rejected.
std::complex<double> K_Q(const Ensemble& ens, std::complex<double> s);

/// Serial reference for K_real (identical summation order).
double K_real_serial(const Ensemble& ens, double s, double upto = kInf);

struct KLimit {
  double value = 0.0;       // K_{Q_ref}(s)
  double tail_bound = 0.0;  // c |s|^2 (log Q_ref)^{A-1} / Q_ref
};
/// Needs |s| < Q_ref <= Q.
KLimit K_limit(const Ensemble& ens, double s, double Q_ref, double c = 10.0);

struct KAsymptotic {
  double value = 0.0;  // s H(s) + alpha eta s (log s)^{A-1}
  double exact = 0.0;  // K_Q(s)
  double rel_err = 0.0;
};
/// Needs 3 <= s <= Q / log Q.
KAsymptotic K_asymptotic(const Ensemble& ens, double s);

/// sum_n (1/q_n) E(Y e^{sY/q_n}) / E(e^{sY/q_n}) = K_Q'(s).
double tilted_mean_sum(const Ensemble& ens, double s);

struct CharFnResult {
  double t = 0.0;
  std::complex<double> value;
  double envelope = 1.0;  // exp(-C0 |t| (log |t|)^{A-2}) for |t| >= 2, else 1
  double C0 = 0.0;
  bool char_zero = false;
};
CharFnResult char_fn(const Ensemble& ens, double t, double C0);

struct C0Fit {
  double C0 = 0.0;
  double raw_min = 0.0;  // min over the fit grid of -log|phi(t)| / (t (log t)^{A-2})
  std::vector<double> t_grid;
  std::vector<double> log_abs_phi;
  bool verified = false;  // envelope holds on an offset verification grid
  double worst_margin = 0.0;  // min over the verification grid of log envelope - log|phi|
};
/// Fit on `points` equally spaced t in [t_min, t_max], with a 0.95 safety factor.
C0Fit fit_C0(const Ensemble& ens, double t_min = 2.0, double t_max = 100.0, int points = 981);

/// |phi_Q(t)| on a grid, in log form (OpenMP kernel).
std::vector<double> log_abs_char_fn(const Ensemble& ens, std::span<const double> t_grid);

}  // namespace ldlab
