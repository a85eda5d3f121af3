#include "ldlab/tailpredict.hpp"

#include <cmath>

#include "ldlab/error.hpp"
#include "ldlab/numeric.hpp"

namespace ldlab {

std::string to_string(RangeKind k) {
  switch (k) {
    case RangeKind::w_range: return "w_range";
    case RangeKind::w_range_L: return "w_range_L";
    case RangeKind::v_range: return "v_range";
    case RangeKind::v_range_L: return "v_range_L";
  }
  return "?";
}

void RangeSpec::validate() const {
  require(theta > 0.0, "range theta must be positive");
  require(c >= 1.0, "range cutoff c must be >= 1");
  require(Q > std::exp(std::exp(1.0)), "range needs Q > e^e");
  if (L) require(*L > 1.0, "range needs L > 1");
}

namespace {

double constant_of(const WeightFamily& f) {
  if (!f.c_A) fail(ErrorKind::precondition, "constant not calibrated for " + f.name());
  return *f.c_A;
}

double W_or_nan(const WeightFamily& f, double V) {
  return V >= 1.0 + constant_of(f) ? W_of_V(f, V) : kNaN;
}

LabeledRange from_W(const WeightFamily& f, RangeKind kind, double W_min, double W_max) {
  LabeledRange r;
  r.kind = kind;
  r.W_min = W_min;
  r.W_max = W_max;
  r.V_min = V_of_W(f, W_min);
  r.V_max = W_max > 0.0 ? V_of_W(f, W_max) : -kInf;
  return r;
}

LabeledRange from_V(const WeightFamily& f, RangeKind kind, double V_min, double V_max) {
  LabeledRange r;
  r.kind = kind;
  r.V_min = V_min;
  r.V_max = V_max;
  r.W_min = W_or_nan(f, V_min);
  r.W_max = W_or_nan(f, V_max);
  return r;
}

}  // namespace

LabeledRange admissible_range(const WeightFamily& f, const RangeSpec& spec, RangeKind kind) {
  spec.validate();
  const double cA = constant_of(f);
  const double a = f.alpha, A = f.A, th = spec.theta;
  const double lQ = std::log(spec.Q), llQ = std::log(lQ);
  if (kind == RangeKind::w_range_L || kind == RangeKind::v_range_L)
    require(spec.L.has_value(), "this range needs L");
  switch (kind) {
    case RangeKind::w_range:
      return from_W(f, kind, spec.c, lQ - llQ - th);
    case RangeKind::w_range_L: {
      const double lL = std::log(*spec.L);
      double top = lL - A * llQ - th;
      if (A == 0.0) top -= std::log(llQ);
      return from_W(f, kind, spec.c, top);
    }
    case RangeKind::v_range: {
      const double R = A > 0.0 ? a / A * std::pow(lQ, A) + cA - (a * llQ + th) * std::pow(lQ, A - 1.0)
                               : a * llQ + cA - (a * llQ + th) / lQ;
      return from_V(f, kind, spec.c, R);
    }
    case RangeKind::v_range_L: {
      const double lL = std::log(*spec.L);
      const double R = A > 0.0
                           ? a / A * std::pow(lL, A) + cA - (a * A * llQ + th) * std::pow(lL, A - 1.0)
                           : a * std::log(lL) + cA - (a * std::log(llQ) + th) / lL;
      return from_V(f, kind, spec.c, R);
    }
  }
  return {};
}

std::vector<LabeledRange> admissible_range(const WeightFamily& f, const RangeSpec& spec) {
  std::vector<LabeledRange> out{admissible_range(f, spec, RangeKind::w_range),
                                admissible_range(f, spec, RangeKind::v_range)};
  if (spec.L) {
    out.push_back(admissible_range(f, spec, RangeKind::w_range_L));
    out.push_back(admissible_range(f, spec, RangeKind::v_range_L));
  }
  return out;
}

double W_of_V(const WeightFamily& f, double V) {
  const double cA = constant_of(f);
  require(V >= 1.0 + cA, "V below domain of W (needs V >= 1 + C_A)");
  if (f.A > 0.0) return std::pow(f.A / f.alpha * (V - cA), 1.0 / f.A);
  return std::exp((V - cA) / f.alpha);
}

double V_of_W(const WeightFamily& f, double W) {
  const double cA = constant_of(f);
  require(W > 0.0, "W must be positive");
  if (f.A > 0.0) return cA + f.alpha / f.A * std::pow(W, f.A);
  return cA + f.alpha * std::log(W);
}

double Z_of_V(const HarmonicTable& table, double V) {
  const auto z = table.smallest_weight_reaching(V);
  if (!z) fail(ErrorKind::precondition, "V out of reach");
  return *z;
}

double Z_of_V(const WeightFamily& f, double V, double x_max) {
  double x = 64.0;
  if (f.kind == FamilyKind::zeta_zeros) {
    require(f.zeros && !f.zeros->empty(), "zeta family needs a zero table");
    x_max = std::min(x_max, f.zeros->coverage());
    x = std::min(x, x_max);
  }
  for (;;) {
    const HarmonicTable t(f, x);
    if (const auto z = t.smallest_weight_reaching(V)) return *z;
    if (x >= x_max) fail(ErrorKind::precondition, "V out of reach");
    x = std::min(8.0 * x, x_max);
  }
}

namespace {

bool inside(const LabeledRange& r, double V) { return V >= r.V_min && V <= r.V_max; }

TailPrediction base(const WeightFamily& f, double eta, double V) {
  TailPrediction p;
  p.V = V;
  p.eta = eta;
  p.Z = Z_of_V(f, V);
  p.s = std::exp(-eta - 1.0) * p.Z;
  p.W = f.c_A ? W_or_nan(f, V) : kNaN;
  return p;
}

}  // namespace

TailPrediction predict_tail_main(const WeightFamily& f, double eta, double V, const RangeSpec& range) {
  TailPrediction p = base(f, eta, V);
  const double lZ = std::log(p.Z);
  p.log_lambda = std::log(f.alpha) - eta - 1.0 + lZ + (f.A - 1.0) * std::log(lZ);
  p.lambda = std::exp(p.log_lambda);
  if (lZ > 1.0) {
    const double E = std::log(lZ) / lZ + std::pow(lZ, 1.0 - f.B);
    p.error_window = std::sqrt(E);
  } else {
    p.error_window = kInf;
  }
  const RangeKind kind = range.L ? RangeKind::v_range_L : RangeKind::v_range;
  p.range_used = kind;
  // without C_A the window cannot be placed; report out of range
  p.in_range = f.c_A && inside(admissible_range(f, range, kind), V);
  return p;
}

TailPrediction predict_tail_cor(const WeightFamily& f, double eta, double V, const RangeSpec& range) {
  TailPrediction p = base(f, eta, V);
  const double W = W_of_V(f, V);
  p.log_lambda = std::log(f.alpha * f.beta) - eta - 1.0 + (f.A - 1.0) * std::log(W) + W;
  p.lambda = std::exp(p.log_lambda);
  p.error_window = W > 1.0 ? std::sqrt(std::log(W) / W) + std::pow(W, -(f.B - 1.0) / 2.0) : kInf;
  const RangeKind kind = range.L ? RangeKind::w_range_L : RangeKind::w_range;
  p.range_used = kind;
  const LabeledRange r = admissible_range(f, range, kind);
  p.in_range = W >= r.W_min && W <= r.W_max;
  return p;
}

TailPrediction predict_tail_main(const WeightFamily& f, const RandomModel& m, double V,
                                 const RangeSpec& range) {
  return predict_tail_main(f, eta(m).eta, V, range);
}

TailPrediction predict_tail_cor(const WeightFamily& f, const RandomModel& m, double V,
                                const RangeSpec& range) {
  return predict_tail_cor(f, eta(m).eta, V, range);
}

PsiExtreme psi_extreme_prediction_log(double log_x, double eta) {
  // x > e^{e^e} <=> log log log x > 1 > 0, so log4 is defined
  require(log_x > std::exp(std::exp(1.0)), "x too small for the extreme psi prediction");
  const double l2 = std::log(log_x);
  const double l3 = std::log(l2);
  const double l4 = std::log(l3);
  const double inner = l3 - l4 + eta + 1.0;
  PsiExtreme r;
  r.log_value = 0.5 * log_x - std::log(2.0 * kPi) + 2.0 * std::log(std::abs(inner));
  r.value = std::exp(r.log_value);
  return r;
}

PsiExtreme psi_extreme_prediction(double x, double eta) {
  require(std::isfinite(x) && x > 0.0, "x must be finite and positive");
  return psi_extreme_prediction_log(std::log(x), eta);
}

}  // namespace ldlab
