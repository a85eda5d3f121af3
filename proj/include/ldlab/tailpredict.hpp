#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ldlab/models.hpp"
#include "ldlab/weights.hpp"

namespace ldlab {

/// Which admissible window a prediction was gated by.
///   w_range    c <= W <= log Q - log log Q - theta
///   w_range_L  c <= W <= log L - A log log Q - [A = 0] log log log Q - theta
///   v_range    c <= V <= R(Q)
///   v_range_L  c <= V <= R(L, Q)
enum class RangeKind { w_range, w_range_L, v_range, v_range_L };
std::string to_string(RangeKind k);

struct RangeSpec {
  double theta = 5.0;
  double c = 2.0;
  std::optional<double> L;
  double Q = 1e5;
  void validate() const;
};

struct LabeledRange {
  RangeKind kind = RangeKind::w_range;
  double V_min = 0.0, V_max = 0.0;
  double W_min = 0.0, W_max = 0.0;  // NaN where W is undefined (V below 1 + C_A)
};

/// Every range variant (the L variants only when spec.L is set).
std::vector<LabeledRange> admissible_range(const WeightFamily& family, const RangeSpec& spec);
LabeledRange admissible_range(const WeightFamily& family, const RangeSpec& spec, RangeKind kind);

/// ((A/alpha)(V - C_A))^(1/A) for A > 0, exp((V - C_A)/alpha) for A = 0. Needs V >= 1 + C_A.
double W_of_V(const WeightFamily& family, double V);
/// Inverse of W_of_V.
double V_of_W(const WeightFamily& family, double W);

/// Smallest weight z with H(z) >= V. Enumerates up to x_max.
double Z_of_V(const WeightFamily& family, double V, double x_max = 1e7);
double Z_of_V(const HarmonicTable& table, double V);

struct TailPrediction {
  double V = 0.0;
  double W = 0.0;  // NaN below 1 + C_A
  double Z = 0.0;
  double s = 0.0;  // e^{-eta-1} Z
  double eta = 0.0;
  double lambda = 0.0;  // -log P(H > V)
  double log_lambda = 0.0;
  double error_window = 0.0;  // relative
  bool in_range = false;
  RangeKind range_used = RangeKind::v_range;
};

/// lambda = alpha e^{-eta-1} Z (log Z)^{A-1}, window sqrt(loglog Z/log Z + (log Z)^{1-B}).
TailPrediction predict_tail_main(const WeightFamily& family, double eta, double V,
                                 const RangeSpec& range);
/// lambda = alpha beta e^{-eta-1} W^{A-1} e^W, window sqrt(log W / W) + W^{-(B-1)/2}.
TailPrediction predict_tail_cor(const WeightFamily& family, double eta, double V,
                                const RangeSpec& range);
TailPrediction predict_tail_main(const WeightFamily& family, const RandomModel& model, double V,
                                 const RangeSpec& range);
TailPrediction predict_tail_cor(const WeightFamily& family, const RandomModel& model, double V,
                                const RangeSpec& range);

/// Predicted extreme of psi(x) - x: (1/2pi) sqrt(x) (log3 x - log4 x + eta + 1)^2.
struct PsiExtreme {
  double value = 0.0;      // may be inf when x itself overflows
  double log_value = 0.0;
};
/// Needs x > e^{e^e}.
PsiExtreme psi_extreme_prediction(double x, double eta);
/// Same, from log x (for x beyond double range).
PsiExtreme psi_extreme_prediction_log(double log_x, double eta);

}  // namespace ldlab
