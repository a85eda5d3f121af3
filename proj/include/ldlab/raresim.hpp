#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ldlab/cumulant.hpp"

namespace ldlab {

enum class EstimateMethod { direct, tilted, exact_enumeration };
std::string to_string(EstimateMethod m);

struct EstimateResult {
  double log_p_hat = 0.0;   // -inf when nothing was hit
  double stderr_rel = 0.0;  // relative standard error of p_hat
  std::uint64_t n_samples = 0;
  std::uint64_t hits = 0;
  EstimateMethod method = EstimateMethod::direct;
  double s = 0.0;  // tilt (0 for direct)
  std::uint64_t seed = 0;
  int workers = 1;
  bool zero_hits = false;
  double upper_95 = 0.0;  // rule-of-three bound 3/n, set on zero hits
};

struct SimOptions {
  int workers = 1;
  // Coordinates with q_n > head_cutoff are drawn once per group of `reuse` samples.
  double head_cutoff = kInf;
  std::uint64_t reuse = 1;
};

/// Fraction of n draws of H_Y(Q) exceeding V.
EstimateResult direct_estimate(const Ensemble& ens, double V, std::uint64_t n, std::uint64_t seed,
                               const SimOptions& opt = {});

/// Mean of exp(K_Q(s) - s H) 1{H > V} with H drawn under the tilt s/q_n per coordinate.
/// s <= 0 falls back to direct_estimate.
EstimateResult tilted_estimate(const Ensemble& ens, double V, double s, std::uint64_t n,
                               std::uint64_t seed, const SimOptions& opt = {});

/// Exact P(H > V) for discrete laws, by depth-first enumeration (at most 2^24 outcomes).
EstimateResult exact_enumeration(const Ensemble& ens, double V);

/// Sorted draws of H_Y(Q), with the data needed for the convergence budget.
struct EmpiricalCdf {
  std::vector<double> values;
  double Q = 0.0;
  double H = 0.0;  // H(Q)
  double A = 0.0;
  double at(double v) const;  // fraction of draws <= v
};

EmpiricalCdf empirical_cdf(const Ensemble& ens, std::uint64_t n, std::uint64_t seed, int workers = 1);

/// Empirical CDFs of H_Y(Q_j) for each Q_j in the ascending list (each <= ens.Q()),
/// built from one set of draws: sample k at Q_j is a partial sum of sample k at
/// the largest level. Every CDF has the exact law of its level; the coupling only
/// removes independent noise from comparisons between levels.
std::vector<EmpiricalCdf> empirical_cdf_nested(const Ensemble& ens, std::span<const double> Q_levels,
                                               std::uint64_t n, std::uint64_t seed,
                                               int workers = 1);

struct CdfComparison {
  double sup_distance = 0.0;
  double berry_esseen_budget = kNaN;  // H(Q)/L + (log Q)^{(A-1)/3}/Q^{1/3}, from the first CDF
};

/// Two-sample Kolmogorov distance. The budget is filled when L is given.
CdfComparison compare_cdfs(const EmpiricalCdf& a, const EmpiricalCdf& b,
                           std::optional<double> L = std::nullopt);

double berry_esseen_budget(double H_Q, double A, double Q, double L);

}  // namespace ldlab
