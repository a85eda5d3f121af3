#include "ldlab/raresim.hpp"

#include <algorithm>
#include <cmath>

#include "ldlab/error.hpp"
#include "ldlab/kernels.hpp"

namespace ldlab {

std::string to_string(EstimateMethod m) {
  switch (m) {
    case EstimateMethod::direct: return "direct";
    case EstimateMethod::tilted: return "tilted";
    case EstimateMethod::exact_enumeration: return "exact_enumeration";
  }
  return "?";
}

namespace {

std::vector<TiltedSampler> make_samplers(const Ensemble& ens, double s) {
  std::vector<TiltedSampler> out;
  out.reserve(ens.size());
  const auto iq = ens.inv_q();
  for (std::size_t i = 0; i < ens.size(); ++i) out.emplace_back(ens.model(i), s * iq[i]);
  return out;
}

EstimateResult run(const Ensemble& ens, double V, double s, std::uint64_t n, std::uint64_t seed,
                   const SimOptions& opt) {
  require(n >= 1, "simulation needs n >= 1");
  require(opt.workers >= 1, "simulation needs at least one worker");
  require(opt.reuse >= 1 && n % opt.reuse == 0, "n must be a multiple of the reuse factor");
  const auto samplers = make_samplers(ens, s);
  kernels::McProblem prob;
  prob.inv_q = ens.inv_q();
  prob.samplers = samplers;
  prob.V = V;
  prob.s = s;
  prob.log_norm = s == 0.0 ? 0.0 : K_real(ens, s);
  prob.head = std::isfinite(opt.head_cutoff) ? ens.count_upto(opt.head_cutoff) : ens.size();
  prob.reuse = opt.reuse;

  kernels::McAccumulator acc;
  for (const auto& a : kernels::mc_run(prob, n, seed, opt.workers)) acc.merge(a);

  EstimateResult r;
  r.method = s == 0.0 ? EstimateMethod::direct : EstimateMethod::tilted;
  r.s = s;
  r.seed = seed;
  r.workers = opt.workers;
  r.n_samples = n;
  r.hits = acc.hits;
  if (acc.hits == 0) {
    r.zero_hits = true;
    r.log_p_hat = -kInf;
    r.stderr_rel = kInf;
    r.upper_95 = 3.0 / double(n);
    return r;
  }
  const double B = double(acc.units);
  r.log_p_hat = acc.log_u - std::log(B);
  // var of the unit mean: (mean of u^2 - mean^2)/(B - 1), relative to mean^2
  const double ratio = std::exp(acc.log_u2 - std::log(B) - 2.0 * r.log_p_hat);
  r.stderr_rel = B > 1.0 ? std::sqrt(std::max(0.0, ratio - 1.0) / (B - 1.0)) : kInf;
  r.log_p_hat = std::min(r.log_p_hat, 0.0);
  return r;
}

}  // namespace

EstimateResult direct_estimate(const Ensemble& ens, double V, std::uint64_t n, std::uint64_t seed,
                               const SimOptions& opt) {
  return run(ens, V, 0.0, n, seed, opt);
}

EstimateResult tilted_estimate(const Ensemble& ens, double V, double s, std::uint64_t n,
                               std::uint64_t seed, const SimOptions& opt) {
  require(std::isfinite(s), "tilt must be finite");
  return run(ens, V, s > 0.0 ? s : 0.0, n, seed, opt);
}

namespace {

struct Enumerator {
  const Ensemble& ens;
  double V;
  std::vector<double> rest_max, rest_min;  // bounds on sum over coordinates >= i
  CompensatedSum total;

  void go(std::size_t i, double h, double prob) {
    if (h + rest_min[i] > V) {
      total.add(prob);
      return;
    }
    if (!(h + rest_max[i] > V)) return;
    const RandomModel& m = ens.model(i);
    const double iq = ens.inv_q()[i];
    for (std::size_t j = 0; j < m.values().size(); ++j)
      if (m.probs()[j] > 0.0) go(i + 1, h + m.values()[j] * iq, prob * m.probs()[j]);
  }
};

}  // namespace

EstimateResult exact_enumeration(const Ensemble& ens, double V) {
  const std::size_t n = ens.size();
  double states = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    require(ens.model(i).discrete(), "exact enumeration needs discrete laws");
    states *= double(ens.model(i).values().size());
  }
  require(states <= double(1u << 24), "state space too large for exact enumeration");
  Enumerator e{ens, V, std::vector<double>(n + 1, 0.0), std::vector<double>(n + 1, 0.0), {}};
  // Pruning bounds carry a tiny slack so that ties are settled by explicit sums.
  for (std::size_t i = n; i-- > 0;) {
    const auto& v = ens.model(i).values();
    const double iq = ens.inv_q()[i];
    e.rest_max[i] = e.rest_max[i + 1] + *std::max_element(v.begin(), v.end()) * iq;
    e.rest_min[i] = e.rest_min[i + 1] + *std::min_element(v.begin(), v.end()) * iq;
  }
  for (std::size_t i = 0; i < n; ++i) {
    e.rest_max[i] += 1e-12;
    e.rest_min[i] -= 1e-12;
  }
  e.go(0, 0.0, 1.0);
  EstimateResult r;
  r.method = EstimateMethod::exact_enumeration;
  const double p = e.total.value();
  r.log_p_hat = p > 0.0 ? std::min(0.0, std::log(p)) : -kInf;
  r.zero_hits = !(p > 0.0);
  r.stderr_rel = 0.0;
  r.n_samples = std::uint64_t(states);
  return r;
}

double EmpiricalCdf::at(double v) const {
  return double(std::upper_bound(values.begin(), values.end(), v) - values.begin()) /
         double(values.size());
}

EmpiricalCdf empirical_cdf(const Ensemble& ens, std::uint64_t n, std::uint64_t seed, int workers) {
  require(n >= 10000, "empirical CDF needs n >= 1e4");
  const auto samplers = make_samplers(ens, 0.0);
  kernels::McProblem prob;
  prob.inv_q = ens.inv_q();
  prob.samplers = samplers;
  EmpiricalCdf c;
  c.values = kernels::mc_values(prob, n, seed, workers);
  std::sort(c.values.begin(), c.values.end());
  c.Q = ens.Q();
  c.H = ens.H();
  c.A = ens.family().A;
  return c;
}

std::vector<EmpiricalCdf> empirical_cdf_nested(const Ensemble& ens, std::span<const double> Q_levels,
                                               std::uint64_t n, std::uint64_t seed, int workers) {
  require(n >= 10000, "empirical CDF needs n >= 1e4");
  require(!Q_levels.empty() && std::is_sorted(Q_levels.begin(), Q_levels.end()) &&
              Q_levels.back() <= ens.Q(),
          "levels must be ascending and at most Q");
  std::vector<std::size_t> cuts;
  for (double Q : Q_levels) cuts.push_back(ens.count_upto(Q));
  const auto samplers = make_samplers(ens, 0.0);
  kernels::McProblem prob;
  prob.inv_q = ens.inv_q();
  prob.samplers = samplers;
  auto values = kernels::mc_values_nested(prob, cuts, n, seed, workers);
  std::vector<EmpiricalCdf> out(cuts.size());
  for (std::size_t c = 0; c < cuts.size(); ++c) {
    out[c].values = std::move(values[c]);
    std::sort(out[c].values.begin(), out[c].values.end());
    out[c].Q = Q_levels[c];
    out[c].H = ens.table().H(Q_levels[c]);
    out[c].A = ens.family().A;
  }
  return out;
}

double berry_esseen_budget(double H_Q, double A, double Q, double L) {
  require(L > 0.0 && Q > 1.0, "budget needs L > 0 and Q > 1");
  return H_Q / L + std::pow(std::log(Q), (A - 1.0) / 3.0) / std::cbrt(Q);
}

CdfComparison compare_cdfs(const EmpiricalCdf& a, const EmpiricalCdf& b, std::optional<double> L) {
  require(!a.values.empty() && !b.values.empty(), "empty CDF");
  const double na = double(a.values.size()), nb = double(b.values.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.values.size() && j < b.values.size()) {
    const double v = std::min(a.values[i], b.values[j]);
    while (i < a.values.size() && a.values[i] <= v) ++i;
    while (j < b.values.size() && b.values[j] <= v) ++j;
    d = std::max(d, std::abs(double(i) / na - double(j) / nb));
  }
  CdfComparison r;
  r.sup_distance = d;
  if (L) r.berry_esseen_budget = berry_esseen_budget(a.H, a.A, a.Q, *L);
  return r;
}

}  // namespace ldlab
