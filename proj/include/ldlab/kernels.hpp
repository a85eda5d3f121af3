#pragma once

// Hot loops. Every parallel kernel has a serial twin that performs the same
// floating-point operations in the same order, so the two agree bit for bit.

#include <cmath>
#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "ldlab/models.hpp"
#include "ldlab/numeric.hpp"
#include "ldlab/rng.hpp"

namespace ldlab::kernels {

inline constexpr std::size_t kChunk = 4096;

/// Sum of term(i) for i < n: Neumaier sums over fixed chunks, merged in chunk order.
template <class F>
double chunked_sum(std::size_t n, F term) {
  const std::size_t chunks = (n + kChunk - 1) / kChunk;
  std::vector<CompensatedSum> part(chunks);
#pragma omp parallel for schedule(static)
  for (std::int64_t c = 0; c < std::int64_t(chunks); ++c) {
    const std::size_t lo = std::size_t(c) * kChunk;
    const std::size_t hi = std::min(n, lo + kChunk);
    CompensatedSum acc;
    for (std::size_t i = lo; i < hi; ++i) acc.add(term(i));
    part[c] = acc;
  }
  CompensatedSum total;
  for (const auto& p : part) total.add(p);
  return total.value();
}

template <class F>
double chunked_sum_serial(std::size_t n, F term) {
  CompensatedSum total;
  for (std::size_t lo = 0; lo < n; lo += kChunk) {
    const std::size_t hi = std::min(n, lo + kChunk);
    CompensatedSum acc;
    for (std::size_t i = lo; i < hi; ++i) acc.add(term(i));
    total.add(acc);
  }
  return total.value();
}

/// Hit statistics of one Monte Carlo worker. The estimator is a mean of i.i.d.
/// units (one unit = `reuse` samples sharing their tail coordinates); unit values
/// are kept in log space.
struct McAccumulator {
  std::uint64_t n = 0;      // samples
  std::uint64_t units = 0;
  std::uint64_t hits = 0;
  double log_u = -kInf;   // log sum of unit values
  double log_u2 = -kInf;  // log sum of squared unit values
  void merge(const McAccumulator& o);
};

/// H = sum_i y_i * inv_q[i], y_i drawn by samplers[i]. A hit is H > V and carries
/// weight exp(log_norm - s H) (s = 0, log_norm = 0 gives plain counting).
/// Coordinates i >= head are drawn once per unit and shared by its `reuse`
/// samples; the head is drawn afresh for every sample. Each sample still has the
/// exact joint law, so the estimator stays unbiased, and units are independent.
struct McProblem {
  std::span<const double> inv_q;
  std::span<const TiltedSampler> samplers;
  double V = 0.0;
  double s = 0.0;
  double log_norm = 0.0;
  std::size_t head = static_cast<std::size_t>(-1);  // default: every coordinate fresh
  std::uint64_t reuse = 1;
};

/// Samples handled by worker w when n samples are split over `workers`.
std::uint64_t worker_share(std::uint64_t n, int workers, int w);

/// One accumulator per worker; worker w draws from make_stream(seed, w). n must be
/// a multiple of prob.reuse; units are split over workers as by worker_share.
std::vector<McAccumulator> mc_run(const McProblem& prob, std::uint64_t n, std::uint64_t seed,
                                  int workers);
std::vector<McAccumulator> mc_run_serial(const McProblem& prob, std::uint64_t n,
                                         std::uint64_t seed, int workers);

/// All sampled values of H, worker blocks concatenated in worker order.
std::vector<double> mc_values(const McProblem& prob, std::uint64_t n, std::uint64_t seed,
                              int workers);
std::vector<double> mc_values_serial(const McProblem& prob, std::uint64_t n, std::uint64_t seed,
                                     int workers);

/// Partial sums of one set of draws: out[c][k] is the sum over coordinates
/// i < cuts[c] of sample k. cuts ascending; samples laid out as in mc_values.
std::vector<std::vector<double>> mc_values_nested(const McProblem& prob,
                                                  std::span<const std::size_t> cuts,
                                                  std::uint64_t n, std::uint64_t seed, int workers);
std::vector<std::vector<double>> mc_values_nested_serial(const McProblem& prob,
                                                         std::span<const std::size_t> cuts,
                                                         std::uint64_t n, std::uint64_t seed,
                                                         int workers);

/// Re sum_p p^{-1-it} at each t of the grid, i.e. sum_p cos(t log p)/p.
std::vector<double> zeta_scan(std::span<const std::uint64_t> primes, std::span<const double> t_grid);
std::vector<double> zeta_scan_serial(std::span<const std::uint64_t> primes,
                                     std::span<const double> t_grid);

/// For characters chi_j(a) = e(j ind(a)/(q-1)), j = 1..q-2:
/// sum_p cos(2 pi j ind(p)/(q-1))/p. `ind` holds the indices of the primes.
std::vector<double> character_scan(std::uint64_t q, std::span<const std::uint64_t> ind,
                                   std::span<const double> inv_p);
std::vector<double> character_scan_serial(std::uint64_t q, std::span<const std::uint64_t> ind,
                                          std::span<const double> inv_p);

/// sum_p kronecker(d, p)/p for each discriminant d.
std::vector<double> quadratic_scan(std::span<const std::int64_t> discriminants,
                                   std::span<const std::uint64_t> primes);
std::vector<double> quadratic_scan_serial(std::span<const std::int64_t> discriminants,
                                          std::span<const std::uint64_t> primes);

/// Row-major q x q table of Kl_q(a, b) = q^{-1/2} sum_{n} cos(2 pi (a n + b n^-1)/q).
std::vector<double> kloosterman_table(std::uint64_t q);
std::vector<double> kloosterman_table_serial(std::uint64_t q);

/// log |prod_i cf_i(t * inv_q[i])| for each t; -inf where some factor vanishes.
/// models[i] is the law of coordinate i.
std::vector<double> log_abs_char_fn_grid(std::span<const RandomModel* const> models,
                                         std::span<const double> inv_q,
                                         std::span<const double> t_grid);
std::vector<double> log_abs_char_fn_grid_serial(std::span<const RandomModel* const> models,
                                                std::span<const double> inv_q,
                                                std::span<const double> t_grid);

}  // namespace ldlab::kernels
