#include "ldlab/kernels.hpp"

#include <algorithm>

#include "ldlab/error.hpp"
#include "ldlab/primes.hpp"

namespace ldlab::kernels {

void McAccumulator::merge(const McAccumulator& o) {
  n += o.n;
  units += o.units;
  hits += o.hits;
  log_u = log_add_exp(log_u, o.log_u);
  log_u2 = log_add_exp(log_u2, o.log_u2);
}

std::uint64_t worker_share(std::uint64_t n, int workers, int w) {
  const auto k = std::uint64_t(workers);
  return n / k + (std::uint64_t(w) < n % k ? 1 : 0);
}

namespace {

inline double draw_range(const McProblem& p, std::size_t lo, std::size_t hi, Rng& rng) {
  const TiltedSampler* smp = p.samplers.data();
  const double* iq = p.inv_q.data();
  double h = 0.0;
  for (std::size_t i = lo; i < hi; ++i) h += smp[i](rng) * iq[i];
  return h;
}

std::size_t head_of(const McProblem& p) { return std::min(p.head, p.inv_q.size()); }

inline double draw_sum(const McProblem& p, Rng& rng) {
  return draw_range(p, 0, p.inv_q.size(), rng);
}

McAccumulator mc_block(const McProblem& p, std::uint64_t units, Rng& rng) {
  McAccumulator acc;
  acc.units = units;
  acc.n = units * p.reuse;
  const std::size_t head = head_of(p);
  const double log_m = std::log(double(p.reuse));
  for (std::uint64_t u = 0; u < units; ++u) {
    const double tail = draw_range(p, head, p.inv_q.size(), rng);
    double log_g = -kInf;
    for (std::uint64_t r = 0; r < p.reuse; ++r) {
      const double h = draw_range(p, 0, head, rng) + tail;
      if (!(h > p.V)) continue;
      ++acc.hits;
      log_g = log_add_exp(log_g, p.log_norm - p.s * h);
    }
    if (log_g == -kInf) continue;
    log_g -= log_m;
    acc.log_u = log_add_exp(acc.log_u, log_g);
    acc.log_u2 = log_add_exp(acc.log_u2, 2.0 * log_g);
  }
  return acc;
}

void check_problem(const McProblem& p, std::uint64_t n, int workers) {
  require(workers >= 1, "need at least one worker");
  require(p.inv_q.size() == p.samplers.size(), "one sampler per coordinate");
  require(p.reuse >= 1 && n % p.reuse == 0, "sample count must be a multiple of the reuse factor");
}

}  // namespace

std::vector<McAccumulator> mc_run(const McProblem& prob, std::uint64_t n, std::uint64_t seed,
                                  int workers) {
  check_problem(prob, n, workers);
  const std::uint64_t units = n / prob.reuse;
  std::vector<McAccumulator> out(workers);
#pragma omp parallel for schedule(static, 1)
  for (int w = 0; w < workers; ++w) {
    Rng rng = make_stream(seed, std::uint64_t(w));
    out[w] = mc_block(prob, worker_share(units, workers, w), rng);
  }
  return out;
}

std::vector<McAccumulator> mc_run_serial(const McProblem& prob, std::uint64_t n,
                                         std::uint64_t seed, int workers) {
  check_problem(prob, n, workers);
  const std::uint64_t units = n / prob.reuse;
  std::vector<McAccumulator> out(workers);
  for (int w = 0; w < workers; ++w) {
    Rng rng = make_stream(seed, std::uint64_t(w));
    out[w] = mc_block(prob, worker_share(units, workers, w), rng);
  }
  return out;
}

std::vector<double> mc_values(const McProblem& prob, std::uint64_t n, std::uint64_t seed,
                              int workers) {
  check_problem(prob, n, workers);
  std::vector<std::vector<double>> parts(workers);
#pragma omp parallel for schedule(static, 1)
  for (int w = 0; w < workers; ++w) {
    Rng rng = make_stream(seed, std::uint64_t(w));
    const std::uint64_t count = worker_share(n, workers, w);
    parts[w].reserve(count);
    for (std::uint64_t k = 0; k < count; ++k) parts[w].push_back(draw_sum(prob, rng));
  }
  std::vector<double> out;
  out.reserve(n);
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

std::vector<double> mc_values_serial(const McProblem& prob, std::uint64_t n, std::uint64_t seed,
                                     int workers) {
  check_problem(prob, n, workers);
  std::vector<double> out;
  out.reserve(n);
  for (int w = 0; w < workers; ++w) {
    Rng rng = make_stream(seed, std::uint64_t(w));
    const std::uint64_t count = worker_share(n, workers, w);
    for (std::uint64_t k = 0; k < count; ++k) out.push_back(draw_sum(prob, rng));
  }
  return out;
}

namespace {

void check_cuts(const McProblem& p, std::span<const std::size_t> cuts) {
  require(!cuts.empty() && std::is_sorted(cuts.begin(), cuts.end()) &&
              cuts.back() <= p.inv_q.size(),
          "cuts must be ascending and within the coordinate count");
}

void nested_block(const McProblem& p, std::span<const std::size_t> cuts, std::uint64_t count,
                  Rng& rng, std::vector<std::vector<double>>& out) {
  out.assign(cuts.size(), {});
  for (auto& v : out) v.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    // one running sum, so the last level rounds exactly like draw_sum
    double h = 0.0;
    std::size_t i = 0;
    for (std::size_t c = 0; c < cuts.size(); ++c) {
      for (; i < cuts[c]; ++i) h += p.samplers[i](rng) * p.inv_q[i];
      out[c].push_back(h);
    }
  }
}

}  // namespace

std::vector<std::vector<double>> mc_values_nested(const McProblem& prob,
                                                  std::span<const std::size_t> cuts,
                                                  std::uint64_t n, std::uint64_t seed,
                                                  int workers) {
  check_problem(prob, n, workers);
  check_cuts(prob, cuts);
  std::vector<std::vector<std::vector<double>>> parts(workers);
#pragma omp parallel for schedule(static, 1)
  for (int w = 0; w < workers; ++w) {
    Rng rng = make_stream(seed, std::uint64_t(w));
    nested_block(prob, cuts, worker_share(n, workers, w), rng, parts[w]);
  }
  std::vector<std::vector<double>> out(cuts.size());
  for (std::size_t c = 0; c < cuts.size(); ++c) {
    out[c].reserve(n);
    for (auto& p : parts) out[c].insert(out[c].end(), p[c].begin(), p[c].end());
  }
  return out;
}

std::vector<std::vector<double>> mc_values_nested_serial(const McProblem& prob,
                                                         std::span<const std::size_t> cuts,
                                                         std::uint64_t n, std::uint64_t seed,
                                                         int workers) {
  check_problem(prob, n, workers);
  check_cuts(prob, cuts);
  std::vector<std::vector<double>> out(cuts.size()), part;
  for (int w = 0; w < workers; ++w) {
    Rng rng = make_stream(seed, std::uint64_t(w));
    nested_block(prob, cuts, worker_share(n, workers, w), rng, part);
    for (std::size_t c = 0; c < cuts.size(); ++c)
      out[c].insert(out[c].end(), part[c].begin(), part[c].end());
  }
  return out;
}

namespace {

double zeta_point(std::span<const double> log_p, std::span<const double> inv_p, double t) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < log_p.size(); ++i) acc.add(std::cos(t * log_p[i]) * inv_p[i]);
  return acc.value();
}

void prime_logs(std::span<const std::uint64_t> primes, std::vector<double>& log_p,
                std::vector<double>& inv_p) {
  for (std::uint64_t p : primes) {
    log_p.push_back(std::log(double(p)));
    inv_p.push_back(1.0 / double(p));
  }
}

}  // namespace

std::vector<double> zeta_scan(std::span<const std::uint64_t> primes, std::span<const double> t_grid) {
  std::vector<double> log_p, inv_p;
  prime_logs(primes, log_p, inv_p);
  std::vector<double> out(t_grid.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < std::int64_t(t_grid.size()); ++k)
    out[k] = zeta_point(log_p, inv_p, t_grid[k]);
  return out;
}

std::vector<double> zeta_scan_serial(std::span<const std::uint64_t> primes,
                                     std::span<const double> t_grid) {
  std::vector<double> log_p, inv_p;
  prime_logs(primes, log_p, inv_p);
  std::vector<double> out(t_grid.size());
  for (std::size_t k = 0; k < t_grid.size(); ++k) out[k] = zeta_point(log_p, inv_p, t_grid[k]);
  return out;
}

namespace {

std::vector<double> cos_table(std::uint64_t period) {
  std::vector<double> c(period);
  for (std::uint64_t k = 0; k < period; ++k) c[k] = std::cos(2.0 * kPi * double(k) / double(period));
  return c;
}

double character_point(std::uint64_t j, std::uint64_t phi, const std::vector<double>& ctab,
                       std::span<const std::uint64_t> ind, std::span<const double> inv_p) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < ind.size(); ++i) acc.add(ctab[(j * ind[i]) % phi] * inv_p[i]);
  return acc.value();
}

}  // namespace

std::vector<double> character_scan(std::uint64_t q, std::span<const std::uint64_t> ind,
                                   std::span<const double> inv_p) {
  require(q >= 3, "character scan needs q >= 3");
  const std::uint64_t phi = q - 1;
  const auto ctab = cos_table(phi);
  std::vector<double> out(phi - 1);
#pragma omp parallel for schedule(static)
  for (std::int64_t j = 1; j < std::int64_t(phi); ++j)
    out[j - 1] = character_point(std::uint64_t(j), phi, ctab, ind, inv_p);
  return out;
}

std::vector<double> character_scan_serial(std::uint64_t q, std::span<const std::uint64_t> ind,
                                          std::span<const double> inv_p) {
  require(q >= 3, "character scan needs q >= 3");
  const std::uint64_t phi = q - 1;
  const auto ctab = cos_table(phi);
  std::vector<double> out(phi - 1);
  for (std::uint64_t j = 1; j < phi; ++j) out[j - 1] = character_point(j, phi, ctab, ind, inv_p);
  return out;
}

namespace {

double quadratic_point(std::int64_t d, std::span<const std::uint64_t> primes) {
  CompensatedSum acc;
  for (std::uint64_t p : primes) acc.add(double(kronecker(d, p)) / double(p));
  return acc.value();
}

}  // namespace

std::vector<double> quadratic_scan(std::span<const std::int64_t> discriminants,
                                   std::span<const std::uint64_t> primes) {
  std::vector<double> out(discriminants.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < std::int64_t(discriminants.size()); ++k)
    out[k] = quadratic_point(discriminants[k], primes);
  return out;
}

std::vector<double> quadratic_scan_serial(std::span<const std::int64_t> discriminants,
                                          std::span<const std::uint64_t> primes) {
  std::vector<double> out(discriminants.size());
  for (std::size_t k = 0; k < discriminants.size(); ++k)
    out[k] = quadratic_point(discriminants[k], primes);
  return out;
}

namespace {

struct KlSetup {
  std::vector<double> ctab;
  std::vector<std::uint64_t> inv;
  double norm;
};

KlSetup kl_setup(std::uint64_t q) {
  require(is_prime(q), "Kloosterman table needs a prime modulus");
  KlSetup s{cos_table(q), std::vector<std::uint64_t>(q, 0), 1.0 / std::sqrt(double(q))};
  for (std::uint64_t n = 1; n < q; ++n) s.inv[n] = mod_inverse(n, q);
  return s;
}

void kl_row(const KlSetup& s, std::uint64_t q, std::uint64_t a, double* row) {
  for (std::uint64_t b = 0; b < q; ++b) {
    CompensatedSum acc;
    for (std::uint64_t n = 1; n < q; ++n) acc.add(s.ctab[(a * n + b * s.inv[n]) % q]);
    row[b] = acc.value() * s.norm;
  }
}

}  // namespace

std::vector<double> kloosterman_table(std::uint64_t q) {
  const KlSetup s = kl_setup(q);
  std::vector<double> out(q * q);
#pragma omp parallel for schedule(dynamic, 4)
  for (std::int64_t a = 0; a < std::int64_t(q); ++a) kl_row(s, q, std::uint64_t(a), out.data() + a * q);
  return out;
}

std::vector<double> kloosterman_table_serial(std::uint64_t q) {
  const KlSetup s = kl_setup(q);
  std::vector<double> out(q * q);
  for (std::uint64_t a = 0; a < q; ++a) kl_row(s, q, a, out.data() + a * q);
  return out;
}

namespace {

double char_fn_point(std::span<const RandomModel* const> models, std::span<const double> inv_q,
                     double t) {
  CompensatedSum acc;
  for (std::size_t i = 0; i < inv_q.size(); ++i) {
    const double a = std::abs(models[i]->char_fn(t * inv_q[i]));
    if (a <= 1e-12) return -kInf;
    acc.add(std::log(a));
  }
  return acc.value();
}

}  // namespace

std::vector<double> log_abs_char_fn_grid(std::span<const RandomModel* const> models,
                                         std::span<const double> inv_q,
                                         std::span<const double> t_grid) {
  require(models.size() == inv_q.size(), "one model per coordinate");
  std::vector<double> out(t_grid.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t k = 0; k < std::int64_t(t_grid.size()); ++k)
    out[k] = char_fn_point(models, inv_q, t_grid[k]);
  return out;
}

std::vector<double> log_abs_char_fn_grid_serial(std::span<const RandomModel* const> models,
                                                std::span<const double> inv_q,
                                                std::span<const double> t_grid) {
  require(models.size() == inv_q.size(), "one model per coordinate");
  std::vector<double> out(t_grid.size());
  for (std::size_t k = 0; k < t_grid.size(); ++k) out[k] = char_fn_point(models, inv_q, t_grid[k]);
  return out;
}

}  // namespace ldlab::kernels
