#include "ldlab/empirical.hpp"

#include <algorithm>
#include <cmath>

#include "ldlab/aih.hpp"
#include "ldlab/error.hpp"
#include "ldlab/kernels.hpp"
#include "ldlab/numeric.hpp"
#include "ldlab/primes.hpp"

namespace ldlab {

double EmpiricalTail::tail(double V) const {
  if (values.empty()) return 0.0;
  const auto it = std::upper_bound(values.begin(), values.end(), V);
  return double(values.end() - it) / double(values.size());
}

namespace {

EmpiricalTail finish(std::string family, double parameter, double P, std::vector<double> values,
                     std::span<const std::uint64_t> primes) {
  EmpiricalTail t;
  t.family = std::move(family);
  t.parameter = parameter;
  t.P = P;
  CompensatedSum b;
  for (auto p : primes) b.add(1.0 / double(p));
  t.bound = b.value();
  for (double v : values)
    if (!(std::abs(v) <= t.bound * (1.0 + 1e-12)))
      fail(ErrorKind::numeric, "scan statistic exceeds the triangle-inequality bound");
  std::sort(values.begin(), values.end());
  t.values = std::move(values);
  return t;
}

}  // namespace

EmpiricalTail scan_G_zeta(double T, double P, double step) {
  require(P >= 2.0, "scan needs P >= 2");
  require(step > 0.0 && step <= 1.0, "scan needs 0 < step <= 1");
  require(T > 0.0, "scan needs T > 0");
  const auto primes = primes_up_to(std::uint64_t(P));
  const auto n = std::size_t(std::floor(T / step)) + 1;
  std::vector<double> grid(n);
  for (std::size_t k = 0; k < n; ++k) grid[k] = T + double(k) * step;
  return finish("zeta", T, P, kernels::zeta_scan(primes, grid), primes);
}

EmpiricalTail scan_G_characters(std::uint64_t q, double P) {
  require(q >= 3 && q <= 100000 && is_prime(q), "character scan needs a prime q <= 1e5");
  require(P >= 2.0 && P <= 10000.0, "character scan needs 2 <= P <= 1e4");
  const CharacterTable table(q);
  std::vector<std::uint64_t> primes, ind;
  std::vector<double> inv_p;
  for (auto p : primes_up_to(std::uint64_t(P))) {
    if (p == q) continue;  // chi(q) = 0
    primes.push_back(p);
    ind.push_back(table.index(p));
    inv_p.push_back(1.0 / double(p));
  }
  return finish("characters", double(q), P, kernels::character_scan(q, ind, inv_p), primes);
}

EmpiricalTail scan_G_quadratic(double x, double P) {
  require(x >= 3.0 && x <= 1e6, "quadratic scan needs 3 <= x <= 1e6");
  require(P >= 2.0, "scan needs P >= 2");
  const auto discs = fundamental_discriminants(std::uint64_t(x));
  const auto primes = primes_up_to(std::uint64_t(P));
  return finish("quadratic", x, P, kernels::quadratic_scan(discs, primes), primes);
}

PsiTable::PsiTable(std::uint64_t limit) : limit_(limit) {
  const PrimePowerTable pp = prime_powers_up_to(limit);
  values_ = pp.values;
  prefix_.reserve(values_.size());
  CompensatedSum acc;
  for (double l : pp.log_p) {
    acc.add(l);
    prefix_.push_back(acc.value());
  }
}

double PsiTable::psi(double x) const {
  if (!(x <= double(limit_))) fail(ErrorKind::precondition, "x beyond sieve range");
  if (x < 2.0) return 0.0;
  const auto n = std::uint64_t(std::floor(x));
  const auto it = std::upper_bound(values_.begin(), values_.end(), n);
  return it == values_.begin() ? 0.0 : prefix_[std::size_t(it - values_.begin()) - 1];
}

std::vector<PsiRow> psi_error_compare(const std::vector<double>& x_grid, const ZeroTable& zeros,
                                      std::size_t n_zeros) {
  require(n_zeros <= zeros.size(), "n_zeros exceeds the zero table");
  for (double x : x_grid) require(x >= 1e2 && x <= 1e6, "psi comparison needs x in [1e2, 1e6]");
  if (x_grid.empty()) return {};
  const PsiTable table(std::uint64_t(std::ceil(*std::max_element(x_grid.begin(), x_grid.end()))));
  std::vector<PsiRow> rows(x_grid.size());
  for (std::size_t k = 0; k < x_grid.size(); ++k) {
    const double x = x_grid[k];
    const double lx = std::log(x);
    CompensatedSum m;
    for (std::size_t n = 0; n < n_zeros; ++n) {
      const double g = zeros.gamma(n);
      // Re(x^{ig}/(1/2 + ig))
      m.add((0.5 * std::cos(g * lx) + g * std::sin(g * lx)) / (0.25 + g * g));
    }
    rows[k] = {x, (table.psi(x) - x) / std::sqrt(x), -2.0 * m.value()};
  }
  return rows;
}

std::vector<double> log_spaced(double a, double b, std::size_t count) {
  require(a > 0.0 && b > a && count >= 2, "log_spaced needs 0 < a < b and count >= 2");
  std::vector<double> out(count);
  const double la = std::log(a), lb = std::log(b);
  for (std::size_t k = 0; k < count; ++k) out[k] = std::exp(la + (lb - la) * double(k) / double(count - 1));
  out.front() = a;
  out.back() = b;
  return out;
}

}  // namespace ldlab
