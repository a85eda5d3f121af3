#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ldlab/weights.hpp"

namespace ldlab {

/// Sorted values of an arithmetic statistic with its tail function.
struct EmpiricalTail {
  std::string family;     // "zeta", "characters", "quadratic"
  double parameter = 0.0; // T, q or x
  double P = 0.0;         // prime truncation
  double bound = 0.0;     // sum_{p <= P} 1/p, bounds every |value|
  std::vector<double> values;

  std::size_t count() const { return values.size(); }
  /// Fraction of values strictly above V.
  double tail(double V) const;
};

/// Re sum_{p <= P} p^{-1-it} at t = T, T + step, ..., <= 2T.
EmpiricalTail scan_G_zeta(double T, double P, double step);
/// Re sum_{p <= P} chi(p)/p for every non-principal character chi mod the prime q.
EmpiricalTail scan_G_characters(std::uint64_t q, double P);
/// sum_{p <= P} kronecker(d, p)/p for every fundamental discriminant |d| <= x.
EmpiricalTail scan_G_quadratic(double x, double P);

/// psi(x) = sum_{p^k <= x} log p by exact summation over prime powers.
class PsiTable {
 public:
  explicit PsiTable(std::uint64_t limit);
  double psi(double x) const;
  std::uint64_t limit() const { return limit_; }

 private:
  std::uint64_t limit_;
  std::vector<std::uint64_t> values_;
  std::vector<double> prefix_;
};

struct PsiRow {
  double x = 0.0;
  double actual = 0.0;  // (psi(x) - x)/sqrt(x)
  double model = 0.0;   // -sum_{n <= n_zeros} 2 Re(x^{i gamma_n}/rho_n)
};

/// Needs x_grid inside [1e2, 1e6] and n_zeros <= zeros.size().
std::vector<PsiRow> psi_error_compare(const std::vector<double>& x_grid, const ZeroTable& zeros,
                                      std::size_t n_zeros);

/// `count` log-spaced points from a to b inclusive.
std::vector<double> log_spaced(double a, double b, std::size_t count);

}  // namespace ldlab
