#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ldlab {

/// Ordinates 0 < gamma_1 < gamma_2 < ... of zeta zeros, with |rho_n| = sqrt(1/4 + gamma_n^2).
class ZeroTable {
 public:
  ZeroTable() = default;
  /// Throws ErrorKind::fixture unless ordinates are positive and strictly increasing.
  explicit ZeroTable(std::vector<double> ordinates);

  std::size_t size() const { return ordinates_.size(); }
  bool empty() const { return ordinates_.empty(); }
  std::span<const double> ordinates() const { return ordinates_; }
  std::span<const double> rho_abs() const { return rho_abs_; }
  double gamma(std::size_t i) const { return ordinates_[i]; }
  double rho_abs(std::size_t i) const { return rho_abs_[i]; }

  /// Largest weight value the table is known to cover completely.
  double coverage() const { return rho_abs_.empty() ? 0.0 : rho_abs_.back(); }

 private:
  std::vector<double> ordinates_;
  std::vector<double> rho_abs_;
};

/// One ordinate per line, ascending. Blank lines and '#' comments are skipped.
ZeroTable load_zero_table(const std::filesystem::path& path);

/// $LDLAB_DATA/zeta_zeros.txt if the variable is set, else the bundled fixture.
std::filesystem::path default_zero_table_path();

enum class FamilyKind { integers, primes, zeta_zeros, lfunction_local, synthetic };

/// Weights q_n <= x in non-decreasing order. `label` identifies the source
/// of each weight: n for integers and synthetic, the prime p for primes and
/// lfunction_local, the zero index (1-based) for zeta_zeros.
struct Weights {
  std::vector<double> q;
  std::vector<std::uint64_t> label;
  std::size_t size() const { return q.size(); }
};

/// A weight sequence whose counting function grows like
/// alpha * integral (log(t/beta))^(A-1) dt with relative error (log t)^-B.
struct WeightFamily {
  FamilyKind kind = FamilyKind::integers;
  double alpha = 1.0;
  double beta = 1.0;
  double A = 1.0;
  double B = 0.0;
  std::optional<double> c_A;
  int order = 0;  // lfunction_local: root-of-unity order m, 0 for the full circle
  std::shared_ptr<const ZeroTable> zeros;

  static WeightFamily integers();
  static WeightFamily primes();
  static WeightFamily zeta_zeros(std::shared_ptr<const ZeroTable> table);
  static WeightFamily lfunction_local(int m);
  static WeightFamily synthetic(double alpha, double beta, double A);

  /// "integers", "primes", "zeta", "lfl:<m>", "lfl:circle", "synthetic:<alpha>:<beta>:<A>".
  static WeightFamily parse(std::string_view spec, std::shared_ptr<const ZeroTable> zeros = {});

  std::string name() const;
  double beta_prime() const { return (2.0 + beta) * (2.0 + beta); }
  bool prime_indexed() const {
    return kind == FamilyKind::primes || kind == FamilyKind::lfunction_local;
  }
  WeightFamily with_c_A(double value) const {
    WeightFamily f = *this;
    f.c_A = value;
    return f;
  }
};

Weights enumerate_labeled(const WeightFamily& family, double x);
std::vector<double> enumerate_weights(const WeightFamily& family, double x);
std::uint64_t counting(const WeightFamily& family, double x);
double harmonic_sum(const WeightFamily& family, double x);

/// q_p = 1/(-log(1 - 1/p) - mu_p) with mu_p = -(1/m) log(1 - p^-m); m = 0 means mu_p = 0.
double lfunction_local_weight(std::uint64_t p, int m);
double lfunction_local_mean(std::uint64_t p, int m);
/// gamma - (1/m) log zeta(m); gamma for m = 0.
double lfunction_local_constant(int m);

/// Main terms of H(x) without the constant:
///   (alpha/A)(log x)^A - alpha log(beta) (log x)^(A-1)   if A > 0
///   alpha log log x - alpha log(beta) / log x           if A = 0
double harmonic_main_terms(const WeightFamily& family, double x);

/// harmonic_main_terms + C_A. Needs c_A and x >= 4 (2 + beta)^2.
double harmonic_asymptotic(const WeightFamily& family, double x);

struct CalibrationResult {
  double c_A = 0.0;
  std::vector<double> grid;
  std::vector<double> estimates;  // H(x) - main terms, per grid point
};

/// Average of H(x) - harmonic_main_terms(x) over an ascending grid (min >= 1000).
CalibrationResult estimate_CA(const WeightFamily& family, std::span<const double> grid);

/// Default calibration grid for families without a closed-form constant.
std::vector<double> default_calibration_grid(const WeightFamily& family);

/// The family itself when c_A is set, otherwise a copy calibrated on the default grid.
WeightFamily calibrated(const WeightFamily& family);

struct HarmonicDiff {
  double tau = 0.0;
  double exact = 0.0;      // H(u) - H(v)
  double predicted = 0.0;  // alpha tau (log v)^(A-1)
};

/// Needs u, v >= 2 and |log u - log v| <= (log v)/2.
HarmonicDiff harmonic_diff(const WeightFamily& family, double u, double v);

/// Sorted weights up to Q with compensated prefix sums of 1/q_n.
class HarmonicTable {
 public:
  HarmonicTable(const WeightFamily& family, double Q);

  const WeightFamily& family() const { return family_; }
  const Weights& weights() const { return weights_; }
  double Q() const { return Q_; }
  /// H(x) for x <= Q.
  double H(double x) const;
  double total() const { return prefix_.empty() ? 0.0 : prefix_.back(); }
  /// Smallest enumerated weight z with H(z) >= V; nullopt if V > H(Q).
  std::optional<double> smallest_weight_reaching(double V) const;

 private:
  WeightFamily family_;
  double Q_;
  Weights weights_;
  std::vector<double> prefix_;
};

}  // namespace ldlab
