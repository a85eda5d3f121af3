#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ldlab/weights.hpp"

namespace ldlab {

/// One moment E X(p_1)...X(p_l) against the independent model.
struct MomentComparison {
  std::vector<std::int64_t> indices;  // primes, or shifts for Kloosterman
  int ell = 0;
  double empirical = 0.0;
  double model = 0.0;
  double budget = 0.0;
  bool pass = false;      // |empirical - model| <= budget
  bool in_range = true;   // the family's exactness/approximation range holds
  std::string note;
};

/// Dirichlet characters modulo a prime q: chi_j(a) = e(j ind_g(a)/(q-1)), j = 0..q-2.
class CharacterTable {
 public:
  explicit CharacterTable(std::uint64_t q);
  std::uint64_t modulus() const { return q_; }
  std::uint64_t primitive_root() const { return g_; }
  /// Discrete log of a (a not divisible by q).
  std::uint64_t index(std::uint64_t a) const;
  std::complex<double> chi(std::uint64_t j, std::uint64_t a) const;
  double re_chi(std::uint64_t j, std::uint64_t a) const;
  /// max over a of |(1/(q-1)) sum_j chi_j(a) - [a == 1 mod q]|.
  double orthogonality_residual() const;

 private:
  std::uint64_t q_, g_;
  std::vector<std::uint64_t> ind_;
  std::vector<double> cos_, sin_;
};

/// prod over distinct p of E cos^{a_p}(theta), theta uniform: binom(a, a/2)/2^a (0 for odd a).
double circle_product_moment(const std::vector<std::int64_t>& primes);

/// (1/T) int_T^{2T} prod cos(t log p_j) dt in closed form against the circle model.
MomentComparison moment_pit(const std::vector<std::int64_t>& primes, double T);
/// The same average by composite Simpson integration (test oracle).
double moment_pit_numeric(const std::vector<std::int64_t>& primes, double T, int panels = 1'000'000);

/// Average over all characters mod q of prod Re chi(p_j); exact while prod p_j < q.
MomentComparison moment_characters(std::uint64_t q, const std::vector<std::int64_t>& primes);
MomentComparison moment_characters(const CharacterTable& table, const std::vector<std::int64_t>& primes);

/// Literal Graham-Ringrose type bound
/// x^{-k/8K} prod_{p|n}(1 + p^{-(1-k/8K)}) y^{1/3} n^{1/7K} tau(n)^{k^2/K}, K = 2^k.
double quadchar_error_budget(double x, double y, std::uint64_t n, int k);
/// The k used for discriminants up to x: floor(log log log x / log 2), at least 1.
int quadchar_default_k(double x);

/// Average of prod kronecker(d, p_j) over fundamental |d| <= x, against
/// prod_{p|N} p/(p+1) for square N and 0 otherwise. Budget: x^{-1/4} for squares,
/// slack * quadchar_error_budget otherwise.
MomentComparison moment_quadchar(double x, const std::vector<std::int64_t>& primes,
                                 double slack = 100.0);

/// Kl_q(a, b) = q^{-1/2} sum_{n in F_q^*} e((a n + b n^-1)/q). Checks realness and |Kl| <= 2.
double kloosterman(std::uint64_t q, std::int64_t a, std::int64_t b);

struct KloostermanSampling {
  std::uint64_t pairs = 0;
  std::uint64_t seed = 0;
};

/// Average of prod_i Kl_q(a - n_i, b) over a, b in F_q^* (all pairs, or sampled pairs),
/// against prod over distinct shifts of E (2 cos theta)^{a_j} under Sato-Tate.
/// Budget 10 * 2^l * l / sqrt(q), plus the sampling standard error when sampled.
MomentComparison moment_kloosterman(std::uint64_t q, const std::vector<std::int64_t>& shifts,
                                    std::optional<KloostermanSampling> sampled = std::nullopt);

/// C_a(b) = (2/pi) int_0^pi cos^a(t) sin(t) sin((b+1)t) dt, 0 <= b <= a <= 30.
double chebyshev_coeff(int a, int b);
/// max over the grid of |cos^a t - sum_b C_a(b) sin((b+1)t)/sin t|.
double hecke_identity_check(int a, const std::vector<double>& theta_grid);
/// E cos^a(theta) under (2/pi) sin^2 dtheta.
double sato_tate_moment(int a);

/// Moment-generating comparison E e^{s H_X} against exp(K_Q(s)) for an arithmetic family.
enum class ArithmeticFamily { characters, pit, quadchar };
struct MomentMatch {
  double empirical = 0.0;  // E e^{s H_X}
  double model = 0.0;      // exp(K_Q(s))
  double difference = 0.0;
  double L = 0.0;
  double budget = 0.0;     // 10 e^{-L/2}
  bool s_in_range = false; // |s| <= L / (10 H(Q))
  bool pass = false;
};
/// `param` is q (characters), T (pit) or x (quadchar); Q bounds the primes used.
MomentMatch moment_match_check(ArithmeticFamily family, double param, double Q, double s);

}  // namespace ldlab
