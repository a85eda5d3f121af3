#include "ldlab/aih.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ldlab/error.hpp"
#include "ldlab/kernels.hpp"
#include "ldlab/models.hpp"
#include "ldlab/numeric.hpp"
#include "ldlab/primes.hpp"
#include "ldlab/rng.hpp"

namespace ldlab {

CharacterTable::CharacterTable(std::uint64_t q) : q_(q) {
  require(q >= 3 && is_prime(q), "character table needs an odd prime modulus");
  g_ = ldlab::primitive_root(q);
  ind_.assign(q, 0);
  std::uint64_t x = 1;
  for (std::uint64_t k = 0; k + 1 < q; ++k) {
    ind_[x] = k;
    x = x * g_ % q;
  }
  const std::uint64_t phi = q - 1;
  cos_.resize(phi);
  sin_.resize(phi);
  for (std::uint64_t k = 0; k < phi; ++k) {
    const double a = 2.0 * kPi * double(k) / double(phi);
    cos_[k] = std::cos(a);
    sin_[k] = std::sin(a);
  }
}

std::uint64_t CharacterTable::index(std::uint64_t a) const {
  const std::uint64_t r = a % q_;
  require(r != 0, "character index of a multiple of q");
  return ind_[r];
}

std::complex<double> CharacterTable::chi(std::uint64_t j, std::uint64_t a) const {
  if (a % q_ == 0) return {0.0, 0.0};
  const std::uint64_t k = (j % (q_ - 1)) * index(a) % (q_ - 1);
  return {cos_[k], sin_[k]};
}

double CharacterTable::re_chi(std::uint64_t j, std::uint64_t a) const {
  if (a % q_ == 0) return 0.0;
  return cos_[(j % (q_ - 1)) * index(a) % (q_ - 1)];
}

double CharacterTable::orthogonality_residual() const {
  double worst = 0.0;
  for (std::uint64_t a = 1; a < q_; ++a) {
    CompensatedSum re, im;
    for (std::uint64_t j = 0; j + 1 < q_; ++j) {
      const auto c = chi(j, a);
      re.add(c.real());
      im.add(c.imag());
    }
    const double mean_re = re.value() / double(q_ - 1);
    const double mean_im = im.value() / double(q_ - 1);
    const double want = a == 1 ? 1.0 : 0.0;
    worst = std::max(worst, std::hypot(mean_re - want, mean_im));
  }
  return worst;
}

namespace {

std::map<std::int64_t, int> multiplicities(const std::vector<std::int64_t>& xs) {
  std::map<std::int64_t, int> m;
  for (auto x : xs) ++m[x];
  return m;
}

void check_primes(const std::vector<std::int64_t>& primes) {
  require(!primes.empty(), "moment needs at least one prime");
  for (auto p : primes) require(p >= 2 && is_prime(std::uint64_t(p)), "moment indices must be primes");
}

MomentComparison finish(MomentComparison c) {
  c.ell = int(c.indices.size());
  c.pass = std::abs(c.empirical - c.model) <= c.budget;
  return c;
}

}  // namespace

double circle_product_moment(const std::vector<std::int64_t>& primes) {
  double m = 1.0;
  for (const auto& [p, a] : multiplicities(primes)) {
    if (a % 2) return 0.0;
    m *= binomial(a, a / 2) / std::ldexp(1.0, a);
  }
  return m;
}

MomentComparison moment_pit(const std::vector<std::int64_t>& primes, double T) {
  check_primes(primes);
  require(T > 0.0, "moment_pit needs T > 0");
  const std::size_t l = primes.size();
  double N = 1.0;
  for (auto p : primes) N *= double(p);
  require(l <= 20 && N < 1e18, "moment_pit needs at most 20 primes with product below 1e18");
  // prod cos(t log p_j) = 2^-l sum over splittings N = ab of (a/b)^{it}
  CompensatedSum emp, bud;
  for (std::uint64_t mask = 0; mask < (std::uint64_t(1) << l); ++mask) {
    std::uint64_t a = 1, b = 1;
    for (std::size_t j = 0; j < l; ++j) (mask >> j & 1 ? b : a) *= std::uint64_t(primes[j]);
    if (a == b) {
      emp.add(1.0);
      continue;
    }
    const double c = std::log(double(a)) - std::log(double(b));
    // Re (1/T) int_T^{2T} e^{itc} dt
    emp.add((std::sin(2.0 * T * c) - std::sin(T * c)) / (T * c));
    bud.add(2.0 / (T * std::abs(c)));
  }
  const double scale = std::ldexp(1.0, -int(l));
  MomentComparison r;
  r.indices = primes;
  r.empirical = emp.value() * scale;
  r.model = circle_product_moment(primes);
  r.budget = bud.value() * scale;
  return finish(r);
}

double moment_pit_numeric(const std::vector<std::int64_t>& primes, double T, int panels) {
  check_primes(primes);
  std::vector<double> lp;
  for (auto p : primes) lp.push_back(std::log(double(p)));
  auto f = [&](double t) {
    double v = 1.0;
    for (double l : lp) v *= std::cos(t * l);
    return v;
  };
  return integrate_simpson(f, T, 2.0 * T, panels) / T;
}

MomentComparison moment_characters(const CharacterTable& table, const std::vector<std::int64_t>& primes) {
  check_primes(primes);
  const std::uint64_t q = table.modulus();
  double prod = 1.0;
  for (auto p : primes) {
    require(std::uint64_t(p) % q != 0, "primes must be coprime to q");
    prod *= double(p);
  }
  const std::uint64_t phi = q - 1;
  CompensatedSum acc;
  for (std::uint64_t j = 0; j < phi; ++j) {
    double v = 1.0;
    for (auto p : primes) v *= table.re_chi(j, std::uint64_t(p));
    acc.add(v);
  }
  MomentComparison r;
  r.indices = primes;
  r.empirical = acc.value() / double(phi);
  r.model = circle_product_moment(primes);
  r.budget = 1e-10;
  r.in_range = prod < double(q);
  if (!r.in_range) r.note = "character moment range violated: product of primes >= q";
  return finish(r);
}

MomentComparison moment_characters(std::uint64_t q, const std::vector<std::int64_t>& primes) {
  return moment_characters(CharacterTable(q), primes);
}

int quadchar_default_k(double x) {
  require(x > std::exp(std::exp(1.0)), "x too small for log log log x");
  return std::max(1, int(std::floor(std::log(std::log(std::log(x))) / std::log(2.0))));
}

double quadchar_error_budget(double x, double y, std::uint64_t n, int k) {
  require(k >= 1 && n >= 1 && x > 1.0 && y >= 1.0, "budget needs k >= 1, n >= 1, x > 1, y >= 1");
  const double K = std::ldexp(1.0, k);
  const double e = double(k) / (8.0 * K);
  double prod = 1.0;
  for (const auto& pf : factorize(n)) prod *= 1.0 + std::pow(double(pf.first), -(1.0 - e));
  return std::pow(x, -e) * prod * std::cbrt(y) * std::pow(double(n), 1.0 / (7.0 * K)) *
         std::pow(double(divisor_count(n)), double(k) * k / K);
}

MomentComparison moment_quadchar(double x, const std::vector<std::int64_t>& primes, double slack) {
  check_primes(primes);
  require(x >= 100.0, "moment_quadchar needs x >= 100");
  const auto discs = fundamental_discriminants(std::uint64_t(x));
  CompensatedSum acc;
  for (auto d : discs) {
    int v = 1;
    for (auto p : primes) v *= kronecker(d, std::uint64_t(p));
    acc.add(double(v));
  }
  std::uint64_t N = 1;
  std::int64_t y = 0;
  for (auto p : primes) {
    N *= std::uint64_t(p);
    y = std::max(y, p);
  }
  bool square = true;
  double model = 1.0;
  for (const auto& [p, a] : multiplicities(primes)) {
    if (a % 2) square = false;
    model *= double(p) / double(p + 1);
  }
  MomentComparison r;
  r.indices = primes;
  r.empirical = acc.value() / double(discs.size());
  r.model = square ? model : 0.0;
  r.budget = square ? std::pow(x, -0.25)
                    : slack * quadchar_error_budget(x, double(y), N, quadchar_default_k(x));
  return finish(r);
}

double kloosterman(std::uint64_t q, std::int64_t a, std::int64_t b) {
  require(is_prime(q), "Kloosterman sums need a prime modulus");
  const auto qi = std::int64_t(q);
  const std::uint64_t am = std::uint64_t(((a % qi) + qi) % qi);
  const std::uint64_t bm = std::uint64_t(((b % qi) + qi) % qi);
  require(am != 0 || bm != 0, "Kloosterman sum needs a, b not both 0 mod q");
  CompensatedSum re, im;
  for (std::uint64_t n = 1; n < q; ++n) {
    const std::uint64_t k = (am * n + bm * mod_inverse(n, q)) % q;
    const double ang = 2.0 * kPi * double(k) / double(q);
    re.add(std::cos(ang));
    im.add(std::sin(ang));
  }
  const double norm = 1.0 / std::sqrt(double(q));
  const double v = re.value() * norm, w = im.value() * norm;
  if (!(std::abs(w) < 1e-9)) fail(ErrorKind::numeric, "Kloosterman sum not real");
  if (!(std::abs(v) <= 2.0 + 1e-9)) fail(ErrorKind::numeric, "Kloosterman sum exceeds the Weil bound");
  return v;
}

MomentComparison moment_kloosterman(std::uint64_t q, const std::vector<std::int64_t>& shifts,
                                    std::optional<KloostermanSampling> sampled) {
  require(is_prime(q), "Kloosterman moments need a prime modulus");
  require(!shifts.empty(), "need at least one shift");
  const double l = double(shifts.size());
  require(l <= std::log(double(q)) / 2.0, "too many shifts: need l <= (log q)/2");
  const auto qi = std::int64_t(q);
  auto red = [qi](std::int64_t v) { return std::uint64_t(((v % qi) + qi) % qi); };

  MomentComparison r;
  r.indices = shifts;
  double model = 1.0;
  for (const auto& [n, a] : multiplicities(shifts)) model *= std::ldexp(sato_tate_moment(a), a);
  r.model = model;
  r.budget = 10.0 * std::ldexp(1.0, int(shifts.size())) * l / std::sqrt(double(q));

  if (!sampled) {
    require(q <= 600, "use sampled mode for q > 600");
    const auto table = kernels::kloosterman_table(q);
    CompensatedSum acc;
    for (std::uint64_t a = 1; a < q; ++a)
      for (std::uint64_t b = 1; b < q; ++b) {
        double v = 1.0;
        for (auto n : shifts) v *= table[red(std::int64_t(a) - n) * q + b];
        acc.add(v);
      }
    r.empirical = acc.value() / (double(q - 1) * double(q - 1));
    return finish(r);
  }
  require(sampled->pairs >= 2, "sampled mode needs at least two pairs");
  Rng rng = make_stream(sampled->seed, 0);
  std::uniform_int_distribution<std::uint64_t> unit(1, q - 1);
  CompensatedSum s1, s2;
  for (std::uint64_t k = 0; k < sampled->pairs; ++k) {
    const std::uint64_t a = unit(rng), b = unit(rng);
    double v = 1.0;
    for (auto n : shifts) {
      const std::uint64_t am = red(std::int64_t(a) - n);
      v *= am == 0 && b == 0 ? 0.0 : kloosterman(q, std::int64_t(am), std::int64_t(b));
    }
    s1.add(v);
    s2.add(v * v);
  }
  const double n = double(sampled->pairs);
  const double mean = s1.value() / n;
  const double var = std::max(0.0, (s2.value() / n - mean * mean) * n / (n - 1.0));
  r.empirical = mean;
  r.budget += std::sqrt(var / n);
  return finish(r);
}

double chebyshev_coeff(int a, int b) {
  require(0 <= b && b <= a && a <= 30, "chebyshev_coeff needs 0 <= b <= a <= 30");
  // The integrand is an even trigonometric polynomial of degree <= a + b + 2 < 128,
  // so the trapezoid rule over a full period is exact.
  constexpr int N = 128;
  CompensatedSum acc;
  for (int k = 0; k < N; ++k) {
    const double t = 2.0 * kPi * k / N;
    acc.add(std::pow(std::cos(t), a) * std::sin(t) * std::sin((b + 1) * t));
  }
  return 2.0 * acc.value() / N;
}

double hecke_identity_check(int a, const std::vector<double>& theta_grid) {
  std::vector<double> C(a + 1);
  for (int b = 0; b <= a; ++b) C[b] = chebyshev_coeff(a, b);
  double worst = 0.0;
  for (double t : theta_grid) {
    const double x = std::cos(t);
    // sin((b+1)t)/sin t = U_b(cos t)
    double u_prev = 1.0, u = 2.0 * x;
    double sum = C[0];
    for (int b = 1; b <= a; ++b) {
      sum += C[b] * u;
      const double next = 2.0 * x * u - u_prev;
      u_prev = u;
      u = next;
    }
    worst = std::max(worst, std::abs(std::pow(x, a) - sum));
  }
  return worst;
}

double sato_tate_moment(int a) {
  require(a >= 0, "moment order must be >= 0");
  if (a % 2) return 0.0;
  const int m = a / 2;
  // Catalan(m) / 4^m
  return binomial(2 * m, m) / double(m + 1) / std::ldexp(1.0, 2 * m);
}

MomentMatch moment_match_check(ArithmeticFamily family, double param, double Q, double s) {
  require(Q >= 2.0, "moment match needs Q >= 2");
  require(std::isfinite(s), "moment match needs finite s");
  const auto primes = primes_up_to(std::uint64_t(Q));
  MomentMatch r;
  CompensatedSum K, Hq;
  std::vector<double> inv_p;
  for (auto p : primes) {
    inv_p.push_back(1.0 / double(p));
    Hq.add(1.0 / double(p));
    const RandomModel m =
        family == ArithmeticFamily::quadchar ? RandomModel::radzero(p) : RandomModel::circle();
    K.add(m.log_mgf(s / double(p)));
  }
  r.model = std::exp(K.value());
  const double lQ = std::log(Q);

  switch (family) {
    case ArithmeticFamily::characters: {
      const auto q = std::uint64_t(param);
      const CharacterTable table(q);
      for (auto p : primes) require(p % q != 0, "primes must be coprime to q");
      CompensatedSum acc;
      for (std::uint64_t j = 0; j + 1 < q; ++j) {
        CompensatedSum h;
        for (std::size_t i = 0; i < primes.size(); ++i) h.add(table.re_chi(j, primes[i]) * inv_p[i]);
        acc.add(std::exp(s * h.value()));
      }
      r.empirical = acc.value() / double(q - 1);
      // largest L with Q^L < q
      r.L = std::ceil(std::log(double(q)) / lQ) - 1.0;
      break;
    }
    case ArithmeticFamily::pit: {
      const double T = param;
      require(T >= 2.0, "p^it family needs T >= 2");
      std::vector<double> lp;
      for (auto p : primes) lp.push_back(std::log(double(p)));
      auto f = [&](double t) {
        double h = 0.0;
        for (std::size_t i = 0; i < lp.size(); ++i) h += std::cos(t * lp[i]) * inv_p[i];
        return std::exp(s * h);
      };
      const int panels = 2 * int(std::ceil(50.0 * T));
      r.empirical = integrate_simpson(f, T, 2.0 * T, panels) / T;
      r.L = std::floor(2.0 * std::log(T) / (2.0 + lQ));
      break;
    }
    case ArithmeticFamily::quadchar: {
      const auto discs = fundamental_discriminants(std::uint64_t(param));
      CompensatedSum acc;
      for (auto d : discs) {
        double h = 0.0;
        for (std::size_t i = 0; i < primes.size(); ++i) h += kronecker(d, primes[i]) * inv_p[i];
        acc.add(std::exp(s * h));
      }
      r.empirical = acc.value() / double(discs.size());
      r.L = std::floor(std::log(param) / lQ);
      break;
    }
  }
  r.difference = std::abs(r.empirical - r.model);
  r.budget = 10.0 * std::exp(-r.L / 2.0);
  r.s_in_range = std::abs(s) <= r.L / (10.0 * Hq.value());
  r.pass = r.difference <= r.budget;
  return r;
}

}  // namespace ldlab
