#include "ldlab/primes.hpp"

#include <algorithm>
#include <cmath>

#include "ldlab/error.hpp"

namespace ldlab {

namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

constexpr std::uint64_t kSegment = 1u << 18;

__extension__ typedef unsigned __int128 u128;

}  // namespace

std::vector<std::uint64_t> primes_up_to_reference(std::uint64_t limit) {
  std::vector<std::uint64_t> out;
  if (limit < 2) return out;
  std::vector<char> composite(limit + 1, 0);
  for (std::uint64_t i = 2; i <= limit; ++i) {
    if (composite[i]) continue;
    out.push_back(i);
    for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = 1;
  }
  return out;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t limit) {
  if (limit < 2) return {};
  const std::uint64_t root = isqrt(limit);
  const std::vector<std::uint64_t> base = primes_up_to_reference(root);
  const std::uint64_t segments = limit / kSegment + 1;
  std::vector<std::vector<std::uint64_t>> found(segments);

#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t seg = 0; seg < static_cast<std::int64_t>(segments); ++seg) {
    const std::uint64_t lo = std::uint64_t(seg) * kSegment;
    const std::uint64_t hi = std::min(lo + kSegment - 1, limit);
    std::vector<char> composite(hi - lo + 1, 0);
    for (std::uint64_t p : base) {
      if (p * p > hi) break;
      std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
      for (std::uint64_t j = start; j <= hi; j += p) composite[j - lo] = 1;
    }
    auto& local = found[seg];
    for (std::uint64_t n = std::max<std::uint64_t>(lo, 2); n <= hi; ++n)
      if (!composite[n - lo]) local.push_back(n);
  }

  std::vector<std::uint64_t> out;
  for (auto& part : found) out.insert(out.end(), part.begin(), part.end());
  return out;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::uint8_t> squarefree_flags(std::uint64_t limit) {
  std::vector<std::uint8_t> flags(limit + 1, 1);
  flags[0] = 0;
  for (std::uint64_t p : primes_up_to(isqrt(limit))) {
    const std::uint64_t sq = p * p;
    for (std::uint64_t j = sq; j <= limit; j += sq) flags[j] = 0;
  }
  return flags;
}

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
  u128 result = 1 % mod;
  u128 b = base % mod;
  while (exp) {
    if (exp & 1) result = result * b % mod;
    b = b * b % mod;
    exp >>= 1;
  }
  return static_cast<std::uint64_t>(result);
}

std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t prime_mod) {
  require(a % prime_mod != 0, "zero has no inverse");
  return mod_pow(a, prime_mod - 2, prime_mod);
}

std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, int>> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    int e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    out.emplace_back(d, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::uint64_t divisor_count(std::uint64_t n) {
  std::uint64_t tau = 1;
  for (auto [p, e] : factorize(n)) tau *= std::uint64_t(e + 1);
  return tau;
}

std::uint64_t primitive_root(std::uint64_t q) {
  require(is_prime(q), "primitive_root needs a prime modulus");
  if (q == 2) return 1;
  const auto factors = factorize(q - 1);
  for (std::uint64_t g = 2; g < q; ++g) {
    bool ok = true;
    for (auto [p, e] : factors) {
      if (mod_pow(g, (q - 1) / p, q) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) return g;
  }
  fail(ErrorKind::numeric, "no primitive root found");
}

PrimePowerTable prime_powers_up_to(std::uint64_t limit) {
  std::vector<std::pair<std::uint64_t, double>> items;
  for (std::uint64_t p : primes_up_to(limit)) {
    const double lp = std::log(double(p));
    for (std::uint64_t pk = p; pk <= limit; pk *= p) {
      items.emplace_back(pk, lp);
      if (pk > limit / p) break;
    }
  }
  std::sort(items.begin(), items.end());
  PrimePowerTable table;
  table.values.reserve(items.size());
  table.log_p.reserve(items.size());
  for (auto& [v, l] : items) {
    table.values.push_back(v);
    table.log_p.push_back(l);
  }
  return table;
}

}  // namespace ldlab

namespace ldlab {

int kronecker(std::int64_t d, std::uint64_t n) {
  require(n >= 1, "kronecker symbol needs n >= 1");
  int result = 1;
  int v2 = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++v2;
  }
  if (v2 > 0) {
    if (d % 2 == 0) return 0;
    const std::int64_t r8 = ((d % 8) + 8) % 8;
    if ((v2 % 2) && (r8 == 3 || r8 == 5)) result = -result;
  }
  // Jacobi symbol for odd n
  std::uint64_t a = std::uint64_t(((d % std::int64_t(n)) + std::int64_t(n)) % std::int64_t(n));
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      const std::uint64_t r8 = n % 8;
      if (r8 == 3 || r8 == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

std::vector<std::int64_t> fundamental_discriminants(std::uint64_t x) {
  const auto sf = squarefree_flags(x);
  auto is_fundamental = [&](std::int64_t d) {
    const std::uint64_t ad = std::uint64_t(d < 0 ? -d : d);
    const std::int64_t r4 = ((d % 4) + 4) % 4;
    if (r4 == 1) return d != 1 && sf[ad] != 0;
    if (r4 != 0) return false;
    const std::int64_t m = d / 4;
    const std::int64_t m4 = ((m % 4) + 4) % 4;
    return (m4 == 2 || m4 == 3) && sf[ad / 4] != 0;
  };
  std::vector<std::int64_t> out;
  for (std::int64_t d = 2; d <= std::int64_t(x); ++d)
    if (is_fundamental(d)) out.push_back(d);
  for (std::int64_t d = -2; d >= -std::int64_t(x); --d)
    if (is_fundamental(d)) out.push_back(d);
  return out;
}

}  // namespace ldlab
