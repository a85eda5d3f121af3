#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace ldlab {

/// All primes <= limit in increasing order. Segmented sieve; segments are
/// sieved in parallel and concatenated in order, so the output is identical
/// for any thread count.
std::vector<std::uint64_t> primes_up_to(std::uint64_t limit);

/// Plain sieve of Eratosthenes over [0, limit]; test reference for primes_up_to.
std::vector<std::uint64_t> primes_up_to_reference(std::uint64_t limit);

bool is_prime(std::uint64_t n);

/// flags[m] == 1 iff m is squarefree, for 0 <= m <= limit (flags[0] == 0).
std::vector<std::uint8_t> squarefree_flags(std::uint64_t limit);

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t mod);
std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t prime_mod);

/// Smallest primitive root modulo the prime q.
std::uint64_t primitive_root(std::uint64_t q);

/// Distinct prime factors with multiplicity, ascending.
std::vector<std::pair<std::uint64_t, int>> factorize(std::uint64_t n);

/// Number of divisors of n.
std::uint64_t divisor_count(std::uint64_t n);

/// Prime powers p^k <= limit in increasing order together with log p.
struct PrimePowerTable {
  std::vector<std::uint64_t> values;
  std::vector<double> log_p;
};
PrimePowerTable prime_powers_up_to(std::uint64_t limit);

}  // namespace ldlab

namespace ldlab {

/// Kronecker symbol (d/n) for n >= 1.
int kronecker(std::int64_t d, std::uint64_t n);

/// Fundamental discriminants d != 1 with |d| <= x: positives ascending, then
/// negatives by increasing |d|.
std::vector<std::int64_t> fundamental_discriminants(std::uint64_t x);

}  // namespace ldlab
