#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace h10 {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// base^exp for a nonnegative exponent.
BigInt pow_int(const BigInt& base, unsigned exp);

/// Largest v with p^v | n. Requires n != 0 and p >= 2.
int int_valuation(const BigInt& n, const BigInt& p);

/// Representative of a mod m in [0, m). Requires m > 0.
BigInt mod_floor(const BigInt& a, const BigInt& m);
int64_t mod_floor_i64(const BigInt& a, int64_t m);

/// a^e mod m with e >= 0, m > 1.
int64_t powmod_i64(int64_t a, int64_t e, int64_t m);
BigInt powmod(const BigInt& a, const BigInt& e, const BigInt& m);

/// Inverse of a mod m; throws Error if gcd(a, m) != 1.
BigInt invmod(const BigInt& a, const BigInt& m);
int64_t invmod_i64(int64_t a, int64_t m);

/// Deterministic Miller-Rabin for n < 3.3e24, probabilistic beyond.
bool is_probable_prime(const BigInt& n);

/// Prime factorization (trial division + Pollard rho), factors ascending.
std::vector<std::pair<BigInt, int>> factorize(const BigInt& n);

bool is_squarefree(const BigInt& n);

/// n with its largest square divisor removed (sign preserved). n != 0.
BigInt squarefree_part(const BigInt& n);

/// Exact square-root test.
bool is_perfect_square(const BigInt& n);

/// Primes in [2, bound) ascending.
std::vector<int64_t> primes_below(int64_t bound);

std::string to_string(const BigInt& n);

}  // namespace h10
