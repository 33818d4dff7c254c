#pragma once

#include "h10/bigint.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace h10::padic {

struct NotInvertible : Error {
    using Error::Error;
};

/// Valuation of a residue known mod p^N.
///
/// `bounded` distinguishes an exact valuation from the zero residue, which is
/// only known to satisfy v >= N.
struct Valuation {
    int value;
    bool bounded;

    bool operator==(const Valuation&) const = default;
    std::string str() const;
};

/// Element of Z_p known mod p^N (an odd prime p, N >= 1).
class PadicNumber {
public:
    PadicNumber(int64_t prime, int precision, BigInt residue);

    static PadicNumber zero(int64_t prime, int precision) { return {prime, precision, 0}; }
    static PadicNumber one(int64_t prime, int precision) { return {prime, precision, 1}; }

    int64_t prime() const { return prime_; }
    int precision() const { return precision_; }
    const BigInt& residue() const { return residue_; }
    BigInt modulus() const { return pow_int(BigInt(prime_), static_cast<unsigned>(precision_)); }

    bool is_zero() const { return residue_ == 0; }
    bool is_unit() const { return residue_ % prime_ != 0; }
    Valuation valuation() const;

    PadicNumber negate() const;
    /// Multiplicative inverse; requires a unit.
    PadicNumber invert() const;
    /// Truncate to a smaller precision.
    PadicNumber reduce_precision(int new_precision) const;
    /// Exact division by p^k; requires p^k | residue. Precision drops by k.
    PadicNumber divide_by_prime_power(int k) const;

    int64_t mod_p() const { return static_cast<int64_t>(residue_ % prime_); }

    /// Equality of the underlying residue classes at the coarser precision.
    bool same_class(const PadicNumber& other) const;

    friend PadicNumber operator+(const PadicNumber& x, const PadicNumber& y);
    friend PadicNumber operator-(const PadicNumber& x, const PadicNumber& y);
    friend PadicNumber operator*(const PadicNumber& x, const PadicNumber& y);

    std::string str() const;

private:
    int64_t prime_;
    int precision_;
    BigInt residue_;
};

/// Element of the prime field F_p.
class FpElement {
public:
    FpElement(int64_t prime, const BigInt& value);
    FpElement(int64_t prime, int64_t value);

    int64_t prime() const { return prime_; }
    int64_t value() const { return value_; }
    bool is_zero() const { return value_ == 0; }

    FpElement inverse() const;
    FpElement negate() const;

    friend FpElement operator+(const FpElement& x, const FpElement& y);
    friend FpElement operator-(const FpElement& x, const FpElement& y);
    friend FpElement operator*(const FpElement& x, const FpElement& y);
    bool operator==(const FpElement&) const = default;

private:
    int64_t prime_;
    int64_t value_;
};

/// Point of P^1(F_p), normalized so the first nonzero coordinate is 1.
class ProjectiveLineFp {
public:
    ProjectiveLineFp(const FpElement& a, const FpElement& b);

    const FpElement& a() const { return a_; }
    const FpElement& b() const { return b_; }
    int64_t prime() const { return a_.prime(); }

    /// All p+1 points, (1:0), (1:1), ..., (1:p-1), (0:1).
    static std::vector<ProjectiveLineFp> all(int64_t prime);

    bool operator==(const ProjectiveLineFp&) const = default;
    std::string str() const;

private:
    FpElement a_, b_;
};

/// Full Kronecker symbol (d/n), extended to all integers n.
int kronecker_symbol(const BigInt& d, const BigInt& n);

/// Quadratic residue test mod q (q a prime power or 4); a = 0 counts as square.
bool is_square_mod(const BigInt& a, int64_t q);

}  // namespace h10::padic
