#include "h10/padic.hpp"

#include <algorithm>

namespace h10::padic {

std::string Valuation::str() const {
    return bounded ? std::to_string(value) : ">=" + std::to_string(value);
}

PadicNumber::PadicNumber(int64_t prime, int precision, BigInt residue)
    : prime_(prime), precision_(precision), residue_(std::move(residue)) {
    if (prime_ < 3 || prime_ % 2 == 0) throw Error("PadicNumber: prime must be odd and >= 3");
    if (precision_ < 1) throw Error("PadicNumber: precision must be >= 1");
    residue_ = mod_floor(residue_, modulus());
}

Valuation PadicNumber::valuation() const {
    if (residue_ == 0) return {precision_, false};
    return {int_valuation(residue_, BigInt(prime_)), true};
}

PadicNumber PadicNumber::negate() const {
    return {prime_, precision_, -residue_};
}

PadicNumber PadicNumber::invert() const {
    if (!is_unit())
        throw NotInvertible("padic invert: not invertible at this precision (non-unit)");
    return {prime_, precision_, invmod(residue_, modulus())};
}

PadicNumber PadicNumber::reduce_precision(int new_precision) const {
    if (new_precision > precision_)
        throw Error("reduce_precision: cannot raise precision");
    return {prime_, new_precision, residue_};
}

PadicNumber PadicNumber::divide_by_prime_power(int k) const {
    if (k == 0) return *this;
    if (k < 0 || k >= precision_) throw Error("divide_by_prime_power: power out of range");
    BigInt pk = pow_int(BigInt(prime_), static_cast<unsigned>(k));
    if (residue_ % pk != 0)
        throw Error("divide_by_prime_power: residue not divisible by p^" + std::to_string(k));
    return {prime_, precision_ - k, residue_ / pk};
}

bool PadicNumber::same_class(const PadicNumber& other) const {
    if (prime_ != other.prime_) return false;
    int n = std::min(precision_, other.precision_);
    BigInt m = pow_int(BigInt(prime_), static_cast<unsigned>(n));
    return mod_floor(residue_, m) == mod_floor(other.residue_, m);
}

namespace {

void require_same_prime(const PadicNumber& x, const PadicNumber& y) {
    if (x.prime() != y.prime())
        throw Error("padic arithmetic: mismatched primes " + std::to_string(x.prime()) +
                    " vs " + std::to_string(y.prime()));
}

}  // namespace

PadicNumber operator+(const PadicNumber& x, const PadicNumber& y) {
    require_same_prime(x, y);
    return {x.prime(), std::min(x.precision(), y.precision()), x.residue() + y.residue()};
}

PadicNumber operator-(const PadicNumber& x, const PadicNumber& y) {
    require_same_prime(x, y);
    return {x.prime(), std::min(x.precision(), y.precision()), x.residue() - y.residue()};
}

PadicNumber operator*(const PadicNumber& x, const PadicNumber& y) {
    require_same_prime(x, y);
    return {x.prime(), std::min(x.precision(), y.precision()), x.residue() * y.residue()};
}

std::string PadicNumber::str() const {
    return residue_.str() + " + O(" + std::to_string(prime_) + "^" + std::to_string(precision_) + ")";
}

FpElement::FpElement(int64_t prime, const BigInt& value)
    : prime_(prime), value_(mod_floor_i64(value, prime)) {
    if (prime_ < 2) throw Error("FpElement: invalid prime");
}

FpElement::FpElement(int64_t prime, int64_t value) : FpElement(prime, BigInt(value)) {}

FpElement FpElement::inverse() const {
    if (value_ == 0) throw NotInvertible("FpElement: 0 has no inverse");
    return {prime_, invmod_i64(value_, prime_)};
}

FpElement FpElement::negate() const {
    return {prime_, prime_ - value_};
}

FpElement operator+(const FpElement& x, const FpElement& y) {
    return {x.prime_, x.value_ + y.value_};
}

FpElement operator-(const FpElement& x, const FpElement& y) {
    return {x.prime_, x.value_ - y.value_ + x.prime_};
}

FpElement operator*(const FpElement& x, const FpElement& y) {
    return {x.prime_, BigInt(x.value_) * y.value_};
}

ProjectiveLineFp::ProjectiveLineFp(const FpElement& a, const FpElement& b) : a_(a), b_(b) {
    if (a.prime() != b.prime()) throw Error("ProjectiveLineFp: mismatched primes");
    if (a_.is_zero() && b_.is_zero()) throw Error("ProjectiveLineFp: (0:0) is not a point");
    if (!a_.is_zero()) {
        FpElement inv = a_.inverse();
        b_ = b_ * inv;
        a_ = FpElement(a_.prime(), 1);
    } else {
        b_ = FpElement(b_.prime(), 1);
    }
}

std::vector<ProjectiveLineFp> ProjectiveLineFp::all(int64_t prime) {
    std::vector<ProjectiveLineFp> points;
    points.reserve(static_cast<size_t>(prime) + 1);
    for (int64_t b = 0; b < prime; ++b)
        points.emplace_back(FpElement(prime, 1), FpElement(prime, b));
    points.emplace_back(FpElement(prime, 0), FpElement(prime, 1));
    return points;
}

std::string ProjectiveLineFp::str() const {
    return "(" + std::to_string(a_.value()) + ":" + std::to_string(b_.value()) + ")";
}

int kronecker_symbol(const BigInt& d, const BigInt& n) {
    if (n == 0) return (d == 1 || d == -1) ? 1 : 0;
    BigInt a = d, m = n;
    int result = 1;
    if (m < 0) {
        m = -m;
        if (a < 0) result = -result;
    }
    // factor out 2s of the modulus
    while (m % 2 == 0) {
        m /= 2;
        if (a % 2 == 0) return 0;
        BigInt r = mod_floor(a, 8);
        if (r == 3 || r == 5) result = -result;
    }
    // Jacobi loop for odd m
    a = mod_floor(a, m);
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            BigInt r = m % 8;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(a, m);
        if (a % 4 == 3 && m % 4 == 3) result = -result;
        a = mod_floor(a, m);
    }
    return m == 1 ? result : 0;
}

bool is_square_mod(const BigInt& a, int64_t q) {
    if (q < 2) throw Error("is_square_mod: modulus must be >= 2");
    int64_t r = mod_floor_i64(a, q);
    if (r == 0) return true;
    // Euler criterion for odd prime moduli, enumeration otherwise
    if (q % 2 == 1 && is_probable_prime(BigInt(q)))
        return powmod_i64(r, (q - 1) / 2, q) == 1;
    for (int64_t x = 0; x <= q / 2; ++x)
        if (static_cast<int64_t>(static_cast<unsigned __int128>(x) * x % static_cast<unsigned __int128>(q)) == r)
            return true;
    return false;
}

}  // namespace h10::padic
