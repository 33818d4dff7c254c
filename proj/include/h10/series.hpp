#pragma once

#include "h10/padic.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace h10::series {

using padic::PadicNumber;
using padic::ProjectiveLineFp;

/// Raised when a characteristic series vanishes identically at working
/// precision (the Selmer group is not seen to be cotorsion).
struct NotCotorsion : Error {
    using Error::Error;
};

/// Truncated element of Z_p[[T]]: coefficients c_0..c_cap at a shared
/// precision.
class UnivariateSeries {
public:
    UnivariateSeries(int64_t prime, int precision, int cap);

    int64_t prime() const { return prime_; }
    int precision() const { return precision_; }
    int cap() const { return cap_; }

    const PadicNumber& coeff(int i) const;
    void set_coeff(int i, const PadicNumber& value);

    bool is_zero() const;
    UnivariateSeries reduce_precision(int new_precision) const;

    friend UnivariateSeries operator+(const UnivariateSeries& f, const UnivariateSeries& g);
    friend UnivariateSeries operator-(const UnivariateSeries& f, const UnivariateSeries& g);
    friend UnivariateSeries operator*(const UnivariateSeries& f, const UnivariateSeries& g);
    UnivariateSeries scale(const PadicNumber& c) const;

    nlohmann::json to_json() const;
    static UnivariateSeries from_json(const nlohmann::json& j);

    std::string str(const std::string& var = "Y") const;

private:
    void align_precision(int n);

    int64_t prime_;
    int precision_;
    int cap_;
    std::vector<PadicNumber> coeffs_;
};

/// Truncated element of Z_p[[X,Y]]: dense coefficients a_{i,j} for
/// i + j <= cap at a shared precision.
class BivariateSeries {
public:
    BivariateSeries(int64_t prime, int precision, int cap);

    int64_t prime() const { return prime_; }
    int precision() const { return precision_; }
    int cap() const { return cap_; }

    const PadicNumber& coeff(int i, int j) const;
    void set_coeff(int i, int j, const PadicNumber& value);

    /// Swap the roles of X and Y.
    BivariateSeries transpose() const;

    friend BivariateSeries operator+(const BivariateSeries& f, const BivariateSeries& g);
    friend BivariateSeries operator*(const BivariateSeries& f, const BivariateSeries& g);

    nlohmann::json to_json() const;
    static BivariateSeries from_json(const nlohmann::json& j);

    std::string str() const;

private:
    void align_precision(int n);
    size_t index(int i, int j) const;

    int64_t prime_;
    int precision_;
    int cap_;
    std::vector<PadicNumber> coeffs_;
};

struct IwasawaInvariants {
    int mu;
    int lambda;
    bool certified;

    bool operator==(const IwasawaInvariants&) const = default;
};

/// p-adic binomial coefficient C(a, k) = a(a-1)...(a-k+1)/k!.
/// Output precision is a.precision() - v_p(k!).
PadicNumber padic_binomial(const PadicNumber& a, int k);

/// v_p(cap!), the p-adic digits consumed by the deepest binomial denominator.
int binomial_guard_digits(int64_t prime, int cap);

/// f_{a,b} = (1+X)^a (1+Y)^b - 1, truncated to total degree `cap`.
/// Requires a representative of a line: not both a, b divisible by p.
BivariateSeries line_series(const PadicNumber& a, const PadicNumber& b, int cap);

/// As line_series, with exact integer exponents; internally carries enough
/// guard digits that the output is exact at the requested precision.
BivariateSeries line_series_exact(int64_t prime, int precision, int cap,
                                  const BigInt& a, const BigInt& b);

/// The unique g(Y) with g(0) = 0 and f_{a,b}(g(Y), Y) = 0, found by solving
/// for one coefficient at a time. Requires a to be a unit.
UnivariateSeries implicit_solve(const PadicNumber& a, const PadicNumber& b, int cap);

UnivariateSeries implicit_solve_exact(int64_t prime, int precision, int cap,
                                      const BigInt& a, const BigInt& b);

/// Substitute X = g(Y) into F; requires g(0) = 0. Output cap = F.cap().
UnivariateSeries compose_x(const BivariateSeries& F, const UnivariateSeries& g);

/// Specialization of F along the line (a : b): F(g(Y), Y) when a is a unit,
/// F(X, g~(X)) when p | a.
UnivariateSeries specialize_line(const BivariateSeries& F, const PadicNumber& a,
                                 const PadicNumber& b);

/// mu = min coefficient valuation, lambda = first index attaining it
/// (the Weierstrass-preparation reading). Throws NotCotorsion on the zero
/// series.
IwasawaInvariants mu_lambda(const UnivariateSeries& h);

/// The unique line class along which the specialization can fail
/// (mu, lambda) = (0, 1). Requires p | a_{0,0} and a_{0,1} a unit.
ProjectiveLineFp excluded_line(const BivariateSeries& F);

}  // namespace h10::series
