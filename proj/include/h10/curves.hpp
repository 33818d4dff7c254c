#pragma once

#include "h10/bigint.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace h10::curves {

/// Elliptic curve over Q in long Weierstrass form with integral coefficients.
class WeierstrassCurve {
public:
    WeierstrassCurve(BigInt a1, BigInt a2, BigInt a3, BigInt a4, BigInt a6);

    const BigInt& a1() const { return a_[0]; }
    const BigInt& a2() const { return a_[1]; }
    const BigInt& a3() const { return a_[2]; }
    const BigInt& a4() const { return a_[3]; }
    const BigInt& a6() const { return a_[4]; }
    const std::array<BigInt, 5>& ainvs() const { return a_; }

    BigInt b2() const;
    BigInt b4() const;
    BigInt b6() const;
    BigInt b8() const;
    BigInt c4() const;
    BigInt c6() const;
    BigInt discriminant() const;
    BigRational j_invariant() const;

    /// Standard change of variables x = u^2 x' + r, y = u^3 y' + u^2 s x' + t.
    /// Throws if the resulting model is not integral.
    WeierstrassCurve transform(const BigInt& u, const BigInt& r, const BigInt& s,
                               const BigInt& t) const;

    bool operator==(const WeierstrassCurve&) const = default;

    nlohmann::json to_json() const;
    static WeierstrassCurve from_json(const nlohmann::json& j);
    std::string str() const;

private:
    std::array<BigInt, 5> a_;
};

std::tuple<BigInt, BigInt, BigInt> discriminant_c4_c6(const WeierstrassCurve& E);

enum class ReductionType { Good, SplitMultiplicative, NonsplitMultiplicative, Additive };

std::string reduction_type_name(ReductionType t);

/// Kodaira symbol: I_n (n = 0 means good), II, III, IV and their * twists.
struct KodairaSymbol {
    enum class Kind { I, II, III, IV, IStar, IVStar, IIIStar, IIStar };
    Kind kind;
    int n = 0;  // used by I and IStar

    std::string str() const;
    bool operator==(const KodairaSymbol&) const = default;
};

struct LocalData {
    int64_t prime;
    ReductionType reduction;
    KodairaSymbol kodaira;
    int64_t tamagawa;
    int conductor_exponent;
    WeierstrassCurve minimal_model;

    nlohmann::json to_json() const;
};

struct ReductionCount {
    int64_t prime;
    BigInt count;  // #E~(F_l), including the point at infinity
    BigInt trace;  // a_l = l + 1 - count
};

struct TwistResult {
    WeierstrassCurve curve;
    BigInt x_scale;  // x_twist = x_scale * x under the twisting isomorphism
};

/// Quadratic twist by a squarefree integer d (d != 0, 1).
TwistResult quadratic_twist_with_map(const WeierstrassCurve& E, const BigInt& d);
WeierstrassCurve quadratic_twist(const WeierstrassCurve& E, const BigInt& d);

/// Tate's algorithm at a prime; also handles non-minimal input (the returned
/// data refers to the local minimal model).
LocalData tate_algorithm(const WeierstrassCurve& E, int64_t ell);

/// Global minimal model, reduced to the normal form with a1, a3 in {0, 1}
/// and a2 in {-1, 0, 1}.
WeierstrassCurve minimal_model(const WeierstrassCurve& E);

/// Conductor of the curve (computed from the minimal model).
BigInt conductor(const WeierstrassCurve& E);

/// Primes of bad reduction of the minimal model, ascending.
std::vector<int64_t> bad_primes(const WeierstrassCurve& E);

/// prod_{l != excluded} c_l over bad primes of the minimal model.
BigInt tamagawa_product(const WeierstrassCurve& E, int64_t excluded_prime = 0);

/// Naive point count over F_ell; requires good reduction of the minimal model
/// at ell and ell below the enumeration bound.
ReductionCount count_points(const WeierstrassCurve& E, int64_t ell,
                            int64_t enumeration_bound = 1000000);

BigInt trace_of_frobenius(const WeierstrassCurve& E, int64_t ell);

bool is_good_reduction(const WeierstrassCurve& E, int64_t ell);
bool is_good_ordinary(const WeierstrassCurve& E, int64_t p);
bool is_anomalous(const WeierstrassCurve& E, int64_t p);

/// Order of Frobenius at ell in Gal(Q(E[2])/Q), from the factorization
/// pattern of the 2-division cubic mod ell. Requires ell coprime to 2*disc.
int two_division_frobenius_order(const WeierstrassCurve& E, int64_t ell);

/// Whether the 2-division cubic 4x^3 + b2 x^2 + 2 b4 x + b6 has a rational
/// root, i.e. whether E has a rational 2-torsion point.
bool has_rational_two_torsion(const WeierstrassCurve& E);

enum class TorsionCertificate { CertifiedTrivial, Unknown };

/// One-sided check that E(Q)[p] = 0 via injection of torsion into good
/// reductions; never claims nontrivial torsion.
TorsionCertificate torsion_p_trivial(const WeierstrassCurve& E, int64_t p,
                                     int64_t search_bound = 200);

enum class KernelRealStructure { Z3, Trivial };

/// Real structure of the kernel of a 3-isogeny with kernel x-coordinate x0:
/// Z/3 iff the kernel points are real, i.e. 4x0^3 + b2 x0^2 + 2 b4 x0 + b6 >= 0.
KernelRealStructure kernel_real_points(const WeierstrassCurve& E, const BigRational& kernel_x);

}  // namespace h10::curves
