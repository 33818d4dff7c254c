#include "h10/curves.hpp"
#include "h10/padic.hpp"

#include "polymod.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace h10::curves {

WeierstrassCurve::WeierstrassCurve(BigInt a1, BigInt a2, BigInt a3, BigInt a4, BigInt a6)
    : a_{std::move(a1), std::move(a2), std::move(a3), std::move(a4), std::move(a6)} {
    if (discriminant() == 0) throw Error("WeierstrassCurve: singular model (discriminant 0)");
}

BigInt WeierstrassCurve::b2() const { return a1() * a1() + 4 * a2(); }
BigInt WeierstrassCurve::b4() const { return 2 * a4() + a1() * a3(); }
BigInt WeierstrassCurve::b6() const { return a3() * a3() + 4 * a6(); }
BigInt WeierstrassCurve::b8() const {
    return a1() * a1() * a6() + 4 * a2() * a6() - a1() * a3() * a4() + a2() * a3() * a3() -
           a4() * a4();
}
BigInt WeierstrassCurve::c4() const { return b2() * b2() - 24 * b4(); }
BigInt WeierstrassCurve::c6() const { return -b2() * b2() * b2() + 36 * b2() * b4() - 216 * b6(); }

BigInt WeierstrassCurve::discriminant() const {
    BigInt B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
    return -B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6 + 9 * B2 * B4 * B6;
}

BigRational WeierstrassCurve::j_invariant() const {
    BigInt C4 = c4();
    return BigRational(C4 * C4 * C4, discriminant());
}

namespace {

BigInt exact_div(const BigInt& a, const BigInt& b, const char* what) {
    if (a % b != 0) throw Error(std::string("transform: non-integral ") + what);
    return a / b;
}

}  // namespace

WeierstrassCurve WeierstrassCurve::transform(const BigInt& u, const BigInt& r, const BigInt& s,
                                             const BigInt& t) const {
    if (u == 0) throw Error("transform: u must be nonzero");
    BigInt u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u6 = u3 * u3;
    BigInt na1 = a1() + 2 * s;
    BigInt na2 = a2() - s * a1() + 3 * r - s * s;
    BigInt na3 = a3() + r * a1() + 2 * t;
    BigInt na4 = a4() - s * a3() + 2 * r * a2() - (t + r * s) * a1() + 3 * r * r - 2 * s * t;
    BigInt na6 = a6() + r * a4() + r * r * a2() + r * r * r - t * a3() - t * t - r * t * a1();
    return {exact_div(na1, u, "a1"), exact_div(na2, u2, "a2"), exact_div(na3, u3, "a3"),
            exact_div(na4, u4, "a4"), exact_div(na6, u6, "a6")};
}

nlohmann::json WeierstrassCurve::to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& a : a_) {
        if (a >= std::numeric_limits<int64_t>::min() && a <= std::numeric_limits<int64_t>::max())
            j.push_back(static_cast<int64_t>(a));
        else
            j.push_back(a.str());
    }
    return j;
}

WeierstrassCurve WeierstrassCurve::from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 5)
        throw Error("curve JSON: expected [a1, a2, a3, a4, a6]");
    std::array<BigInt, 5> a;
    for (size_t i = 0; i < 5; ++i) {
        if (j[i].is_string())
            a[i] = BigInt(j[i].get<std::string>());
        else
            a[i] = BigInt(j[i].get<int64_t>());
    }
    return {a[0], a[1], a[2], a[3], a[4]};
}

std::string WeierstrassCurve::str() const {
    std::ostringstream os;
    os << "[" << a1() << ", " << a2() << ", " << a3() << ", " << a4() << ", " << a6() << "]";
    return os.str();
}

std::tuple<BigInt, BigInt, BigInt> discriminant_c4_c6(const WeierstrassCurve& E) {
    return {E.discriminant(), E.c4(), E.c6()};
}

std::string reduction_type_name(ReductionType t) {
    switch (t) {
        case ReductionType::Good: return "good";
        case ReductionType::SplitMultiplicative: return "split multiplicative";
        case ReductionType::NonsplitMultiplicative: return "nonsplit multiplicative";
        case ReductionType::Additive: return "additive";
    }
    return "?";
}

std::string KodairaSymbol::str() const {
    switch (kind) {
        case Kind::I: return "I" + std::to_string(n);
        case Kind::II: return "II";
        case Kind::III: return "III";
        case Kind::IV: return "IV";
        case Kind::IStar: return "I" + std::to_string(n) + "*";
        case Kind::IVStar: return "IV*";
        case Kind::IIIStar: return "III*";
        case Kind::IIStar: return "II*";
    }
    return "?";
}

nlohmann::json LocalData::to_json() const {
    return {{"ell", prime},
            {"reduction", reduction_type_name(reduction)},
            {"kodaira", kodaira.str()},
            {"tamagawa", tamagawa},
            {"conductor_exponent", conductor_exponent}};
}

TwistResult quadratic_twist_with_map(const WeierstrassCurve& E, const BigInt& d) {
    if (d == 0 || d == 1) throw Error("quadratic_twist: d must not be 0 or 1");
    if (!is_squarefree(d)) throw Error("quadratic_twist: d must be squarefree");
    if (E.a1() == 0 && E.a3() == 0) {
        return {WeierstrassCurve(0, d * E.a2(), 0, d * d * E.a4(), d * d * d * E.a6()), d};
    }
    // complete the square first: the b-invariant model scales x by 4
    BigInt B2 = E.b2(), B4 = E.b4(), B6 = E.b6();
    return {WeierstrassCurve(0, d * B2, 0, 8 * d * d * B4, 16 * d * d * d * B6), 4 * d};
}

WeierstrassCurve quadratic_twist(const WeierstrassCurve& E, const BigInt& d) {
    return quadratic_twist_with_map(E, d).curve;
}

bool is_good_reduction(const WeierstrassCurve& E, int64_t ell) {
    return minimal_model(E).discriminant() % ell != 0;
}

ReductionCount count_points(const WeierstrassCurve& E, int64_t ell, int64_t enumeration_bound) {
    if (ell < 2 || !is_probable_prime(BigInt(ell)))
        throw Error("count_points: modulus must be prime");
    if (ell > enumeration_bound)
        throw Error("count_points: prime exceeds enumeration bound");
    WeierstrassCurve W = minimal_model(E);
    if (W.discriminant() % ell == 0)
        throw Error("count_points: bad reduction at " + std::to_string(ell));

    if (ell == 2) {
        int64_t a1 = mod_floor_i64(W.a1(), 2), a2 = mod_floor_i64(W.a2(), 2);
        int64_t a3 = mod_floor_i64(W.a3(), 2), a4 = mod_floor_i64(W.a4(), 2);
        int64_t a6 = mod_floor_i64(W.a6(), 2);
        int64_t count = 1;
        for (int64_t x = 0; x < 2; ++x)
            for (int64_t y = 0; y < 2; ++y)
                if ((y * y + a1 * x * y + a3 * y + x + a2 * x * x + a4 * x + a6) % 2 == 0)
                    ++count;  // -x^3 == x mod 2
        return {2, count, 2 + 1 - count};
    }

    // solutions in y correspond to square values of 4x^3 + b2 x^2 + 2 b4 x + b6
    int64_t b2 = mod_floor_i64(W.b2(), ell);
    int64_t b4t = mod_floor_i64(2 * W.b4(), ell);
    int64_t b6 = mod_floor_i64(W.b6(), ell);
    std::vector<uint8_t> is_square(static_cast<size_t>(ell), 0);
    for (int64_t x = 0; x <= ell / 2; ++x)
        is_square[static_cast<size_t>(polymod::mulmod(x, x, ell))] = 1;

    BigInt count = 1;  // point at infinity
    for (int64_t x = 0; x < ell; ++x) {
        int64_t q = polymod::mulmod(polymod::addmod(polymod::mulmod(polymod::addmod(
                        polymod::mulmod(4, x, ell), b2, ell), x, ell), b4t, ell), x, ell);
        q = polymod::addmod(q, b6, ell);
        if (q == 0)
            count += 1;
        else if (is_square[static_cast<size_t>(q)])
            count += 2;
    }
    return {ell, count, ell + 1 - count};
}

BigInt trace_of_frobenius(const WeierstrassCurve& E, int64_t ell) {
    return count_points(E, ell).trace;
}

bool is_good_ordinary(const WeierstrassCurve& E, int64_t p) {
    if (p < 3) throw Error("is_good_ordinary: p must be odd");
    ReductionCount rc = count_points(E, p);  // throws on bad reduction
    return rc.trace % p != 0;
}

bool is_anomalous(const WeierstrassCurve& E, int64_t p) {
    if (p < 3) throw Error("is_anomalous: p must be odd");
    ReductionCount rc = count_points(E, p);
    return rc.count % p == 0;
}

int two_division_frobenius_order(const WeierstrassCurve& E, int64_t ell) {
    if (ell == 2 || E.discriminant() % ell == 0)
        throw Error("two_division_frobenius_order: " + std::to_string(ell) +
                    " is ramified in Q(E[2])");
    // y = 4x turns the 2-division cubic into the monic y^3 + b2 y^2 + 8 b4 y + 16 b6
    polymod::Poly f{mod_floor_i64(16 * E.b6(), ell), mod_floor_i64(8 * E.b4(), ell),
                    mod_floor_i64(E.b2(), ell), 1};
    int roots = polymod::count_roots(f, ell);
    if (roots == 3) return 1;
    if (roots == 1) return 2;
    // irreducible cubic: a 3-cycle unless the discriminant is a nonresidue
    int chi = padic::kronecker_symbol(E.discriminant(), BigInt(ell));
    return chi == -1 ? 6 : 3;
}

bool has_rational_two_torsion(const WeierstrassCurve& E) {
    // integral roots y of y^3 + b2 y^2 + 8 b4 y + 16 b6 correspond to rational
    // 2-torsion x = y/4
    BigInt B2 = E.b2(), B4 = E.b4(), B6 = E.b6();
    BigInt c = 16 * B6;
    auto eval = [&](const BigInt& y) { return y * y * y + B2 * y * y + 8 * B4 * y + c; };
    if (c == 0) return true;
    std::vector<BigInt> divisors{1};
    for (const auto& [q, e] : factorize(c)) {
        size_t n = divisors.size();
        BigInt qk = 1;
        for (int k = 1; k <= e; ++k) {
            qk *= q;
            for (size_t i = 0; i < n; ++i) divisors.push_back(divisors[i] * qk);
        }
        if (divisors.size() > 100000)
            throw Error("has_rational_two_torsion: too many divisors to test");
    }
    for (const auto& d : divisors)
        if (eval(d) == 0 || eval(-d) == 0) return true;
    return false;
}

TorsionCertificate torsion_p_trivial(const WeierstrassCurve& E, int64_t p, int64_t search_bound) {
    WeierstrassCurve W = minimal_model(E);
    BigInt delta = W.discriminant();
    for (int64_t ell : primes_below(search_bound)) {
        if (ell == 2 || ell == p || delta % ell == 0) continue;
        if (count_points(W, ell).count % p != 0) return TorsionCertificate::CertifiedTrivial;
    }
    return TorsionCertificate::Unknown;
}

KernelRealStructure kernel_real_points(const WeierstrassCurve& E, const BigRational& kernel_x) {
    // the kernel points are real iff (2y + a1 x + a3)^2 = 4x^3 + b2x^2 + 2b4x + b6 >= 0
    BigRational x = kernel_x;
    BigRational q = ((BigRational(4) * x + BigRational(E.b2())) * x + BigRational(2 * E.b4())) * x +
                    BigRational(E.b6());
    return q >= 0 ? KernelRealStructure::Z3 : KernelRealStructure::Trivial;
}

}  // namespace h10::curves
