#include "h10/curves.hpp"

#include "polymod.hpp"

#include <limits>
#include <tuple>

// Tate's algorithm over Q, following the classical case analysis
// (types I_n, II, III, IV, I_0*, I_m*, IV*, III*, II*, with the restart rule
// for non-minimal models). Valid at every prime, including 2 and 3.

namespace h10::curves {

namespace {

int64_t red(const BigInt& a, int64_t p) {
    return mod_floor_i64(a, p);
}

// valuation with v(0) treated as +infinity
int vp(const BigInt& a, int64_t p, int infinity = 1 << 20) {
    if (a == 0) return infinity;
    return int_valuation(a, BigInt(p));
}

struct QuadraticInfo {
    bool distinct;       // distinct roots over the algebraic closure
    bool has_root;       // a root in F_p
    int64_t double_root;  // valid when !distinct
};

// A T^2 + B T + C with A a unit mod p
QuadraticInfo quadratic_info(int64_t A, int64_t B, int64_t C, int64_t p) {
    using namespace polymod;
    A = ((A % p) + p) % p;
    B = ((B % p) + p) % p;
    C = ((C % p) + p) % p;
    if (p == 2) {
        bool distinct = B != 0;
        bool has_root = (C == 0) || ((A + B + C) % 2 == 0);
        int64_t dbl = distinct ? 0 : C;  // root of A T^2 + C over F_2
        return {distinct, has_root, dbl};
    }
    int64_t disc = submod(mulmod(B, B, p), mulmod(4 % p, mulmod(A, C, p), p), p);
    if (disc == 0) {
        int64_t dbl = mulmod(submod(0, B, p), invmod(mulmod(2, A, p), p), p);
        return {false, true, dbl};
    }
    bool has_root = powmod(disc, (p - 1) / 2, p) == 1;
    return {true, has_root, 0};
}

struct CubicInfo {
    bool squarefree;
    int rational_roots;    // valid when squarefree
    bool triple;           // valid when !squarefree
    int64_t multiple_root;  // valid when !squarefree
};

// monic T^3 + A T^2 + B T + C
CubicInfo cubic_info(int64_t A, int64_t B, int64_t C, int64_t p) {
    using namespace polymod;
    A = ((A % p) + p) % p;
    B = ((B % p) + p) % p;
    C = ((C % p) + p) % p;
    Poly f{C, B, A, 1};
    if (p <= 3) {
        int64_t multiple = -1, mult = 0;
        int distinct = 0;
        for (int64_t x = 0; x < p; ++x) {
            if (eval(f, x, p) != 0) continue;
            ++distinct;
            // multiplicity by synthetic division
            Poly g = f;
            int k = 0;
            while (!g.empty() && eval(g, x, p) == 0) {
                Poly q(g.size() - 1, 0);
                int64_t carry = 0;
                for (int i = static_cast<int>(g.size()) - 1; i >= 1; --i) {
                    carry = addmod(mulmod(carry, x, p), g[static_cast<size_t>(i)], p);
                    q[static_cast<size_t>(i - 1)] = carry;
                }
                g = q;
                ++k;
            }
            if (k >= 2) {
                multiple = x;
                mult = k;
            }
        }
        if (multiple < 0) return {true, distinct, false, 0};
        return {false, 0, mult == 3, multiple};
    }
    Poly fp{B, mulmod(2, A, p), 3 % p};
    trim(fp);
    Poly g = gcd(f, fp, p);
    if (degree(g) <= 0) return {true, count_roots(f, p), false, 0};
    if (degree(g) == 1) {
        int64_t root = mulmod(submod(0, g[0], p), invmod(g[1], p), p);
        return {false, 0, false, root};
    }
    // triple root: -A/3
    int64_t root = mulmod(submod(0, A, p), invmod(3 % p, p), p);
    return {false, 0, true, root};
}

// Coordinates of the singular point of the reduction mod p (bad reduction).
std::pair<int64_t, int64_t> singular_point(const WeierstrassCurve& E, int64_t p) {
    if (p <= 3) {
        for (int64_t x = 0; x < p; ++x)
            for (int64_t y = 0; y < p; ++y) {
                int64_t a1 = red(E.a1(), p), a2 = red(E.a2(), p), a3 = red(E.a3(), p);
                int64_t a4 = red(E.a4(), p), a6 = red(E.a6(), p);
                int64_t F = ((y * y + a1 * x * y + a3 * y - x * x * x - a2 * x * x - a4 * x - a6) % p + p) % p;
                int64_t Fx = ((a1 * y - 3 * x * x - 2 * a2 * x - a4) % p + p) % p;
                int64_t Fy = ((2 * y + a1 * x + a3) % p + p) % p;
                if (F == 0 && Fx == 0 && Fy == 0) return {x, y};
            }
        throw Error("tate: no singular point found mod " + std::to_string(p));
    }
    using namespace polymod;
    // multiple root of the monic form of 4x^3 + b2 x^2 + 2 b4 x + b6
    int64_t inv4 = invmod(4 % p, p);
    int64_t A = mulmod(red(E.b2(), p), inv4, p);
    int64_t B = mulmod(red(2 * E.b4(), p), inv4, p);
    int64_t C = mulmod(red(E.b6(), p), inv4, p);
    Poly f{C, B, A, 1};
    Poly fp{B, mulmod(2, A, p), 3 % p};
    Poly g = gcd(f, fp, p);
    int64_t x0;
    if (degree(g) == 1)
        x0 = mulmod(submod(0, g[0], p), invmod(g[1], p), p);
    else if (degree(g) == 2)
        x0 = mulmod(submod(0, g[1], p), invmod(mulmod(2, g[2], p), p), p);
    else
        throw Error("tate: singular point extraction failed mod " + std::to_string(p));
    int64_t y0 = mulmod(submod(0, addmod(mulmod(red(E.a1(), p), x0, p), red(E.a3(), p), p), p),
                        invmod(2, p), p);
    return {x0, y0};
}

}  // namespace

LocalData tate_algorithm(const WeierstrassCurve& input, int64_t ell) {
    if (ell < 2 || !is_probable_prime(BigInt(ell)))
        throw Error("tate_algorithm: modulus must be prime");
    WeierstrassCurve E = input;

    while (true) {
        BigInt delta = E.discriminant();
        int n = vp(delta, ell);
        if (n == 0)
            return {ell, ReductionType::Good, {KodairaSymbol::Kind::I, 0}, 1, 0, E};

        auto [x0, y0] = singular_point(E, ell);
        E = E.transform(1, x0, 0, y0);
        // singular point at the origin: ell | a3, a4, a6

        if (E.c4() % ell != 0) {
            // multiplicative: tangent directions from T^2 + a1 T - a2
            QuadraticInfo tangents = quadratic_info(1, red(E.a1(), ell), red(-E.a2(), ell), ell);
            bool split = tangents.has_root;
            int64_t c = split ? n : (n % 2 == 0 ? 2 : 1);
            return {ell,
                    split ? ReductionType::SplitMultiplicative : ReductionType::NonsplitMultiplicative,
                    {KodairaSymbol::Kind::I, n},
                    c,
                    1,
                    E};
        }

        // additive from here on
        if (vp(E.a6(), ell) < 2)
            return {ell, ReductionType::Additive, {KodairaSymbol::Kind::II, 0}, 1, n, E};
        if (vp(E.b8(), ell) < 3)
            return {ell, ReductionType::Additive, {KodairaSymbol::Kind::III, 0}, 2, n - 1, E};
        if (vp(E.b6(), ell) < 3) {
            QuadraticInfo q = quadratic_info(1, red(E.a3() / ell, ell),
                                             red(-(E.a6() / (BigInt(ell) * ell)), ell), ell);
            return {ell, ReductionType::Additive, {KodairaSymbol::Kind::IV, 0},
                    q.has_root ? 3 : 1, n - 2, E};
        }

        // normalize to ell | a1, a2; ell^2 | a3, a4; ell^3 | a6
        {
            int64_t s = (ell == 2) ? red(E.a2(), 2)
                                   : mod_floor_i64(-E.a1() * invmod_i64(2, ell), ell);
            E = E.transform(1, 0, s, 0);
            BigInt ell2 = BigInt(ell) * ell;
            BigInt t = (ell == 2) ? BigInt(red(E.a3() / 2, 2))
                                  : mod_floor(-E.a3() * invmod(BigInt(2), ell2), ell2);
            E = E.transform(1, 0, 0, t);
        }
        if (vp(E.a1(), ell) < 1 || vp(E.a2(), ell) < 1 || vp(E.a3(), ell) < 2 ||
            vp(E.a4(), ell) < 2 || vp(E.a6(), ell) < 3)
            throw Error("tate: normalization invariant violated at " + std::to_string(ell));

        BigInt ell2 = BigInt(ell) * ell;
        BigInt ell3 = ell2 * ell;
        CubicInfo P = cubic_info(red(E.a2() / ell, ell), red(E.a4() / ell2, ell),
                                 red(E.a6() / ell3, ell), ell);

        if (P.squarefree) {
            return {ell, ReductionType::Additive, {KodairaSymbol::Kind::IStar, 0},
                    1 + P.rational_roots, n - 4, E};
        }

        if (!P.triple) {
            // double root of P: type I_m* for some m >= 1
            E = E.transform(1, BigInt(ell) * P.multiple_root, 0, 0);
            // v(a2) = 1, v(a3) >= 2, v(a4) >= 3, v(a6) >= 4
            int q = 1;
            while (true) {
                BigInt pq1 = pow_int(BigInt(ell), static_cast<unsigned>(q + 1));
                BigInt p2q2 = pow_int(BigInt(ell), static_cast<unsigned>(2 * q + 2));
                // odd step m = 2q - 1: Y^2 + a_{3,q+1} Y - a_{6,2q+2}
                QuadraticInfo qy = quadratic_info(1, red(E.a3() / pq1, ell),
                                                  red(-(E.a6() / p2q2), ell), ell);
                if (qy.distinct) {
                    int m = 2 * q - 1;
                    return {ell, ReductionType::Additive, {KodairaSymbol::Kind::IStar, m},
                            qy.has_root ? 4 : 2, n - m - 4, E};
                }
                E = E.transform(1, 0, 0, pq1 * qy.double_root);

                BigInt pq2 = pq1 * ell;
                BigInt p2q3 = p2q2 * ell;
                // even step m = 2q: a_{2,1} X^2 + a_{4,q+2} X + a_{6,2q+3}
                QuadraticInfo qx = quadratic_info(red(E.a2() / ell, ell), red(E.a4() / pq2, ell),
                                                  red(E.a6() / p2q3, ell), ell);
                if (qx.distinct) {
                    int m = 2 * q;
                    return {ell, ReductionType::Additive, {KodairaSymbol::Kind::IStar, m},
                            qx.has_root ? 4 : 2, n - m - 4, E};
                }
                E = E.transform(1, pq1 * qx.double_root, 0, 0);
                ++q;
            }
        }

        // triple root of P
        E = E.transform(1, BigInt(ell) * P.multiple_root, 0, 0);
        // v(a2) >= 2, v(a4) >= 3, v(a6) >= 4
        {
            BigInt ell4 = ell2 * ell2;
            QuadraticInfo qy = quadratic_info(1, red(E.a3() / ell2, ell),
                                              red(-(E.a6() / ell4), ell), ell);
            if (qy.distinct) {
                return {ell, ReductionType::Additive, {KodairaSymbol::Kind::IVStar, 0},
                        qy.has_root ? 3 : 1, n - 6, E};
            }
            E = E.transform(1, 0, 0, ell2 * qy.double_root);
        }
        // v(a3) >= 3, v(a6) >= 5
        if (vp(E.a4(), ell) < 4)
            return {ell, ReductionType::Additive, {KodairaSymbol::Kind::IIIStar, 0}, 2, n - 7, E};
        if (vp(E.a6(), ell) < 6)
            return {ell, ReductionType::Additive, {KodairaSymbol::Kind::IIStar, 0}, 1, n - 8, E};

        // non-minimal at ell: rescale and restart
        E = E.transform(ell, 0, 0, 0);
    }
}

namespace {

BigInt floor_div(const BigInt& a, const BigInt& b) {
    return (a - mod_floor(a, b)) / b;
}

}  // namespace

WeierstrassCurve minimal_model(const WeierstrassCurve& E) {
    WeierstrassCurve W = E;
    for (const auto& [q, e] : factorize(E.discriminant())) {
        if (e < 12) continue;  // u-rescaling divides the discriminant by u^12
        int64_t ell = static_cast<int64_t>(q);
        W = tate_algorithm(W, ell).minimal_model;
    }
    // reduce to the normal form: a1, a3 in {0, 1}, a2 in {-1, 0, 1}
    BigInt s = -floor_div(W.a1(), 2);
    W = W.transform(1, 0, s, 0);
    BigInt r = -floor_div(W.a2() + 1, 3);
    W = W.transform(1, r, 0, 0);
    BigInt t = -floor_div(W.a3(), 2);
    W = W.transform(1, 0, 0, t);
    return W;
}

std::vector<int64_t> bad_primes(const WeierstrassCurve& E) {
    WeierstrassCurve W = minimal_model(E);
    std::vector<int64_t> primes;
    for (const auto& [q, e] : factorize(W.discriminant())) {
        if (q > BigInt(std::numeric_limits<int64_t>::max()))
            throw Error("bad_primes: prime too large for local analysis");
        primes.push_back(static_cast<int64_t>(q));
    }
    return primes;
}

BigInt conductor(const WeierstrassCurve& E) {
    WeierstrassCurve W = minimal_model(E);
    BigInt N = 1;
    for (int64_t ell : bad_primes(W)) {
        LocalData ld = tate_algorithm(W, ell);
        N *= pow_int(BigInt(ell), static_cast<unsigned>(ld.conductor_exponent));
    }
    return N;
}

BigInt tamagawa_product(const WeierstrassCurve& E, int64_t excluded_prime) {
    WeierstrassCurve W = minimal_model(E);
    BigInt product = 1;
    for (int64_t ell : bad_primes(W)) {
        if (ell == excluded_prime) continue;
        product *= tate_algorithm(W, ell).tamagawa;
    }
    return product;
}

}  // namespace h10::curves
