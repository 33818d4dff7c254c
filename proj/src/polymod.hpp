#pragma once

// Small-degree polynomial arithmetic over F_p, p < 2^62. Internal helper for
// Tate's algorithm and 2-division-cubic factorization patterns.

#include <cstdint>
#include <vector>

namespace h10::polymod {

using Poly = std::vector<int64_t>;  // coefficients ascending, reduced mod p

inline int64_t mulmod(int64_t a, int64_t b, int64_t p) {
    return static_cast<int64_t>(static_cast<unsigned __int128>(a) * static_cast<unsigned __int128>(b) %
                                static_cast<unsigned __int128>(p));
}

inline int64_t addmod(int64_t a, int64_t b, int64_t p) {
    int64_t s = a + b;
    if (s >= p) s -= p;
    return s;
}

inline int64_t submod(int64_t a, int64_t b, int64_t p) {
    int64_t s = a - b;
    if (s < 0) s += p;
    return s;
}

inline int64_t powmod(int64_t a, int64_t e, int64_t p) {
    int64_t r = 1;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

inline int64_t invmod(int64_t a, int64_t p) {
    return powmod(a, p - 2, p);  // p prime
}

inline void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int degree(const Poly& f) {
    return static_cast<int>(f.size()) - 1;
}

inline int64_t eval(const Poly& f, int64_t x, int64_t p) {
    int64_t r = 0;
    for (auto it = f.rbegin(); it != f.rend(); ++it) r = addmod(mulmod(r, x, p), *it, p);
    return r;
}

inline Poly mul(const Poly& f, const Poly& g, int64_t p) {
    if (f.empty() || g.empty()) return {};
    Poly h(f.size() + g.size() - 1, 0);
    for (size_t i = 0; i < f.size(); ++i)
        for (size_t j = 0; j < g.size(); ++j)
            h[i + j] = addmod(h[i + j], mulmod(f[i], g[j], p), p);
    trim(h);
    return h;
}

inline Poly rem(Poly f, const Poly& g, int64_t p) {
    int64_t lead_inv = invmod(g.back(), p);
    while (degree(f) >= degree(g)) {
        int64_t q = mulmod(f.back(), lead_inv, p);
        size_t shift = f.size() - g.size();
        for (size_t i = 0; i < g.size(); ++i)
            f[shift + i] = submod(f[shift + i], mulmod(q, g[i], p), p);
        trim(f);
        if (f.empty()) break;
    }
    return f;
}

inline Poly gcd(Poly f, Poly g, int64_t p) {
    trim(f);
    trim(g);
    while (!g.empty()) {
        Poly r = rem(f, g, p);
        f = std::move(g);
        g = std::move(r);
    }
    if (!f.empty() && f.back() != 1) {
        int64_t inv = invmod(f.back(), p);
        for (auto& c : f) c = mulmod(c, inv, p);
    }
    return f;
}

// x^e mod f
inline Poly pow_x_mod(int64_t e, const Poly& f, int64_t p) {
    Poly result{1};
    Poly base{0, 1};
    base = rem(base, f, p);
    while (e) {
        if (e & 1) result = rem(mul(result, base, p), f, p);
        base = rem(mul(base, base, p), f, p);
        e >>= 1;
    }
    return result;
}

// number of distinct roots of f in F_p (f nonzero)
inline int count_roots(const Poly& f, int64_t p) {
    if (p <= 100000) {
        int count = 0;
        for (int64_t x = 0; x < p; ++x)
            if (eval(f, x, p) == 0) ++count;
        return count;
    }
    // deg gcd(x^p - x, f)
    Poly xp = pow_x_mod(p, f, p);
    if (xp.size() < 2) xp.resize(2, 0);
    xp[1] = submod(xp[1], 1, p);
    trim(xp);
    Poly g = gcd(f, xp, p);
    return degree(g) <= 0 ? 0 : degree(g);
}

}  // namespace h10::polymod
