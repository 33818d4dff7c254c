#include "h10/bigint.hpp"

#include <algorithm>
#include <random>

namespace h10 {

BigInt pow_int(const BigInt& base, unsigned exp) {
    BigInt result = 1;
    BigInt b = base;
    while (exp) {
        if (exp & 1u) result *= b;
        b *= b;
        exp >>= 1u;
    }
    return result;
}

int int_valuation(const BigInt& n, const BigInt& p) {
    if (n == 0) throw Error("int_valuation: valuation of zero is undefined");
    BigInt m = abs(n);
    int v = 0;
    while (m % p == 0) {
        m /= p;
        ++v;
    }
    return v;
}

BigInt mod_floor(const BigInt& a, const BigInt& m) {
    BigInt r = a % m;
    if (r < 0) r += m;
    return r;
}

int64_t mod_floor_i64(const BigInt& a, int64_t m) {
    return static_cast<int64_t>(mod_floor(a, BigInt(m)));
}

int64_t powmod_i64(int64_t a, int64_t e, int64_t m) {
    a %= m;
    if (a < 0) a += m;
    unsigned __int128 result = 1, base = static_cast<unsigned __int128>(a);
    while (e) {
        if (e & 1) result = result * base % static_cast<unsigned __int128>(m);
        base = base * base % static_cast<unsigned __int128>(m);
        e >>= 1;
    }
    return static_cast<int64_t>(result);
}

BigInt powmod(const BigInt& a, const BigInt& e, const BigInt& m) {
    return boost::multiprecision::powm(mod_floor(a, m), e, m);
}

BigInt invmod(const BigInt& a, const BigInt& m) {
    // extended Euclid
    BigInt r0 = m, r1 = mod_floor(a, m);
    BigInt s0 = 0, s1 = 1;
    while (r1 != 0) {
        BigInt q = r0 / r1;
        BigInt r2 = r0 - q * r1;
        BigInt s2 = s0 - q * s1;
        r0 = r1; r1 = r2;
        s0 = s1; s1 = s2;
    }
    if (r0 != 1) throw Error("invmod: element not invertible");
    return mod_floor(s0, m);
}

int64_t invmod_i64(int64_t a, int64_t m) {
    return static_cast<int64_t>(invmod(BigInt(a), BigInt(m)));
}

namespace {

bool miller_rabin_witness(const BigInt& n, const BigInt& a, const BigInt& d, int r) {
    BigInt x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return false;
    for (int i = 1; i < r; ++i) {
        x = x * x % n;
        if (x == n - 1) return false;
    }
    return true;  // composite witness
}

}  // namespace

bool is_probable_prime(const BigInt& n) {
    if (n < 2) return false;
    for (int64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    BigInt d = n - 1;
    int r = 0;
    while (d % 2 == 0) {
        d /= 2;
        ++r;
    }
    // deterministic for n < 3.3e24 with this base set
    for (int64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (miller_rabin_witness(n, BigInt(a), d, r)) return false;
    }
    return true;
}

namespace {

BigInt pollard_rho(const BigInt& n) {
    if (n % 2 == 0) return 2;
    static std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    while (true) {
        BigInt x = BigInt(rng() % 1000000007ULL) % n;
        BigInt c = BigInt(rng() % 1000000007ULL) % n + 1;
        BigInt y = x, divisor = 1;
        auto step = [&](const BigInt& v) { return (v * v + c) % n; };
        while (divisor == 1) {
            x = step(x);
            y = step(step(y));
            if (x == y) break;  // cycle, retry with new parameters
            divisor = gcd(abs(x - y), n);
        }
        if (divisor != 1 && divisor != n) return divisor;
    }
}

void factor_into(BigInt n, std::vector<BigInt>& out) {
    if (n == 1) return;
    if (is_probable_prime(n)) {
        out.push_back(n);
        return;
    }
    BigInt d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace

std::vector<std::pair<BigInt, int>> factorize(const BigInt& n) {
    if (n == 0) throw Error("factorize: zero has no factorization");
    BigInt m = abs(n);
    std::vector<BigInt> primes;
    for (int64_t q = 2; q < 100000 && BigInt(q) * q <= m; q == 2 ? q = 3 : q += 2) {
        while (m % q == 0) {
            primes.emplace_back(q);
            m /= q;
        }
    }
    if (m > 1) factor_into(m, primes);
    std::sort(primes.begin(), primes.end());
    std::vector<std::pair<BigInt, int>> result;
    for (const auto& q : primes) {
        if (!result.empty() && result.back().first == q)
            ++result.back().second;
        else
            result.emplace_back(q, 1);
    }
    return result;
}

bool is_squarefree(const BigInt& n) {
    if (n == 0) return false;
    for (const auto& [q, e] : factorize(n))
        if (e >= 2) return false;
    return true;
}

BigInt squarefree_part(const BigInt& n) {
    if (n == 0) throw Error("squarefree_part: zero input");
    BigInt result = n < 0 ? -1 : 1;
    for (const auto& [q, e] : factorize(n))
        if (e % 2 == 1) result *= q;
    return result;
}

bool is_perfect_square(const BigInt& n) {
    if (n < 0) return false;
    BigInt r = sqrt(n);
    return r * r == n;
}

std::vector<int64_t> primes_below(int64_t bound) {
    std::vector<int64_t> primes;
    if (bound <= 2) return primes;
    std::vector<bool> sieve(static_cast<size_t>(bound), true);
    for (int64_t i = 2; i < bound; ++i) {
        if (!sieve[static_cast<size_t>(i)]) continue;
        primes.push_back(i);
        for (int64_t j = i * i; j < bound; j += i) sieve[static_cast<size_t>(j)] = false;
    }
    return primes;
}

std::string to_string(const BigInt& n) {
    return n.str();
}

}  // namespace h10
