#include "h10/series.hpp"

#include <algorithm>
#include <sstream>

namespace h10::series {

using padic::FpElement;
using padic::Valuation;

UnivariateSeries::UnivariateSeries(int64_t prime, int precision, int cap)
    : prime_(prime), precision_(precision), cap_(cap) {
    if (cap_ < 0) throw Error("UnivariateSeries: negative cap");
    coeffs_.assign(static_cast<size_t>(cap_) + 1, PadicNumber::zero(prime_, precision_));
}

const PadicNumber& UnivariateSeries::coeff(int i) const {
    if (i < 0 || i > cap_) throw Error("UnivariateSeries: coefficient index beyond cap");
    return coeffs_[static_cast<size_t>(i)];
}

void UnivariateSeries::align_precision(int n) {
    if (n >= precision_) return;
    precision_ = n;
    for (auto& c : coeffs_) c = c.reduce_precision(n);
}

void UnivariateSeries::set_coeff(int i, const PadicNumber& value) {
    if (i < 0 || i > cap_) throw Error("UnivariateSeries: coefficient index beyond cap");
    if (value.prime() != prime_) throw Error("UnivariateSeries: mismatched primes");
    align_precision(value.precision());
    coeffs_[static_cast<size_t>(i)] = value.reduce_precision(precision_);
}

bool UnivariateSeries::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(),
                       [](const PadicNumber& c) { return c.is_zero(); });
}

UnivariateSeries UnivariateSeries::reduce_precision(int new_precision) const {
    UnivariateSeries out(prime_, std::min(precision_, new_precision), cap_);
    for (int i = 0; i <= cap_; ++i)
        out.coeffs_[static_cast<size_t>(i)] = coeff(i).reduce_precision(out.precision_);
    return out;
}

UnivariateSeries operator+(const UnivariateSeries& f, const UnivariateSeries& g) {
    if (f.prime_ != g.prime_ || f.cap_ != g.cap_)
        throw Error("series addition: incompatible series");
    UnivariateSeries out(f.prime_, std::min(f.precision_, g.precision_), f.cap_);
    for (int i = 0; i <= f.cap_; ++i) out.set_coeff(i, f.coeff(i) + g.coeff(i));
    return out;
}

UnivariateSeries operator-(const UnivariateSeries& f, const UnivariateSeries& g) {
    if (f.prime_ != g.prime_ || f.cap_ != g.cap_)
        throw Error("series subtraction: incompatible series");
    UnivariateSeries out(f.prime_, std::min(f.precision_, g.precision_), f.cap_);
    for (int i = 0; i <= f.cap_; ++i) out.set_coeff(i, f.coeff(i) - g.coeff(i));
    return out;
}

UnivariateSeries operator*(const UnivariateSeries& f, const UnivariateSeries& g) {
    if (f.prime_ != g.prime_ || f.cap_ != g.cap_)
        throw Error("series multiplication: incompatible series");
    UnivariateSeries out(f.prime_, std::min(f.precision_, g.precision_), f.cap_);
    for (int i = 0; i <= f.cap_; ++i) {
        PadicNumber acc = PadicNumber::zero(f.prime_, out.precision_);
        for (int k = 0; k <= i; ++k) acc = acc + f.coeff(k) * g.coeff(i - k);
        out.set_coeff(i, acc);
    }
    return out;
}

UnivariateSeries UnivariateSeries::scale(const PadicNumber& c) const {
    UnivariateSeries out(prime_, std::min(precision_, c.precision()), cap_);
    for (int i = 0; i <= cap_; ++i) out.set_coeff(i, coeff(i) * c);
    return out;
}

namespace {

BigInt residue_from_json(const nlohmann::json& v) {
    if (v.is_string()) return BigInt(v.get<std::string>());
    if (v.is_number_integer()) return BigInt(v.get<int64_t>());
    throw Error("series JSON: residue must be an integer or decimal string");
}

}  // namespace

nlohmann::json UnivariateSeries::to_json() const {
    nlohmann::json coeffs = nlohmann::json::array();
    for (int i = 0; i <= cap_; ++i)
        if (!coeff(i).is_zero())
            coeffs.push_back({i, coeff(i).residue().str()});
    return {{"p", prime_}, {"precision", precision_}, {"cap", cap_}, {"coeffs", coeffs}};
}

UnivariateSeries UnivariateSeries::from_json(const nlohmann::json& j) {
    UnivariateSeries out(j.at("p").get<int64_t>(), j.at("precision").get<int>(),
                         j.at("cap").get<int>());
    for (const auto& entry : j.at("coeffs")) {
        if (entry.size() != 2) throw Error("univariate series JSON: expected [i, residue]");
        out.set_coeff(entry[0].get<int>(),
                      PadicNumber(out.prime_, out.precision_, residue_from_json(entry[1])));
    }
    return out;
}

std::string UnivariateSeries::str(const std::string& var) const {
    std::ostringstream os;
    bool first = true;
    for (int i = 0; i <= cap_; ++i) {
        const auto& c = coeff(i);
        if (c.is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        if (i == 0) {
            os << c.residue();
        } else {
            if (c.residue() != 1) os << c.residue() << "*";
            os << var;
            if (i > 1) os << "^" << i;
        }
    }
    if (first) os << "0";
    return os.str();
}

BivariateSeries::BivariateSeries(int64_t prime, int precision, int cap)
    : prime_(prime), precision_(precision), cap_(cap) {
    if (cap_ < 0) throw Error("BivariateSeries: negative cap");
    size_t n = static_cast<size_t>(cap_ + 1) * static_cast<size_t>(cap_ + 2) / 2;
    coeffs_.assign(n, PadicNumber::zero(prime_, precision_));
}

size_t BivariateSeries::index(int i, int j) const {
    if (i < 0 || j < 0 || i + j > cap_)
        throw Error("BivariateSeries: coefficient index beyond cap");
    // row i holds (cap + 1 - i) entries
    int d = i + j;
    return static_cast<size_t>(d) * static_cast<size_t>(d + 1) / 2 + static_cast<size_t>(j);
}

const PadicNumber& BivariateSeries::coeff(int i, int j) const {
    return coeffs_[index(i, j)];
}

void BivariateSeries::align_precision(int n) {
    if (n >= precision_) return;
    precision_ = n;
    for (auto& c : coeffs_) c = c.reduce_precision(n);
}

void BivariateSeries::set_coeff(int i, int j, const PadicNumber& value) {
    if (value.prime() != prime_) throw Error("BivariateSeries: mismatched primes");
    size_t k = index(i, j);
    align_precision(value.precision());
    coeffs_[k] = value.reduce_precision(precision_);
}

BivariateSeries BivariateSeries::transpose() const {
    BivariateSeries out(prime_, precision_, cap_);
    for (int i = 0; i <= cap_; ++i)
        for (int j = 0; i + j <= cap_; ++j) out.set_coeff(j, i, coeff(i, j));
    return out;
}

BivariateSeries operator+(const BivariateSeries& f, const BivariateSeries& g) {
    if (f.prime_ != g.prime_ || f.cap_ != g.cap_)
        throw Error("series addition: incompatible series");
    BivariateSeries out(f.prime_, std::min(f.precision_, g.precision_), f.cap_);
    for (int i = 0; i <= f.cap_; ++i)
        for (int j = 0; i + j <= f.cap_; ++j) out.set_coeff(i, j, f.coeff(i, j) + g.coeff(i, j));
    return out;
}

BivariateSeries operator*(const BivariateSeries& f, const BivariateSeries& g) {
    if (f.prime_ != g.prime_ || f.cap_ != g.cap_)
        throw Error("series multiplication: incompatible series");
    BivariateSeries out(f.prime_, std::min(f.precision_, g.precision_), f.cap_);
    for (int i = 0; i <= f.cap_; ++i)
        for (int j = 0; i + j <= f.cap_; ++j) {
            PadicNumber acc = PadicNumber::zero(f.prime_, out.precision_);
            for (int u = 0; u <= i; ++u)
                for (int v = 0; v <= j; ++v)
                    acc = acc + f.coeff(u, v) * g.coeff(i - u, j - v);
            out.set_coeff(i, j, acc);
        }
    return out;
}

nlohmann::json BivariateSeries::to_json() const {
    nlohmann::json coeffs = nlohmann::json::array();
    for (int d = 0; d <= cap_; ++d)
        for (int j = 0; j <= d; ++j) {
            int i = d - j;
            if (!coeff(i, j).is_zero())
                coeffs.push_back({i, j, coeff(i, j).residue().str()});
        }
    return {{"p", prime_}, {"precision", precision_}, {"cap", cap_}, {"coeffs", coeffs}};
}

BivariateSeries BivariateSeries::from_json(const nlohmann::json& j) {
    BivariateSeries out(j.at("p").get<int64_t>(), j.at("precision").get<int>(),
                        j.at("cap").get<int>());
    for (const auto& entry : j.at("coeffs")) {
        if (entry.size() != 3) throw Error("bivariate series JSON: expected [i, j, residue]");
        out.set_coeff(entry[0].get<int>(), entry[1].get<int>(),
                      PadicNumber(out.prime_, out.precision_, residue_from_json(entry[2])));
    }
    return out;
}

std::string BivariateSeries::str() const {
    std::ostringstream os;
    bool first = true;
    for (int d = 0; d <= cap_; ++d)
        for (int i = d; i >= 0; --i) {
            int j = d - i;
            const auto& c = coeff(i, j);
            if (c.is_zero()) continue;
            if (!first) os << " + ";
            first = false;
            if (i == 0 && j == 0) {
                os << c.residue();
                continue;
            }
            if (c.residue() != 1) os << c.residue() << "*";
            bool star = false;
            if (i > 0) {
                os << "X";
                if (i > 1) os << "^" << i;
                star = true;
            }
            if (j > 0) {
                if (star) os << "*";
                os << "Y";
                if (j > 1) os << "^" << j;
            }
        }
    if (first) os << "0";
    return os.str();
}

PadicNumber padic_binomial(const PadicNumber& a, int k) {
    if (k < 0) throw Error("padic_binomial: negative k");
    if (k == 0) return PadicNumber::one(a.prime(), a.precision());
    PadicNumber num = a;
    for (int i = 1; i < k; ++i)
        num = num * (a - PadicNumber(a.prime(), a.precision(), i));
    // k! = p^m * u with u a unit; the division by p^m costs m digits
    BigInt fact = 1;
    for (int i = 2; i <= k; ++i) fact *= i;
    int m = int_valuation(fact, BigInt(a.prime()));
    if (m >= num.precision())
        throw Error("padic_binomial: precision exhausted by division by " + std::to_string(k) + "!");
    PadicNumber shifted = num.divide_by_prime_power(m);
    BigInt unit = fact / pow_int(BigInt(a.prime()), static_cast<unsigned>(m));
    PadicNumber unit_inv(a.prime(), shifted.precision(),
                         invmod(unit, pow_int(BigInt(a.prime()),
                                              static_cast<unsigned>(shifted.precision()))));
    return shifted * unit_inv;
}

int binomial_guard_digits(int64_t prime, int cap) {
    int guard = 0;
    for (int64_t q = prime; q <= cap; q *= prime) guard += cap / static_cast<int>(q);
    return guard;
}

BivariateSeries line_series(const PadicNumber& a, const PadicNumber& b, int cap) {
    if (a.prime() != b.prime()) throw Error("line_series: mismatched primes");
    if (!a.is_unit() && !b.is_unit())
        throw Error("line_series: (a, b) must represent a line (not both divisible by p)");
    int64_t p = a.prime();
    int n = std::min(a.precision(), b.precision());
    int out_precision = n - binomial_guard_digits(p, cap);
    if (out_precision < 1)
        throw Error("line_series: insufficient precision for requested cap");

    std::vector<PadicNumber> bin_a, bin_b;
    for (int k = 0; k <= cap; ++k) {
        bin_a.push_back(padic_binomial(a, k).reduce_precision(out_precision));
        bin_b.push_back(padic_binomial(b, k).reduce_precision(out_precision));
    }
    BivariateSeries f(p, out_precision, cap);
    for (int i = 0; i <= cap; ++i)
        for (int j = 0; i + j <= cap; ++j)
            f.set_coeff(i, j, bin_a[static_cast<size_t>(i)] * bin_b[static_cast<size_t>(j)]);
    f.set_coeff(0, 0, f.coeff(0, 0) - PadicNumber::one(p, out_precision));
    return f;
}

BivariateSeries line_series_exact(int64_t prime, int precision, int cap, const BigInt& a,
                                  const BigInt& b) {
    int guard = binomial_guard_digits(prime, cap);
    PadicNumber pa(prime, precision + guard, a), pb(prime, precision + guard, b);
    BivariateSeries f = line_series(pa, pb, cap);
    BivariateSeries out(prime, precision, cap);
    for (int i = 0; i <= cap; ++i)
        for (int j = 0; i + j <= cap; ++j)
            out.set_coeff(i, j, f.coeff(i, j).reduce_precision(precision));
    return out;
}

UnivariateSeries compose_x(const BivariateSeries& F, const UnivariateSeries& g) {
    if (F.prime() != g.prime()) throw Error("compose_x: mismatched primes");
    if (g.cap() < F.cap()) throw Error("compose_x: substituted series cap too small");
    if (!g.coeff(0).is_zero()) throw Error("compose_x: substituted series must vanish at 0");
    int64_t p = F.prime();
    int precision = std::min(F.precision(), g.precision());
    int cap = F.cap();

    UnivariateSeries result(p, precision, cap);
    UnivariateSeries gpow(p, precision, cap);
    gpow.set_coeff(0, PadicNumber::one(p, precision));
    UnivariateSeries gt(p, precision, cap);
    for (int k = 0; k <= cap; ++k) gt.set_coeff(k, g.coeff(k).reduce_precision(precision));

    for (int i = 0; i <= cap; ++i) {
        UnivariateSeries row(p, precision, cap);
        for (int j = 0; i + j <= cap; ++j)
            row.set_coeff(j, F.coeff(i, j).reduce_precision(precision));
        result = result + row * gpow;
        if (i < cap) gpow = gpow * gt;
    }
    return result;
}

UnivariateSeries implicit_solve(const PadicNumber& a, const PadicNumber& b, int cap) {
    if (!a.is_unit())
        throw Error("implicit_solve: line not parametrizable by Y (a is not a unit)");
    BivariateSeries f = line_series(a, b, cap);
    int64_t p = f.prime();
    int precision = f.precision();
    PadicNumber a_inv = a.reduce_precision(precision).invert();

    UnivariateSeries g(p, precision, cap);
    for (int k = 1; k <= cap; ++k) {
        UnivariateSeries h = compose_x(f, g);
        g.set_coeff(k, (h.coeff(k) * a_inv).negate());
    }
    return g;
}

UnivariateSeries implicit_solve_exact(int64_t prime, int precision, int cap, const BigInt& a,
                                      const BigInt& b) {
    int guard = binomial_guard_digits(prime, cap);
    PadicNumber pa(prime, precision + guard, a), pb(prime, precision + guard, b);
    return implicit_solve(pa, pb, cap).reduce_precision(precision);
}

UnivariateSeries specialize_line(const BivariateSeries& F, const PadicNumber& a,
                                 const PadicNumber& b) {
    if (!a.is_unit() && !b.is_unit())
        throw Error("specialize_line: (a, b) must represent a line");
    if (a.is_unit()) {
        UnivariateSeries g = implicit_solve(a, b, F.cap());
        return compose_x(F, g);
    }
    // p | a: parametrize by X instead and substitute into the transposed series
    UnivariateSeries g = implicit_solve(b, a, F.cap());
    return compose_x(F.transpose(), g);
}

IwasawaInvariants mu_lambda(const UnivariateSeries& h) {
    if (h.is_zero())
        throw NotCotorsion("mu_lambda: series is zero at working precision "
                           "(not cotorsion at this precision)");
    int mu = h.precision();
    int lambda = -1;
    for (int i = 0; i <= h.cap(); ++i) {
        Valuation v = h.coeff(i).valuation();
        if (v.bounded && v.value < mu) {
            mu = v.value;
            lambda = i;
        }
    }
    bool certified = lambda < h.cap() && mu < h.precision();
    return {mu, lambda, certified};
}

ProjectiveLineFp excluded_line(const BivariateSeries& F) {
    if (F.cap() < 1) throw Error("excluded_line: cap must be at least 1");
    if (F.coeff(0, 0).is_unit() || !F.coeff(0, 1).is_unit())
        throw Error("excluded_line: cyclotomic hypotheses not met "
                    "(need p | a_{0,0} and a_{0,1} a unit)");
    int64_t p = F.prime();
    return {FpElement(p, F.coeff(1, 0).mod_p()), FpElement(p, F.coeff(0, 1).mod_p())};
}

}  // namespace h10::series
