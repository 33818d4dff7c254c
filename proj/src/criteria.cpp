#include "h10/criteria.hpp"

#include <algorithm>
#include <atomic>
#include <future>
#include <sstream>

namespace h10::criteria {

using curves::WeierstrassCurve;
using ingest::Mod2Image;
using nlohmann::json;

std::string hyp_status_name(HypStatus s) {
    switch (s) {
        case HypStatus::ComputedPass: return "computed-pass";
        case HypStatus::ComputedFail: return "computed-fail";
        case HypStatus::IngestedPass: return "ingested-pass";
        case HypStatus::IngestedFail: return "ingested-fail";
        case HypStatus::Unknown: return "unknown";
    }
    return "?";
}

json HypothesisStatus::to_json() const {
    return {{"name", name}, {"status", hyp_status_name(status)}, {"evidence", evidence}};
}

json Verdict::to_json() const {
    json hyps = json::array();
    for (const auto& h : hypotheses) hyps.push_back(h.to_json());
    json j;
    j["curve"] = curve_label;
    j["p"] = p;
    j["d"] = static_cast<int64_t>(d);
    j["twist"] = twist_label;
    j["hypotheses"] = hyps;
    j["h10gen"] = h10gen == H10Gen::Satisfied ? "satisfied" : "not-established";
    j["lambda_cyc_K"] = lambda_cyc_K ? json(*lambda_cyc_K) : json(nullptr);
    j["excluded_line"] = excluded ? json(excluded->str()) : json(nullptr);
    j["excluded_note"] = excluded_note;
    return j;
}

namespace {

std::string ratio_str(const BigRational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

HypothesisStatus ingested_flag(const std::string& name, std::optional<bool> flag,
                               const std::string& what) {
    if (!flag) return {name, HypStatus::Unknown, what + " not attested"};
    return {name, *flag ? HypStatus::IngestedPass : HypStatus::IngestedFail,
            what + " = " + (*flag ? "true" : "false")};
}

HypothesisStatus corank_hypothesis(const std::string& name, const CurveRecord* record,
                                   int64_t p, int expected) {
    if (record == nullptr)
        return {name, HypStatus::Unknown, "no record for the twist available"};
    auto it = record->selmer_corank.find(p);
    if (it == record->selmer_corank.end())
        return {name, HypStatus::Unknown, "selmer_corank at " + std::to_string(p) + " not attested"};
    return {name, it->second == expected ? HypStatus::IngestedPass : HypStatus::IngestedFail,
            "corank = " + std::to_string(it->second)};
}

HypothesisStatus sha_hypothesis(const std::string& name, const CurveRecord* record, int64_t p) {
    if (record == nullptr) return {name, HypStatus::Unknown, "no record available"};
    if (!record->sha_order) return {name, HypStatus::Unknown, "sha_order not attested"};
    bool pass = *record->sha_order % p != 0;
    return {name, pass ? HypStatus::IngestedPass : HypStatus::IngestedFail,
            "#Sha = " + record->sha_order->str()};
}

HypothesisStatus regulator_hypothesis(const std::string& name, const CurveRecord& record,
                                      int64_t p) {
    // the regulator factor is trivial for corank-0 records
    auto corank = record.selmer_corank.find(p);
    if (corank != record.selmer_corank.end() && corank->second == 0)
        return {name, HypStatus::IngestedPass, "corank 0: no regulator factor"};
    auto it = record.regulator_unit.find(p);
    if (it == record.regulator_unit.end())
        return {name, HypStatus::Unknown,
                "regulator_unit at " + std::to_string(p) + " not attested"};
    return {name, it->second ? HypStatus::IngestedPass : HypStatus::IngestedFail,
            std::string("normalized regulator unit = ") + (it->second ? "true" : "false")};
}

HypothesisStatus ordinary_hypothesis(const std::string& name, const WeierstrassCurve& E,
                                     int64_t p) {
    if (!curves::is_good_reduction(E, p))
        return {name, HypStatus::ComputedFail, "bad reduction at " + std::to_string(p)};
    BigInt ap = curves::trace_of_frobenius(E, p);
    bool ordinary = ap % p != 0;
    return {name, ordinary ? HypStatus::ComputedPass : HypStatus::ComputedFail,
            "a_p = " + ap.str()};
}

HypothesisStatus non_anomalous_hypothesis(const std::string& name, const WeierstrassCurve& E,
                                          int64_t p) {
    if (!curves::is_good_reduction(E, p))
        return {name, HypStatus::ComputedFail, "bad reduction at " + std::to_string(p)};
    auto rc = curves::count_points(E, p);
    bool pass = rc.count % p != 0;
    return {name, pass ? HypStatus::ComputedPass : HypStatus::ComputedFail,
            "a_p = " + rc.trace.str() + ", #E~(F_p) = " + rc.count.str()};
}

HypothesisStatus tamagawa_hypothesis(const std::string& name, const WeierstrassCurve& E,
                                     int64_t p) {
    BigInt product = curves::tamagawa_product(E, p);
    bool pass = product % p != 0;
    return {name, pass ? HypStatus::ComputedPass : HypStatus::ComputedFail,
            "prod_{l != p} c_l = " + product.str()};
}

}  // namespace

EulerCharResult euler_char_check(const CurveRecord& record, int64_t p) {
    WeierstrassCurve E = record.curve();
    EulerCharResult result;
    result.factors.push_back(regulator_hypothesis("regulator", record, p));
    result.factors.push_back(sha_hypothesis("sha", &record, p));
    result.factors.push_back(tamagawa_hypothesis("tamagawa", E, p));
    result.factors.push_back(non_anomalous_hypothesis("non-anomalous", E, p));

    bool any_unknown = false, any_fail = false;
    for (const auto& f : result.factors) {
        if (!f.known()) any_unknown = true;
        else if (!f.passed()) any_fail = true;
    }
    result.verdict = any_fail ? UnitVerdict::NonUnit
                              : (any_unknown ? UnitVerdict::Unknown : UnitVerdict::Unit);
    return result;
}

Verdict h10_check(const CurveRecord& E_record, int64_t p, const BigInt& d,
                  const std::optional<CurveRecord>& twist_record,
                  const std::optional<series::BivariateSeries>& F) {
    if (p < 3 || p % 2 == 0) throw Error("h10_check: p must be an odd prime");
    if (d >= 0) throw Error("h10_check: d must be negative (imaginary quadratic twist)");
    BigInt d_sf = squarefree_part(d);

    Verdict v;
    v.curve_label = E_record.label;
    v.p = p;
    v.d = d_sf;
    if (twist_record) v.twist_label = twist_record->label;

    WeierstrassCurve E = E_record.curve();
    WeierstrassCurve T = curves::minimal_model(curves::quadratic_twist(E, d_sf));
    if (twist_record && curves::minimal_model(twist_record->curve()) != T)
        throw Error("h10_check: twist record " + twist_record->label +
                    " does not match the twist of " + E_record.label + " by " + d_sf.str());
    const CurveRecord* twist_ptr = twist_record ? &*twist_record : nullptr;

    auto& hyp = v.hypotheses;
    hyp.push_back(corank_hypothesis("corank(Sel_p(E/Q)) = 1", &E_record, p, 1));
    hyp.push_back(corank_hypothesis("corank(Sel_p(twist/Q)) = 0", twist_ptr, p, 0));
    hyp.push_back(ordinary_hypothesis("good ordinary at p (E)", E, p));
    hyp.push_back(ordinary_hypothesis("good ordinary at p (twist)", T, p));
    hyp.push_back(non_anomalous_hypothesis("E~(F_p)[p] = 0 (E)", E, p));
    hyp.push_back(non_anomalous_hypothesis("E~(F_p)[p] = 0 (twist)", T, p));
    hyp.push_back(tamagawa_hypothesis("p coprime to Tamagawa product (E)", E, p));
    hyp.push_back(tamagawa_hypothesis("p coprime to Tamagawa product (twist)", T, p));
    hyp.push_back(regulator_hypothesis("normalized p-adic regulator unit (E)", E_record, p));
    hyp.push_back(sha_hypothesis("Sha(E)[p] = 0", &E_record, p));
    hyp.push_back(sha_hypothesis("Sha(twist)[p] = 0", twist_ptr, p));

    bool all_pass = std::all_of(hyp.begin(), hyp.end(),
                                [](const HypothesisStatus& h) { return h.passed(); });
    v.h10gen = all_pass ? H10Gen::Satisfied : H10Gen::NotEstablished;
    if (all_pass) v.lambda_cyc_K = 1;  // corank(E) + corank(twist) by the Shapiro decomposition

    if (F) {
        try {
            v.excluded = series::excluded_line(*F);
            v.excluded_note = "excluded line computed from the characteristic series";
        } catch (const Error& e) {
            v.excluded_note = std::string("characteristic series rejected: ") + e.what();
        }
    } else if (all_pass) {
        v.excluded_note =
            "excluded line exists and is unique but is not identified in curve-only mode";
    }
    return v;
}

std::vector<HypothesisStatus> kriz_li_preconditions(const CurveRecord& E_record,
                                                    const ImagQuadField& K0, int64_t p) {
    WeierstrassCurve E = E_record.curve();
    std::vector<HypothesisStatus> out;

    bool two_torsion = curves::has_rational_two_torsion(E);
    out.push_back({"E(Q)[2] = 0", two_torsion ? HypStatus::ComputedFail : HypStatus::ComputedPass,
                   two_torsion ? "rational 2-torsion present" : "2-division cubic has no rational root"});
    out.push_back(corank_hypothesis("corank(Sel_p(E/Q)) = 1", &E_record, p, 1));
    out.push_back(ordinary_hypothesis("good ordinary at p", E, p));
    out.push_back(non_anomalous_hypothesis("p non-anomalous", E, p));
    out.push_back(tamagawa_hypothesis("p coprime to Tamagawa product", E, p));
    out.push_back(regulator_hypothesis("normalized p-adic regulator unit", E_record, p));

    bool two_splits = K0.splitting(2) == quad::Splitting::Split;
    out.push_back({"2 splits in K0", two_splits ? HypStatus::ComputedPass : HypStatus::ComputedFail,
                   "(" + K0.disc().str() + "/2) symbol"});

    bool all_split = true;
    std::string splits;
    std::vector<int64_t> moduli{p};
    for (const auto& [q, e] : factorize(E_record.conductor))
        moduli.push_back(static_cast<int64_t>(q));
    for (int64_t q : moduli) {
        bool s = K0.splitting(q) == quad::Splitting::Split;
        if (!splits.empty()) splits += ", ";
        splits += std::to_string(q) + (s ? ": split" : ": not split");
        all_split = all_split && s;
    }
    out.push_back({"primes dividing pN split in K0",
                   all_split ? HypStatus::ComputedPass : HypStatus::ComputedFail, splits});
    out.push_back(ingested_flag("Heegner point condition", E_record.heegner_flag, "heegner_flag"));
    return out;
}

bool kriz_li_S_test(int64_t ell, const CurveRecord& E_record, const ImagQuadField& K0,
                    int64_t p) {
    BigInt N = E_record.conductor;
    if (ell == 2 || N % ell == 0)
        throw Error("kriz_li_S_test: ell must be coprime to 2 cond(E)");
    if (ell % 4 != 1) return false;
    if (K0.splitting(ell) != quad::Splitting::Split) return false;
    if (!padic::is_square_mod(BigInt(ell), p)) return false;
    for (const auto& [q, e] : factorize(N))
        if (!padic::is_square_mod(BigInt(ell), static_cast<int64_t>(q))) return false;
    return curves::two_division_frobenius_order(E_record.curve(), ell) == 3;
}

std::vector<int64_t> kriz_li_S_primes(const CurveRecord& E_record, const ImagQuadField& K0,
                                      int64_t p, int64_t bound) {
    std::vector<int64_t> out;
    BigInt N = E_record.conductor;
    for (int64_t ell : primes_below(bound)) {
        if (ell == 2 || N % ell == 0) continue;
        if (kriz_li_S_test(ell, E_record, K0, p)) out.push_back(ell);
    }
    return out;
}

BigRational kriz_li_density(Mod2Image image, int k, bool k0_is_gaussian) {
    if (k < 0) throw Error("kriz_li_density: k must be >= 0");
    BigInt two_k = pow_int(BigInt(2), static_cast<unsigned>(k));
    if (image == Mod2Image::Z3) {
        // 2/3 * 2^-(k+1) for K0 = Q(i), 2/3 * 2^-(k+2) otherwise
        return BigRational(2, 3) * BigRational(1, two_k * (k0_is_gaussian ? 2 : 4));
    }
    return BigRational(1, 3) * BigRational(1, two_k * 2);
}

BigRational kriz_li_density(const CurveRecord& E_record, const ImagQuadField& K0) {
    Mod2Image image;
    if (E_record.mod2_image) {
        image = *E_record.mod2_image;
    } else {
        WeierstrassCurve E = E_record.curve();
        if (curves::has_rational_two_torsion(E))
            throw Error("kriz_li_density: 2-division cubic is reducible; Galois image Z/2 or "
                        "trivial is not covered");
        image = is_perfect_square(E.discriminant()) ? Mod2Image::Z3 : Mod2Image::S3;
    }
    int k = static_cast<int>(factorize(E_record.conductor).size());
    return kriz_li_density(image, k, K0.is_gaussian());
}

BigRational isogeny3_density(const BigInt& N, bool has_3_isogeny) {
    if (!has_3_isogeny) throw Error("isogeny3_density: requires a rational 3-isogeny");
    if (N < 1) throw Error("isogeny3_density: invalid conductor");
    auto factors = factorize(N);
    for (const auto& [q, e] : factors)
        if (e >= 2) throw Error("isogeny3_density: conductor not squarefree (non-semistable)");
    int r = N % 2 == 0 ? 2 : 0;
    int delta = N % 3 == 0 ? 0 : 1;
    int k = static_cast<int>(factors.size());
    BigRational density(1, 3 * pow_int(BigInt(2), static_cast<unsigned>(r)));
    int exp2 = k - delta;
    if (exp2 > 0) density /= pow_int(BigInt(2), static_cast<unsigned>(exp2));
    else if (exp2 < 0) density *= pow_int(BigInt(2), static_cast<unsigned>(-exp2));
    for (const auto& [q, e] : factors) {
        if (q == 3) continue;
        BigInt q_ell = q == 2 ? BigInt(4) : q;
        density *= BigRational(q_ell, q + 1);
    }
    return density;
}

json SelmerRatio::to_json() const {
    json j;
    j["place"] = place.str();
    if (value) {
        j["value"] = ratio_str(*value);
        j["ord3"] = *ord3;
    } else {
        json cand = json::array();
        for (const auto& c : candidates) cand.push_back(ratio_str(c));
        j["candidates"] = cand;
    }
    return j;
}

IsogenyContext isogeny_context(const CurveRecord& record) {
    if (!record.isogeny) throw Error("record " + record.label + " carries no isogeny data");
    if (record.isogeny->degree != 3)
        throw Error("isogeny_context: only degree-3 isogenies are supported");
    IsogenyContext ctx{record.curve(), record.isogeny->codomain(), record.isogeny->kernel_x};
    // kernel x must be a root of the 3-division polynomial
    const auto& E = ctx.domain;
    BigRational x = ctx.kernel_x;
    BigRational psi3 = ((((BigRational(3) * x + BigRational(E.b2())) * x +
                          BigRational(3 * E.b4())) * x + BigRational(3 * E.b6())) * x) +
                       BigRational(E.b8());
    if (psi3 != 0)
        throw ingest::ValidationError("isogeny data invalid: kernel_x is not a root of the "
                                      "3-division polynomial");
    if (curves::conductor(ctx.domain) != curves::conductor(ctx.codomain))
        throw ingest::ValidationError("isogeny data invalid: domain and codomain conductors differ");
    return ctx;
}

namespace {

curves::WeierstrassCurve twist_or_identity(const WeierstrassCurve& E, const BigInt& d,
                                           BigInt* x_scale = nullptr) {
    if (d == 1) {
        if (x_scale) *x_scale = 1;
        return E;
    }
    auto tw = curves::quadratic_twist_with_map(E, d);
    if (x_scale) *x_scale = tw.x_scale;
    return tw.curve;
}

}  // namespace

SelmerRatio selmer_ratio_local(const IsogenyContext& iso, const BigInt& d, Place place) {
    SelmerRatio out;
    out.place = place;
    if (place.infinite) {
        BigInt scale;
        WeierstrassCurve Ed = twist_or_identity(iso.domain, d, &scale);
        BigRational kernel_x = iso.kernel_x * BigRational(scale);
        bool real_kernel =
            curves::kernel_real_points(Ed, kernel_x) == curves::KernelRealStructure::Z3;
        out.value = real_kernel ? BigRational(1, 3) : BigRational(1);
        out.ord3 = real_kernel ? -1 : 0;
        return out;
    }
    if (place.ell == 3) {
        out.candidates = {BigRational(1), BigRational(3)};
        return out;
    }
    WeierstrassCurve Ed = twist_or_identity(iso.domain, d);
    WeierstrassCurve Fd = twist_or_identity(iso.codomain, d);
    BigInt c_num = 1, c_den = 1;
    {
        WeierstrassCurve M = curves::minimal_model(Fd);
        if (M.discriminant() % place.ell == 0)
            c_num = curves::tate_algorithm(M, place.ell).tamagawa;
        M = curves::minimal_model(Ed);
        if (M.discriminant() % place.ell == 0)
            c_den = curves::tate_algorithm(M, place.ell).tamagawa;
    }
    BigRational ratio(c_num, c_den);
    out.value = ratio;
    out.ord3 = int_valuation(c_num, BigInt(3)) - int_valuation(c_den, BigInt(3));
    return out;
}

std::vector<SelmerRatio> selmer_ratios(const IsogenyContext& iso, const BigInt& d) {
    std::vector<SelmerRatio> out;
    out.push_back(selmer_ratio_local(iso, d, Place::real()));
    out.push_back(selmer_ratio_local(iso, d, Place::at(3)));
    std::vector<int64_t> places;
    for (int64_t ell : curves::bad_primes(twist_or_identity(iso.domain, d)))
        places.push_back(ell);
    for (int64_t ell : curves::bad_primes(twist_or_identity(iso.codomain, d)))
        places.push_back(ell);
    std::sort(places.begin(), places.end());
    places.erase(std::unique(places.begin(), places.end()), places.end());
    for (int64_t ell : places) {
        if (ell == 3) continue;
        out.push_back(selmer_ratio_local(iso, d, Place::at(ell)));
    }
    return out;
}

TInvariant t_invariant(const std::vector<SelmerRatio>& ratios, std::optional<int> sel3_parity) {
    TInvariant out;
    int t_known = 0;
    int ambiguous = 0;
    BigRational c(1);
    for (const auto& r : ratios) {
        if (r.ambiguous()) {
            ++ambiguous;
            continue;
        }
        t_known += *r.ord3;
        c *= *r.value;
    }
    if (ambiguous == 0) {
        out.t = t_known;
        out.c_global = c;
        return out;
    }
    if (ambiguous > 1) {
        out.note = "multiple ambiguous places; t unresolved";
        out.candidates = {t_known, t_known + ambiguous};
        return out;
    }
    // one 3-place with candidates {1, 3}
    if (!sel3_parity) {
        out.candidates = {t_known, t_known + 1};
        out.note = "c_3 ambiguous in {1, 3}; no Selmer parity available";
        return out;
    }
    int chosen = (mod_floor(BigInt(t_known), 2) == *sel3_parity) ? t_known : t_known + 1;
    if (mod_floor(BigInt(chosen), 2) != *sel3_parity) {
        out.note = "parity cannot be matched";
        out.candidates = {t_known, t_known + 1};
        return out;
    }
    out.t = chosen;
    out.c_global = chosen == t_known ? c : c * 3;
    out.note = "c_3 resolved by Selmer parity";
    return out;
}

std::optional<int> sel3_parity_from_record(const CurveRecord& record) {
    // with 3-trivial torsion, dim Sel_3 = rank + dim Sha[3]; the latter
    // vanishes when 3 does not divide the attested Sha order
    if (!record.rank || !record.sha_order) return std::nullopt;
    if (*record.sha_order % 3 == 0) return std::nullopt;
    for (int t : record.torsion)
        if (t % 3 == 0) return std::nullopt;
    return *record.rank % 2;
}

bool t0prime_membership(const BigInt& d, const IsogenyContext& iso,
                        std::optional<int> sel3_parity) {
    if (d >= 0) return false;
    if (mod_floor(d, 3) != 1) return false;
    TInvariant t = t_invariant(selmer_ratios(iso, d), sel3_parity);
    if (!t.resolved()) throw Error("t0prime_membership: t invariant unresolved (" + t.note + ")");
    return *t.t == 0;
}

json ScanReport::to_json() const {
    json j;
    json rws = json::array();
    for (const auto& row : rows) {
        json r = row.verdict.to_json();
        r["t"] = row.t ? json(*row.t) : json(nullptr);
        rws.push_back(r);
    }
    j["rows"] = rws;
    j["satisfied"] = satisfied;
    j["not_established"] = not_established;
    j["blocked_on_data"] = blocked_on_data;
    j["attempted"] = rows.size();
    j["t0_bound_estimate"] =
        t0_bound_estimate ? json(ratio_str(*t0_bound_estimate)) : json(nullptr);
    return j;
}

ScanReport scan(const CurveRecord& E_record, int64_t p, const std::vector<BigInt>& ds,
                const ingest::RecordStore& store, int jobs) {
    ScanReport report;
    report.rows.resize(ds.size(), ScanRow{BigInt(0), Verdict{}, std::nullopt});

    auto run_one = [&](size_t i) {
        const BigInt& d = ds[i];
        ScanRow row;
        row.d = d;
        WeierstrassCurve T =
            curves::minimal_model(curves::quadratic_twist(E_record.curve(), d));
        std::optional<CurveRecord> twist_record = store.find_by_curve(T);
        row.verdict = h10_check(E_record, p, d, twist_record);
        if (E_record.isogeny) {
            std::optional<int> parity =
                twist_record ? sel3_parity_from_record(*twist_record) : std::nullopt;
            TInvariant t = t_invariant(selmer_ratios(isogeny_context(E_record), d), parity);
            row.t = t.t;
        }
        report.rows[i] = std::move(row);
    };

    if (jobs <= 1) {
        for (size_t i = 0; i < ds.size(); ++i) run_one(i);
    } else {
        std::vector<std::future<void>> futures;
        std::atomic<size_t> next{0};
        for (int w = 0; w < jobs; ++w)
            futures.push_back(std::async(std::launch::async, [&]() {
                for (size_t i = next.fetch_add(1); i < ds.size(); i = next.fetch_add(1))
                    run_one(i);
            }));
        for (auto& f : futures) f.get();
    }

    int t0 = 0, t_resolved = 0;
    for (const auto& row : report.rows) {
        if (row.verdict.h10gen == H10Gen::Satisfied)
            ++report.satisfied;
        else
            ++report.not_established;
        if (std::any_of(row.verdict.hypotheses.begin(), row.verdict.hypotheses.end(),
                        [](const HypothesisStatus& h) { return !h.known(); }))
            ++report.blocked_on_data;
        if (row.t) {
            ++t_resolved;
            if (*row.t == 0) ++t0;
        }
    }
    if (t_resolved > 0)
        report.t0_bound_estimate = BigRational(t0, 2 * t_resolved);
    return report;
}

}  // namespace h10::criteria
