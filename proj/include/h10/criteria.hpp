#pragma once

#include "h10/curves.hpp"
#include "h10/ingest.hpp"
#include "h10/padic.hpp"
#include "h10/quad.hpp"
#include "h10/series.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace h10::criteria {

using ingest::CurveRecord;
using padic::ProjectiveLineFp;
using quad::ImagQuadField;

enum class HypStatus { ComputedPass, ComputedFail, IngestedPass, IngestedFail, Unknown };

std::string hyp_status_name(HypStatus s);

struct HypothesisStatus {
    std::string name;
    HypStatus status;
    std::string evidence;

    bool passed() const {
        return status == HypStatus::ComputedPass || status == HypStatus::IngestedPass;
    }
    bool known() const { return status != HypStatus::Unknown; }

    nlohmann::json to_json() const;
};

enum class H10Gen { Satisfied, NotEstablished };

/// Outcome of a criterion check: per-hypothesis statuses, the H10-gen flag,
/// and the excluded line when bivariate data identifies it.
struct Verdict {
    std::string curve_label;
    int64_t p = 0;
    BigInt d;
    std::string twist_label;
    std::vector<HypothesisStatus> hypotheses;
    H10Gen h10gen = H10Gen::NotEstablished;
    std::optional<int> lambda_cyc_K;
    std::optional<ProjectiveLineFp> excluded;
    std::string excluded_note;

    nlohmann::json to_json() const;
};

enum class UnitVerdict { Unit, NonUnit, Unknown };

/// Per-factor breakdown of the truncated Euler characteristic: regulator
/// (rank-1 records), Sha order, Tamagawa product away from p, anomaly at p.
struct EulerCharResult {
    UnitVerdict verdict;
    std::vector<HypothesisStatus> factors;
};

EulerCharResult euler_char_check(const CurveRecord& record, int64_t p);

/// Theorem-A hypothesis check for (E, p, d). The twist record supplies the
/// attested corank and Sha of E^{(d)}; a missing record yields
/// not-established, never a false pass. A bivariate characteristic series,
/// when supplied, identifies the excluded line.
Verdict h10_check(const CurveRecord& E, int64_t p, const BigInt& d,
                  const std::optional<CurveRecord>& twist_record,
                  const std::optional<series::BivariateSeries>& F = std::nullopt);

/// Membership of a prime in the set S of the Kriz-Li twisting lemma.
bool kriz_li_S_test(int64_t ell, const CurveRecord& E, const ImagQuadField& K0, int64_t p);

/// Attestation/computation status of the lemma's standing hypotheses on
/// (E, K0, p); the S-set is only meaningful when these all pass.
std::vector<HypothesisStatus> kriz_li_preconditions(const CurveRecord& E,
                                                    const ImagQuadField& K0, int64_t p);

/// Ascending members of S below `bound` (exclusive).
std::vector<int64_t> kriz_li_S_primes(const CurveRecord& E, const ImagQuadField& K0, int64_t p,
                                      int64_t bound);

/// Dirichlet density of S by the Galois image of the 2-division field.
BigRational kriz_li_density(ingest::Mod2Image image, int k, bool k0_is_gaussian);

/// As above with the image and k = omega(N) taken from a record; rejects
/// reducible 2-division cubics (not covered by the formula).
BigRational kriz_li_density(const CurveRecord& E, const ImagQuadField& K0);

/// Lower bound on the density of negative fundamental twists in the
/// 3-isogeny criterion; N must be squarefree (semistability).
BigRational isogeny3_density(const BigInt& N, bool has_3_isogeny);

/// A place of Q: a finite prime or the real place.
struct Place {
    bool infinite;
    int64_t ell;

    static Place at(int64_t ell) { return {false, ell}; }
    static Place real() { return {true, 0}; }
    std::string str() const { return infinite ? "oo" : std::to_string(ell); }
};

struct SelmerRatio {
    Place place;
    std::optional<BigRational> value;       // set when determined
    std::vector<BigRational> candidates;    // both options when ambiguous (ell = 3)
    std::optional<int> ord3;

    bool ambiguous() const { return !value.has_value(); }
    nlohmann::json to_json() const;
};

struct IsogenyContext {
    curves::WeierstrassCurve domain;
    curves::WeierstrassCurve codomain;
    BigRational kernel_x;
};

IsogenyContext isogeny_context(const CurveRecord& record);

/// Local Selmer ratio of the twisted isogeny phi_d at one place.
SelmerRatio selmer_ratio_local(const IsogenyContext& iso, const BigInt& d, Place place);

/// Ratios at all places where they can differ from 1: the real place, 3, and
/// the bad primes of both twisted curves.
std::vector<SelmerRatio> selmer_ratios(const IsogenyContext& iso, const BigInt& d);

struct TInvariant {
    std::optional<int> t;
    std::optional<BigRational> c_global;
    std::vector<int> candidates;  // when unresolved
    std::string note;

    bool resolved() const { return t.has_value(); }
};

/// t(phi_d) = ord_3 c(phi_d); an ambiguous 3-place is resolved against the
/// parity of dim_F3 Sel_3 when available.
TInvariant t_invariant(const std::vector<SelmerRatio>& ratios, std::optional<int> sel3_parity);

/// Parity of dim_F3 Sel_3 derived from attested data: rank mod 2, valid when
/// the record attests 3 coprime to the Sha order and 3-trivial torsion.
std::optional<int> sel3_parity_from_record(const CurveRecord& record);

/// d in T_0'(phi): d < 0, d = 1 mod 3, t(phi_d) = 0.
bool t0prime_membership(const BigInt& d, const IsogenyContext& iso,
                        std::optional<int> sel3_parity);

struct ScanRow {
    BigInt d;
    Verdict verdict;
    std::optional<int> t;
};

struct ScanReport {
    std::vector<ScanRow> rows;
    int satisfied = 0;
    int not_established = 0;
    int blocked_on_data = 0;  // verdicts with at least one Unknown hypothesis
    std::optional<BigRational> t0_bound_estimate;  // (1/2) * observed T_0 fraction

    nlohmann::json to_json() const;
};

/// Per-d verdicts over a twist range, with summary counts. In 3-isogeny mode
/// rows also carry t(phi_d) and the report estimates the Selmer-vanishing
/// lower bound from the observed T_0 fraction.
ScanReport scan(const CurveRecord& E, int64_t p, const std::vector<BigInt>& ds,
                const ingest::RecordStore& store, int jobs = 1);

}  // namespace h10::criteria
