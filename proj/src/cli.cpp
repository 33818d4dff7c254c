#include "h10/cli.hpp"

#include "h10/criteria.hpp"
#include "h10/curves.hpp"
#include "h10/ingest.hpp"
#include "h10/padic.hpp"
#include "h10/quad.hpp"
#include "h10/series.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace h10::cli {

namespace {

using criteria::H10Gen;
using criteria::HypothesisStatus;
using criteria::Verdict;
using ingest::CurveRecord;
using ingest::RecordStore;
using nlohmann::json;

struct Config {
    int precision = 20;
    int cap = 12;
    std::string cache_dir;
    bool offline = false;
    std::string format = "table";
    int jobs = 1;

    bool json_output() const { return format == "json"; }

    RecordStore store() const {
        std::filesystem::path dir =
            cache_dir.empty() ? ingest::default_cache_dir() : std::filesystem::path(cache_dir);
        std::shared_ptr<ingest::Transport> transport;
        bool off = offline;
        if (!off) {
            if (auto base = ingest::default_base_url())
                transport = std::make_shared<ingest::HttpTransport>(*base);
            else
                off = true;  // no remote configured
        }
        return RecordStore(dir, off, transport);
    }
};

std::string rational_str(const BigRational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

std::string rational_decimal(const BigRational& r, int digits = 6) {
    BigInt scale = pow_int(BigInt(10), static_cast<unsigned>(digits));
    BigInt scaled = (numerator(r) * scale) / denominator(r);
    std::ostringstream os;
    std::string s = scaled.str();
    bool neg = !s.empty() && s[0] == '-';
    if (neg) s = s.substr(1);
    while (s.size() <= static_cast<size_t>(digits)) s.insert(s.begin(), '0');
    os << (neg ? "-" : "") << s.substr(0, s.size() - digits) << "."
       << s.substr(s.size() - digits);
    return os.str();
}

void print_verdict_table(const Verdict& v, std::ostream& out) {
    out << "check: " << v.curve_label << "  p=" << v.p << "  d=" << v.d;
    if (!v.twist_label.empty()) out << "  twist=" << v.twist_label;
    out << "\n";
    for (const auto& h : v.hypotheses)
        out << "  [" << criteria::hyp_status_name(h.status) << "] " << h.name << "  ("
            << h.evidence << ")\n";
    out << "verdict: " << (v.h10gen == H10Gen::Satisfied ? "satisfied" : "not-established")
        << "\n";
    if (v.lambda_cyc_K) out << "lambda_cyc(K) = " << *v.lambda_cyc_K << "\n";
    if (v.excluded) out << "excluded line: " << v.excluded->str() << "\n";
    if (!v.excluded_note.empty()) out << "note: " << v.excluded_note << "\n";
}

series::BivariateSeries load_bivariate(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open series file " + path);
    json j = json::parse(in, nullptr, true);
    return series::BivariateSeries::from_json(j);
}

json load_series_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open series file " + path);
    return json::parse(in);
}

bool is_bivariate_json(const json& j) {
    for (const auto& entry : j.at("coeffs")) return entry.size() == 3;
    return false;  // no nonzero coefficients: treat as univariate
}

int cmd_check(const Config& cfg, const std::string& curve, int64_t p, int64_t d,
              const std::string& twist_label, const std::string& series_file, std::ostream& out) {
    RecordStore store = cfg.store();
    CurveRecord record = store.fetch(curve);
    std::optional<CurveRecord> twist_record;
    if (!twist_label.empty()) {
        twist_record = store.fetch(twist_label);
    } else {
        auto T = curves::minimal_model(curves::quadratic_twist(record.curve(), BigInt(d)));
        twist_record = store.find_by_curve(T);
    }
    std::optional<series::BivariateSeries> F;
    if (!series_file.empty()) F = load_bivariate(series_file);

    Verdict v = criteria::h10_check(record, p, BigInt(d), twist_record, F);
    if (cfg.json_output())
        out << v.to_json().dump(2) << "\n";
    else
        print_verdict_table(v, out);
    return v.h10gen == H10Gen::Satisfied ? kExitPass : kExitNotEstablished;
}

int cmd_scan(const Config& cfg, const std::string& curve, int64_t p, int64_t d_min,
             int64_t d_max, std::ostream& out) {
    if (d_max >= 0 || d_min > d_max)
        throw Error("scan: need d_min <= d_max < 0");
    RecordStore store = cfg.store();
    CurveRecord record = store.fetch(curve);
    std::vector<BigInt> ds;
    for (int64_t d = d_max; d >= d_min; --d)
        if (is_squarefree(BigInt(d))) ds.emplace_back(d);
    criteria::ScanReport report = criteria::scan(record, p, ds, store, cfg.jobs);
    if (cfg.json_output()) {
        out << report.to_json().dump(2) << "\n";
    } else {
        for (const auto& row : report.rows) {
            out << "d=" << row.d << "  "
                << (row.verdict.h10gen == H10Gen::Satisfied ? "satisfied" : "not-established");
            if (row.t) out << "  t=" << *row.t;
            out << "\n";
        }
        out << "satisfied " << report.satisfied << "/" << report.rows.size() << ", blocked on data "
            << report.blocked_on_data << "\n";
        if (report.t0_bound_estimate)
            out << "Selmer-vanishing lower bound estimate (half of observed T_0 fraction): "
                << rational_str(*report.t0_bound_estimate) << "\n";
    }
    return kExitPass;
}

int cmd_sprimes(const Config& cfg, const std::string& curve, int64_t k0, int64_t p, int64_t bound,
                std::ostream& out, std::ostream& err) {
    RecordStore store = cfg.store();
    CurveRecord record = store.fetch(curve);
    quad::ImagQuadField K0 = quad::ImagQuadField::make(BigInt(k0));
    auto preconditions = criteria::kriz_li_preconditions(record, K0, p);
    bool ok = true;
    for (const auto& h : preconditions) ok = ok && h.passed();
    if (!ok) {
        if (cfg.json_output()) {
            json j;
            j["error"] = "preconditions not established";
            json hyps = json::array();
            for (const auto& h : preconditions) hyps.push_back(h.to_json());
            j["preconditions"] = hyps;
            out << j.dump(2) << "\n";
        } else {
            err << "sprimes: Kriz-Li preconditions not established for (" << curve << ", K0="
                << K0.str() << ", p=" << p << "):\n";
            for (const auto& h : preconditions)
                if (!h.passed())
                    err << "  [" << criteria::hyp_status_name(h.status) << "] " << h.name << " ("
                        << h.evidence << ")\n";
        }
        return kExitNotEstablished;
    }
    auto primes = criteria::kriz_li_S_primes(record, K0, p, bound);
    if (cfg.json_output()) {
        json j;
        j["curve"] = curve;
        j["k0"] = k0;
        j["p"] = p;
        j["bound"] = bound;
        j["primes"] = primes;
        out << j.dump(2) << "\n";
    } else {
        for (size_t i = 0; i < primes.size(); ++i) out << (i ? " " : "") << primes[i];
        out << "\n";
    }
    return kExitPass;
}

int cmd_density(const Config& cfg, const std::string& mode, const std::string& curve,
                int64_t k0, const std::string& image, int k_flag, bool qi, int64_t conductor_flag,
                std::ostream& out) {
    BigRational density;
    if (mode == "kriz-li") {
        if (!curve.empty()) {
            RecordStore store = cfg.store();
            CurveRecord record = store.fetch(curve);
            if (k0 == 0) throw Error("density kriz-li with --curve requires --k0");
            density = criteria::kriz_li_density(record, quad::ImagQuadField::make(BigInt(k0)));
        } else {
            ingest::Mod2Image img;
            if (image == "S3")
                img = ingest::Mod2Image::S3;
            else if (image == "Z/3" || image == "Z3")
                img = ingest::Mod2Image::Z3;
            else
                throw Error("density kriz-li: --image must be S3 or Z/3 (or pass --curve)");
            if (k_flag < 0) throw Error("density kriz-li: --k is required");
            density = criteria::kriz_li_density(img, k_flag, qi);
        }
    } else if (mode == "isogeny3") {
        BigInt N;
        if (conductor_flag > 0) {
            N = conductor_flag;
        } else if (!curve.empty()) {
            RecordStore store = cfg.store();
            CurveRecord record = store.fetch(curve);
            if (!record.isogeny || record.isogeny->degree != 3)
                throw Error("density isogeny3: record does not attest a 3-isogeny");
            N = record.conductor;
        } else {
            throw Error("density isogeny3: pass --conductor or --curve");
        }
        density = criteria::isogeny3_density(N, true);
    } else {
        throw Error("density: mode must be kriz-li or isogeny3");
    }
    if (cfg.json_output()) {
        json j;
        j["mode"] = mode;
        j["density"] = rational_str(density);
        j["decimal"] = rational_decimal(density);
        out << j.dump(2) << "\n";
    } else {
        out << rational_str(density) << " ~ " << rational_decimal(density) << "\n";
    }
    return kExitPass;
}

void emit_univariate(const Config& cfg, const series::UnivariateSeries& s, std::ostream& out) {
    if (cfg.json_output())
        out << s.to_json().dump(2) << "\n";
    else
        out << s.str() << "\n";
}

int cmd_series(const Config& cfg, const std::string& sub, int64_t a, int64_t b, int64_t p,
               const std::string& file, std::ostream& out) {
    if (sub == "line") {
        auto f = series::line_series_exact(p, cfg.precision, cfg.cap, BigInt(a), BigInt(b));
        if (cfg.json_output())
            out << f.to_json().dump(2) << "\n";
        else
            out << f.str() << "\n";
        return kExitPass;
    }
    if (sub == "solve") {
        auto g = series::implicit_solve_exact(p, cfg.precision, cfg.cap, BigInt(a), BigInt(b));
        emit_univariate(cfg, g, out);
        return kExitPass;
    }
    if (sub == "specialize") {
        auto F = load_bivariate(file);
        int guard = series::binomial_guard_digits(F.prime(), F.cap());
        padic::PadicNumber pa(F.prime(), F.precision() + guard, BigInt(a));
        padic::PadicNumber pb(F.prime(), F.precision() + guard, BigInt(b));
        auto h = series::specialize_line(F, pa, pb);
        emit_univariate(cfg, h, out);
        return kExitPass;
    }
    if (sub == "invariants") {
        json j = load_series_json(file);
        series::UnivariateSeries h = [&]() {
            if (is_bivariate_json(j)) {
                auto F = series::BivariateSeries::from_json(j);
                int guard = series::binomial_guard_digits(F.prime(), F.cap());
                padic::PadicNumber pa(F.prime(), F.precision() + guard, BigInt(a));
                padic::PadicNumber pb(F.prime(), F.precision() + guard, BigInt(b));
                return series::specialize_line(F, pa, pb);
            }
            return series::UnivariateSeries::from_json(j);
        }();
        auto inv = series::mu_lambda(h);
        if (cfg.json_output()) {
            json r{{"mu", inv.mu}, {"lambda", inv.lambda}, {"certified", inv.certified},
                   {"precision", h.precision()}};
            out << r.dump(2) << "\n";
        } else {
            out << "mu = " << inv.mu << ", lambda = " << inv.lambda
                << (inv.certified ? "" : "  [UNCERTIFIED at this precision/cap]") << "\n";
        }
        return kExitPass;
    }
    if (sub == "excluded") {
        auto F = load_bivariate(file);
        auto line = series::excluded_line(F);
        if (cfg.json_output()) {
            json r{{"excluded_line", line.str()}};
            out << r.dump(2) << "\n";
        } else {
            out << line.str() << "\n";
        }
        return kExitPass;
    }
    throw Error("series: unknown subcommand " + sub);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Iwasawa-theoretic Hilbert-tenth-problem criteria for Z_p-extensions "
                 "of imaginary quadratic fields"};
    app.require_subcommand(1);

    Config cfg;
    app.add_option("--precision", cfg.precision, "p-adic working precision (digits)")
        ->capture_default_str();
    app.add_option("--cap", cfg.cap, "series degree cap")->capture_default_str();
    app.add_option("--cache-dir", cfg.cache_dir, "record cache directory (env H10_CACHE_DIR)");
    app.add_flag("--offline", cfg.offline, "never touch the network");
    app.add_option("--format", cfg.format, "output format: table or json")
        ->check(CLI::IsMember({"table", "json"}))
        ->capture_default_str();
    app.add_option("--jobs", cfg.jobs, "parallel workers for scans")->capture_default_str();

    std::string curve, twist_label, series_file, image, mode;
    int64_t p = 0, d = 0, k0 = 0, bound = 0, d_min = 0, d_max = -1, conductor_flag = 0;
    int64_t series_a = 0, series_b = 0;
    int k_flag = -1;
    bool qi = false;

    auto* check = app.add_subcommand("check", "verify the Theorem-A hypotheses for (E, p, d)");
    check->add_option("--curve", curve, "curve label")->required();
    check->add_option("--p", p, "odd prime")->required();
    check->add_option("--d", d, "negative squarefree twist")->required();
    check->add_option("--twist-curve", twist_label, "label of the twist record");
    check->add_option("--series", series_file, "bivariate characteristic series JSON");

    auto* scan = app.add_subcommand("scan", "run check over a range of twists");
    scan->add_option("--curve", curve, "curve label")->required();
    scan->add_option("--p", p, "odd prime")->required();
    scan->add_option("--d-min", d_min, "most negative d")->required();
    scan->add_option("--d-max", d_max, "least negative d")->capture_default_str();

    auto* sprimes = app.add_subcommand("sprimes", "list the Kriz-Li S-primes below a bound "
                                                  "(exclusive)");
    sprimes->add_option("--curve", curve, "curve label")->required();
    sprimes->add_option("--k0", k0, "squarefree d of the auxiliary field K0")->required();
    sprimes->add_option("--p", p, "odd prime")->required();
    sprimes->add_option("--bound", bound, "exclusive upper bound")->required();

    auto* density = app.add_subcommand("density", "evaluate the twist-density formulas");
    density->add_option("--mode", mode, "kriz-li or isogeny3")->required();
    density->add_option("--curve", curve, "curve label");
    density->add_option("--k0", k0, "squarefree d of K0 (kriz-li with --curve)");
    density->add_option("--image", image, "Galois image of the 2-division field: S3 or Z/3");
    density->add_option("--k", k_flag, "number of distinct primes dividing N");
    density->add_flag("--qi", qi, "K0 = Q(i)");
    density->add_option("--conductor", conductor_flag, "conductor N (isogeny3)");

    auto* ser = app.add_subcommand("series", "power-series utilities");
    ser->require_subcommand(1);
    std::vector<std::pair<std::string, CLI::App*>> series_subs;
    for (const char* name : {"line", "solve", "specialize", "invariants", "excluded"}) {
        auto* sub = ser->add_subcommand(name);
        sub->add_option("--a", series_a, "a-coordinate of the line");
        sub->add_option("--b", series_b, "b-coordinate of the line");
        sub->add_option("--p", p, "odd prime");
        sub->add_option("--F", series_file, "series JSON file");
        series_subs.emplace_back(name, sub);
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return kExitPass;
        }
        err << "argument error: " << e.what() << "\n";
        return kExitError;
    }

    try {
        if (check->parsed()) return cmd_check(cfg, curve, p, d, twist_label, series_file, out);
        if (scan->parsed()) return cmd_scan(cfg, curve, p, d_min, d_max, out);
        if (sprimes->parsed()) return cmd_sprimes(cfg, curve, k0, p, bound, out, err);
        if (density->parsed())
            return cmd_density(cfg, mode, curve, k0, image, k_flag, qi, conductor_flag, out);
        if (ser->parsed())
            for (const auto& [name, sub] : series_subs)
                if (sub->parsed()) return cmd_series(cfg, name, series_a, series_b, p,
                                                     series_file, out);
        err << "no subcommand\n";
        return kExitError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitError;
    }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, out, err);
}

}  // namespace h10::cli
