#include "h10/ingest.hpp"

#include <httplib.h>

#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace h10::ingest {

using curves::WeierstrassCurve;
using nlohmann::json;

curves::WeierstrassCurve IsogenyData::codomain() const {
    return {codomain_ainvs[0], codomain_ainvs[1], codomain_ainvs[2], codomain_ainvs[3],
            codomain_ainvs[4]};
}

curves::WeierstrassCurve CurveRecord::curve() const {
    return {ainvs[0], ainvs[1], ainvs[2], ainvs[3], ainvs[4]};
}

namespace {

BigInt bigint_from_json(const json& v) {
    if (v.is_string()) return BigInt(v.get<std::string>());
    if (v.is_number_integer()) return BigInt(v.get<int64_t>());
    throw Error("record JSON: expected integer or decimal string");
}

json bigint_to_json(const BigInt& n) {
    if (n >= std::numeric_limits<int64_t>::min() && n <= std::numeric_limits<int64_t>::max())
        return static_cast<int64_t>(n);
    return n.str();
}

BigRational rational_from_json(const json& v) {
    if (v.is_number_integer()) return BigRational(v.get<int64_t>());
    if (v.is_string()) {
        std::string s = v.get<std::string>();
        auto slash = s.find('/');
        if (slash == std::string::npos) return BigRational(BigInt(s));
        return BigRational(BigInt(s.substr(0, slash)), BigInt(s.substr(slash + 1)));
    }
    throw Error("record JSON: expected rational as integer or \"num/den\"");
}

std::string rational_to_string(const BigRational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

template <typename T, typename Reader>
std::map<int64_t, T> int_keyed_map(const json& j, Reader read) {
    std::map<int64_t, T> out;
    for (const auto& [key, value] : j.items()) out[std::stoll(key)] = read(value);
    return out;
}

}  // namespace

json CurveRecord::to_json() const {
    json j;
    j["schema"] = schema;
    j["label"] = label;
    json a = json::array();
    for (const auto& ai : ainvs) a.push_back(bigint_to_json(ai));
    j["ainvs"] = a;
    j["conductor"] = bigint_to_json(conductor);
    j["rank"] = rank ? json(*rank) : json(nullptr);
    json sc = json::object();
    for (const auto& [p, c] : selmer_corank) sc[std::to_string(p)] = c;
    j["selmer_corank"] = sc;
    json ru = json::object();
    for (const auto& [p, u] : regulator_unit) ru[std::to_string(p)] = u;
    j["regulator_unit"] = ru;
    j["sha_order"] = sha_order ? json(bigint_to_json(*sha_order)) : json(nullptr);
    j["torsion"] = torsion;
    json tam = json::object();
    for (const auto& [p, c] : tamagawa) tam[std::to_string(p)] = c;
    j["tamagawa"] = tam;
    if (isogeny) {
        json iso;
        iso["degree"] = isogeny->degree;
        iso["kernel_x"] = rational_to_string(isogeny->kernel_x);
        json ca = json::array();
        for (const auto& ai : isogeny->codomain_ainvs) ca.push_back(bigint_to_json(ai));
        iso["codomain_ainvs"] = ca;
        j["isogeny"] = iso;
    } else {
        j["isogeny"] = nullptr;
    }
    j["heegner_flag"] = heegner_flag ? json(*heegner_flag) : json(nullptr);
    j["mod2_image"] =
        mod2_image ? json(*mod2_image == Mod2Image::Z3 ? "Z/3" : "S3") : json(nullptr);
    return j;
}

CurveRecord CurveRecord::from_json(const json& j) {
    CurveRecord r;
    r.schema = j.at("schema").get<int>();
    if (r.schema != kSchemaVersion)
        throw Error("record schema version " + std::to_string(r.schema) + " not supported");
    r.label = j.at("label").get<std::string>();
    const auto& a = j.at("ainvs");
    if (!a.is_array() || a.size() != 5) throw Error("record JSON: ainvs must have 5 entries");
    for (size_t i = 0; i < 5; ++i) r.ainvs[i] = bigint_from_json(a[i]);
    r.conductor = bigint_from_json(j.at("conductor"));
    if (j.contains("rank") && !j["rank"].is_null()) r.rank = j["rank"].get<int>();
    if (j.contains("selmer_corank"))
        r.selmer_corank = int_keyed_map<int>(j["selmer_corank"],
                                             [](const json& v) { return v.get<int>(); });
    if (j.contains("regulator_unit"))
        r.regulator_unit = int_keyed_map<bool>(j["regulator_unit"],
                                               [](const json& v) { return v.get<bool>(); });
    if (j.contains("sha_order") && !j["sha_order"].is_null())
        r.sha_order = bigint_from_json(j["sha_order"]);
    if (j.contains("torsion")) r.torsion = j["torsion"].get<std::vector<int>>();
    if (j.contains("tamagawa"))
        r.tamagawa = int_keyed_map<int64_t>(j["tamagawa"],
                                            [](const json& v) { return v.get<int64_t>(); });
    if (j.contains("isogeny") && !j["isogeny"].is_null()) {
        IsogenyData iso;
        iso.degree = j["isogeny"].at("degree").get<int>();
        iso.kernel_x = rational_from_json(j["isogeny"].at("kernel_x"));
        const auto& ca = j["isogeny"].at("codomain_ainvs");
        if (!ca.is_array() || ca.size() != 5)
            throw Error("record JSON: codomain_ainvs must have 5 entries");
        for (size_t i = 0; i < 5; ++i) iso.codomain_ainvs[i] = bigint_from_json(ca[i]);
        r.isogeny = iso;
    }
    if (j.contains("heegner_flag") && !j["heegner_flag"].is_null())
        r.heegner_flag = j["heegner_flag"].get<bool>();
    if (j.contains("mod2_image") && !j["mod2_image"].is_null()) {
        std::string img = j["mod2_image"].get<std::string>();
        if (img == "Z/3" || img == "Z3")
            r.mod2_image = Mod2Image::Z3;
        else if (img == "S3")
            r.mod2_image = Mod2Image::S3;
        else
            throw Error("record JSON: mod2_image must be \"Z/3\" or \"S3\"");
    }
    return r;
}

CurveRecord parse_record(const std::string& payload) {
    json j;
    try {
        j = json::parse(payload);
    } catch (const json::exception& e) {
        throw Error(std::string("record parse error: ") + e.what());
    }
    return CurveRecord::from_json(j);
}

void validate_record(const CurveRecord& record) {
    WeierstrassCurve E = record.curve();
    BigInt computed = curves::conductor(E);
    if (computed != record.conductor)
        throw ValidationError("record " + record.label + ": conductor mismatch, computed " +
                              computed.str() + " but record claims " + record.conductor.str());
    if (record.tamagawa.empty()) return;
    WeierstrassCurve M = curves::minimal_model(E);
    for (const auto& [ell, claimed] : record.tamagawa) {
        int64_t computed_c = curves::tate_algorithm(M, ell).tamagawa;
        if (computed_c != claimed)
            throw ValidationError("record " + record.label + ": Tamagawa mismatch at " +
                                  std::to_string(ell) + ", computed " +
                                  std::to_string(computed_c) + " but record claims " +
                                  std::to_string(claimed));
    }
}

CurveRecord load_record(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error("cannot open record file " + file.string());
    std::stringstream buffer;
    buffer << in.rdbuf();
    CurveRecord r = parse_record(buffer.str());
    validate_record(r);
    return r;
}

void save_record(const CurveRecord& record, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw Error("cannot write record file " + file.string());
    out << record.to_json().dump(2) << "\n";
}

HttpTransport::HttpTransport(std::string base_url, int timeout_seconds)
    : base_url_(std::move(base_url)), timeout_seconds_(timeout_seconds) {}

std::string HttpTransport::get(const std::string& label) {
    auto slash = base_url_.find('/', base_url_.find("//") + 2);
    std::string host = slash == std::string::npos ? base_url_ : base_url_.substr(0, slash);
    std::string prefix = slash == std::string::npos ? "" : base_url_.substr(slash);
    httplib::Client client(host);
    client.set_connection_timeout(timeout_seconds_);
    client.set_read_timeout(timeout_seconds_);
    auto res = client.Get(prefix + "/" + label + ".json");
    if (!res) throw Error("transport: request failed for label " + label);
    if (res->status != 200)
        throw Error("transport: HTTP " + std::to_string(res->status) + " for label " + label);
    return res->body;
}

RecordStore::RecordStore(std::filesystem::path cache_dir, bool offline,
                         std::shared_ptr<Transport> transport)
    : cache_dir_(std::move(cache_dir)), offline_(offline), transport_(std::move(transport)) {}

std::filesystem::path RecordStore::path_for(const std::string& label) const {
    return cache_dir_ / (label + ".json");
}

std::optional<CurveRecord> RecordStore::find_local(const std::string& label) const {
    auto file = path_for(label);
    if (!std::filesystem::exists(file)) return std::nullopt;
    try {
        return load_record(file);
    } catch (const Error&) {
        return std::nullopt;  // wrong schema or corrupt entry: treat as a miss
    }
}

CurveRecord RecordStore::fetch(const std::string& label) {
    if (auto cached = find_local(label)) return *cached;
    if (offline_ || !transport_)
        throw Error("record " + label + " not in cache and store is offline");
    std::string payload = transport_->get(label);
    CurveRecord record = parse_record(payload);  // normalization; cache untouched on failure
    validate_record(record);
    std::filesystem::create_directories(cache_dir_);
    save_record(record, path_for(label));
    return record;
}

std::optional<CurveRecord> RecordStore::find_by_curve(const WeierstrassCurve& minimal) const {
    if (!std::filesystem::exists(cache_dir_)) return std::nullopt;
    for (const auto& entry : std::filesystem::directory_iterator(cache_dir_)) {
        if (entry.path().extension() != ".json") continue;
        CurveRecord record;
        try {
            record = load_record(entry.path());
        } catch (const Error&) {
            continue;
        }
        if (curves::minimal_model(record.curve()) == minimal) return record;
    }
    return std::nullopt;
}

std::filesystem::path default_cache_dir() {
    if (const char* env = std::getenv("H10_CACHE_DIR")) return env;
    return "fixtures";
}

std::optional<std::string> default_base_url() {
    if (const char* env = std::getenv("H10_BASE_URL")) return env;
    return std::nullopt;
}

}  // namespace h10::ingest
