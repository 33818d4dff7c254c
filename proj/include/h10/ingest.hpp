#pragma once

#include "h10/bigint.hpp"
#include "h10/curves.hpp"

#include <json.hpp>

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace h10::ingest {

inline constexpr int kSchemaVersion = 1;

struct ValidationError : Error {
    using Error::Error;
};

enum class Mod2Image { Z3, S3 };

struct IsogenyData {
    int degree;
    BigRational kernel_x;
    std::array<BigInt, 5> codomain_ainvs;

    curves::WeierstrassCurve codomain() const;
};

/// Attested curve data. Fields the artifact cannot compute (ranks, Selmer
/// coranks, regulator flags, Sha, the Heegner condition) are stored as given
/// and never synthesized; absence is representable.
struct CurveRecord {
    int schema = kSchemaVersion;
    std::string label;
    std::array<BigInt, 5> ainvs{};
    BigInt conductor;

    std::optional<int> rank;
    std::map<int64_t, int> selmer_corank;
    std::map<int64_t, bool> regulator_unit;
    std::optional<BigInt> sha_order;
    std::vector<int> torsion;  // invariant factors of the torsion subgroup
    std::map<int64_t, int64_t> tamagawa;  // cross-check only
    std::optional<IsogenyData> isogeny;
    std::optional<bool> heegner_flag;
    std::optional<Mod2Image> mod2_image;

    curves::WeierstrassCurve curve() const;

    nlohmann::json to_json() const;
    static CurveRecord from_json(const nlohmann::json& j);
};

/// Parse a record;  no validation.
CurveRecord parse_record(const std::string& payload);

/// Conductor and Tamagawa cross-checks against the computed local data.
void validate_record(const CurveRecord& record);

/// Load and validate a record from a JSON file.
CurveRecord load_record(const std::filesystem::path& file);

void save_record(const CurveRecord& record, const std::filesystem::path& file);

/// Remote source of record payloads; exactly one method so tests can
/// substitute a canned transport.
class Transport {
public:
    virtual ~Transport() = default;
    virtual std::string get(const std::string& label) = 0;
};

/// HTTP transport fetching <base_url>/<label>.json.
class HttpTransport : public Transport {
public:
    HttpTransport(std::string base_url, int timeout_seconds = 10);
    std::string get(const std::string& label) override;

private:
    std::string base_url_;
    int timeout_seconds_;
};

/// Label-keyed record store: an on-disk cache in front of an optional
/// transport. Cache entries from another schema version are treated as misses.
class RecordStore {
public:
    RecordStore(std::filesystem::path cache_dir, bool offline = true,
                std::shared_ptr<Transport> transport = nullptr);

    const std::filesystem::path& cache_dir() const { return cache_dir_; }

    /// Cache hit short-circuits the network; a network failure falls back to
    /// the cache and only then reports an offline error.
    CurveRecord fetch(const std::string& label);

    std::optional<CurveRecord> find_local(const std::string& label) const;

    /// Scan the cache for a record whose minimal model matches.
    std::optional<CurveRecord> find_by_curve(const curves::WeierstrassCurve& minimal) const;

    std::filesystem::path path_for(const std::string& label) const;

private:
    std::filesystem::path cache_dir_;
    bool offline_;
    std::shared_ptr<Transport> transport_;
};

/// Cache dir from H10_CACHE_DIR, falling back to ./fixtures.
std::filesystem::path default_cache_dir();

/// Base URL from H10_BASE_URL if set.
std::optional<std::string> default_base_url();

}  // namespace h10::ingest
