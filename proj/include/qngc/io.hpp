#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qngc/decoherence.hpp"
#include "qngc/thresholds.hpp"

namespace qngc::io {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

json to_json(cplx z);
cplx complex_from_json(const json& j);

json to_json(const GaussianParams& p);
GaussianParams params_from_json(const json& j);

json to_json(const CoherenceMeasureId& id);
CoherenceMeasureId measure_from_json(const json& j);

json to_json(const HierarchySpec& s);
HierarchySpec hierarchy_from_json(const json& j);

json to_json(const ProbObservable& o);
ProbObservable observable_from_json(const json& j);

json to_json(const SearchConfig& c);
SearchConfig search_config_from_json(const json& j);

json to_json(const ThresholdResult& r);
ThresholdResult threshold_from_json(const json& j);

json to_json(const CriterionCurve& c);
CriterionCurve curve_from_json(const json& j);

json to_json(const CriterionSurface& s);
CriterionSurface surface_from_json(const json& j);

json to_json(const DepthResult& d);
DepthResult depth_from_json(const json& j);

json to_json(const ConvergenceRow& r);
ConvergenceRow convergence_row_from_json(const json& j);

json to_json(const std::vector<WarmSeed>& seeds);

// 64-bit FNV-1a over the bytes of s.
std::uint64_t fnv1a(const std::string& s);
std::string hex64(std::uint64_t v);

// Writes through a temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

// QNG_CACHE_DIR if set, else ".qng-cache".
std::filesystem::path default_cache_dir();

// One record file per (command, key hash) under dir.
class RecordCache {
public:
    explicit RecordCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

    std::filesystem::path path_for(const std::string& command, const json& key) const;
    std::optional<json> load(const std::string& command, const json& key) const;
    void store(const std::string& command, const json& key, const json& value) const;

private:
    std::filesystem::path dir_;
};

// State file: {"dim": d, "elements": [[re, im], ...]} in row-major order,
// validated with tolerance 1e-8.
DensityMatrix load_state(const std::filesystem::path& path);
json state_to_json(const DensityMatrix& rho);
DensityMatrix state_from_json(const json& j);

// Shortest text that round-trips the double.
std::string format_double(double v);

// CSV rendering: the first line names the columns.
std::string csv_join(const std::vector<std::string>& cells);
std::vector<std::vector<std::string>> csv_parse(const std::string& text);

}  // namespace qngc::io
