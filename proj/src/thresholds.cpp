#include "qngc/thresholds.hpp"

#include <algorithm>
#include <cmath>

#include "qngc/errors.hpp"
#include "qngc/io.hpp"

namespace qngc {

std::optional<ThresholdResult> ThresholdCache::get(const std::string& key) const {
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = memory_.find(key);
        if (it != memory_.end()) return it->second;
    }
    if (dir_.empty()) return std::nullopt;
    const io::RecordCache disk(dir_);
    auto rec = disk.load("threshold", io::json::parse(key));
    if (!rec) return std::nullopt;
    ThresholdResult r = io::threshold_from_json(*rec);
    std::lock_guard<std::mutex> lk(mu_);
    memory_.emplace(key, r);
    return r;
}

void ThresholdCache::put(const std::string& key, const ThresholdResult& result) {
    {
        std::lock_guard<std::mutex> lk(mu_);
        memory_[key] = result;
    }
    if (dir_.empty()) return;
    std::lock_guard<std::mutex> lk(mu_);
    io::RecordCache(dir_).store("threshold", io::json::parse(key), io::to_json(result));
}

std::size_t ThresholdCache::memory_size() const {
    std::lock_guard<std::mutex> lk(mu_);
    return memory_.size();
}

std::string threshold_key(const CoherenceMeasureId& id, const HierarchySpec& spec,
                          const SearchConfig& cfg, const std::vector<WarmSeed>& warm) {
    io::json c = io::to_json(cfg);
    c.erase("threads");
    io::json k = {{"measure", io::to_json(id)}, {"hierarchy", io::to_json(spec)}, {"config", c},
                  {"warm", io::to_json(warm)}};
    return k.dump();
}

namespace {

ThresholdResult sentinel_result(const CoherenceMeasureId& id, const HierarchySpec& spec, int dim_report) {
    const CoreFamily fam = core_subspaces(spec, id, dim_report);
    ThresholdResult r;
    r.value = 1.0;
    for (const auto& sub : fam.subspaces) {
        if (std::find(sub.begin(), sub.end(), id.m) != sub.end() &&
            std::find(sub.begin(), sub.end(), id.n) != sub.end()) {
            r.subspace = sub;
            break;
        }
    }
    r.coeffs = CVector::Zero(r.subspace.size());
    for (std::size_t i = 0; i < r.subspace.size(); ++i)
        if (r.subspace[i] == id.m || r.subspace[i] == id.n) r.coeffs[i] = 1.0 / std::sqrt(2.0);
    r.diagnostics.sentinel = true;
    r.diagnostics.subspaces_total = static_cast<int>(fam.subspaces.size());
    r.diagnostics.warnings = fam.warnings;
    return r;
}

}  // namespace

ThresholdResult absolute_threshold(const CoherenceMeasureId& id, const HierarchySpec& spec,
                                   const SearchConfig& cfg, ThresholdCache* cache,
                                   const std::vector<WarmSeed>& warm) {
    cfg.validate();
    id.check(cfg.dim_report);
    if (!beatable(spec, id)) return sentinel_result(id, spec, cfg.dim_report);
    const std::string key = threshold_key(id, spec, cfg, warm);
    if (cache) {
        if (auto hit = cache->get(key)) return *hit;
    }
    OuterOptions opt;
    opt.warm = warm;
    ThresholdResult r = outer_maximize(ObjectiveSpec(id), spec, cfg, opt);
    if (cache) cache->put(key, r);
    return r;
}

std::vector<TableRow> threshold_table(const CoherenceMeasureId& id, HierarchyKind kind,
                                      const std::vector<int>& orders, const SearchConfig& cfg,
                                      ThresholdCache* cache) {
    if (orders.empty()) throw SpecError("threshold table needs at least one order");
    std::vector<TableRow> rows;
    std::vector<WarmSeed> warm;
    double prev = 0.0;
    for (int k : orders) {
        HierarchySpec spec{kind, k, 0};
        if (kind != HierarchyKind::NHierarchy && kind != HierarchyKind::LHierarchy) spec.order = 1;
        TableRow row{k, absolute_threshold(id, spec, cfg, cache, warm)};
        if (row.result.value < prev - cfg.tolerance)
            row.result.diagnostics.warnings.push_back("threshold below the previous order");
        prev = std::max(prev, row.result.value);
        if (!row.result.diagnostics.sentinel) warm = {WarmSeed{row.result.subspace, row.result.params}};
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<ConvergenceRow> convergence_study(const CoherenceMeasureId& id,
                                              const std::vector<int>& N_range, int excluded,
                                              const SearchConfig& cfg, ThresholdCache* cache) {
    if (excluded != id.m && excluded != id.n) throw SpecError("excluded index must be m or n");
    if (N_range.empty()) throw SpecError("N range is empty");
    if (*std::max_element(N_range.begin(), N_range.end()) >= cfg.dim_report)
        throw SpecError("largest N must be below dim_report");
    std::vector<ConvergenceRow> rows;
    std::vector<WarmSeed> warm;
    for (int N : N_range) {
        ConvergenceRow row;
        row.N = N;
        row.excluded = excluded;
        row.result = absolute_threshold(id, HierarchySpec::missing_one(N, excluded), cfg, cache, warm);
        row.one_minus_T = 1.0 - row.result.value;
        warm = {WarmSeed{row.result.subspace, row.result.params}};
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<double> default_lambda_grid(int per_sign, double lo, double hi) {
    if (per_sign < 1 || !(lo > 0.0) || !(hi > lo)) throw SpecError("invalid lambda grid parameters");
    std::vector<double> g;
    for (int i = 0; i < per_sign; ++i) {
        const double t = per_sign == 1 ? 0.0 : static_cast<double>(i) / (per_sign - 1);
        const double v = lo * std::pow(hi / lo, t);
        g.push_back(v);
        g.push_back(-v);
    }
    g.push_back(0.0);
    std::sort(g.begin(), g.end());
    return g;
}

std::vector<double> linear_grid(double lo, double hi, int count) {
    if (count < 1) throw SpecError("grid needs at least one point");
    std::vector<double> g(count);
    for (int i = 0; i < count; ++i) g[i] = count == 1 ? lo : lo + (hi - lo) * i / (count - 1);
    return g;
}

}  // namespace qngc
