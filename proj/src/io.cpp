#include "qngc/io.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "qngc/errors.hpp"

namespace qngc::io {

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

cplx complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw StateError("complex value must be [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
}

json to_json(const GaussianParams& p) { return {{"xi", to_json(p.xi)}, {"alpha", to_json(p.alpha)}}; }

GaussianParams params_from_json(const json& j) {
    return {complex_from_json(j.at("xi")), complex_from_json(j.at("alpha"))};
}

json to_json(const CoherenceMeasureId& id) { return json::array({id.m, id.n}); }

CoherenceMeasureId measure_from_json(const json& j) { return {j.at(0).get<int>(), j.at(1).get<int>()}; }

json to_json(const HierarchySpec& s) {
    return {{"kind", kind_name(s.kind)}, {"order", s.order}, {"excluded", s.excluded}};
}

HierarchySpec hierarchy_from_json(const json& j) {
    return {parse_kind(j.at("kind").get<std::string>()), j.at("order").get<int>(), j.at("excluded").get<int>()};
}

json to_json(const ProbObservable& o) {
    return {{"kind", o.kind == ProbObservable::Kind::FockProb ? "fock" : "error"}, {"index", o.index}};
}

ProbObservable observable_from_json(const json& j) {
    const auto k = j.at("kind").get<std::string>();
    if (k != "fock" && k != "error") throw SpecError("unknown observable kind '" + k + "'");
    return {k == "fock" ? ProbObservable::Kind::FockProb : ProbObservable::Kind::ErrorProb,
            j.at("index").get<int>()};
}

json to_json(const SearchConfig& c) {
    return {{"starts", c.starts},
            {"screen_samples", c.screen_samples},
            {"seed", c.seed},
            {"xi_max", c.xi_max},
            {"alpha_max", c.alpha_max},
            {"phi_grid", c.phi_grid},
            {"tolerance", c.tolerance},
            {"validation_samples", c.validation_samples},
            {"dim_report", c.dim_report},
            {"strict_sweep", c.strict_sweep},
            {"complex_search", c.complex_search},
            {"threads", c.threads},
            {"max_evaluations", c.max_evaluations}};
}

SearchConfig search_config_from_json(const json& j) {
    SearchConfig c;
    c.starts = j.at("starts").get<int>();
    c.screen_samples = j.at("screen_samples").get<int>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.xi_max = j.at("xi_max").get<double>();
    c.alpha_max = j.at("alpha_max").get<double>();
    c.phi_grid = j.at("phi_grid").get<int>();
    c.tolerance = j.at("tolerance").get<double>();
    c.validation_samples = j.at("validation_samples").get<int>();
    c.dim_report = j.at("dim_report").get<int>();
    c.strict_sweep = j.at("strict_sweep").get<bool>();
    c.complex_search = j.at("complex_search").get<bool>();
    c.threads = j.value("threads", 1);
    c.max_evaluations = j.at("max_evaluations").get<int>();
    return c;
}

namespace {

json vector_json(const CVector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(to_json(v[i]));
    return a;
}

CVector vector_from_json(const json& j) {
    CVector v(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) v[i] = complex_from_json(j[i]);
    return v;
}

}  // namespace

json to_json(const ThresholdResult& r) {
    const auto& d = r.diagnostics;
    json argmax = json::array();
    for (const auto& p : d.subspace_argmax) argmax.push_back(to_json(p));
    return {{"value", r.value},
            {"params", to_json(r.params)},
            {"phi", r.phi},
            {"subspace", r.subspace},
            {"coeffs", vector_json(r.coeffs)},
            {"diagnostics",
             {{"starts", d.starts},
              {"best_start", d.best_start},
              {"top5_spread", d.top5_spread},
              {"validation_margin", d.validation_margin},
              {"validation_samples", d.validation_samples},
              {"complex_search", d.complex_search},
              {"sentinel", d.sentinel},
              {"subspaces_total", d.subspaces_total},
              {"subspaces_evaluated", d.subspaces_evaluated},
              {"evaluations", d.evaluations},
              {"subspace_values", d.subspace_values},
              {"subspace_argmax", argmax},
              {"warnings", d.warnings}}}};
}

ThresholdResult threshold_from_json(const json& j) {
    ThresholdResult r;
    r.value = j.at("value").get<double>();
    r.params = params_from_json(j.at("params"));
    r.phi = j.at("phi").get<double>();
    r.subspace = j.at("subspace").get<CoreSubspace>();
    r.coeffs = vector_from_json(j.at("coeffs"));
    const auto& d = j.at("diagnostics");
    auto& o = r.diagnostics;
    o.starts = d.at("starts").get<int>();
    o.best_start = d.at("best_start").get<int>();
    o.top5_spread = d.at("top5_spread").get<double>();
    o.validation_margin = d.at("validation_margin").get<double>();
    o.validation_samples = d.at("validation_samples").get<int>();
    o.complex_search = d.at("complex_search").get<bool>();
    o.sentinel = d.at("sentinel").get<bool>();
    o.subspaces_total = d.at("subspaces_total").get<int>();
    o.subspaces_evaluated = d.at("subspaces_evaluated").get<int>();
    o.evaluations = d.at("evaluations").get<long long>();
    o.subspace_values = d.at("subspace_values").get<std::vector<double>>();
    for (const auto& p : d.at("subspace_argmax")) o.subspace_argmax.push_back(params_from_json(p));
    o.warnings = d.at("warnings").get<std::vector<std::string>>();
    return r;
}

json to_json(const CriterionCurve& c) {
    json pts = json::array();
    for (const auto& p : c.points)
        pts.push_back({{"p", p.p}, {"c", p.c}, {"raw", p.raw}, {"lambda_index", p.lambda_index},
                       {"boundary", p.boundary}});
    return {{"measure", to_json(c.id)},
            {"hierarchy", to_json(c.hierarchy)},
            {"observable", to_json(c.observable)},
            {"lambda_grid", c.lambda_grid},
            {"f_values", c.f_values},
            {"subspace_values", c.subspace_values},
            {"points", pts},
            {"absolute", c.absolute},
            {"touching_p", c.touching_p},
            {"refinement_rounds", c.refinement_rounds},
            {"last_shift", c.last_shift},
            {"polish_rounds", c.polish_rounds},
            {"warnings", c.warnings}};
}

CriterionCurve curve_from_json(const json& j) {
    CriterionCurve c;
    c.id = measure_from_json(j.at("measure"));
    c.hierarchy = hierarchy_from_json(j.at("hierarchy"));
    c.observable = observable_from_json(j.at("observable"));
    c.lambda_grid = j.at("lambda_grid").get<std::vector<double>>();
    c.f_values = j.at("f_values").get<std::vector<double>>();
    c.subspace_values = j.at("subspace_values").get<std::vector<std::vector<double>>>();
    for (const auto& p : j.at("points")) {
        CurvePoint pt;
        pt.p = p.at("p").get<double>();
        pt.c = p.at("c").get<double>();
        pt.raw = p.at("raw").get<double>();
        pt.lambda_index = p.at("lambda_index").get<int>();
        pt.boundary = p.at("boundary").get<double>();
        c.points.push_back(pt);
    }
    c.absolute = j.at("absolute").get<double>();
    c.touching_p = j.at("touching_p").get<double>();
    c.refinement_rounds = j.at("refinement_rounds").get<int>();
    c.last_shift = j.at("last_shift").get<double>();
    c.polish_rounds = j.at("polish_rounds").get<int>();
    c.warnings = j.at("warnings").get<std::vector<std::string>>();
    return c;
}

json to_json(const CriterionSurface& s) {
    json pts = json::array();
    for (const auto& p : s.points)
        pts.push_back({{"pn", p.pn}, {"pe", p.pe}, {"c", p.c}, {"raw", p.raw}, {"lambda1_index", p.lambda1_index},
                       {"subspace", p.subspace}, {"crossing", p.crossing}, {"boundary", p.boundary}});
    return {{"measure", to_json(s.id)},
            {"hierarchy", to_json(s.hierarchy)},
            {"obs_n", to_json(s.obs_n)},
            {"obs_e", to_json(s.obs_e)},
            {"lambda1_grid", s.lambda1_grid},
            {"lambda2_grid", s.lambda2_grid},
            {"ftilde", s.ftilde},
            {"points", pts},
            {"curve_n", to_json(s.curve_n)},
            {"curve_e", to_json(s.curve_e)},
            {"warnings", s.warnings}};
}

CriterionSurface surface_from_json(const json& j) {
    CriterionSurface s;
    s.id = measure_from_json(j.at("measure"));
    s.hierarchy = hierarchy_from_json(j.at("hierarchy"));
    s.obs_n = observable_from_json(j.at("obs_n"));
    s.obs_e = observable_from_json(j.at("obs_e"));
    s.lambda1_grid = j.at("lambda1_grid").get<std::vector<double>>();
    s.lambda2_grid = j.at("lambda2_grid").get<std::vector<double>>();
    s.ftilde = j.at("ftilde").get<std::vector<std::vector<std::vector<double>>>>();
    for (const auto& p : j.at("points")) {
        SurfacePoint pt;
        pt.pn = p.at("pn").get<double>();
        pt.pe = p.at("pe").get<double>();
        pt.c = p.at("c").get<double>();
        pt.raw = p.at("raw").get<double>();
        pt.lambda1_index = p.at("lambda1_index").get<int>();
        pt.subspace = p.at("subspace").get<int>();
        pt.crossing = p.at("crossing").get<bool>();
        pt.boundary = p.at("boundary").get<double>();
        s.points.push_back(pt);
    }
    s.curve_n = curve_from_json(j.at("curve_n"));
    s.curve_e = curve_from_json(j.at("curve_e"));
    s.warnings = j.at("warnings").get<std::vector<std::string>>();
    return s;
}

json to_json(const DepthResult& d) {
    return {{"kind", depth_kind_name(d.kind)},
            {"value", d.value},
            {"threshold", d.threshold},
            {"iterations", d.iterations},
            {"bracket_width", d.bracket_width},
            {"perturbative_valid", d.perturbative_valid},
            {"coherence_at_value", d.coherence_at_value}};
}

DepthResult depth_from_json(const json& j) {
    DepthResult d;
    d.kind = j.at("kind").get<std::string>() == "loss" ? DepthKind::Loss : DepthKind::Thermal;
    d.value = j.at("value").get<double>();
    d.threshold = j.at("threshold").get<double>();
    d.iterations = j.at("iterations").get<int>();
    d.bracket_width = j.at("bracket_width").get<double>();
    d.perturbative_valid = j.at("perturbative_valid").get<bool>();
    d.coherence_at_value = j.at("coherence_at_value").get<double>();
    return d;
}

json to_json(const ConvergenceRow& r) {
    return {{"N", r.N}, {"excluded", r.excluded}, {"one_minus_T", r.one_minus_T}, {"result", to_json(r.result)}};
}

ConvergenceRow convergence_row_from_json(const json& j) {
    ConvergenceRow r;
    r.N = j.at("N").get<int>();
    r.excluded = j.at("excluded").get<int>();
    r.one_minus_T = j.at("one_minus_T").get<double>();
    r.result = threshold_from_json(j.at("result"));
    return r;
}

json to_json(const std::vector<WarmSeed>& seeds) {
    json a = json::array();
    for (const auto& s : seeds) a.push_back({{"subspace", s.subspace}, {"params", to_json(s.params)}});
    return a;
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[v & 0xF];
        v >>= 4;
    }
    return s;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::filesystem::path default_cache_dir() {
    if (const char* env = std::getenv("QNG_CACHE_DIR"); env && *env) return env;
    return ".qng-cache";
}

std::filesystem::path RecordCache::path_for(const std::string& command, const json& key) const {
    return dir_ / (command + "-" + hex64(fnv1a(key.dump())) + ".json");
}

std::optional<json> RecordCache::load(const std::string& command, const json& key) const {
    const auto p = path_for(command, key);
    std::error_code ec;
    if (!std::filesystem::exists(p, ec)) return std::nullopt;
    try {
        json rec = json::parse(read_file(p));
        if (rec.value("schema_version", 0) != kSchemaVersion) return std::nullopt;
        if (rec.at("key") != key) return std::nullopt;
        return rec.at("value");
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

void RecordCache::store(const std::string& command, const json& key, const json& value) const {
    json rec = {{"schema_version", kSchemaVersion}, {"command", command}, {"key", key}, {"value", value}};
    write_atomic(path_for(command, key), rec.dump());
}

json state_to_json(const DensityMatrix& rho) {
    json el = json::array();
    for (int i = 0; i < rho.dim(); ++i)
        for (int k = 0; k < rho.dim(); ++k) el.push_back(to_json(rho(i, k)));
    return {{"dim", rho.dim()}, {"elements", el}};
}

DensityMatrix state_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("elements"))
        throw StateError("state file needs 'dim' and 'elements'");
    const int d = j.at("dim").get<int>();
    const auto& el = j.at("elements");
    if (d < 1 || !el.is_array() || el.size() != static_cast<std::size_t>(d) * d)
        throw StateError("state file element count does not match dim");
    CMatrix m(d, d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) m(i, k) = complex_from_json(el[i * d + k]);
    return DensityMatrix(m, {1e-8, 1e-8, 1e-8});
}

DensityMatrix load_state(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw StateError(std::string("state file is not valid JSON: ") + e.what());
    }
    try {
        return state_from_json(j);
    } catch (const json::exception& e) {
        throw StateError(std::string("malformed state file: ") + e.what());
    }
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string csv_join(const std::vector<std::string>& cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out += ',';
        const std::string& c = cells[i];
        if (c.find_first_of(",\"\n") == std::string::npos) {
            out += c;
            continue;
        }
        out += '"';
        for (char ch : c) {
            if (ch == '"') out += '"';
            out += ch;
        }
        out += '"';
    }
    out += '\n';
    return out;
}

std::vector<std::vector<std::string>> csv_parse(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (quoted) {
            if (ch == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                cell += '"';
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                cell += ch;
            }
            continue;
        }
        if (ch == '"') {
            quoted = true;
            any = true;
        } else if (ch == ',') {
            cells.push_back(std::move(cell));
            cell.clear();
            any = true;
        } else if (ch == '\n') {
            if (any || !cell.empty()) {
                cells.push_back(std::move(cell));
                rows.push_back(std::move(cells));
            }
            cells.clear();
            cell.clear();
            any = false;
        } else if (ch != '\r') {
            cell += ch;
        }
    }
    if (any || !cell.empty()) {
        cells.push_back(std::move(cell));
        rows.push_back(std::move(cells));
    }
    return rows;
}

}  // namespace qngc::io
