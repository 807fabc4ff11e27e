#include "qngc/cli.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "qngc/decoherence.hpp"
#include "qngc/errors.hpp"
#include "qngc/io.hpp"
#include "qngc/thresholds.hpp"

namespace qngc {

namespace {

using io::json;

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(cur);
    return out;
}

double to_double(const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw SpecError("not a number: '" + s + "'");
    }
    if (pos != s.size()) throw SpecError("not a number: '" + s + "'");
    return v;
}

int to_int(const std::string& s) {
    std::size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(s, &pos);
    } catch (const std::exception&) {
        throw SpecError("not an integer: '" + s + "'");
    }
    if (pos != s.size()) throw SpecError("not an integer: '" + s + "'");
    return v;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
    const auto parts = split(spec, ':');
    if (parts.size() == 4 && parts[0] == "log")
        return default_lambda_grid(to_int(parts[3]), to_double(parts[1]), to_double(parts[2]));
    if (parts.size() == 4 && parts[0] == "lin")
        return linear_grid(to_double(parts[1]), to_double(parts[2]), to_int(parts[3]));
    std::vector<double> out;
    for (const auto& p : split(spec, ',')) out.push_back(to_double(p));
    if (out.empty()) throw SpecError("empty grid '" + spec + "'");
    return out;
}

std::vector<int> parse_orders(const std::string& spec) {
    std::vector<int> out;
    const auto dots = spec.find("..");
    if (dots != std::string::npos) {
        const int a = to_int(spec.substr(0, dots)), b = to_int(spec.substr(dots + 2));
        if (b < a) throw SpecError("empty order range '" + spec + "'");
        for (int k = a; k <= b; ++k) out.push_back(k);
    } else {
        for (const auto& p : split(spec, ',')) out.push_back(to_int(p));
    }
    if (out.empty()) throw SpecError("no orders in '" + spec + "'");
    for (int k : out)
        if (k < 1) throw SpecError("orders must be positive");
    return out;
}

namespace {

struct Common {
    std::string measure;
    int dim = 40;
    int starts = 8;
    std::uint64_t seed = SearchConfig{}.seed;
    int threads = 1;
    int validation = 2000;
    double xi_max = 1.0;
    double alpha_max = 3.0;
    bool strict = false;
    std::string out;
    std::string format = "json";
    std::string cache_dir;
    bool no_cache = false;
    std::string save_config;

    SearchConfig search() const {
        SearchConfig c;
        c.dim_report = dim;
        c.starts = starts;
        c.seed = seed;
        c.threads = threads;
        c.validation_samples = validation;
        c.xi_max = xi_max;
        c.alpha_max = alpha_max;
        c.strict_sweep = strict;
        c.validate();
        return c;
    }

    CoherenceMeasureId id() const {
        const auto p = split(measure, ',');
        if (p.size() != 2) throw SpecError("--measure expects m,n");
        return {to_int(p[0]), to_int(p[1])};
    }
};

void add_common(CLI::App* sc, Common& c) {
    sc->add_option("--measure", c.measure, "Coherence indices m,n")->required();
    sc->add_option("--dim", c.dim, "Reporting Fock dimension");
    sc->add_option("--starts", c.starts, "Local searches per core subspace");
    sc->add_option("--seed", c.seed, "Random seed");
    sc->add_option("--threads", c.threads, "Worker threads");
    sc->add_option("--validation-samples", c.validation, "Complex-parameter validation draws");
    sc->add_option("--xi-max", c.xi_max, "Squeezing bound");
    sc->add_option("--alpha-max", c.alpha_max, "Displacement bound");
    sc->add_flag("--strict-sweep", c.strict, "Evaluate every core subspace");
    sc->add_option("--out", c.out, "Output path (default stdout)");
    sc->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sc->add_option("--cache-dir", c.cache_dir, "Cache directory");
    sc->add_flag("--no-cache", c.no_cache, "Disable the result cache");
    sc->add_option("--save-config", c.save_config, "Write a run-config snapshot");
}

json config_json(const SearchConfig& cfg) {
    json c = io::to_json(cfg);
    c.erase("threads");
    return c;
}

std::string cell(double v) { return io::format_double(v); }

std::string subspace_cell(const json& s) {
    std::string out;
    for (const auto& i : s) {
        if (!out.empty()) out += ' ';
        out += std::to_string(i.get<int>());
    }
    return out;
}

std::string render_csv(const json& a) {
    std::string out;
    const std::string kind = a.at("artifact");
    if (kind == "threshold_table") {
        out = io::csv_join({"order", "value", "sentinel", "xi_re", "xi_im", "alpha_re", "alpha_im", "phi",
                            "subspace", "validation_margin"});
        for (const auto& row : a.at("rows")) {
            const auto& r = row.at("result");
            const auto& p = r.at("params");
            out += io::csv_join({std::to_string(row.at("order").get<int>()), cell(r.at("value")),
                                 r.at("diagnostics").at("sentinel").get<bool>() ? "1" : "0",
                                 cell(p.at("xi")[0]), cell(p.at("xi")[1]), cell(p.at("alpha")[0]),
                                 cell(p.at("alpha")[1]), cell(r.at("phi")), subspace_cell(r.at("subspace")),
                                 cell(r.at("diagnostics").at("validation_margin"))});
        }
    } else if (kind == "criterion_curve") {
        out = io::csv_join({"p", "c_threshold", "physical_boundary", "physical_exact", "absolute_threshold"});
        const auto& c = a.at("curve");
        const auto& exact = a.at("physical_exact");
        for (std::size_t i = 0; i < c.at("points").size(); ++i) {
            const auto& pt = c.at("points")[i];
            out += io::csv_join({cell(pt.at("p")), cell(pt.at("c")), cell(pt.at("boundary")), cell(exact[i]),
                                 cell(c.at("absolute"))});
        }
    } else if (kind == "criterion_surface") {
        out = io::csv_join({"pn", "pe", "c_threshold", "physical_boundary", "subspace", "crossing"});
        for (const auto& pt : a.at("surface").at("points"))
            out += io::csv_join({cell(pt.at("pn")), cell(pt.at("pe")), cell(pt.at("c")), cell(pt.at("boundary")),
                                 std::to_string(pt.at("subspace").get<int>()),
                                 pt.at("crossing").get<bool>() ? "1" : "0"});
    } else if (kind == "depth") {
        if (a.contains("boundary")) {
            out = io::csv_join({"nbar", "loss"});
            for (const auto& b : a.at("boundary")) out += io::csv_join({cell(b.at("nbar")), cell(b.at("loss"))});
        } else {
            out = io::csv_join({"kind", "value", "threshold", "bracket_width", "perturbative_valid"});
            for (const auto& d : a.at("results"))
                out += io::csv_join({d.at("kind"), cell(d.at("value")), cell(d.at("threshold")),
                                     cell(d.at("bracket_width")), d.at("perturbative_valid").get<bool>() ? "1" : "0"});
        }
    } else if (kind == "certification") {
        out = io::csv_join({"hierarchy", "order", "threshold", "sentinel", "pass", "margin", "relative_threshold",
                            "relative_pass"});
        for (const auto& h : a.at("hierarchies"))
            for (const auto& e : h.at("entries")) {
                const bool rel = e.contains("relative");
                out += io::csv_join({h.at("hierarchy"), std::to_string(e.at("order").get<int>()),
                                     cell(e.at("threshold")), e.at("sentinel").get<bool>() ? "1" : "0",
                                     e.at("pass").get<bool>() ? "1" : "0", cell(e.at("margin")),
                                     rel ? cell(e.at("relative").at("threshold")) : "",
                                     rel ? (e.at("relative").at("pass").get<bool>() ? "1" : "0") : ""});
            }
    } else if (kind == "convergence") {
        out = io::csv_join({"N", "excluded", "one_minus_T", "value"});
        for (const auto& r : a.at("rows"))
            out += io::csv_join({std::to_string(r.at("N").get<int>()), std::to_string(r.at("excluded").get<int>()),
                                 cell(r.at("one_minus_T")), cell(r.at("result").at("value"))});
    }
    return out;
}

void emit(const json& artifact, const Common& c, std::ostream& out) {
    const std::string text = c.format == "csv" ? render_csv(artifact) : artifact.dump(2) + "\n";
    if (c.out.empty()) out << text;
    else io::write_atomic(c.out, text);
}

json header(const std::string& kind, const CoherenceMeasureId& id, const SearchConfig& cfg) {
    return {{"schema_version", io::kSchemaVersion}, {"artifact", kind}, {"measure", io::to_json(id)},
            {"config", config_json(cfg)}};
}

// Command-level result cache around `compute`.
template <class F>
json cached(const Common& c, const std::string& command, const json& key, F&& compute) {
    if (c.no_cache) return compute();
    const io::RecordCache cache(c.cache_dir.empty() ? io::default_cache_dir() : std::filesystem::path(c.cache_dir));
    if (auto hit = cache.load(command, key)) return *hit;
    json v = compute();
    cache.store(command, key, v);
    return v;
}

ProbObservable parse_observable(const std::string& s, const CoherenceMeasureId& id) {
    if (s == "Pm") return ProbObservable::fock(id.m);
    if (s == "Pn") return ProbObservable::fock(id.n);
    if (s == "Pe") return ProbObservable::error(id.n);
    throw SpecError("unknown observable '" + s + "' (expected Pm, Pn or Pe)");
}

HierarchySpec make_spec(const std::string& h, int order) {
    const HierarchyKind k = parse_kind(h);
    if (k == HierarchyKind::MissingOne) throw SpecError("use the converge command for missing-one families");
    HierarchySpec s{k, 1, 0};
    if (k == HierarchyKind::NHierarchy || k == HierarchyKind::LHierarchy) s.order = order;
    return s;
}

struct ThresholdsArgs {
    std::string hierarchy;
    std::string orders = "1";
};

json cmd_thresholds(const Common& c, const ThresholdsArgs& a) {
    const auto id = c.id();
    const auto cfg = c.search();
    const HierarchyKind kind = parse_kind(a.hierarchy);
    if (kind == HierarchyKind::MissingOne) throw SpecError("use the converge command for missing-one families");
    std::vector<int> orders = parse_orders(a.orders);
    if (kind != HierarchyKind::NHierarchy && kind != HierarchyKind::LHierarchy) orders = {1};
    json params = {{"hierarchy", a.hierarchy}, {"orders", orders}};
    json key = {{"measure", io::to_json(id)}, {"params", params}, {"config", config_json(cfg)}};
    return cached(c, "thresholds", key, [&] {
        ThresholdCache tc;
        const auto rows = threshold_table(id, kind, orders, cfg, &tc);
        json art = header("threshold_table", id, cfg);
        art["hierarchy"] = a.hierarchy;
        art["rows"] = json::array();
        for (const auto& r : rows) art["rows"].push_back({{"order", r.order}, {"result", io::to_json(r.result)}});
        return art;
    });
}

struct CurveArgs {
    std::string hierarchy = "fock";
    int order = 1;
    std::string observable = "Pn";
    std::string lambda_grid = "log:1e-3:1e3:61";
    std::string p_grid = "lin:0:1:51";
    std::string pe_grid = "lin:0:0.2:11";
    double refine_tol = 1e-3;
};

json cmd_curve(const Common& c, const CurveArgs& a) {
    const auto id = c.id();
    const auto cfg = c.search();
    const HierarchySpec spec = make_spec(a.hierarchy, a.order);
    const auto obs = split(a.observable, ',');
    if (obs.empty() || obs.size() > 2) throw SpecError("--observable expects one or two observables");
    const auto lgrid = parse_grid(a.lambda_grid);
    const auto pgrid = parse_grid(a.p_grid);
    EnvelopeOptions env;
    env.refine_tolerance = a.refine_tol;
    json params = {{"hierarchy", io::to_json(spec)}, {"observable", a.observable}, {"lambda_grid", lgrid},
                   {"p_grid", pgrid}, {"refine_tol", a.refine_tol}};
    if (obs.size() == 2) params["pe_grid"] = parse_grid(a.pe_grid);
    json key = {{"measure", io::to_json(id)}, {"params", params}, {"config", config_json(cfg)}};
    return cached(c, "curve", key, [&] {
        if (obs.size() == 1) {
            const ProbObservable o = parse_observable(obs[0], id);
            const auto curve = relative_curve_2d(id, o, spec, lgrid, pgrid, cfg, env);
            json art = header("criterion_curve", id, cfg);
            art["curve"] = io::to_json(curve);
            json exact = json::array();
            for (double p : pgrid) exact.push_back(physical_boundary_exact(id, o, p, cfg.dim_report));
            art["physical_exact"] = exact;
            return art;
        }
        const ProbObservable on = parse_observable(obs[0], id), oe = parse_observable(obs[1], id);
        const auto pe = parse_grid(a.pe_grid);
        const auto surf = relative_surface_3d(id, spec, lgrid, lgrid, pgrid, pe, cfg, env, &on, &oe);
        json art = header("criterion_surface", id, cfg);
        art["surface"] = io::to_json(surf);
        return art;
    });
}

struct DepthArgs {
    std::string hierarchy = "N";
    int order = 1;
    double threshold = -1.0;
    int boundary_points = 0;
    std::string reading = "one-minus-eta";
};

json cmd_depth(const Common& c, const DepthArgs& a) {
    const auto id = c.id();
    const auto cfg = c.search();
    DepthOptions opt;
    if (a.reading == "eta") opt.reading = LossReading::Eta;
    else if (a.reading != "one-minus-eta") throw SpecError("--loss-reading expects one-minus-eta or eta");
    json params = {{"loss_reading", a.reading}, {"boundary_points", a.boundary_points}};
    if (a.threshold >= 0.0) params["threshold"] = a.threshold;
    else params["hierarchy"] = io::to_json(make_spec(a.hierarchy, a.order));
    json key = {{"measure", io::to_json(id)}, {"params", params}, {"config", config_json(cfg)}};
    return cached(c, "depth", key, [&] {
        json art = header("depth", id, cfg);
        double t = a.threshold;
        if (t < 0.0) {
            const auto spec = make_spec(a.hierarchy, a.order);
            ThresholdCache tc;
            const auto r = absolute_threshold(id, spec, cfg, &tc);
            t = r.value;
            art["threshold_source"] = {{"hierarchy", io::to_json(spec)}, {"result", io::to_json(r)}};
        }
        art["threshold"] = t;
        art["results"] = {io::to_json(loss_depth(id, t, opt)), io::to_json(thermal_depth(id, t, opt))};
        if (a.boundary_points > 0) {
            json b = json::array();
            for (const auto& p : depth_boundary(id, t, a.boundary_points, opt))
                b.push_back({{"nbar", p.nbar}, {"loss", p.loss}});
            art["boundary"] = b;
        }
        return art;
    });
}

struct CertifyArgs {
    std::string state;
    double c = -1.0;
    double pm = -1.0, pn = -1.0, pe = -1.0;
    std::string hierarchies = "N,L";
    int max_order = 0;
    int relative_max_order = 1;
    bool relative = false;
    std::string lambda_grid = "log:1e-2:1e2:9";
};

struct Unphysical : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json cmd_certify(const Common& c, const CertifyArgs& a) {
    const auto id = c.id();
    const auto cfg = c.search();
    json inputs;
    double C = 0.0;
    double pm = a.pm, pn = a.pn, pe = a.pe;
    bool relative = a.relative;
    if (!a.state.empty()) {
        const DensityMatrix rho = io::load_state(a.state);
        if (rho.dim() <= id.n) throw IndexError("state dimension does not reach index n");
        C = coherence_element(rho, id);
        pm = probability(rho, ProbObservable::fock(id.m));
        pn = probability(rho, ProbObservable::fock(id.n));
        pe = probability(rho, ProbObservable::error(id.n));
        inputs = {{"state", io::state_to_json(rho)}};
    } else {
        if (a.c < 0.0) throw SpecError("certify needs --state or --c");
        C = a.c;
        inputs = {{"c", C}};
        if (pm >= 0.0) inputs["pm"] = pm;
        if (pn >= 0.0) inputs["pn"] = pn;
        if (pe >= 0.0) inputs["pe"] = pe;
        relative = relative || pn >= 0.0 || pe >= 0.0 || pm >= 0.0;
    }
    for (double p : {pm, pn, pe})
        if (p > 1.0) throw Unphysical("probability above 1");
    if (C > 1.0 + 1e-12) throw Unphysical("coherence above 1");
    if (pm >= 0.0 && pn >= 0.0 && C > 2.0 * std::sqrt(pm * pn) + 1e-9)
        throw Unphysical("coherence exceeds 2 sqrt(Pm Pn)");
    if (pn >= 0.0 && pe >= 0.0) {
        if (pn + pe > 1.0 + 1e-12) throw Unphysical("Pn + Pe exceeds 1");
        if (C > physical_boundary_exact(id, ProbObservable::fock(id.n), pn, ProbObservable::error(id.n), pe,
                                        cfg.dim_report) + 1e-9)
            throw Unphysical("coherence exceeds the physical boundary at the given probabilities");
    } else if (pn >= 0.0) {
        if (C > physical_boundary_exact(id, ProbObservable::fock(id.n), pn, cfg.dim_report) + 1e-9)
            throw Unphysical("coherence exceeds the physical boundary at Pn");
    } else if (pe >= 0.0) {
        if (C > physical_boundary_exact(id, ProbObservable::error(id.n), pe, cfg.dim_report) + 1e-9)
            throw Unphysical("coherence exceeds the physical boundary at Pe");
    }

    const auto lgrid = parse_grid(a.lambda_grid);
    json params = {{"inputs", inputs}, {"hierarchies", a.hierarchies}, {"max_order", a.max_order},
                   {"relative", relative}, {"relative_max_order", a.relative_max_order}, {"lambda_grid", lgrid}};
    json key = {{"measure", io::to_json(id)}, {"params", params}, {"config", config_json(cfg)}};
    return cached(c, "certify", key, [&] {
        json art = header("certification", id, cfg);
        art["inputs"] = inputs;
        art["coherence"] = C;
        art["hierarchies"] = json::array();
        bool any = false;
        ThresholdCache tc;
        for (const auto& h : split(a.hierarchies, ',')) {
            const HierarchyKind kind = parse_kind(h);
            int top = a.max_order;
            if (top <= 0) top = kind == HierarchyKind::LHierarchy ? id.n - id.m : id.n;
            std::vector<int> orders;
            if (kind == HierarchyKind::NHierarchy || kind == HierarchyKind::LHierarchy) {
                for (int k = 1; k <= top; ++k) orders.push_back(k);
            } else {
                orders = {1};
            }
            const auto rows = threshold_table(id, kind, orders, cfg, &tc);
            json entries = json::array();
            int max_cert = 0;
            for (const auto& r : rows) {
                const double t = r.result.value;
                const bool pass = C > t;
                json e = {{"order", r.order}, {"threshold", t}, {"sentinel", r.result.diagnostics.sentinel},
                          {"pass", pass}, {"margin", C - t}};
                bool rel_pass = false;
                if (relative && !r.result.diagnostics.sentinel && r.order <= a.relative_max_order) {
                    const HierarchySpec spec = make_spec(h, r.order);
                    double rt;
                    json which;
                    if (pn >= 0.0 && pe >= 0.0) {
                        const auto s = relative_surface_3d(id, spec, lgrid, lgrid, {pn}, {pe}, cfg);
                        rt = s.points.front().c;
                        which = {"Pn", "Pe"};
                    } else {
                        ProbObservable o = ProbObservable::fock(id.n);
                        double p = pn;
                        which = {"Pn"};
                        if (pn < 0.0 && pe >= 0.0) {
                            o = ProbObservable::error(id.n);
                            p = pe;
                            which = {"Pe"};
                        } else if (pn < 0.0) {
                            o = ProbObservable::fock(id.m);
                            p = pm;
                            which = {"Pm"};
                        }
                        rt = relative_curve_2d(id, o, spec, lgrid, {p}, cfg).points.front().c;
                    }
                    rel_pass = C > rt;
                    e["relative"] = {{"observables", which}, {"threshold", rt}, {"pass", rel_pass}, {"margin", C - rt}};
                }
                if (pass || rel_pass) {
                    max_cert = std::max(max_cert, r.order);
                    any = true;
                }
                entries.push_back(e);
            }
            art["hierarchies"].push_back({{"hierarchy", h}, {"entries", entries}, {"max_certified", max_cert}});
        }
        art["certified"] = any;
        return art;
    });
}

struct ConvergeArgs {
    int exclude = 0;
    std::string n_range = "5..20";
};

json cmd_converge(const Common& c, const ConvergeArgs& a) {
    const auto id = c.id();
    const auto cfg = c.search();
    const auto Ns = parse_orders(a.n_range);
    json params = {{"exclude", a.exclude}, {"n_range", Ns}};
    json key = {{"measure", io::to_json(id)}, {"params", params}, {"config", config_json(cfg)}};
    return cached(c, "converge", key, [&] {
        ThresholdCache tc;
        const auto rows = convergence_study(id, Ns, a.exclude, cfg, &tc);
        json art = header("convergence", id, cfg);
        art["rows"] = json::array();
        for (const auto& r : rows) art["rows"].push_back(io::to_json(r));
        return art;
    });
}

void save_config(const Common& c, const std::string& command, const std::vector<std::string>& args) {
    std::vector<std::string> kept;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--save-config") {
            ++i;
            continue;
        }
        if (args[i].rfind("--save-config=", 0) == 0) continue;
        kept.push_back(args[i]);
    }
    SearchConfig cfg = c.search();
    json rc = {{"schema_version", io::kSchemaVersion},
               {"artifact", "run_config"},
               {"command", command},
               {"argv", kept},
               {"search", io::to_json(cfg)},
               {"cache_dir", c.cache_dir.empty() ? io::default_cache_dir().string() : c.cache_dir},
               {"format", c.format}};
    io::write_atomic(c.save_config, rc.dump(2) + "\n");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Hierarchical non-Gaussian coherence thresholds"};
    app.require_subcommand(1);
    Common common;
    ThresholdsArgs ta;
    CurveArgs ca;
    DepthArgs da;
    CertifyArgs cea;
    ConvergeArgs cva;
    std::string replay_path;

    auto* th = app.add_subcommand("thresholds", "Absolute threshold table");
    add_common(th, common);
    th->add_option("--hierarchy", ta.hierarchy, "N, L, fock, gauss or stellar")->required();
    th->add_option("--orders", ta.orders, "Orders a..b or a,b,c");

    auto* cu = app.add_subcommand("curve", "Relative criterion curve or surface");
    add_common(cu, common);
    cu->add_option("--hierarchy", ca.hierarchy, "Core family");
    cu->add_option("--order", ca.order, "Hierarchy order");
    cu->add_option("--observable", ca.observable, "Pm, Pn, Pe, or a pair such as Pn,Pe");
    cu->add_option("--lambda-grid", ca.lambda_grid, "log:lo:hi:n, lin:lo:hi:n or a list");
    cu->add_option("--p-grid", ca.p_grid, "Probability grid");
    cu->add_option("--pe-grid", ca.pe_grid, "Second probability grid for surfaces");
    cu->add_option("--refine-tol", ca.refine_tol, "Refinement tolerance");

    auto* de = app.add_subcommand("depth", "Loss and thermal depth");
    add_common(de, common);
    de->add_option("--hierarchy", da.hierarchy, "Core family for the threshold");
    auto* dord = de->add_option("--order", da.order, "Hierarchy order");
    auto* dthr = de->add_option("--threshold", da.threshold, "Explicit threshold");
    dord->excludes(dthr);
    de->add_option("--boundary-sweep", da.boundary_points, "Points of the (nbar, 1-eta) boundary");
    de->add_option("--loss-reading", da.reading, "one-minus-eta or eta");

    auto* ce = app.add_subcommand("certify", "Certify a state or measured values");
    add_common(ce, common);
    auto* cst = ce->add_option("--state", cea.state, "Density-matrix file");
    auto* cc = ce->add_option("--c", cea.c, "Measured coherence");
    cst->excludes(cc);
    ce->add_option("--pm", cea.pm, "Measured P_m");
    ce->add_option("--pn", cea.pn, "Measured P_n");
    ce->add_option("--pe", cea.pe, "Measured P_e,n");
    ce->add_option("--hierarchies", cea.hierarchies, "Comma-separated families");
    ce->add_option("--max-order", cea.max_order, "Highest order tested");
    ce->add_flag("--relative", cea.relative, "Evaluate relative criteria");
    ce->add_option("--relative-max-order", cea.relative_max_order, "Highest order with relative criteria");
    ce->add_option("--lambda-grid", cea.lambda_grid, "Lambda grid for relative criteria");

    auto* co = app.add_subcommand("converge", "Missing-one convergence study");
    add_common(co, common);
    co->add_option("--exclude", cva.exclude, "Excluded Fock index (m or n)")->required();
    co->add_option("--n-range", cva.n_range, "Range a..b of N");

    auto* rp = app.add_subcommand("replay", "Re-run a saved run config");
    rp->add_option("--config", replay_path, "Run-config file")->required();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (rp->parsed()) {
            const json rc = json::parse(io::read_file(replay_path));
            return run_cli(rc.at("argv").get<std::vector<std::string>>(), out, err);
        }
        std::string command;
        json art;
        if (th->parsed()) {
            command = "thresholds";
            art = cmd_thresholds(common, ta);
        } else if (cu->parsed()) {
            command = "curve";
            art = cmd_curve(common, ca);
        } else if (de->parsed()) {
            command = "depth";
            art = cmd_depth(common, da);
        } else if (ce->parsed()) {
            command = "certify";
            art = cmd_certify(common, cea);
        } else {
            command = "converge";
            art = cmd_converge(common, cva);
        }
        if (!common.save_config.empty()) save_config(common, command, args);
        emit(art, common, out);
        if (command == "certify" && !art.at("certified").get<bool>()) return kExitNotCertified;
        return kExitOk;
    } catch (const Unphysical& e) {
        err << "unphysical input: " << e.what() << "\n";
        return kExitUnphysical;
    } catch (const NoDepthError& e) {
        err << "no depth: " << e.what() << "\n";
        return kExitNoDepth;
    } catch (const ValidationError& e) {
        err << "validation failed: " << e.what() << "\n";
        return kExitValidation;
    } catch (const EnvelopeError& e) {
        err << "envelope check failed: " << e.what() << "\n";
        return kExitValidation;
    } catch (const TruncationError& e) {
        err << "truncation: " << e.what() << "\n";
        return kExitValidation;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const json::exception& e) {
        err << "malformed input: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

int run_cli(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(args, std::cout, std::cerr);
}

}  // namespace qngc
