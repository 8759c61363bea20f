#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "blowup/certificate.hpp"
#include "blowup/config.hpp"
#include "blowup/oracles.hpp"
#include "blowup/polar.hpp"
#include "blowup/report.hpp"
#include "blowup/simulator.hpp"
#include "blowup/weights.hpp"

namespace blowup::pipeline {

inline constexpr const char* kToolVersion = "blowup-toolkit 1.0.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1; // also: strict-mode warnings
inline constexpr int kExitConfig = 2;
inline constexpr int kExitRefusal = 3;
inline constexpr int kExitStepFailure = 4;

struct RunOptions {
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    int workers = 1;
    bool strict = false;
};

// ---------------------------------------------------------------------------
// Named function catalog for configs (initial data and numeric-weight W2).
// ---------------------------------------------------------------------------

inline RealFn named_function(const std::string& name) {
    if (name == "zero") return [](double, double) { return 0.0; };
    if (name == "sin_x") return [](double x, double) { return std::sin(x); };
    if (name == "neg_sin_x") return [](double x, double) { return -std::sin(x); };
    if (name == "one_plus_cos_x") return [](double x, double) { return 1.0 + std::cos(x); };
    if (name == "burgers_w1_gauss")
        return [](double x, double) {
            double q = 1.0 + x * x;
            return 4.0 * x / (q * q * q) * std::exp(-x * x);
        };
    if (name == "one_plus_half_cos_cos")
        return [](double x, double y) { return 1.0 + 0.5 * std::cos(x) * std::cos(y); };
    if (name == "sin_x_sin_y")
        return [](double x, double y) { return std::sin(x) * std::sin(y); };
    if (name == "cone_exp") {
        // F0(r) Gamma(theta): F0 vanishing to infinite order at 0 and decaying
        ConeAngularProfile cone; // default: centered on theta = pi/2
        return [cone](double x, double y) {
            double r = std::hypot(x, y);
            if (r <= 0.0) return 0.0;
            double g = cone.gamma(std::atan2(y, x));
            return g > 0.0 ? std::exp(-1.0 / r) * std::exp(-r) * g : 0.0;
        };
    }
    throw ConfigError("unknown function name: " + name);
}

// ---------------------------------------------------------------------------
// Config -> domain objects
// ---------------------------------------------------------------------------

inline Grid grid_from_config(const Config& cfg, const std::string& section = "grid") {
    long dim = cfg.get_int(section + ".dimension");
    std::string dom = cfg.get_string(section + ".domain");
    long n = cfg.get_int(section + ".points");
    if (dom == "torus") {
        if (cfg.has(section + ".half_width"))
            throw ConfigError("half_width is only valid for line domains");
        return dim == 1 ? Grid::torus_1d(int(n)) : Grid::torus_2d(int(n));
    }
    if (dom == "line") {
        double hw = cfg.get_double(section + ".half_width", 32.0);
        return dim == 1 ? Grid::line_1d(int(n), hw) : Grid::line_2d(int(n), hw);
    }
    throw ConfigError("grid.domain must be torus or line, got " + dom);
}

inline Scenario scenario_from_config(const Config& cfg) {
    Scenario sc;
    sc.grid = grid_from_config(cfg);
    sc.op = ops::by_name(cfg.get_string("operator.name"), sc.grid.dim);
    double amp = cfg.get_double("initial_data.amplitude", 1.0);
    RealFn base = named_function(cfg.get_string("initial_data.name"));
    sc.initial_data = [base, amp](double x, double y) { return amp * base(x, y); };
    std::string scheme = cfg.get_string("integrator.scheme", "exponential_euler");
    if (scheme == "exponential_euler") sc.integrator = Integrator::exponential_euler;
    else if (scheme == "rk4") sc.integrator = Integrator::rk4;
    else throw ConfigError("integrator.scheme must be exponential_euler or rk4");
    sc.dealias = cfg.get_bool("integrator.dealias", sc.integrator == Integrator::rk4);
    sc.dt = cfg.get_double("integrator.dt");
    sc.t_end = cfg.get_double("integrator.t_end");
    sc.sample_interval = cfg.get_double("integrator.sample_interval", 10.0 * sc.dt);
    sc.thresholds.sup_factor = cfg.get_double("thresholds.sup_factor", 1e6);
    sc.thresholds.tail_fraction = cfg.get_double("thresholds.tail_fraction", 1e-2);
    sc.thresholds.max_halvings = int(cfg.get_int("thresholds.max_halvings", 20));
    sc.diagnostics.m_functional = cfg.get_bool("diagnostics.m_functional", false);
    sc.diagnostics.eq2_energy = cfg.get_bool("diagnostics.eq2_energy", false);
    sc.diagnostics.h1_log = cfg.get_bool("diagnostics.h1_log", false);
    return sc;
}

inline WeightPair weight_pair_from_config(const Config& cfg, const Grid& grid) {
    std::string name = cfg.get_string("certificate.pair");
    if (name == "numeric") {
        std::string opname = cfg.get_string("certificate.operator", cfg.get_string("operator.name"));
        RealFn w2 = named_function(cfg.get_string("certificate.w2"));
        return numeric_weight(ops::by_name(opname, grid.dim), w2, grid);
    }
    return catalog_pair(name, grid);
}

// ---------------------------------------------------------------------------
// Report assembly
// ---------------------------------------------------------------------------

inline Json config_echo(const Config& cfg) {
    Json j = Json::object();
    for (const auto& [k, v] : cfg.entries()) j[k] = v;
    return j;
}

inline Json grid_json(const Grid& g) {
    Json j;
    j["dimension"] = g.dim;
    j["points_per_axis"] = g.n;
    j["period"] = g.period;
    j["domain"] = g.domain == DomainKind::torus ? "torus" : "line_box";
    if (g.domain == DomainKind::line_box) j["box_half_width"] = g.half_width();
    return j;
}

inline Json hypothesis_json(const HypothesisReport& r) {
    Json j;
    j["sign_ok"] = r.sign_ok;
    j["min_product"] = r.min_product;
    j["product_scale"] = r.product_scale;
    j["pairing"] = r.pairing;
    j["jensen_J"] = r.jensen_J;
    j["jensen_J_companion"] = r.j_alt;
    j["jensen_J_delta"] = r.j_delta;
    j["quadrature_method"] = r.method;
    j["clip_count"] = r.clip_count;
    j["clip_sensitivity"] = r.clip_sensitivity;
    j["integrable"] = r.integrable;
    j["w2_mass"] = r.mass;
    j["w2_mass_deficit"] = r.mass_deficit;
    j["notes"] = r.notes;
    return j;
}

inline Json certificate_json(const BlowupCertificate& c) {
    Json j;
    j["c_star"] = c.c_star;
    j["t_bound"] = c.t_bound;
    j["w1_provenance"] = c.w1_provenance;
    j["hypothesis"] = hypothesis_json(c.report);
    return j;
}

inline Json trajectory_json(const Trajectory& t) {
    Json j;
    j["termination"] = to_string(t.termination);
    j["samples"] = t.samples.size();
    j["t_final"] = t.samples.empty() ? 0.0 : t.samples.back().t;
    if (t.termination == Termination::blowup_detected) {
        j["blowup_bracket_lo"] = t.blowup_lo;
        j["blowup_bracket_hi"] = t.blowup_hi;
        j["blowup_estimate"] = 0.5 * (t.blowup_lo + t.blowup_hi);
    }
    if (!t.detail.empty()) j["detail"] = t.detail;
    return j;
}

struct ReportContext {
    Json report = Json::object();
    std::vector<std::string> warnings;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    ReportContext(const Config& cfg, const RunOptions& opt) {
        report["tool_version"] = kToolVersion;
        report["seed"] = opt.seed;
        report["config"] = config_echo(cfg);
    }

    void warn(const std::string& w) { warnings.push_back(w); }

    int finish(const std::string& path, int code, bool strict) {
        if (strict && code == kExitOk && !warnings.empty()) {
            code = kExitInternal;
            report["error"] = "strict mode: warnings treated as errors";
        }
        report["warnings"] = warnings;
        report["exit_code"] = code;
        report["wall_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_json(path, report);
        return code;
    }
};

inline void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
    CsvWriter csv(path, {"t", "sup_norm", "l1_norm", "tail_fraction", "m_functional",
                         "l2_r1_sq", "dissipation_flux", "h1_log_sq"});
    for (const Sample& s : traj.samples)
        csv.write_numeric_row({s.t, s.sup, s.l1, s.tail_fraction, s.m_functional, s.l2_r1,
                               s.dissip_flux, s.h1_log});
}

// ---------------------------------------------------------------------------
// Verbs
// ---------------------------------------------------------------------------

namespace detail {

inline std::string out_path(const RunOptions& opt, const std::string& name,
                            const std::string& suffix) {
    std::filesystem::create_directories(opt.out_dir);
    return (std::filesystem::path(opt.out_dir) / (name + suffix)).string();
}

// certificate + (optionally) simulation + monitor
inline int execute_scenario(const Config& cfg, const RunOptions& opt, bool simulate) {
    ReportContext ctx(cfg, opt);
    std::string name = cfg.get_string("scenario.name");
    std::string report_path = detail::out_path(opt, name, "_report.json");

    Scenario sc;
    std::optional<WeightPair> pair;
    bool want_cert = cfg.has("certificate.pair");
    double monitor_tol = 1e-3;
    try {
        sc = scenario_from_config(cfg);
        if (want_cert) {
            pair = weight_pair_from_config(cfg, sc.grid);
            monitor_tol = cfg.get_double("certificate.monitor_rel_tol", 1e-3);
            sc.weight_pair = pair;
            sc.diagnostics.m_functional = true;
        }
        cfg.assert_all_consumed();
        sc.validate();
    } catch (const std::exception& e) {
        ctx.report["error"] = e.what();
        return ctx.finish(report_path, kExitConfig, opt.strict);
    }
    ctx.report["grid"] = grid_json(sc.grid);
    ctx.report["operator"] = sc.op.name;

    std::optional<BlowupCertificate> cert;
    if (want_cert) {
        SpectralField omega0 = SpectralField::from_function(sc.grid, sc.initial_data);
        HypothesisReport hyp;
        try {
            hyp = check_hypothesis(omega0, *pair);
            cert = issue_certificate(hyp, pair->provenance);
            ctx.report["certificate"] = certificate_json(*cert);
        } catch (const CertificateRefusal& e) {
            ctx.report["hypothesis"] = hypothesis_json(hyp);
            ctx.report["refusal"] = {{"condition", e.condition}, {"detail", e.what()}};
            return ctx.finish(report_path, kExitRefusal, opt.strict);
        } catch (const std::exception& e) {
            ctx.report["error"] = e.what();
            return ctx.finish(report_path, kExitInternal, opt.strict);
        }
        if (pair->mass_deficit > 1e-4 * pair->normalization)
            ctx.warn("weight mass deficit above 1e-4 relative (truncated box too small?)");
    }

    if (!simulate) return ctx.finish(report_path, kExitOk, opt.strict);

    Trajectory traj;
    try {
        traj = run(sc);
    } catch (const std::exception& e) {
        ctx.report["error"] = e.what();
        return ctx.finish(report_path, kExitInternal, opt.strict);
    }
    ctx.report["trajectory"] = trajectory_json(traj);
    std::string csv_path = detail::out_path(opt, name, "_trajectory.csv");
    write_trajectory_csv(csv_path, traj);
    ctx.report["trajectory_csv"] = csv_path;

    if (traj.termination == Termination::step_failure)
        return ctx.finish(report_path, kExitStepFailure, opt.strict);

    if (cert) {
        std::vector<double> times, ms;
        for (const Sample& s : traj.samples)
            if (s.t * cert->c_star < 1.0) {
                times.push_back(s.t);
                ms.push_back(s.m_functional);
            }
        BoundMonitor mon = monitor_bound(times, ms, cert->c_star, monitor_tol);
        Json mj;
        mj["samples_checked"] = times.size();
        mj["rel_tol"] = monitor_tol;
        mj["ok"] = mon.ok;
        mj["violations"] = mon.violations.size();
        double min_slack = times.empty() ? 0.0 : mon.slack[0];
        for (double s : mon.slack) min_slack = std::min(min_slack, s);
        mj["min_slack"] = min_slack;
        ctx.report["bound_monitor"] = mj;
        if (!mon.ok) ctx.warn("trajectory bound violated at a sample");
    }
    return ctx.finish(report_path, kExitOk, opt.strict);
}

inline int polar_dominance(const Config& cfg, const RunOptions& opt, ReportContext& ctx,
                           const std::string& name, const std::string& report_path) {
    std::vector<double> alphas = cfg.has("polar.alphas")
                                     ? cfg.get_double_list("polar.alphas")
                                     : std::vector<double>{0.2, 0.1, 0.05, 0.02, 0.01};
    double c = cfg.get_double("polar.c", 1.0);
    double C = cfg.get_double("polar.C", 1.0);
    double r_min = cfg.get_double("polar.r_min", 1e-8);
    double r_max = cfg.get_double("polar.r_max", 1e8);
    long nodes = cfg.get_int("polar.radial_points", 4096);
    cfg.assert_all_consumed();
    RadialGrid rg = RadialGrid::logspace(r_min, r_max, std::size_t(nodes));
    DominanceScan scan = dominance_scan(alphas, c, C, rg);
    Json results = Json::array();
    for (const auto& r : scan.results) {
        Json j;
        j["alpha"] = r.alpha;
        j["pass"] = r.pass;
        j["min_margin"] = r.min_margin;
        j["argmin_r"] = r.argmin_r;
        results.push_back(j);
        std::string tag = format_double(r.alpha);
        std::string csv_path = detail::out_path(opt, name + "_margin_alpha" + tag, ".csv");
        CsvWriter csv(csv_path, {"r", "margin", "w1"});
        for (std::size_t i = 0; i < rg.size(); ++i)
            csv.write_numeric_row({rg.r[i], r.margin.values[i], r.w1.values[i]});
    }
    ctx.report["dominance"] = {{"c", c},
                               {"C", C},
                               {"radial_points", nodes},
                               {"r_min", r_min},
                               {"r_max", r_max},
                               {"results", results}};
    if (scan.passing_alpha) ctx.report["dominance"]["passing_alpha"] = *scan.passing_alpha;
    else ctx.warn("no alpha in the scan produced a positive dominance margin");
    return ctx.finish(report_path, kExitOk, opt.strict);
}

inline int polar_ha(const Config& cfg, const RunOptions& opt, ReportContext& ctx,
                    const std::string& name, const std::string& report_path) {
    double alpha = cfg.get_double("polar.alpha");
    double center = cfg.get_double("polar.cone_center", std::numbers::pi / 2.0);
    Grid grid = grid_from_config(cfg);
    double r_min = cfg.get_double("polar.r_min", 1e-3);
    double r_max = cfg.get_double("polar.r_max", 10.0);
    double ann_lo = cfg.get_double("polar.annulus_lo", 0.05);
    double ann_hi = cfg.get_double("polar.annulus_hi", 0.5);
    cfg.assert_all_consumed();
    ConeAngularProfile cone;
    cone.center = center;
    SignExperimentResult res = ha_experiment(alpha, cone, grid, r_min, r_max, ann_lo, ann_hi);
    Json j;
    j["alpha"] = res.alpha;
    j["cone_center"] = res.cone_center;
    j["min_on_support"] = res.min_on_support;
    j["max_w"] = res.max_w;
    j["l1_mass"] = res.l1_mass;
    j["l2_mass"] = res.l2_mass;
    j["l2_over_l1"] = res.l2_mass / res.l1_mass;
    j["annulus"] = {res.annulus_lo, res.annulus_hi};
    j["points_per_axis"] = res.n;
    j["box_half_width"] = res.box_half_width;
    j["note"] = "nonnegativity certified only up to discretization tolerance on the annulus";
    ctx.report["sign_experiment"] = j;
    (void)name;
    return ctx.finish(report_path, kExitOk, opt.strict);
}

inline int polar_keybound(const Config& cfg, const RunOptions& opt, ReportContext& ctx,
                          const std::string& name, const std::string& report_path) {
    Scenario sc = scenario_from_config(cfg);
    sc.keep_states = true;
    double alpha = cfg.get_double("polar.alpha");
    double c = cfg.get_double("polar.c", 1.0);
    double C = cfg.get_double("polar.C", 1.0);
    double r_lo = cfg.get_double("polar.monitor_r_lo", 0.05);
    double r_hi = cfg.get_double("polar.monitor_r_hi", 2.0);
    long nodes = cfg.get_int("polar.monitor_points", 256);
    cfg.assert_all_consumed();
    sc.validate();
    Trajectory traj = run(sc);
    ctx.report["trajectory"] = trajectory_json(traj);
    if (traj.termination == Termination::step_failure)
        return ctx.finish(report_path, kExitStepFailure, opt.strict);

    RadialGrid rg = RadialGrid::logspace(r_lo, r_hi, std::size_t(nodes));
    SingularWeight w2 = singular_weight(alpha, rg);
    RadialProfile w1 = Lstar_apply(w2.profile, c, C);
    KeyBoundReport kb = key_bound_monitor(traj, w1);
    std::string csv_path = detail::out_path(opt, name + "_keybound", ".csv");
    CsvWriter csv(csv_path, {"t", "G", "growth_diagnostic"});
    for (std::size_t i = 0; i < kb.times.size(); ++i)
        csv.write_numeric_row({kb.times[i], kb.g[i], kb.growth[i]});
    Json j;
    j["alpha"] = alpha;
    j["c"] = c;
    j["C"] = C;
    j["degenerate"] = kb.degenerate;
    j["bounded_below"] = kb.bounded_below;
    j["min_ratio"] = kb.min_ratio;
    j["csv"] = csv_path;
    ctx.report["key_bound"] = j;
    if (kb.degenerate) ctx.warn("key-bound monitor degenerate: G is identically ~0");
    return ctx.finish(report_path, kExitOk, opt.strict);
}

} // namespace detail

inline int run_scenario(const std::string& config_path, const RunOptions& opt) {
    Config cfg;
    try {
        cfg = Config::parse_file(config_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitConfig;
    }
    return detail::execute_scenario(cfg, opt, /*simulate=*/true);
}

inline int certify(const std::string& config_path, const RunOptions& opt) {
    Config cfg;
    try {
        cfg = Config::parse_file(config_path);
        if (!cfg.has("certificate.pair"))
            throw ConfigError(config_path + ": certify needs a [certificate] section");
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitConfig;
    }
    return detail::execute_scenario(cfg, opt, /*simulate=*/false);
}

inline int polar(const std::string& config_path, const RunOptions& opt) {
    Config cfg;
    std::string name, experiment;
    try {
        cfg = Config::parse_file(config_path);
        name = cfg.get_string("scenario.name");
        experiment = cfg.get_string("polar.experiment");
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitConfig;
    }
    ReportContext ctx(cfg, opt);
    std::string report_path = detail::out_path(opt, name, "_report.json");
    try {
        if (experiment == "dominance")
            return detail::polar_dominance(cfg, opt, ctx, name, report_path);
        if (experiment == "ha") return detail::polar_ha(cfg, opt, ctx, name, report_path);
        if (experiment == "keybound")
            return detail::polar_keybound(cfg, opt, ctx, name, report_path);
        throw ConfigError("polar.experiment must be dominance, ha, or keybound");
    } catch (const ConfigError& e) {
        ctx.report["error"] = e.what();
        return ctx.finish(report_path, kExitConfig, opt.strict);
    } catch (const std::exception& e) {
        ctx.report["error"] = e.what();
        return ctx.finish(report_path, kExitInternal, opt.strict);
    }
}

// Manifest: one entry per line, "<verb> <config-path>" with verb one of
// run/certify/polar; paths are relative to the manifest location.
inline int suite(const std::string& manifest_path, const RunOptions& opt) {
    std::ifstream in(manifest_path);
    if (!in) {
        std::fprintf(stderr, "cannot open manifest: %s\n", manifest_path.c_str());
        return kExitConfig;
    }
    struct Entry {
        std::string verb, path;
        int code = -1;
    };
    std::vector<Entry> entries;
    std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        Entry e;
        if (!(ss >> e.verb)) continue;
        if (!(ss >> e.path)) {
            std::fprintf(stderr, "manifest entry missing config path: %s\n", line.c_str());
            return kExitConfig;
        }
        if (e.verb != "run" && e.verb != "certify" && e.verb != "polar") {
            std::fprintf(stderr, "manifest verb must be run/certify/polar: %s\n", e.verb.c_str());
            return kExitConfig;
        }
        e.path = (base / e.path).string();
        entries.push_back(e);
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= entries.size()) break;
            Entry& e = entries[i];
            if (e.verb == "run") e.code = run_scenario(e.path, opt);
            else if (e.verb == "certify") e.code = certify(e.path, opt);
            else e.code = polar(e.path, opt);
        }
    };
    int nw = std::max(1, opt.workers);
    std::vector<std::thread> pool;
    for (int i = 1; i < nw; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    Json agg;
    agg["tool_version"] = kToolVersion;
    agg["manifest"] = manifest_path;
    Json list = Json::array();
    int exit_code = kExitOk;
    for (const Entry& e : entries) {
        list.push_back({{"verb", e.verb}, {"config", e.path}, {"exit_code", e.code}});
        if (e.code != kExitOk) exit_code = kExitInternal;
    }
    agg["scenarios"] = list;
    agg["all_passed"] = exit_code == kExitOk;
    write_json(detail::out_path(opt, "suite", "_report.json"), agg);
    return exit_code;
}

} // namespace blowup::pipeline
