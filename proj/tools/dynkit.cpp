// dynkit command-line tool: orbits, return maps, suspensions, law
// verification suites and morphism promotion, all emitting JSON documents.
//
// Exit codes: 0 pass, 1 law failure, 2 config error, 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dynkit/category.hpp"
#include "dynkit/config.hpp"
#include "dynkit/errors.hpp"
#include "dynkit/section.hpp"
#include "dynkit/suspension.hpp"
#include "dynkit/systems.hpp"

using nlohmann::json;
using namespace dynkit;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Options {
    std::string system;
    std::vector<std::string> params; // key=value
    std::string output;
    int samples = 100;
    std::uint64_t seed = 12345;
    Tolerances tol;

    // orbit
    std::string from;
    double t0 = 0.0, t1 = 1.0, step = 0.1;
    // return-map
    int grid = 10;
    // verify
    std::string suite;
    // promote
    std::string config_path;
};

void add_common(CLI::App* cmd, Options& opt) {
    cmd->add_option("--output", opt.output, "write the JSON document here instead of stdout");
    cmd->add_option("--samples", opt.samples, "sample count for randomized checks");
    cmd->add_option("--seed", opt.seed, "RNG seed (fixed seed -> byte-identical output)");
    cmd->add_option("--tol-law", opt.tol.tol_law, "law-residual pass bound");
    cmd->add_option("--tol-time", opt.tol.tol_time, "crossing-time refinement target");
    cmd->add_option("--horizon", opt.tol.max_horizon, "recurrence search bound");
    cmd->add_option("--dt", opt.tol.dt, "crossing-detection march step");
}

void add_system(CLI::App* cmd, Options& opt) {
    cmd->add_option("--system", opt.system, "catalog name or JSON config path")->required();
    cmd->add_option("--param", opt.params, "system parameter, key=value (repeatable)");
}

Params parse_params(const std::vector<std::string>& kvs) {
    Params out;
    for (const std::string& kv : kvs) {
        size_t eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ConfigError("--param expects key=value, got '" + kv + "'");
        try {
            out[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
        } catch (const std::exception&) {
            throw ConfigError("--param value is not a number in '" + kv + "'");
        }
    }
    return out;
}

std::vector<double> parse_point(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string piece;
    while (std::getline(ss, piece, ',')) {
        try {
            out.push_back(std::stod(piece));
        } catch (const std::exception&) {
            throw ConfigError("bad coordinate '" + piece + "' in --from");
        }
    }
    if (out.empty()) throw ConfigError("--from must list coordinates, e.g. \"1.5,0\"");
    return out;
}

json meta_block(const std::string& command, const Options& opt) {
    json m;
    m["command"] = command;
    m["version"] = kVersion;
    m["seed"] = opt.seed;
    m["samples"] = opt.samples;
    if (!opt.system.empty()) m["system"] = opt.system;
    json p = json::object();
    for (const auto& [k, v] : parse_params(opt.params)) p[k] = v;
    m["params"] = p;
    m["tolerances"] = {{"tol_space", opt.tol.tol_space}, {"tol_time", opt.tol.tol_time},
                       {"tol_law", opt.tol.tol_law},     {"t_min", opt.tol.t_min},
                       {"max_horizon", opt.tol.max_horizon}, {"dt", opt.tol.dt}};
    return m;
}

void emit(const json& doc, const Options& opt) {
    std::string text = doc.dump(2) + "\n";
    if (opt.output.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(opt.output);
        if (!out) throw ConfigError("cannot write to '" + opt.output + "'");
        out << text;
    }
}

LoadedSystem load(const Options& opt) {
    return load_system_ref(opt.system, parse_params(opt.params), opt.tol);
}

const FlowSystem& need_flow(const LoadedSystem& sys, const std::string& what) {
    if (!sys.flow) throw ConfigError(what + " needs a flow system");
    return *sys.flow;
}

const GlobalSectionSystem& need_section(const LoadedSystem& sys, const std::string& what) {
    if (!sys.section) throw ConfigError(what + " needs a flow with a global section");
    return *sys.section;
}

const MapSystem& need_map(const LoadedSystem& sys, const std::string& what) {
    if (!sys.map) throw ConfigError(what + " needs a map system");
    return *sys.map;
}

// ---- commands ----

int cmd_catalog(const Options& opt) {
    json doc;
    doc["meta"] = meta_block("catalog", opt);
    json systems = json::array();
    for (const std::string& n : catalog_names()) systems.push_back(n);
    json sections = json::array();
    for (const std::string& n : catalog_section_names()) sections.push_back(n);
    doc["results"] = {{"systems", systems}, {"section_systems", sections}};
    emit(doc, opt);
    return 0;
}

int cmd_orbit(const Options& opt) {
    LoadedSystem sys = load(opt);
    if (opt.step <= 0.0) throw ConfigError("--step must be positive");
    if (opt.t1 < opt.t0) throw ConfigError("--t1 must be >= --t0");
    std::vector<double> raw = parse_point(opt.from);

    json doc;
    doc["meta"] = meta_block("orbit", opt);
    json records = json::array();

    if (sys.map) {
        Point x = canonicalize(sys.map->space, raw);
        long n0 = static_cast<long>(opt.t0), n1 = static_cast<long>(opt.t1);
        for (long n = n0; n <= n1; ++n)
            records.push_back({{"t", static_cast<double>(n)},
                               {"point", point_to_json(map_apply(*sys.map, x, n))}});
    } else {
        const FlowSystem& fl = need_flow(sys, "orbit");
        Point x = canonicalize(fl.space, raw);
        if (sys.section && !sys.section->domain_ok(x))
            throw ConfigError("initial point " + to_string(x) + " is outside the system domain");
        long steps = static_cast<long>(std::floor((opt.t1 - opt.t0) / opt.step + 1e-9));
        for (long i = 0; i <= steps; ++i) {
            double t = opt.t0 + static_cast<double>(i) * opt.step;
            records.push_back({{"t", t}, {"point", point_to_json(flow_eval(fl, x, t))}});
        }
    }
    doc["results"] = {{"trajectory", records}};
    emit(doc, opt);
    return 0;
}

int cmd_return_map(const Options& opt) {
    LoadedSystem sys = load(opt);
    const GlobalSectionSystem& sec = need_section(sys, "return-map");
    if (opt.grid < 0) throw ConfigError("--grid must be >= 0");

    json doc;
    doc["meta"] = meta_block("return-map", opt);
    json records = json::array();
    int failures = 0;
    Rng rng(opt.seed);
    for (int i = 0; i < opt.grid; ++i) {
        Point x = sec.section_param
                      ? sec.section_param((i + 1.0) / (opt.grid + 1.0))
                      : sec.sample_section(rng);
        json rec;
        rec["x"] = point_to_json(x);
        try {
            double T = return_time(sec, x);
            rec["T"] = T;
            rec["Px"] = point_to_json(poincare_map(sec, x));
        } catch (const Error& e) {
            rec["error"] = e.what();
            ++failures;
        }
        records.push_back(rec);
    }
    doc["results"] = {{"records", records}, {"failures", failures}};
    emit(doc, opt);
    return failures == 0 ? 0 : 3;
}

int cmd_suspend(const Options& opt) {
    LoadedSystem sys = load(opt);
    const MapSystem& m = need_map(sys, "suspend");
    GlobalSectionSystem susp = suspend_system(m, opt.tol);

    json doc;
    doc["meta"] = meta_block("suspend", opt);
    json records = json::array();
    Rng rng(opt.seed);
    CheckReport round_trip;
    round_trip.name = "suspension-round-trip";
    round_trip.tolerance = opt.tol.tol_law;
    round_trip.seed = opt.seed;
    std::uniform_real_distribution<double> uh(0.0, 1.0), us(-3.0, 3.0);
    for (int i = 0; i < opt.samples; ++i) {
        TorusPoint p{m.sample(rng), uh(rng)};
        double s = us(rng);
        TorusPoint q = suspension_eval(m, p, s);
        records.push_back({{"base", point_to_json(p.base)}, {"height", p.height}, {"s", s},
                           {"out_base", point_to_json(q.base)}, {"out_height", q.height}});
        // P(Sigma f) should reproduce f on the zero-height fibre
        Point x = m.sample(rng);
        Point back = torus_unpack(m, poincare_map(susp, torus_pack(TorusPoint{x, 0.0}))).base;
        round_trip.record(to_string(x), distance(m.space, back, m.forward_fn(x)));
    }
    doc["results"] = {{"trajectory_samples", records},
                      {"round_trip", report_to_json(round_trip.finalize())}};
    emit(doc, opt);
    return round_trip.pass ? 0 : 1;
}

// Inverse identities of the Poincare map, as reports.
CheckReport poincare_inverse_report(const GlobalSectionSystem& sec, int samples, double tol,
                                    std::uint64_t seed) {
    CheckReport rep;
    rep.name = "poincare-inverse-identity";
    rep.tolerance = tol;
    rep.seed = seed;
    Rng rng(seed);
    for (int i = 0; i < samples; ++i) {
        Point x = sec.sample_section(rng);
        try {
            rep.record(to_string(x), sec.dist(poincare_inverse(sec, poincare_map(sec, x)), x));
        } catch (const Error& e) {
            rep.record_error(e.what());
        }
    }
    return rep.finalize();
}

CheckReport return_time_inverse_report(const GlobalSectionSystem& sec, int samples, double tol,
                                       std::uint64_t seed) {
    CheckReport rep;
    rep.name = "return-time-inverse-identity";
    rep.tolerance = tol;
    rep.seed = seed;
    Rng rng(seed);
    for (int i = 0; i < samples; ++i) {
        Point x = sec.sample_section(rng);
        try {
            double lhs = backward_return_time(sec, x);
            double rhs = return_time(sec, poincare_inverse(sec, x));
            rep.record(to_string(x), std::abs(lhs - rhs));
        } catch (const Error& e) {
            rep.record_error(e.what());
        }
    }
    return rep.finalize();
}

CheckReport suspension_laws_report(const MapSystem& m, int samples, double tol,
                                   std::uint64_t seed) {
    CheckReport rep;
    rep.name = "suspension-flow-laws";
    rep.tolerance = tol;
    rep.seed = seed;
    Rng rng(seed);
    std::uniform_real_distribution<double> uh(0.0, 1.0), us(-3.0, 3.0);
    for (int i = 0; i < samples; ++i) {
        TorusPoint p{m.sample(rng), uh(rng)};
        double s1 = us(rng), s2 = us(rng);
        double r_id = torus_distance(m, suspension_eval(m, p, 0.0), p);
        double r_grp = torus_distance(m, suspension_eval(m, suspension_eval(m, p, s1), s2),
                                      suspension_eval(m, p, s1 + s2));
        rep.record(to_string(p.base) + " h=" + std::to_string(p.height),
                   std::max(r_id, r_grp));
    }
    return rep.finalize();
}

CheckReport k_bijectivity_report(const GlobalSectionSystem& sec, int samples, double tol,
                                 std::uint64_t seed) {
    CheckReport rep;
    rep.name = "k-bijectivity";
    rep.tolerance = tol;
    rep.seed = seed;
    Rng rng(seed);
    std::uniform_real_distribution<double> uh(0.0, 1.0);
    MapSystem pmap = poincare_map_system(sec);
    for (int i = 0; i < samples; ++i) {
        try {
            // k o k^-1 on a phase-space point
            Point y = sec.sample_space(rng);
            double r1 = sec.dist(k_eval(sec, k_inverse(sec, y)), y);
            // k^-1 o k on a torus point over the section
            TorusPoint p{sec.sample_section(rng), uh(rng)};
            TorusPoint q = k_inverse(sec, k_eval(sec, p));
            double r2 = torus_distance(pmap, q, p);
            rep.record("#" + std::to_string(i), std::max(r1, r2));
        } catch (const Error& e) {
            rep.record_error(e.what());
        }
    }
    return rep.finalize();
}

int cmd_verify(const Options& opt) {
    LoadedSystem sys = load(opt);
    json doc;
    doc["meta"] = meta_block("verify", opt);
    doc["meta"]["suite"] = opt.suite;
    std::vector<CheckReport> reports;

    if (opt.suite == "flow-laws") {
        const FlowSystem& fl = need_flow(sys, "verify flow-laws");
        reports.push_back(check_flow_laws(fl, opt.samples, 3.0, opt.tol.tol_law, opt.seed));
    } else if (opt.suite == "poincare") {
        const GlobalSectionSystem& sec = need_section(sys, "verify poincare");
        Rng rng(opt.seed);
        std::vector<Point> pts;
        for (int i = 0; i < opt.samples; ++i) pts.push_back(sec.sample_space(rng));
        reports.push_back(recurrence_check(sec, pts, opt.tol.max_horizon));
        reports.push_back(poincare_inverse_report(sec, opt.samples, opt.tol.tol_law, opt.seed));
        reports.push_back(return_time_inverse_report(sec, opt.samples, opt.tol.tol_law, opt.seed));
    } else if (opt.suite == "suspension") {
        const MapSystem& m = need_map(sys, "verify suspension");
        reports.push_back(map_inverse_check(m, opt.samples, opt.tol.tol_law, opt.seed));
        reports.push_back(suspension_laws_report(m, opt.samples, opt.tol.tol_law, opt.seed));
    } else if (opt.suite == "adjunction") {
        if (sys.map) {
            GlobalSectionSystem susp = suspend_system(*sys.map, opt.tol);
            reports.push_back(triangle_identity_1(*sys.map, opt.samples, opt.tol.tol_law, opt.seed));
            reports.push_back(triangle_identity_2(susp, opt.samples, opt.tol.tol_law, opt.seed));
            reports.push_back(k_bijectivity_report(susp, opt.samples, opt.tol.tol_law, opt.seed));
        } else {
            const GlobalSectionSystem& sec = need_section(sys, "verify adjunction");
            reports.push_back(
                triangle_identity_1(poincare_map_system(sec), opt.samples, opt.tol.tol_law, opt.seed));
            reports.push_back(triangle_identity_2(sec, opt.samples, opt.tol.tol_law, opt.seed));
            reports.push_back(k_bijectivity_report(sec, opt.samples, opt.tol.tol_law, opt.seed));
            reports.push_back(weak_morphism_check(canonical_counit(sec), opt.samples, 3.0,
                                                  opt.tol.tol_law, opt.seed));
        }
    } else if (opt.suite == "naturality") {
        if (sys.map) {
            reports.push_back(
                naturality_check_l(map_identity(*sys.map), opt.samples, opt.tol.tol_law, opt.seed));
        } else {
            const GlobalSectionSystem& sec = need_section(sys, "verify naturality");
            reports.push_back(naturality_check_k(WeakMorphism::identity(sec), opt.samples,
                                                 opt.tol.tol_law, opt.seed));
        }
    } else if (opt.suite == "rate") {
        const GlobalSectionSystem& sec =
            sys.map ? suspend_system(*sys.map, opt.tol) : need_section(sys, "verify rate");
        WeakMorphism id = WeakMorphism::identity(sec);
        reports.push_back(rate_preserving_check(id, opt.samples, opt.tol.tol_law, opt.seed));
        reports.push_back(rate_scaling_check(id, opt.samples, opt.tol.tol_law, opt.seed));
        reports.push_back(
            rate_preserving_check(canonical_counit(sec), opt.samples, opt.tol.tol_law, opt.seed));
    } else {
        throw ConfigError("unknown suite '" + opt.suite +
                          "' (expected flow-laws, poincare, suspension, adjunction, naturality, rate)");
    }

    bool all_pass = true;
    json out = json::array();
    for (const CheckReport& r : reports) {
        out.push_back(report_to_json(r));
        all_pass = all_pass && r.pass;
    }
    doc["results"] = {{"reports", out}, {"pass", all_pass}};
    emit(doc, opt);
    return all_pass ? 0 : 1;
}

int cmd_promote(const Options& opt) {
    std::ifstream in(opt.config_path);
    if (!in) throw ConfigError("cannot open morphism config '" + opt.config_path + "'");
    json cfg;
    try {
        in >> cfg;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad JSON in morphism config: ") + e.what());
    }
    if (!cfg.contains("source") || !cfg.contains("target"))
        throw ConfigError("morphism config needs 'source' and 'target' system references");

    auto load_params = [&](const char* key) {
        Params p;
        if (cfg.contains(key))
            for (auto& [k, v] : cfg[key].items()) p[k] = v.get<double>();
        return p;
    };
    LoadedSystem src = load_system_ref(cfg["source"].get<std::string>(),
                                       load_params("source_params"), opt.tol);
    LoadedSystem dst = load_system_ref(cfg["target"].get<std::string>(),
                                       load_params("target_params"), opt.tol);
    if (!src.section || !dst.section)
        throw ConfigError("promote needs flows with global sections on both sides");

    WeakMorphism w;
    w.source = *src.section;
    w.target = *dst.section;
    w.name = cfg.value("name", "config-morphism");
    int dim = w.source.flow.space.dim();
    if (!cfg.contains("h") || !cfg["h"].is_array() ||
        static_cast<int>(cfg["h"].size()) != dim)
        throw ConfigError("'h' must list one expression per source coordinate");
    std::vector<Expression> h_exprs;
    for (const auto& s : cfg["h"]) h_exprs.push_back(Expression::parse(s.get<std::string>()));
    Space target_space = w.target.flow.space;
    w.h = [h_exprs, target_space](const Point& x) {
        Env env;
        for (int i = 0; i < x.dim(); ++i) env.set("x" + std::to_string(i + 1), x[i]);
        std::vector<double> out;
        for (const Expression& e : h_exprs) out.push_back(e.eval(env));
        return canonicalize(target_space, out);
    };
    if (!cfg.contains("tau")) throw ConfigError("morphism config needs a 'tau' expression");
    Expression tau_expr = Expression::parse(cfg["tau"].get<std::string>());
    w.tau = [tau_expr](const Point& x, double t) {
        Env env;
        env.set("t", t);
        for (int i = 0; i < x.dim(); ++i) env.set("x" + std::to_string(i + 1), x[i]);
        return tau_expr.eval(env);
    };

    json doc;
    doc["meta"] = meta_block("promote", opt);
    doc["meta"]["morphism"] = {{"source", cfg["source"]}, {"target", cfg["target"]},
                               {"tau", cfg["tau"]}};

    // Gates first: emit the failing report and stop on a bad input morphism.
    CheckReport gate_w = weak_morphism_check(w, opt.samples, 3.0, opt.tol.tol_law, opt.seed);
    CheckReport gate_s = section_preservation_check(w, opt.samples, opt.seed);
    if (!gate_w.pass || !gate_s.pass) {
        doc["results"] = {{"gates", {report_to_json(gate_w), report_to_json(gate_s)}},
                          {"pass", false}};
        emit(doc, opt);
        return 1;
    }

    WeakMorphism promoted = promote_to_rate_preserving(w, opt.samples, opt.tol.tol_law, opt.seed);
    CheckReport rate = rate_preserving_check(promoted, opt.samples, opt.tol.tol_law, opt.seed);

    json table = json::array();
    Rng rng(opt.seed);
    int grid = std::min(opt.samples, 16);
    for (int i = 0; i < grid; ++i) {
        Point x = w.source.sample_section(rng);
        json row;
        row["x"] = point_to_json(x);
        row["h(x)"] = point_to_json(promoted.h(x));
        json taus = json::array();
        for (double s : {0.25, 0.5, 1.0, 2.0})
            taus.push_back({{"s", s}, {"tau", promoted.tau(x, s)}});
        row["tau"] = taus;
        table.push_back(row);
    }
    doc["results"] = {{"gates", {report_to_json(gate_w), report_to_json(gate_s)}},
                      {"table", table},
                      {"rate_preserving", report_to_json(rate)},
                      {"pass", rate.pass}};
    emit(doc, opt);
    return rate.pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynkit: Poincare maps, suspension flows and their adjunction, verified numerically"};
    app.require_subcommand(1);
    Options opt;

    CLI::App* catalog = app.add_subcommand("catalog", "list built-in systems");
    add_common(catalog, opt);

    CLI::App* orbit = app.add_subcommand("orbit", "sample a trajectory on a uniform time grid");
    add_system(orbit, opt);
    add_common(orbit, opt);
    orbit->add_option("--from", opt.from, "initial point, comma-separated")->required();
    orbit->add_option("--t0", opt.t0, "grid start");
    orbit->add_option("--t1", opt.t1, "grid end");
    orbit->add_option("--step", opt.step, "grid step");

    CLI::App* rmap = app.add_subcommand("return-map", "tabulate T and P over a section grid");
    add_system(rmap, opt);
    add_common(rmap, opt);
    rmap->add_option("--grid", opt.grid, "number of section grid points");

    CLI::App* susp = app.add_subcommand("suspend", "build the suspension of a map system");
    add_system(susp, opt);
    add_common(susp, opt);

    CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
    add_system(verify, opt);
    add_common(verify, opt);
    verify->add_option("--suite", opt.suite,
                       "flow-laws | poincare | suspension | adjunction | naturality | rate")
        ->required();

    CLI::App* promote = app.add_subcommand("promote", "promote a weak morphism to rate-preserving");
    add_common(promote, opt);
    promote->add_option("--config", opt.config_path, "morphism config JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        opt.tol.validate();
        if (catalog->parsed()) return cmd_catalog(opt);
        if (orbit->parsed()) return cmd_orbit(opt);
        if (rmap->parsed()) return cmd_return_map(opt);
        if (susp->parsed()) return cmd_suspend(opt);
        if (verify->parsed()) return cmd_verify(opt);
        if (promote->parsed()) return cmd_promote(opt);
        std::cerr << "no command given\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const DimensionError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    }
}
