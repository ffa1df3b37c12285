#include "dynkit/config.hpp"

#include <cmath>
#include <fstream>

namespace dynkit {

using nlohmann::json;

namespace {

Space parse_space(const json& doc) {
    if (!doc.contains("coords") || !doc["coords"].is_array() || doc["coords"].empty())
        throw ConfigError("space.coords must be a non-empty array");
    Space space;
    for (const auto& c : doc["coords"]) {
        std::string kind = c.value("kind", "line");
        if (kind == "line") {
            if (c.contains("lo") != c.contains("hi"))
                throw ConfigError("line coord needs both lo and hi or neither");
            if (c.contains("lo"))
                space.coords.push_back(Coord::line(c["lo"].get<double>(), c["hi"].get<double>()));
            else
                space.coords.push_back(Coord::line());
        } else if (kind == "circle") {
            if (!c.contains("period")) throw ConfigError("circle coord needs a period");
            space.coords.push_back(Coord::circle(c["period"].get<double>()));
        } else {
            throw ConfigError("unknown coord kind '" + kind + "'");
        }
    }
    return space;
}

std::vector<Expression> parse_exprs(const json& doc, const std::string& key, int dim) {
    if (!doc.contains(key)) throw ConfigError("missing '" + key + "'");
    const auto& arr = doc[key];
    if (!arr.is_array() || static_cast<int>(arr.size()) != dim)
        throw ConfigError("'" + key + "' must list one expression per coordinate");
    std::vector<Expression> out;
    for (const auto& s : arr) {
        try {
            out.push_back(Expression::parse(s.get<std::string>()));
        } catch (const ParseError& e) {
            throw ConfigError(std::string("bad expression in '") + key + "': " + e.what());
        }
    }
    return out;
}

Sampler box_sampler(const Space& space) {
    return [space](Rng& rng) {
        std::vector<double> raw;
        raw.reserve(space.coords.size());
        for (const Coord& c : space.coords) {
            if (c.kind == CoordKind::Circle) {
                std::uniform_real_distribution<double> u(0.0, c.period);
                raw.push_back(u(rng));
            } else {
                double lo = c.lo.value_or(-1.0), hi = c.hi.value_or(1.0);
                std::uniform_real_distribution<double> u(lo, hi);
                raw.push_back(u(rng));
            }
        }
        return canonicalize(space, raw);
    };
}

ScalarFn expr_scalar(const Expression& e) {
    return [e](const Point& p) {
        Env env;
        for (int i = 0; i < p.dim(); ++i) env.set("x" + std::to_string(i + 1), p[i]);
        return e.eval(env);
    };
}

// Section points for user systems come from projecting space samples onto
// the section along the flow.
Sampler section_sampler(const GlobalSectionSystem& sys) {
    return [sys](Rng& rng) -> Point {
        for (int attempt = 0; attempt < 16; ++attempt) {
            Point x = sys.sample_space(rng);
            auto found = crossing_detect(sys, x, 0.0, sys.tol.max_horizon);
            if (!found.empty()) return found.front().point;
        }
        throw RecurrenceError("could not project a sample onto the section");
    };
}

} // namespace

LoadedSystem load_system_config(const json& doc, const Tolerances& tol) {
    tol.validate();
    LoadedSystem out;
    Space space = parse_space(doc.contains("space") ? doc["space"]
                                                    : throw ConfigError("missing 'space'"));
    std::string kind = doc.value("kind", "");
    std::string name = doc.value("name", "config-system");

    if (kind == "map") {
        MapSystem m = MapSystem::from_exprs(space, parse_exprs(doc, "exprs", space.dim()),
                                            parse_exprs(doc, "inverse_exprs", space.dim()), name);
        m.sample = box_sampler(space);
        out.map = std::move(m);
        return out;
    }

    FlowSystem fl;
    if (kind == "flow-closed") {
        fl = FlowSystem::closed_form(space, parse_exprs(doc, "exprs", space.dim()), name);
    } else if (kind == "flow-ode") {
        fl = FlowSystem::ode(space, parse_exprs(doc, "exprs", space.dim()),
                             doc.value("step", 1e-3), name);
    } else {
        throw ConfigError("kind must be one of map, flow-closed, flow-ode");
    }
    fl.sample = box_sampler(space);

    if (doc.contains("section")) {
        const auto& sec = doc["section"];
        GlobalSectionSystem sys;
        sys.flow = fl;
        sys.name = name;
        sys.tol = tol;
        if (!sec.contains("g")) throw ConfigError("section needs a level function 'g'");
        sys.section_g = expr_scalar(Expression::parse(sec["g"].get<std::string>()));
        if (sec.contains("domain")) {
            ScalarFn dom = expr_scalar(Expression::parse(sec["domain"].get<std::string>()));
            sys.in_domain = [dom](const Point& p) { return dom(p) > 0.0; };
        }
        sys.orientation = sec.value("orientation", 0);
        if (sys.orientation < -1 || sys.orientation > 1)
            throw ConfigError("section orientation must be -1, 0 or 1");
        sys.sample_space = fl.sample;
        sys.sample_section = section_sampler(sys);
        out.section = std::move(sys);
    }
    out.flow = std::move(fl);
    return out;
}

LoadedSystem load_system_ref(const std::string& ref, const Params& params, const Tolerances& tol) {
    bool is_path = ref.find('/') != std::string::npos ||
                   (ref.size() > 5 && ref.substr(ref.size() - 5) == ".json");
    if (is_path) {
        std::ifstream in(ref);
        if (!in) throw ConfigError("cannot open config file '" + ref + "'");
        json doc;
        try {
            in >> doc;
        } catch (const json::exception& e) {
            throw ConfigError("bad JSON in '" + ref + "': " + e.what());
        }
        return load_system_config(doc, tol);
    }

    LoadedSystem out;
    CatalogSystem sys = catalog_get(ref, params);
    if (std::holds_alternative<MapSystem>(sys)) {
        out.map = std::get<MapSystem>(std::move(sys));
    } else {
        out.flow = std::get<FlowSystem>(std::move(sys));
        for (const std::string& s : catalog_section_names())
            if (s == ref) out.section = catalog_section_system(ref, params, tol);
    }
    return out;
}

json report_to_json(const CheckReport& rep) {
    json j;
    j["name"] = rep.name;
    j["samples_used"] = rep.samples_used;
    j["max_residual"] = rep.max_residual;
    j["tolerance"] = rep.tolerance;
    j["seed"] = rep.seed;
    j["pass"] = rep.pass;
    j["failures"] = json::array();
    for (const auto& [sample, residual] : rep.failures)
        j["failures"].push_back({{"sample", sample}, {"residual", residual}});
    j["errors"] = rep.errors;
    return j;
}

json point_to_json(const Point& p) { return json(p.values); }

} // namespace dynkit
