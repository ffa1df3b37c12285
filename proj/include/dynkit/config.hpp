#ifndef DYNKIT_CONFIG_HPP
#define DYNKIT_CONFIG_HPP

#include <optional>
#include <string>

#include <json.hpp>

#include "dynkit/report.hpp"
#include "dynkit/section.hpp"
#include "dynkit/systems.hpp"

namespace dynkit {

/// A system loaded from the catalog or a JSON config document. Exactly one
/// of map/flow is set; section is set for flows that carry one.
struct LoadedSystem {
    std::optional<MapSystem> map;
    std::optional<FlowSystem> flow;
    std::optional<GlobalSectionSystem> section;
};

/// Parse a system config document:
///   {"space": {"coords": [{"kind":"line","lo":..,"hi":..} | {"kind":"circle","period":..}]},
///    "kind": "map" | "flow-closed" | "flow-ode",
///    "exprs": [...], "inverse_exprs": [...], "step": ...,
///    "section": {"g": "...", "domain": "...", "orientation": -1|0|1}}
/// Expression strings use the library grammar over x1..xn and t.
LoadedSystem load_system_config(const nlohmann::json& doc, const Tolerances& tol);

/// Resolve a system reference: a catalog name, or a path to a JSON config
/// file (anything containing '/' or ending in ".json").
LoadedSystem load_system_ref(const std::string& ref, const Params& params, const Tolerances& tol);

nlohmann::json report_to_json(const CheckReport& rep);
nlohmann::json point_to_json(const Point& p);

} // namespace dynkit

#endif
