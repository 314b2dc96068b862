#include "gente/terrain_spec.hpp"

#include <cmath>
#include <numbers>

#include "gente/errors.hpp"

namespace gente {

using nlohmann::json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

ToolParam num(std::string name, std::string desc, bool required, double min, double max,
              double example) {
    ToolParam p;
    p.name = std::move(name);
    p.type = ToolParam::Type::Number;
    p.description = std::move(desc);
    p.required = required;
    p.minimum = min;
    p.maximum = max;
    p.example = example;
    return p;
}

ToolParam integer(std::string name, std::string desc, bool required, double min, double max,
                  int example) {
    ToolParam p;
    p.name = std::move(name);
    p.type = ToolParam::Type::Integer;
    p.description = std::move(desc);
    p.required = required;
    p.minimum = min;
    p.maximum = max;
    p.example = example;
    return p;
}

ToolParam oneof(std::string name, std::string desc, std::vector<std::string> values,
                std::string example) {
    ToolParam p;
    p.name = std::move(name);
    p.type = ToolParam::Type::String;
    p.description = std::move(desc);
    p.required = false;
    p.enum_values = std::move(values);
    p.example = std::move(example);
    return p;
}

std::vector<ToolSchema> build_registry() {
    std::vector<ToolSchema> tools;

    tools.push_back(
        {"flat",
         "Level ground at a constant elevation. Overwrites the target region.",
         {num("elevation", "elevation above the ground datum [m]", false, -10.0, 10.0, 0.0)}});

    tools.push_back(
        {"slope",
         "Linear ramp rising along a horizontal heading.",
         {num("grade", "rise over run ratio; negative descends", true, -2.0, 2.0, 0.1),
          num("heading_deg", "uphill heading, degrees from +x", false, -360.0, 360.0, 0.0)}});

    tools.push_back(
        {"stairs",
         "Staircase along one axis; plateaus after the last step.",
         {num("step_height", "rise per step [m]", true, 0.01, 1.0, 0.15),
          num("step_depth", "tread depth [m]; at least one grid cell", true, 0.01, 5.0, 0.3),
          integer("count", "number of steps", true, 1, 200, 5),
          oneof("direction", "ascending or descending along the axis",
                {"ascending", "descending"}, "ascending"),
          oneof("axis", "axis the staircase runs along", {"x", "y"}, "x")}});

    tools.push_back(
        {"rough",
         "Fractal roughness added to the current surface.",
         {num("amplitude", "maximum deviation from the base surface [m]", true, 0.0, 2.0, 0.05),
          integer("octaves", "noise octaves", false, 1, 8, 4),
          num("lacunarity", "frequency ratio between octaves", false, 1.0, 8.0, 2.0),
          num("persistence", "amplitude ratio between octaves", false, 0.05, 1.0, 0.5)}});

    tools.push_back(
        {"pillars",
         "Tall cylindrical obstacles (trees, posts) scattered over the region.",
         {num("density", "obstacles per square meter", true, 0.0, 1.0, 0.05),
          num("radius_min", "smallest footprint radius [m]", false, 0.05, 2.0, 0.15),
          num("radius_max", "largest footprint radius [m]", false, 0.05, 2.0, 0.4),
          num("height_min", "smallest obstacle height [m]", false, 0.8, 10.0, 1.0),
          num("height_max", "largest obstacle height [m]", false, 0.8, 10.0, 2.0)}});

    tools.push_back(
        {"rocks",
         "Low rounded obstacles (rocks, debris) scattered over the region.",
         {num("density", "obstacles per square meter", true, 0.0, 1.0, 0.1),
          num("radius_min", "smallest footprint radius [m]", false, 0.05, 2.0, 0.1),
          num("radius_max", "largest footprint radius [m]", false, 0.05, 2.0, 0.5),
          num("height_min", "smallest obstacle height [m]", false, 0.01, 0.8, 0.1),
          num("height_max", "largest obstacle height [m]", false, 0.01, 0.8, 0.5)}});

    tools.push_back(
        {"wading",
         "Water layer over the region: drag, added mass, buoyancy and flow "
         "forces apply to submerged legs.",
         {num("water_level", "water surface above the ground datum [m]", true, -10.0, 10.0, 0.2),
          oneof("flow", "water movement pattern", {"still", "current", "tide"}, "still"),
          num("current_amplitude", "steady flow force [N]", false, 0.0, 1000.0, 5.0),
          num("tide_amplitude", "tidal flow force amplitude [N]", false, 0.0, 1000.0, 10.0),
          num("tide_omega", "tidal angular frequency [rad/s]", false, 0.0, 100.0, 0.5),
          num("tide_phase", "tidal phase shift [rad]", false, -kTwoPi, kTwoPi, 0.0),
          num("rho", "water density [kg/m^3]", false, 500.0, 2000.0, 1025.0),
          num("drag_coeff", "drag coefficient for turbulent flow around a leg", false, 0.82, 1.0,
              0.9),
          num("added_mass_coeff", "added mass coefficient", false, 0.0, 2.0, 0.5),
          num("dyn_viscosity", "dynamic viscosity [Pa*s]", false, 1e-5, 1.0, 0.0011),
          num("jitter", "relative std of Gaussian parameter jitter", false, 0.0, 0.5, 0.0)}});

    tools.push_back(
        {"deformable",
         "Soil layer over the region: feet sink and experience bulldozing "
         "resistance plus displacement-dependent friction.",
         {num("bulldozing_coeff", "bulldozing coefficient a [N/m^n]", false, 1.0, 1e6, 1000.0),
          num("bulldozing_exp", "bulldozing exponent n", false, 0.1, 3.0, 1.1),
          num("friction_coeff", "sliding friction coefficient", false, 0.01, 2.0, 0.6),
          num("presliding_scale", "pre-sliding displacement scale K [m]", false, 1e-5, 1.0, 0.01),
          num("jitter", "relative std of Gaussian parameter jitter", false, 0.0, 0.5, 0.0)}});

    tools.push_back(
        {"compose",
         "Sets the seam blending width used when the tile grid is assembled. "
         "Applies to the whole map.",
         {integer("blend_width", "cross-fade half-width at tile seams [cells]", false, 0, 64, 4)}});

    return tools;
}

const char* type_name(ToolParam::Type t) {
    switch (t) {
        case ToolParam::Type::Number: return "number";
        case ToolParam::Type::Integer: return "integer";
        case ToolParam::Type::String: return "string";
    }
    return "number";
}

}  // namespace

const std::vector<ToolSchema>& tool_registry() {
    static const std::vector<ToolSchema> registry = build_registry();
    return registry;
}

const ToolSchema* find_tool(const std::string& name) {
    for (const auto& tool : tool_registry())
        if (tool.name == name) return &tool;
    return nullptr;
}

const ToolParam* ToolSchema::find_param(const std::string& param_name) const {
    for (const auto& p : params)
        if (p.name == param_name) return &p;
    return nullptr;
}

json ToolSchema::parameters_schema() const {
    json properties = json::object();
    json required = json::array();
    for (const auto& p : params) {
        json prop{{"type", type_name(p.type)}, {"description", p.description}};
        if (p.minimum) prop["minimum"] = *p.minimum;
        if (p.maximum) prop["maximum"] = *p.maximum;
        if (!p.enum_values.empty()) prop["enum"] = p.enum_values;
        prop["examples"] = json::array({p.example});
        properties[p.name] = std::move(prop);
        if (p.required) required.push_back(p.name);
    }
    return json{{"type", "object"},
                {"properties", std::move(properties)},
                {"required", std::move(required)},
                {"additionalProperties", false}};
}

json export_function_schemas() {
    json doc = json::array();
    for (const auto& tool : tool_registry()) {
        doc.push_back(json{{"type", "function"},
                           {"function", json{{"name", tool.name},
                                             {"description", tool.description},
                                             {"parameters", tool.parameters_schema()}}}});
    }
    return doc;
}

namespace {

std::string call_path(int index) { return "calls[" + std::to_string(index) + "]"; }

void check_value(const ToolParam& p, const json& value, const std::string& path) {
    switch (p.type) {
        case ToolParam::Type::Number:
            if (!value.is_number())
                throw SpecError(SpecError::Kind::Schema, path, "expected a number");
            break;
        case ToolParam::Type::Integer:
            if (!value.is_number_integer() && !value.is_number_unsigned())
                throw SpecError(SpecError::Kind::Schema, path, "expected an integer");
            break;
        case ToolParam::Type::String: {
            if (!value.is_string())
                throw SpecError(SpecError::Kind::Schema, path, "expected a string");
            if (!p.enum_values.empty()) {
                const auto s = value.get<std::string>();
                bool ok = false;
                for (const auto& v : p.enum_values)
                    if (v == s) { ok = true; break; }
                if (!ok)
                    throw SpecError(SpecError::Kind::Range, path, "\"" + s + "\" not one of the allowed values");
            }
            return;
        }
    }
    const double v = value.get<double>();
    if (!std::isfinite(v))
        throw SpecError(SpecError::Kind::Range, path, "value must be finite");
    if (p.minimum && v < *p.minimum)
        throw SpecError(SpecError::Kind::Range, path,
                        "value " + std::to_string(v) + " below minimum " + std::to_string(*p.minimum));
    if (p.maximum && v > *p.maximum)
        throw SpecError(SpecError::Kind::Range, path,
                        "value " + std::to_string(v) + " above maximum " + std::to_string(*p.maximum));
}

// Cross-field rules that need more than one argument or the layout.
void check_call_semantics(const TerrainSpec& spec, const ToolCall& call, int index) {
    const std::string base = call_path(index) + ".args";
    auto get_num = [&](const char* key, double fallback) {
        auto it = call.args.find(key);
        return it == call.args.end() ? fallback : it->get<double>();
    };

    if (call.tool == "stairs") {
        if (get_num("step_depth", 0.3) < spec.layout.cell_size)
            throw SpecError(SpecError::Kind::Range, base + ".step_depth",
                            "step depth below the grid cell size " +
                                std::to_string(spec.layout.cell_size));
    } else if (call.tool == "pillars" || call.tool == "rocks") {
        const double def_rmin = call.tool == "pillars" ? 0.15 : 0.1;
        const double def_rmax = call.tool == "pillars" ? 0.4 : 0.5;
        const double rmin = get_num("radius_min", def_rmin);
        const double rmax = get_num("radius_max", def_rmax);
        if (rmin > rmax)
            throw SpecError(SpecError::Kind::Range, base + ".radius_min", "radius range is empty");
        if (rmin < spec.layout.cell_size)
            throw SpecError(SpecError::Kind::Range, base + ".radius_min",
                            "footprint radius below the grid cell size " +
                                std::to_string(spec.layout.cell_size));
        const double def_hmin = call.tool == "pillars" ? 1.0 : 0.1;
        const double def_hmax = call.tool == "pillars" ? 2.0 : 0.5;
        if (get_num("height_min", def_hmin) > get_num("height_max", def_hmax))
            throw SpecError(SpecError::Kind::Range, base + ".height_min", "height range is empty");
    } else if (call.tool == "compose") {
        if (call.target)
            throw SpecError(SpecError::Kind::Range, call_path(index) + ".target",
                            "compose applies to the whole map, not a tile");
    }
}

}  // namespace

void validate_call_args(const ToolCall& call, int index) {
    const ToolSchema* tool = find_tool(call.tool);
    if (!tool)
        throw SpecError(SpecError::Kind::UnknownTool, call_path(index) + ".tool",
                        "unknown tool \"" + call.tool + "\"");
    if (!call.args.is_object())
        throw SpecError(SpecError::Kind::Schema, call_path(index) + ".args",
                        "args must be an object");
    for (const auto& [key, value] : call.args.items()) {
        const ToolParam* p = tool->find_param(key);
        if (!p)
            throw SpecError(SpecError::Kind::Schema, call_path(index) + ".args." + key,
                            "unknown argument for tool \"" + call.tool + "\"");
        check_value(*p, value, call_path(index) + ".args." + key);
    }
    for (const auto& p : tool->params) {
        if (p.required && !call.args.contains(p.name))
            throw SpecError(SpecError::Kind::Schema, call_path(index) + ".args." + p.name,
                            "missing required argument");
    }
}

void validate_spec_structure(const TerrainSpec& spec) {
    if (spec.version != "1")
        throw SpecError(SpecError::Kind::Schema, "version",
                        "unsupported version \"" + spec.version + "\"");
    if (spec.layout.rows < 1 || spec.layout.cols < 1)
        throw SpecError(SpecError::Kind::Range, "layout", "rows and cols must be >= 1");
    if (spec.layout.tile_cells < 2)
        throw SpecError(SpecError::Kind::Range, "layout.tile_cells", "must be >= 2");
    if (!(spec.layout.cell_size > 0.0))
        throw SpecError(SpecError::Kind::Range, "layout.cell_size", "must be positive");
    for (std::size_t i = 0; i < spec.calls.size(); ++i) {
        const auto& call = spec.calls[i];
        const int index = static_cast<int>(i);
        validate_call_args(call, index);
        if (call.target) {
            if (call.target->row < 0 || call.target->row >= spec.layout.rows ||
                call.target->col < 0 || call.target->col >= spec.layout.cols)
                throw SpecError(SpecError::Kind::Range, call_path(index) + ".target",
                                "tile (" + std::to_string(call.target->row) + ", " +
                                    std::to_string(call.target->col) +
                                    ") outside layout " + std::to_string(spec.layout.rows) + "x" +
                                    std::to_string(spec.layout.cols));
        }
        check_call_semantics(spec, call, index);
    }
}

TerrainSpec parse_spec(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SpecError(SpecError::Kind::Parse, "",
                        "malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
    }
    return spec_from_json(doc);
}

namespace {

const json& require_field(const json& obj, const char* key, const std::string& path) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw SpecError(SpecError::Kind::Schema, path + "." + key, "missing field");
    return *it;
}

void reject_extra_keys(const json& obj, std::initializer_list<const char*> known,
                       const std::string& path) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        bool ok = false;
        for (const char* k : known)
            if (key == k) { ok = true; break; }
        if (!ok)
            throw SpecError(SpecError::Kind::Schema, path + "." + key, "unknown field");
    }
}

}  // namespace

TerrainSpec spec_from_json(const json& doc) {
    if (!doc.is_object())
        throw SpecError(SpecError::Kind::Schema, "", "spec document must be a JSON object");
    reject_extra_keys(doc, {"version", "layout", "global_seed", "calls"}, "$");

    TerrainSpec spec;
    const json& version = require_field(doc, "version", "$");
    if (!version.is_string())
        throw SpecError(SpecError::Kind::Schema, "$.version", "must be a string");
    spec.version = version.get<std::string>();

    const json& layout = require_field(doc, "layout", "$");
    if (!layout.is_object())
        throw SpecError(SpecError::Kind::Schema, "$.layout", "must be an object");
    reject_extra_keys(layout, {"rows", "cols", "tile_cells", "cell_size"}, "$.layout");
    auto read_int = [&](const char* key) {
        const json& v = require_field(layout, key, "$.layout");
        if (!v.is_number_integer() && !v.is_number_unsigned())
            throw SpecError(SpecError::Kind::Schema, std::string("$.layout.") + key,
                            "must be an integer");
        return v.get<int>();
    };
    spec.layout.rows = read_int("rows");
    spec.layout.cols = read_int("cols");
    spec.layout.tile_cells = read_int("tile_cells");
    const json& cs = require_field(layout, "cell_size", "$.layout");
    if (!cs.is_number())
        throw SpecError(SpecError::Kind::Schema, "$.layout.cell_size", "must be a number");
    spec.layout.cell_size = cs.get<double>();

    const json& seed = require_field(doc, "global_seed", "$");
    if (!seed.is_number_integer() && !seed.is_number_unsigned())
        throw SpecError(SpecError::Kind::Schema, "$.global_seed", "must be an integer");
    spec.global_seed = seed.get<std::uint64_t>();

    const json& calls = require_field(doc, "calls", "$");
    if (!calls.is_array())
        throw SpecError(SpecError::Kind::Schema, "$.calls", "must be an array");
    for (std::size_t i = 0; i < calls.size(); ++i) {
        const json& c = calls[i];
        const std::string path = "calls[" + std::to_string(i) + "]";
        if (!c.is_object())
            throw SpecError(SpecError::Kind::Schema, path, "call must be an object");
        reject_extra_keys(c, {"tool", "target", "args"}, path);
        ToolCall call;
        const json& tool = require_field(c, "tool", path);
        if (!tool.is_string())
            throw SpecError(SpecError::Kind::Schema, path + ".tool", "must be a string");
        call.tool = tool.get<std::string>();
        if (auto it = c.find("target"); it != c.end()) {
            if (it->is_string()) {
                if (it->get<std::string>() != "all")
                    throw SpecError(SpecError::Kind::Schema, path + ".target",
                                    "must be \"all\" or {row, col}");
            } else if (it->is_object()) {
                reject_extra_keys(*it, {"row", "col"}, path + ".target");
                const json& row = require_field(*it, "row", path + ".target");
                const json& col = require_field(*it, "col", path + ".target");
                if (!row.is_number_integer() || !col.is_number_integer())
                    throw SpecError(SpecError::Kind::Schema, path + ".target",
                                    "row and col must be integers");
                call.target = TileCoord{row.get<int>(), col.get<int>()};
            } else {
                throw SpecError(SpecError::Kind::Schema, path + ".target",
                                "must be \"all\" or {row, col}");
            }
        }
        if (auto it = c.find("args"); it != c.end()) {
            if (!it->is_object())
                throw SpecError(SpecError::Kind::Schema, path + ".args", "must be an object");
            call.args = *it;
        }
        spec.calls.push_back(std::move(call));
    }

    validate_spec_structure(spec);
    return spec;
}

json spec_to_json(const TerrainSpec& spec) {
    json calls = json::array();
    for (const auto& call : spec.calls) {
        json c{{"tool", call.tool}, {"args", call.args}};
        c["target"] = call.target ? json{{"row", call.target->row}, {"col", call.target->col}}
                                  : json("all");
        calls.push_back(std::move(c));
    }
    return json{{"version", spec.version},
                {"layout", json{{"rows", spec.layout.rows},
                                {"cols", spec.layout.cols},
                                {"tile_cells", spec.layout.tile_cells},
                                {"cell_size", spec.layout.cell_size}}},
                {"global_seed", spec.global_seed},
                {"calls", std::move(calls)}};
}

std::string serialize_spec(const TerrainSpec& spec) { return spec_to_json(spec).dump(2) + "\n"; }

}  // namespace gente
