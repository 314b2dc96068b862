#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace gente {

struct TileCoord {
    int row = 0;
    int col = 0;
    bool operator==(const TileCoord&) const = default;
};

// One call against a registered terrain tool. A missing target means the
// call applies to the whole map.
struct ToolCall {
    std::string tool;
    std::optional<TileCoord> target;
    nlohmann::json args = nlohmann::json::object();

    bool operator==(const ToolCall&) const = default;
};

struct Layout {
    int rows = 1;
    int cols = 1;
    int tile_cells = 128;
    double cell_size = 0.1;

    bool operator==(const Layout&) const = default;
};

// Validated sequence of tool calls plus the tile layout; the interchange
// format between model output, spec files, and the compiler.
struct TerrainSpec {
    std::string version = "1";
    Layout layout;
    std::uint64_t global_seed = 0;
    std::vector<ToolCall> calls;

    bool operator==(const TerrainSpec&) const = default;
};

// Tool parameter descriptor backing both argument validation and the
// exported JSON schemas. Every parameter carries an example value so each
// tool is constructible from its own schema.
struct ToolParam {
    enum class Type { Number, Integer, String };

    std::string name;
    Type type = Type::Number;
    std::string description;
    bool required = false;
    std::optional<double> minimum;
    std::optional<double> maximum;
    std::vector<std::string> enum_values;  // for Type::String
    nlohmann::json example;
};

struct ToolSchema {
    std::string name;
    std::string description;
    std::vector<ToolParam> params;

    nlohmann::json parameters_schema() const;  // draft-07 style object schema
    const ToolParam* find_param(const std::string& name) const;
};

// The nine registered terrain tools.
const std::vector<ToolSchema>& tool_registry();
const ToolSchema* find_tool(const std::string& name);

// One chat-completions style tool definition per registered tool.
nlohmann::json export_function_schemas();

// Validates one call's arguments against its tool schema. `index` feeds the
// error path ("calls[i].args.<name>"). Throws SpecError.
void validate_call_args(const ToolCall& call, int index);

// Full structural validation of an assembled spec (layout ranges, target
// coordinates, per-call arguments, cross-field rules). Throws SpecError.
void validate_spec_structure(const TerrainSpec& spec);

// Parses and validates a spec document. Errors name the offending call
// index and field; malformed JSON errors carry the byte offset.
TerrainSpec parse_spec(const std::string& text);
TerrainSpec spec_from_json(const nlohmann::json& doc);

nlohmann::json spec_to_json(const TerrainSpec& spec);
std::string serialize_spec(const TerrainSpec& spec);

// Semantic warnings beyond schema validation: dry wading regions, overwritten
// geometry, untouched tiles, empty specs. Warnings never block compilation.
std::vector<std::string> validate_spec(const TerrainSpec& spec);

}  // namespace gente
