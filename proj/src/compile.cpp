#include "gente/terrain.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gente/errors.hpp"
#include "gente/rng.hpp"

namespace gente {

using nlohmann::json;

namespace {

constexpr std::size_t kMaxCells = std::size_t(1) << 24;  // 16.7M cells

double arg_num(const ToolCall& call, const char* key, double fallback) {
    auto it = call.args.find(key);
    return it == call.args.end() ? fallback : it->get<double>();
}

int arg_int(const ToolCall& call, const char* key, int fallback) {
    auto it = call.args.find(key);
    return it == call.args.end() ? fallback : it->get<int>();
}

std::string arg_str(const ToolCall& call, const char* key, const char* fallback) {
    auto it = call.args.find(key);
    return it == call.args.end() ? fallback : it->get<std::string>();
}

struct Region {
    int x0, y0, w, h;  // cells
};

// Working state: per-tile maps are the source of truth so the final seam
// blend is well defined; whole-map calls run on the abutted assembly and
// are sliced back.
struct Compiler {
    const TerrainSpec& spec;
    std::vector<std::vector<HeightMap>> tiles;
    AttributeGrid attributes;
    physics::FluidParams fluid;
    std::map<int, physics::SoilParams> soil_regions;
    int blend_width = 0;
    int next_soil_region = 1;
    std::vector<std::string>* warnings;

    Compiler(const TerrainSpec& s, std::vector<std::string>* warn) : spec(s), warnings(warn) {
        const auto& l = s.layout;
        const std::size_t cells = static_cast<std::size_t>(l.rows) * l.tile_cells *
                                  static_cast<std::size_t>(l.cols) * l.tile_cells;
        if (cells > kMaxCells)
            throw SpecError(SpecError::Kind::Capacity, "layout",
                            "grid of " + std::to_string(cells) + " cells exceeds the " +
                                std::to_string(kMaxCells) + " cell capacity");
        tiles.resize(l.rows);
        for (int r = 0; r < l.rows; ++r)
            for (int c = 0; c < l.cols; ++c)
                tiles[r].push_back(new_flat(l.tile_cells, l.tile_cells, l.cell_size, 0.0));
        attributes = AttributeGrid(l.cols * l.tile_cells, l.rows * l.tile_cells);
    }

    Region target_region(const ToolCall& call) const {
        const auto& l = spec.layout;
        if (!call.target)
            return {0, 0, l.cols * l.tile_cells, l.rows * l.tile_cells};
        return {call.target->col * l.tile_cells, call.target->row * l.tile_cells, l.tile_cells,
                l.tile_cells};
    }

    HeightMap assemble() const { return compose_tiles(tiles, 0); }

    void slice_back(const HeightMap& full) {
        const auto& l = spec.layout;
        for (int r = 0; r < l.rows; ++r)
            for (int c = 0; c < l.cols; ++c)
                for (int y = 0; y < l.tile_cells; ++y)
                    for (int x = 0; x < l.tile_cells; ++x)
                        tiles[r][c].at(x, y) =
                            full.at(c * l.tile_cells + x, r * l.tile_cells + y);
    }

    // Applies a geometry transform to the call's target: the tile map
    // directly, or the whole assembled map sliced back afterwards.
    template <typename Fn>
    void apply_geometry(const ToolCall& call, Fn&& fn) {
        if (call.target) {
            HeightMap& tile = tiles[call.target->row][call.target->col];
            tile = fn(tile);
        } else {
            slice_back(fn(assemble()));
        }
    }

    void run_call(const ToolCall& call, int index) {
        const std::uint64_t seed = child_seed(spec.global_seed, static_cast<std::uint64_t>(index));
        if (call.tool == "flat") {
            const double elevation = arg_num(call, "elevation", 0.0);
            apply_geometry(call, [&](const HeightMap& base) {
                return new_flat(base.width, base.height, base.cell_size, elevation);
            });
        } else if (call.tool == "slope") {
            const double grade = arg_num(call, "grade", 0.0);
            const double heading = arg_num(call, "heading_deg", 0.0) * std::numbers::pi / 180.0;
            apply_geometry(call, [&](const HeightMap& base) {
                return gen_slope(base, grade, std::cos(heading), std::sin(heading));
            });
        } else if (call.tool == "stairs") {
            const auto direction = arg_str(call, "direction", "ascending") == "descending"
                                       ? StairsDirection::Descending
                                       : StairsDirection::Ascending;
            const Axis axis = arg_str(call, "axis", "x") == "y" ? Axis::Y : Axis::X;
            apply_geometry(call, [&](const HeightMap& base) {
                return gen_stairs(base, arg_num(call, "step_height", 0.15),
                                  arg_num(call, "step_depth", 0.3), arg_int(call, "count", 5),
                                  direction, axis);
            });
        } else if (call.tool == "rough") {
            apply_geometry(call, [&](const HeightMap& base) {
                return gen_rough(base, arg_num(call, "amplitude", 0.05),
                                 arg_int(call, "octaves", 4), arg_num(call, "lacunarity", 2.0),
                                 arg_num(call, "persistence", 0.5), seed);
            });
        } else if (call.tool == "pillars" || call.tool == "rocks") {
            const bool pillars = call.tool == "pillars";
            const ObstacleKind kind = pillars ? ObstacleKind::Pillar : ObstacleKind::Rock;
            apply_geometry(call, [&](const HeightMap& base) {
                return place_obstacles(base, kind, arg_num(call, "density", 0.0),
                                       arg_num(call, "radius_min", pillars ? 0.15 : 0.1),
                                       arg_num(call, "radius_max", pillars ? 0.4 : 0.5),
                                       arg_num(call, "height_min", pillars ? 1.0 : 0.1),
                                       arg_num(call, "height_max", pillars ? 2.0 : 0.5), seed)
                    .map;
            });
        } else if (call.tool == "wading") {
            physics::FluidParams params;
            params.water_level = arg_num(call, "water_level", 0.0);
            params.flow_kind = physics::flow_kind_from_name(arg_str(call, "flow", "still"));
            params.current_amplitude = arg_num(call, "current_amplitude", 5.0);
            params.tide_amplitude = arg_num(call, "tide_amplitude", 10.0);
            params.tide_omega = arg_num(call, "tide_omega", 0.5);
            params.tide_phase = arg_num(call, "tide_phase", 0.0);
            params.rho = arg_num(call, "rho", 1025.0);
            params.drag_coeff = arg_num(call, "drag_coeff", 0.9);
            params.added_mass_coeff = arg_num(call, "added_mass_coeff", 0.5);
            params.dyn_viscosity = arg_num(call, "dyn_viscosity", 0.0011);
            const double jitter = arg_num(call, "jitter", 0.0);
            if (jitter > 0.0) {
                SplitMix64 rng(seed);
                params = physics::jittered(params, jitter, rng);
            }
            params.validate();
            fluid = params;
            const Region region = target_region(call);
            for (int y = region.y0; y < region.y0 + region.h; ++y)
                for (int x = region.x0; x < region.x0 + region.w; ++x)
                    attributes.set_wading(x, y, static_cast<float>(params.water_level));
        } else if (call.tool == "deformable") {
            if (next_soil_region > AttributeGrid::kMaxSoilRegions)
                throw SpecError(SpecError::Kind::Capacity, "calls[" + std::to_string(index) + "]",
                                "more than " + std::to_string(AttributeGrid::kMaxSoilRegions) +
                                    " soil regions");
            physics::SoilParams params;
            params.bulldozing_coeff = arg_num(call, "bulldozing_coeff", 1000.0);
            params.bulldozing_exp = arg_num(call, "bulldozing_exp", 1.1);
            params.friction_coeff = arg_num(call, "friction_coeff", 0.6);
            params.presliding_scale = arg_num(call, "presliding_scale", 0.01);
            const double jitter = arg_num(call, "jitter", 0.0);
            if (jitter > 0.0) {
                SplitMix64 rng(seed);
                params = physics::jittered(params, jitter, rng);
            }
            params.validate();
            const int region_id = next_soil_region++;
            soil_regions[region_id] = params;
            const Region region = target_region(call);
            for (int y = region.y0; y < region.y0 + region.h; ++y)
                for (int x = region.x0; x < region.x0 + region.w; ++x)
                    attributes.set_deformable(x, y, region_id);
        } else if (call.tool == "compose") {
            blend_width = arg_int(call, "blend_width", 4);
        }
    }

    GeneratedTerrain finish() {
        GeneratedTerrain terrain;
        terrain.heightmap = compose_tiles(tiles, blend_width);
        terrain.heightmap.seed = spec.global_seed;
        terrain.attributes = std::move(attributes);
        terrain.fluid = fluid;
        terrain.soil_regions = std::move(soil_regions);
        terrain.provenance = spec;

        // Wading demands water strictly above the surface; clip elsewhere.
        long clipped = 0;
        int first_x = -1, first_y = -1;
        for (int y = 0; y < terrain.heightmap.height; ++y) {
            for (int x = 0; x < terrain.heightmap.width; ++x) {
                if (terrain.attributes.wading(x, y) &&
                    terrain.attributes.water_level_at(x, y) <= terrain.heightmap.at(x, y)) {
                    terrain.attributes.clear_wading(x, y);
                    if (clipped++ == 0) { first_x = x; first_y = y; }
                }
            }
        }
        if (clipped > 0 && warnings)
            warnings->push_back("clipped wading flag on " + std::to_string(clipped) +
                                " cells where the water level does not clear the surface"
                                " (first at cell " +
                                std::to_string(first_x) + ", " + std::to_string(first_y) + ")");
        return terrain;
    }
};

}  // namespace

GeneratedTerrain compile(const TerrainSpec& spec, std::vector<std::string>* warnings) {
    validate_spec_structure(spec);
    Compiler compiler(spec, warnings);
    for (std::size_t i = 0; i < spec.calls.size(); ++i)
        compiler.run_call(spec.calls[i], static_cast<int>(i));
    return compiler.finish();
}

std::vector<std::string> validate_spec(const TerrainSpec& spec) {
    validate_spec_structure(spec);
    std::vector<std::string> warnings;

    if (spec.calls.empty())
        warnings.push_back("empty terrain: no calls, compiles to a flat default");

    static const char* kGeometryTools[] = {"flat", "slope", "stairs", "rough", "pillars", "rocks"};
    auto is_geometry = [&](const std::string& tool) {
        for (const char* g : kGeometryTools)
            if (tool == g) return true;
        return false;
    };

    bool seen_geometry = false;
    for (std::size_t i = 0; i < spec.calls.size(); ++i) {
        const auto& call = spec.calls[i];
        if (call.tool == "flat" && !call.target && seen_geometry)
            warnings.push_back("calls[" + std::to_string(i) +
                               "]: whole-map flat overwrites all earlier geometry");
        if (is_geometry(call.tool)) seen_geometry = true;
    }

    // untouched tiles stay flat
    if (spec.layout.rows * spec.layout.cols > 1) {
        std::vector<bool> touched(static_cast<std::size_t>(spec.layout.rows) * spec.layout.cols,
                                  false);
        bool whole_map_call = false;
        for (const auto& call : spec.calls) {
            if (call.tool == "compose") continue;
            if (!call.target) { whole_map_call = true; break; }
            touched[static_cast<std::size_t>(call.target->row) * spec.layout.cols +
                    call.target->col] = true;
        }
        if (!whole_map_call) {
            for (int r = 0; r < spec.layout.rows; ++r)
                for (int c = 0; c < spec.layout.cols; ++c)
                    if (!touched[static_cast<std::size_t>(r) * spec.layout.cols + c])
                        warnings.push_back("tile (" + std::to_string(r) + ", " +
                                           std::to_string(c) + ") never targeted, stays flat");
        }
    }

    // dry wading: water level at or below the minimum elevation of the target
    bool any_wading = false;
    for (const auto& call : spec.calls)
        if (call.tool == "wading") { any_wading = true; break; }
    if (any_wading) {
        const GeneratedTerrain terrain = compile(spec, nullptr);
        for (std::size_t i = 0; i < spec.calls.size(); ++i) {
            const auto& call = spec.calls[i];
            if (call.tool != "wading") continue;
            const double water_level = arg_num(call, "water_level", 0.0);
            int x0 = 0, y0 = 0, w = terrain.heightmap.width, h = terrain.heightmap.height;
            if (call.target) {
                x0 = call.target->col * spec.layout.tile_cells;
                y0 = call.target->row * spec.layout.tile_cells;
                w = h = spec.layout.tile_cells;
            }
            float min_elev = terrain.heightmap.at(x0, y0);
            for (int y = y0; y < y0 + h; ++y)
                for (int x = x0; x < x0 + w; ++x)
                    min_elev = std::min(min_elev, terrain.heightmap.at(x, y));
            if (water_level <= min_elev)
                warnings.push_back("calls[" + std::to_string(i) + "]: dry wading region (water level " +
                                   std::to_string(water_level) + " at or below terrain minimum " +
                                   std::to_string(min_elev) + ")");
        }
    }
    return warnings;
}

}  // namespace gente
