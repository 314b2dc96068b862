#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "gente/heightmap.hpp"
#include "gente/physics.hpp"
#include "gente/terrain_spec.hpp"

namespace gente {

// Per-cell physical attributes companion to a HeightMap. The flags byte
// packs: bit 0 wading, bit 1 deformable, bits 2..7 soil region id (0 = none).
struct AttributeGrid {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> flags;
    std::vector<float> water_level;  // meters, meaningful where wading is set

    static constexpr std::uint8_t kWadingBit = 0x01;
    static constexpr std::uint8_t kDeformableBit = 0x02;
    static constexpr int kSoilRegionShift = 2;
    static constexpr int kMaxSoilRegions = 63;

    AttributeGrid() = default;
    AttributeGrid(int w, int h)
        : width(w), height(h),
          flags(static_cast<std::size_t>(w) * h, 0),
          water_level(static_cast<std::size_t>(w) * h, 0.0f) {}

    std::size_t idx(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }

    bool wading(int x, int y) const { return flags[idx(x, y)] & kWadingBit; }
    bool deformable(int x, int y) const { return flags[idx(x, y)] & kDeformableBit; }
    int soil_region(int x, int y) const { return flags[idx(x, y)] >> kSoilRegionShift; }
    float water_level_at(int x, int y) const { return water_level[idx(x, y)]; }

    void set_wading(int x, int y, float level) {
        flags[idx(x, y)] |= kWadingBit;
        water_level[idx(x, y)] = level;
    }
    void clear_wading(int x, int y) { flags[idx(x, y)] &= ~kWadingBit; }
    void set_deformable(int x, int y, int region) {
        flags[idx(x, y)] = static_cast<std::uint8_t>(
            (flags[idx(x, y)] & (kWadingBit | kDeformableBit)) | kDeformableBit |
            (region << kSoilRegionShift));
    }

    bool operator==(const AttributeGrid&) const = default;
};

// A compiled terrain: geometry, per-cell attributes, the bound physical
// parameter sets, and the spec it came from.
struct GeneratedTerrain {
    HeightMap heightmap;
    AttributeGrid attributes;
    physics::FluidParams fluid;
    std::map<int, physics::SoilParams> soil_regions;
    TerrainSpec provenance;
};

// Executes the spec's calls in order against an accumulator terrain.
// Deterministic: per-call seeds are split from the global seed by call
// index. Wading cells whose water level does not clear the final surface
// get their flag clipped, reported through `warnings` when given.
GeneratedTerrain compile(const TerrainSpec& spec, std::vector<std::string>* warnings = nullptr);

}  // namespace gente
