#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace gente {

// Regular elevation grid, row-major, meters. Cell (x, y) sits at
// world position (x * cell_size, y * cell_size); elevation 0.0 is the
// nominal ground datum. Water level and sinkage are measured against it.
struct HeightMap {
    int width = 0;             // columns
    int height = 0;            // rows
    double cell_size = 0.1;    // meters per cell
    std::vector<float> data;   // width * height elevations, row-major
    std::uint64_t seed = 0;    // generation seed, recorded for provenance

    float at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
    float& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }

    // interpolation domain, meters
    double extent_x() const { return (width - 1) * cell_size; }
    double extent_y() const { return (height - 1) * cell_size; }

    bool finite() const;       // no NaN/Inf anywhere
    float min_elevation() const;
    float max_elevation() const;
};

enum class ObstacleKind { Pillar, Rock };

struct ObstaclePlacement {
    double x = 0.0;       // center, meters
    double y = 0.0;
    double radius = 0.0;  // footprint radius, meters
    double height = 0.0;  // rise above local base elevation, meters
};

struct ObstacleField {
    ObstacleKind kind = ObstacleKind::Pillar;
    std::vector<ObstaclePlacement> placements;
};

enum class StairsDirection { Ascending, Descending };
enum class Axis { X, Y };

// Constant-elevation grid. width, height >= 2; cell_size > 0.
HeightMap new_flat(int width, int height, double cell_size, double elevation);

// Adds a linear ramp: elevation rises at `grade` (rise over run) along the
// heading (dir_x, dir_y), measured from the cell (0, 0) origin. The heading
// is normalized internally; a zero heading with nonzero grade is invalid.
HeightMap gen_slope(const HeightMap& base, double grade, double dir_x, double dir_y);

// Piecewise-constant staircase along one axis. The profile is monotone and
// plateaus after `count` steps, so the total elevation change is exactly
// count * step_height. step_depth must be representable on the grid.
HeightMap gen_stairs(const HeightMap& base, double step_height, double step_depth,
                     int count, StairsDirection direction, Axis heading);

// Seeded fractal value noise added to the base. The deviation from the base
// is bounded by `amplitude` in every cell and the output is a pure function
// of (base, params, seed).
HeightMap gen_rough(const HeightMap& base, double amplitude, int octaves,
                    double lacunarity, double persistence, std::uint64_t seed);

struct ObstacleResult {
    HeightMap map;
    ObstacleField field;
};

// Scatters cylindrical obstacles by seeded rejection sampling with a
// non-overlap constraint. Targets round(density * map area) placements;
// footprints always lie inside the map bounds. Cells under a footprint are
// raised by the sampled obstacle height.
ObstacleResult place_obstacles(const HeightMap& base, ObstacleKind kind, double density,
                               double radius_min, double radius_max,
                               double height_min, double height_max, std::uint64_t seed);

// Concatenates a rectangular grid of tiles. All tiles must share cell_size;
// tiles in one grid column must share width, tiles in one row must share
// height. blend_width > 0 cross-fades elevations over a band of that many
// cells on each side of every seam; 0 abuts tiles exactly.
HeightMap compose_tiles(const std::vector<std::vector<HeightMap>>& tiles, int blend_width);

}  // namespace gente
