#include "gente/heightmap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "gente/rng.hpp"

namespace gente {

bool HeightMap::finite() const {
    for (float v : data) {
        if (!std::isfinite(v)) return false;
    }
    return true;
}

float HeightMap::min_elevation() const {
    return *std::min_element(data.begin(), data.end());
}

float HeightMap::max_elevation() const {
    return *std::max_element(data.begin(), data.end());
}

HeightMap new_flat(int width, int height, double cell_size, double elevation) {
    if (width < 2 || height < 2)
        throw std::invalid_argument("new_flat: width and height must be >= 2, got " +
                                    std::to_string(width) + "x" + std::to_string(height));
    if (!(cell_size > 0.0))
        throw std::invalid_argument("new_flat: cell_size must be positive");
    if (!std::isfinite(elevation))
        throw std::invalid_argument("new_flat: elevation must be finite");
    HeightMap map;
    map.width = width;
    map.height = height;
    map.cell_size = cell_size;
    map.data.assign(static_cast<std::size_t>(width) * height, static_cast<float>(elevation));
    return map;
}

HeightMap gen_slope(const HeightMap& base, double grade, double dir_x, double dir_y) {
    if (!std::isfinite(grade))
        throw std::invalid_argument("gen_slope: grade must be finite");
    HeightMap out = base;
    if (grade == 0.0) return out;
    const double norm = std::hypot(dir_x, dir_y);
    if (norm == 0.0)
        throw std::invalid_argument("gen_slope: zero heading with nonzero grade");
    const double ux = dir_x / norm;
    const double uy = dir_y / norm;
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            const double along = (x * out.cell_size) * ux + (y * out.cell_size) * uy;
            out.at(x, y) += static_cast<float>(grade * along);
        }
    }
    return out;
}

HeightMap gen_stairs(const HeightMap& base, double step_height, double step_depth,
                     int count, StairsDirection direction, Axis heading) {
    if (!(step_height > 0.0))
        throw std::invalid_argument("gen_stairs: step_height must be positive");
    if (count < 1)
        throw std::invalid_argument("gen_stairs: count must be >= 1");
    if (step_depth < base.cell_size)
        throw std::invalid_argument("gen_stairs: step_depth " + std::to_string(step_depth) +
                                    " below cell_size " + std::to_string(base.cell_size) +
                                    ", steps unrepresentable on grid");
    HeightMap out = base;
    const double sign = direction == StairsDirection::Ascending ? 1.0 : -1.0;
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            const int i = heading == Axis::X ? x : y;
            const double along = i * out.cell_size;
            const int step = std::min(count, static_cast<int>(std::floor(along / step_depth)));
            out.at(x, y) += static_cast<float>(sign * step * step_height);
        }
    }
    return out;
}

namespace {

// lattice corner value in [-1, 1], pure in (seed, octave, ix, iy)
double lattice_value(std::uint64_t seed, int octave, std::int64_t ix, std::int64_t iy) {
    std::uint64_t h = mix64(seed + 0x632BE59BD9B4E019ULL * static_cast<std::uint64_t>(octave + 1));
    h = mix64(h ^ (static_cast<std::uint64_t>(ix) * 0x9E3779B97F4A7C15ULL));
    h = mix64(h ^ (static_cast<std::uint64_t>(iy) * 0xC2B2AE3D27D4EB4FULL));
    return static_cast<double>(h >> 11) * 0x1.0p-52 - 1.0;
}

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

// smoothed bilinear value noise at lattice coordinates (u, v)
double value_noise(std::uint64_t seed, int octave, double u, double v) {
    const std::int64_t iu = static_cast<std::int64_t>(std::floor(u));
    const std::int64_t iv = static_cast<std::int64_t>(std::floor(v));
    const double fu = smoothstep(u - static_cast<double>(iu));
    const double fv = smoothstep(v - static_cast<double>(iv));
    const double c00 = lattice_value(seed, octave, iu, iv);
    const double c10 = lattice_value(seed, octave, iu + 1, iv);
    const double c01 = lattice_value(seed, octave, iu, iv + 1);
    const double c11 = lattice_value(seed, octave, iu + 1, iv + 1);
    const double x0 = c00 + (c10 - c00) * fu;
    const double x1 = c01 + (c11 - c01) * fu;
    return x0 + (x1 - x0) * fv;
}

// base wavelength of the first octave, in cells
constexpr double kRoughBaseWavelength = 8.0;

}  // namespace

HeightMap gen_rough(const HeightMap& base, double amplitude, int octaves,
                    double lacunarity, double persistence, std::uint64_t seed) {
    if (amplitude < 0.0)
        throw std::invalid_argument("gen_rough: amplitude must be >= 0");
    if (octaves < 1)
        throw std::invalid_argument("gen_rough: octaves must be >= 1");
    if (!(lacunarity > 0.0) || !(persistence > 0.0))
        throw std::invalid_argument("gen_rough: lacunarity and persistence must be positive");
    HeightMap out = base;
    out.seed = seed;
    if (amplitude == 0.0) return out;

    double total_weight = 0.0;
    for (int o = 0; o < octaves; ++o) total_weight += std::pow(persistence, o);

    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            double sum = 0.0;
            double freq = 1.0 / kRoughBaseWavelength;
            double weight = 1.0;
            for (int o = 0; o < octaves; ++o) {
                sum += weight * value_noise(seed, o, x * freq, y * freq);
                freq *= lacunarity;
                weight *= persistence;
            }
            // |sum / total_weight| <= 1, so the deviation stays within amplitude
            out.at(x, y) += static_cast<float>(amplitude * sum / total_weight);
        }
    }
    return out;
}

ObstacleResult place_obstacles(const HeightMap& base, ObstacleKind kind, double density,
                               double radius_min, double radius_max,
                               double height_min, double height_max, std::uint64_t seed) {
    if (density < 0.0)
        throw std::invalid_argument("place_obstacles: density must be >= 0");
    if (!(radius_min > 0.0) || radius_min > radius_max)
        throw std::invalid_argument("place_obstacles: radius range must be positive and non-empty");
    if (radius_min < base.cell_size)
        throw std::invalid_argument("place_obstacles: radius_min " + std::to_string(radius_min) +
                                    " below cell_size " + std::to_string(base.cell_size));
    if (!(height_min > 0.0) || height_min > height_max)
        throw std::invalid_argument("place_obstacles: height range must be positive and non-empty");

    ObstacleResult result{base, ObstacleField{kind, {}}};
    result.map.seed = seed;

    const double area = base.width * base.cell_size * base.height * base.cell_size;
    const long target = std::lround(density * area);
    if (target == 0) return result;

    SplitMix64 rng(seed);
    constexpr int kMaxAttempts = 64;
    for (long i = 0; i < target; ++i) {
        for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
            const double radius = rng.next_range(radius_min, radius_max);
            const double h = rng.next_range(height_min, height_max);
            const double lo_x = radius, hi_x = base.extent_x() - radius;
            const double lo_y = radius, hi_y = base.extent_y() - radius;
            if (lo_x >= hi_x || lo_y >= hi_y) break;  // footprint cannot fit
            const double cx = rng.next_range(lo_x, hi_x);
            const double cy = rng.next_range(lo_y, hi_y);
            bool overlaps = false;
            for (const auto& p : result.field.placements) {
                if (std::hypot(p.x - cx, p.y - cy) < p.radius + radius) {
                    overlaps = true;
                    break;
                }
            }
            if (overlaps) continue;
            result.field.placements.push_back({cx, cy, radius, h});
            break;
        }
    }

    for (const auto& p : result.field.placements) {
        const int x0 = std::max(0, static_cast<int>(std::floor((p.x - p.radius) / base.cell_size)));
        const int x1 = std::min(base.width - 1,
                                static_cast<int>(std::ceil((p.x + p.radius) / base.cell_size)));
        const int y0 = std::max(0, static_cast<int>(std::floor((p.y - p.radius) / base.cell_size)));
        const int y1 = std::min(base.height - 1,
                                static_cast<int>(std::ceil((p.y + p.radius) / base.cell_size)));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                if (std::hypot(x * base.cell_size - p.x, y * base.cell_size - p.y) <= p.radius)
                    result.map.at(x, y) += static_cast<float>(p.height);
            }
        }
    }
    return result;
}

HeightMap compose_tiles(const std::vector<std::vector<HeightMap>>& tiles, int blend_width) {
    if (tiles.empty() || tiles[0].empty())
        throw std::invalid_argument("compose_tiles: empty tile grid");
    if (blend_width < 0)
        throw std::invalid_argument("compose_tiles: blend_width must be >= 0");
    const std::size_t rows = tiles.size();
    const std::size_t cols = tiles[0].size();
    const double cell_size = tiles[0][0].cell_size;
    for (std::size_t r = 0; r < rows; ++r) {
        if (tiles[r].size() != cols)
            throw std::invalid_argument("compose_tiles: tile grid not rectangular");
        for (std::size_t c = 0; c < cols; ++c) {
            const HeightMap& t = tiles[r][c];
            if (t.cell_size != cell_size)
                throw std::invalid_argument("compose_tiles: mismatched cell_size");
            if (t.width != tiles[0][c].width)
                throw std::invalid_argument("compose_tiles: inconsistent widths in column " +
                                            std::to_string(c));
            if (t.height != tiles[r][0].height)
                throw std::invalid_argument("compose_tiles: inconsistent heights in row " +
                                            std::to_string(r));
        }
    }

    std::vector<int> col_offset(cols + 1, 0);
    for (std::size_t c = 0; c < cols; ++c) col_offset[c + 1] = col_offset[c] + tiles[0][c].width;
    std::vector<int> row_offset(rows + 1, 0);
    for (std::size_t r = 0; r < rows; ++r) row_offset[r + 1] = row_offset[r] + tiles[r][0].height;

    HeightMap out;
    out.width = col_offset[cols];
    out.height = row_offset[rows];
    out.cell_size = cell_size;
    out.seed = tiles[0][0].seed;
    out.data.assign(static_cast<std::size_t>(out.width) * out.height, 0.0f);

    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const HeightMap& t = tiles[r][c];
            for (int y = 0; y < t.height; ++y)
                for (int x = 0; x < t.width; ++x)
                    out.at(col_offset[c] + x, row_offset[r] + y) = t.at(x, y);
        }
    }
    if (blend_width == 0) return out;

    // cross-fade each seam between edge-extended neighbor values;
    // vertical seams first, then horizontal, reading from a snapshot per pass
    const int bw = blend_width;
    HeightMap src = out;
    for (std::size_t c = 1; c < cols; ++c) {
        const int seam = col_offset[c];
        const int x0 = std::max(0, seam - bw);
        const int x1 = std::min(out.width - 1, seam + bw - 1);
        for (int x = x0; x <= x1; ++x) {
            const double t = (x - (seam - bw) + 0.5) / (2.0 * bw);
            for (int y = 0; y < out.height; ++y) {
                const float left = src.at(std::min(x, seam - 1), y);
                const float right = src.at(std::max(x, seam), y);
                out.at(x, y) = static_cast<float>((1.0 - t) * left + t * right);
            }
        }
    }
    src = out;
    for (std::size_t r = 1; r < rows; ++r) {
        const int seam = row_offset[r];
        const int y0 = std::max(0, seam - bw);
        const int y1 = std::min(out.height - 1, seam + bw - 1);
        for (int y = y0; y <= y1; ++y) {
            const double t = (y - (seam - bw) + 0.5) / (2.0 * bw);
            for (int x = 0; x < out.width; ++x) {
                const float top = src.at(x, std::min(y, seam - 1));
                const float bottom = src.at(x, std::max(y, seam));
                out.at(x, y) = static_cast<float>((1.0 - t) * top + t * bottom);
            }
        }
    }
    return out;
}

}  // namespace gente
