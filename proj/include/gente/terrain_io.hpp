#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gente/terrain.hpp"

namespace gente {

struct ExportFormats {
    bool raw = true;
    bool png = true;
    bool csv = false;
};

ExportFormats formats_from_list(const std::vector<std::string>& names);

// Writes heightmap.raw (little-endian f32, row-major), heightmap.json
// sidecar {width, height, cell_size, min, max, seed}, and optionally
// heightmap.png (16-bit grayscale, 0 = min elevation .. 65535 = max) and
// heightmap.csv. Returns the written paths.
std::vector<std::filesystem::path> export_heightmap(const HeightMap& map,
                                                    const std::filesystem::path& out_dir,
                                                    const ExportFormats& formats,
                                                    const std::string& stem = "heightmap");

// Writes attributes.raw (per cell: u8 flags then f32 little-endian water
// level) plus attributes.json describing the record layout and carrying the
// bound fluid and soil parameter sets.
std::vector<std::filesystem::path> export_attributes(const GeneratedTerrain& terrain,
                                                     const std::filesystem::path& out_dir);

// Full terrain export: heightmap files, attribute files, and spec.json.
std::vector<std::filesystem::path> export_terrain(const GeneratedTerrain& terrain,
                                                  const std::filesystem::path& out_dir,
                                                  const ExportFormats& formats);

HeightMap load_heightmap(const std::filesystem::path& dir, const std::string& stem = "heightmap");
GeneratedTerrain load_terrain(const std::filesystem::path& dir);

// Preview PNG with the plot convention inverted relative to the data
// export: darker pixels are higher terrain. Stamps min/max in a sidecar
// next to the image.
void write_render_png(const HeightMap& map, const std::filesystem::path& png_path);

// FNV-1a over raw bytes; the manifest's stable content hash.
std::uint64_t fnv1a64(const void* data, std::size_t size);
std::string content_hash(const std::filesystem::path& file);

}  // namespace gente
