#include "gente/terrain_io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "gente/errors.hpp"

namespace gente {

namespace fs = std::filesystem;
using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "raw exports assume a little-endian host");

namespace {

std::vector<std::uint8_t> read_file_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

void write_file_bytes(const fs::path& path, const void* data, std::size_t size) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
    if (!out) throw IoError("short write to " + path.string());
}

json read_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw IoError("invalid JSON in " + path.string() + ": " + e.what());
    }
    return doc;
}

void write_json_file(const fs::path& path, const json& doc) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << doc.dump(2) << "\n";
}

// 16-bit grayscale PNG, no interlacing, rows in big-endian sample order.
void write_png16(const fs::path& path, int width, int height,
                 const std::vector<std::uint16_t>& pixels) {
    std::FILE* fp = std::fopen(path.string().c_str(), "wb");
    if (!fp) throw IoError("cannot write " + path.string());
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png ? png_create_info_struct(png) : nullptr;
    if (!png || !info) {
        if (png) png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw IoError("libpng initialization failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw IoError("libpng write failed for " + path.string());
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, static_cast<png_uint_32>(width), static_cast<png_uint_32>(height), 16,
                 PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    std::vector<std::uint8_t> row(static_cast<std::size_t>(width) * 2);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const std::uint16_t v = pixels[static_cast<std::size_t>(y) * width + x];
            row[static_cast<std::size_t>(x) * 2] = static_cast<std::uint8_t>(v >> 8);
            row[static_cast<std::size_t>(x) * 2 + 1] = static_cast<std::uint8_t>(v & 0xFF);
        }
        png_write_row(png, row.data());
    }
    png_write_end(png, info);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

json heightmap_sidecar(const HeightMap& map) {
    return json{{"width", map.width},   {"height", map.height}, {"cell_size", map.cell_size},
                {"min", map.min_elevation()}, {"max", map.max_elevation()}, {"seed", map.seed}};
}

std::vector<std::uint16_t> normalized_pixels(const HeightMap& map, bool dark_is_high) {
    const float lo = map.min_elevation();
    const float hi = map.max_elevation();
    const float span = hi - lo;
    std::vector<std::uint16_t> pixels(map.data.size(), 0);
    if (span > 0.0f) {
        for (std::size_t i = 0; i < map.data.size(); ++i) {
            const double t = (map.data[i] - lo) / span;
            const double v = dark_is_high ? 1.0 - t : t;
            pixels[i] = static_cast<std::uint16_t>(std::lround(v * 65535.0));
        }
    } else if (dark_is_high) {
        std::fill(pixels.begin(), pixels.end(), std::uint16_t(65535));
    }
    return pixels;
}

}  // namespace

ExportFormats formats_from_list(const std::vector<std::string>& names) {
    ExportFormats formats{false, false, false};
    for (const auto& name : names) {
        if (name == "raw") formats.raw = true;
        else if (name == "png") formats.png = true;
        else if (name == "csv") formats.csv = true;
        else throw std::invalid_argument("unknown format \"" + name + "\" (raw|png|csv)");
    }
    return formats;
}

std::vector<fs::path> export_heightmap(const HeightMap& map, const fs::path& out_dir,
                                       const ExportFormats& formats, const std::string& stem) {
    if (!map.finite()) throw std::invalid_argument("refusing to export non-finite heightmap");
    fs::create_directories(out_dir);
    std::vector<fs::path> written;

    const fs::path sidecar_path = out_dir / (stem + ".json");
    write_json_file(sidecar_path, heightmap_sidecar(map));
    written.push_back(sidecar_path);

    if (formats.raw) {
        const fs::path raw_path = out_dir / (stem + ".raw");
        write_file_bytes(raw_path, map.data.data(), map.data.size() * sizeof(float));
        written.push_back(raw_path);
    }
    if (formats.png) {
        const fs::path png_path = out_dir / (stem + ".png");
        write_png16(png_path, map.width, map.height, normalized_pixels(map, false));
        written.push_back(png_path);
    }
    if (formats.csv) {
        const fs::path csv_path = out_dir / (stem + ".csv");
        std::ofstream out(csv_path, std::ios::trunc);
        if (!out) throw IoError("cannot write " + csv_path.string());
        char buf[32];
        for (int y = 0; y < map.height; ++y) {
            for (int x = 0; x < map.width; ++x) {
                std::snprintf(buf, sizeof buf, "%.9g", static_cast<double>(map.at(x, y)));
                out << buf << (x + 1 == map.width ? "\n" : ",");
            }
        }
        written.push_back(csv_path);
    }
    return written;
}

std::vector<fs::path> export_attributes(const GeneratedTerrain& terrain, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    const AttributeGrid& attrs = terrain.attributes;

    std::vector<std::uint8_t> record(attrs.flags.size() * 5);
    for (std::size_t i = 0; i < attrs.flags.size(); ++i) {
        record[i * 5] = attrs.flags[i];
        std::memcpy(&record[i * 5 + 1], &attrs.water_level[i], sizeof(float));
    }
    const fs::path raw_path = out_dir / "attributes.raw";
    write_file_bytes(raw_path, record.data(), record.size());

    json soil = json::object();
    for (const auto& [id, params] : terrain.soil_regions)
        soil[std::to_string(id)] = physics::soil_to_json(params);
    const json sidecar{
        {"width", attrs.width},
        {"height", attrs.height},
        {"cell_size", terrain.heightmap.cell_size},
        {"record_format", "flags:u8,water_level:f32le"},
        {"flags_layout",
         json{{"wading_bit", 0}, {"deformable_bit", 1}, {"soil_region_shift", 2}}},
        {"fluid", physics::fluid_to_json(terrain.fluid)},
        {"soil_regions", soil}};
    const fs::path sidecar_path = out_dir / "attributes.json";
    write_json_file(sidecar_path, sidecar);
    return {raw_path, sidecar_path};
}

std::vector<fs::path> export_terrain(const GeneratedTerrain& terrain, const fs::path& out_dir,
                                     const ExportFormats& formats) {
    std::vector<fs::path> written = export_heightmap(terrain.heightmap, out_dir, formats);
    for (auto& p : export_attributes(terrain, out_dir)) written.push_back(std::move(p));
    const fs::path spec_path = out_dir / "spec.json";
    std::ofstream out(spec_path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + spec_path.string());
    out << serialize_spec(terrain.provenance);
    written.push_back(spec_path);
    return written;
}

HeightMap load_heightmap(const fs::path& dir, const std::string& stem) {
    const json sidecar = read_json_file(dir / (stem + ".json"));
    HeightMap map;
    map.width = sidecar.at("width").get<int>();
    map.height = sidecar.at("height").get<int>();
    map.cell_size = sidecar.at("cell_size").get<double>();
    map.seed = sidecar.value("seed", std::uint64_t(0));
    if (map.width < 2 || map.height < 2 || !(map.cell_size > 0.0))
        throw IoError("invalid dimensions in " + (dir / (stem + ".json")).string());

    const fs::path raw_path = dir / (stem + ".raw");
    const auto bytes = read_file_bytes(raw_path);
    const std::size_t expected = static_cast<std::size_t>(map.width) * map.height * sizeof(float);
    if (bytes.size() != expected)
        throw IoError(raw_path.string() + ": length " + std::to_string(bytes.size()) +
                      " does not match sidecar dimensions (expected " + std::to_string(expected) +
                      " bytes)");
    map.data.resize(static_cast<std::size_t>(map.width) * map.height);
    std::memcpy(map.data.data(), bytes.data(), bytes.size());
    if (!map.finite()) throw IoError(raw_path.string() + ": non-finite elevations");
    return map;
}

GeneratedTerrain load_terrain(const fs::path& dir) {
    GeneratedTerrain terrain;
    terrain.heightmap = load_heightmap(dir);

    const fs::path attr_sidecar_path = dir / "attributes.json";
    if (fs::exists(attr_sidecar_path)) {
        const json sidecar = read_json_file(attr_sidecar_path);
        const int w = sidecar.at("width").get<int>();
        const int h = sidecar.at("height").get<int>();
        if (w != terrain.heightmap.width || h != terrain.heightmap.height)
            throw IoError("attributes dimensions " + std::to_string(w) + "x" + std::to_string(h) +
                          " do not match heightmap");
        terrain.attributes = AttributeGrid(w, h);
        const auto bytes = read_file_bytes(dir / "attributes.raw");
        const std::size_t cells = static_cast<std::size_t>(w) * h;
        if (bytes.size() != cells * 5)
            throw IoError((dir / "attributes.raw").string() + ": length " +
                          std::to_string(bytes.size()) + " does not match sidecar dimensions");
        for (std::size_t i = 0; i < cells; ++i) {
            terrain.attributes.flags[i] = bytes[i * 5];
            std::memcpy(&terrain.attributes.water_level[i], &bytes[i * 5 + 1], sizeof(float));
        }
        terrain.fluid = physics::fluid_from_json(sidecar.at("fluid"));
        for (const auto& [key, value] : sidecar.at("soil_regions").items())
            terrain.soil_regions[std::stoi(key)] = physics::soil_from_json(value);
    } else {
        terrain.attributes =
            AttributeGrid(terrain.heightmap.width, terrain.heightmap.height);
    }

    const fs::path spec_path = dir / "spec.json";
    if (fs::exists(spec_path)) {
        std::ifstream in(spec_path);
        std::stringstream ss;
        ss << in.rdbuf();
        terrain.provenance = parse_spec(ss.str());
    }
    return terrain;
}

void write_render_png(const HeightMap& map, const fs::path& png_path) {
    if (!map.finite()) throw std::invalid_argument("refusing to render non-finite heightmap");
    if (png_path.has_parent_path()) fs::create_directories(png_path.parent_path());
    write_png16(png_path, map.width, map.height, normalized_pixels(map, true));
    fs::path sidecar_path = png_path;
    sidecar_path.replace_extension(".json");
    json sidecar = heightmap_sidecar(map);
    sidecar["polarity"] = "dark_is_high";
    write_json_file(sidecar_path, sidecar);
}

std::uint64_t fnv1a64(const void* data, std::size_t size) {
    const auto* bytes = static_cast<const std::uint8_t*>(data);
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= bytes[i];
        h *= 0x100000001B3ULL;
    }
    return h;
}

std::string content_hash(const fs::path& file) {
    const auto bytes = read_file_bytes(file);
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx",
                  static_cast<unsigned long long>(fnv1a64(bytes.data(), bytes.size())));
    return buf;
}

}  // namespace gente
