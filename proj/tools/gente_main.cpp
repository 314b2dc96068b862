// gente: terrain generation and force-model harness CLI.
//
// Exit codes: 0 success, 1 validation error, 2 I/O or network error.

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "gente/errors.hpp"
#include "gente/harness.hpp"
#include "gente/terrain.hpp"
#include "gente/terrain_io.hpp"
#include "gente/terrain_spec.hpp"
#include "gente/vlm_client.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw gente::IoError("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string env_or(const char* name, const std::string& fallback) {
    const char* value = std::getenv(name);
    return value ? value : fallback;
}

gente::TerrainSpec load_spec_file(const fs::path& path) {
    return gente::parse_spec(read_text_file(path));
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

struct GenOptions {
    std::string spec_path;
    std::string out_dir = "out";
    std::vector<std::string> formats{"raw", "png"};
};

int run_gen(const GenOptions& opt) {
    const gente::TerrainSpec spec = load_spec_file(opt.spec_path);
    std::vector<std::string> warnings = gente::validate_spec(spec);
    const gente::GeneratedTerrain terrain = gente::compile(spec, &warnings);
    print_warnings(warnings);
    const auto files =
        gente::export_terrain(terrain, opt.out_dir, gente::formats_from_list(opt.formats));
    json out{{"out_dir", opt.out_dir}, {"files", json::array()}, {"warnings", warnings.size()}};
    for (const auto& f : files) out["files"].push_back(f.string());
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

struct PromptOptions {
    std::string text;
    std::string image_path;
    std::string api_url;
    std::string api_key;
    std::string model;
    std::string out_dir = "out";
    int max_retries = 2;
    double timeout_s = 30.0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    std::vector<std::string> formats{"raw", "png"};
};

const char* media_type_for(const fs::path& path) {
    const std::string ext = path.extension().string();
    if (ext == ".png") return "image/png";
    if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
    if (ext == ".webp") return "image/webp";
    return "application/octet-stream";
}

std::string base64_encode(const std::string& bytes) {
    static const char* alphabet =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    while (i + 3 <= bytes.size()) {
        const unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                           (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                           static_cast<unsigned char>(bytes[i + 2]);
        out += alphabet[(v >> 18) & 63];
        out += alphabet[(v >> 12) & 63];
        out += alphabet[(v >> 6) & 63];
        out += alphabet[v & 63];
        i += 3;
    }
    if (i + 1 == bytes.size()) {
        const unsigned v = static_cast<unsigned char>(bytes[i]) << 16;
        out += alphabet[(v >> 18) & 63];
        out += alphabet[(v >> 12) & 63];
        out += "==";
    } else if (i + 2 == bytes.size()) {
        const unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                           (static_cast<unsigned char>(bytes[i + 1]) << 8);
        out += alphabet[(v >> 18) & 63];
        out += alphabet[(v >> 12) & 63];
        out += alphabet[(v >> 6) & 63];
        out += "=";
    }
    return out;
}

int run_prompt(const PromptOptions& opt) {
    gente::EndpointConfig cfg;
    cfg.base_url = !opt.api_url.empty() ? opt.api_url : env_or("GENTE_API_URL", "");
    cfg.api_key = !opt.api_key.empty() ? opt.api_key : env_or("GENTE_API_KEY", "");
    cfg.model_name = !opt.model.empty() ? opt.model : env_or("GENTE_MODEL", "default");
    cfg.max_retries = opt.max_retries;
    cfg.timeout_s = opt.timeout_s;
    if (cfg.base_url.empty())
        throw gente::IoError("no endpoint configured: pass --api-url or set GENTE_API_URL");
    if (cfg.api_key.empty())
        throw gente::IoError("no API key configured: pass --api-key or set GENTE_API_KEY");

    gente::GenerationRequest request;
    if (!opt.image_path.empty()) {
        request.input_kind = gente::InputKind::Image;
        request.image_payload = gente::ImagePayload{base64_encode(read_text_file(opt.image_path)),
                                                    media_type_for(opt.image_path)};
    } else {
        request.input_kind = gente::InputKind::Text;
        request.text_prompt = opt.text;
    }

    const gente::VlmClient client(cfg);
    gente::GenerationTrace trace = client.request_terrain(request);

    fs::create_directories(opt.out_dir);
    const fs::path trace_path = fs::path(opt.out_dir) / "trace.json";
    {
        std::ofstream out(trace_path, std::ios::trunc);
        out << trace.to_json().dump(2) << "\n";
    }
    if (!trace.succeeded()) {
        std::cerr << "generation failed after " << trace.attempts.size()
                  << " attempt(s): " << trace.failure_reason << "\n"
                  << "trace written to " << trace_path.string() << "\n";
        return kExitValidation;
    }

    gente::TerrainSpec spec = *trace.spec;
    if (opt.seed_set) spec.global_seed = opt.seed;
    const fs::path spec_path = fs::path(opt.out_dir) / "spec.json";
    {
        std::ofstream out(spec_path, std::ios::trunc);
        out << gente::serialize_spec(spec);
    }

    std::vector<std::string> warnings = gente::validate_spec(spec);
    const gente::GeneratedTerrain terrain = gente::compile(spec, &warnings);
    print_warnings(warnings);
    const auto files =
        gente::export_terrain(terrain, opt.out_dir, gente::formats_from_list(opt.formats));
    json out{{"out_dir", opt.out_dir},
             {"spec", spec_path.string()},
             {"trace", trace_path.string()},
             {"attempts", trace.attempts.size()},
             {"files", json::array()}};
    for (const auto& f : files) out["files"].push_back(f.string());
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

struct HarnessOptions {
    std::string terrain_dir;
    std::string preset = "straight-walk";
    std::string out_csv = "report.csv";
    std::string physics_config;
    double dt = 0.01;
    double duration = 10.0;
    std::uint64_t seed = 0;
    double eps_std = 0.1;
    double xi_std = 0.1;
};

int run_harness(const HarnessOptions& opt) {
    const auto preset = gente::preset_from_name(opt.preset);
    if (!preset) {
        std::string names;
        for (const auto& n : gente::preset_names()) names += (names.empty() ? "" : ", ") + n;
        std::cerr << "unknown preset \"" << opt.preset << "\"; available presets: " << names
                  << "\n";
        return kExitValidation;
    }
    gente::GeneratedTerrain terrain = gente::load_terrain(opt.terrain_dir);
    if (!opt.physics_config.empty()) {
        const json doc = json::parse(read_text_file(opt.physics_config));
        const auto cfg = gente::physics::physics_config_from_json(doc);
        terrain.fluid.rho = cfg.fluid.rho;
        terrain.fluid.drag_coeff = cfg.fluid.drag_coeff;
        terrain.fluid.added_mass_coeff = cfg.fluid.added_mass_coeff;
        terrain.fluid.dyn_viscosity = cfg.fluid.dyn_viscosity;
        for (auto& [id, soil] : terrain.soil_regions) soil = cfg.soil;
    }

    gente::SimConfig config;
    config.dt = opt.dt;
    config.duration = opt.duration;
    config.seed = opt.seed;
    config.eps_std = opt.eps_std;
    config.xi_std = opt.xi_std;

    const gente::FootTrajectory trajectory =
        gente::make_preset_trajectory(*preset, terrain, config);
    const gente::ForceReport report = gente::run(terrain, config, trajectory);

    if (fs::path(opt.out_csv).has_parent_path())
        fs::create_directories(fs::path(opt.out_csv).parent_path());
    std::ofstream out(opt.out_csv, std::ios::trunc);
    if (!out) throw gente::IoError("cannot write " + opt.out_csv);
    report.write_csv(out);
    std::cout << json{{"report", opt.out_csv}, {"rows", report.rows.size()}}.dump(2) << "\n";
    return kExitOk;
}

struct AtlasOptions {
    std::string spec_dir;
    std::string out_dir = "atlas";
    std::vector<std::string> formats{"raw", "png"};
};

int run_atlas(const AtlasOptions& opt) {
    std::vector<fs::path> spec_files;
    if (!fs::is_directory(opt.spec_dir)) throw gente::IoError(opt.spec_dir + " is not a directory");
    for (const auto& entry : fs::directory_iterator(opt.spec_dir))
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            spec_files.push_back(entry.path());
    std::sort(spec_files.begin(), spec_files.end());
    if (spec_files.empty()) {
        std::cerr << "no .json spec files in " << opt.spec_dir << "\n";
        return kExitValidation;
    }

    json manifest{{"entries", json::array()}};
    int failures = 0;
    for (const auto& spec_path : spec_files) {
        json entry{{"spec", spec_path.string()}};
        try {
            const gente::TerrainSpec spec = load_spec_file(spec_path);
            const gente::GeneratedTerrain terrain = gente::compile(spec);
            const fs::path entry_dir = fs::path(opt.out_dir) / spec_path.stem();
            gente::export_terrain(terrain, entry_dir, gente::formats_from_list(opt.formats));
            entry["status"] = "ok";
            entry["seed"] = spec.global_seed;
            entry["out_dir"] = entry_dir.string();
            entry["hashes"] =
                json{{"heightmap_raw", gente::content_hash(entry_dir / "heightmap.raw")},
                     {"attributes_raw", gente::content_hash(entry_dir / "attributes.raw")}};
        } catch (const std::exception& e) {
            entry["status"] = "error";
            entry["error"] = e.what();
            ++failures;
        }
        manifest["entries"].push_back(std::move(entry));
    }
    manifest["failures"] = failures;

    fs::create_directories(opt.out_dir);
    const fs::path manifest_path = fs::path(opt.out_dir) / "manifest.json";
    std::ofstream out(manifest_path, std::ios::trunc);
    out << manifest.dump(2) << "\n";
    std::cout << json{{"manifest", manifest_path.string()},
                      {"entries", manifest["entries"].size()},
                      {"failures", failures}}
                     .dump(2)
              << "\n";
    return failures == 0 ? kExitOk : kExitValidation;
}

struct RenderOptions {
    std::string in_dir;
    std::string out_png = "preview.png";
};

int run_render(const RenderOptions& opt) {
    const gente::HeightMap map = gente::load_heightmap(opt.in_dir);
    gente::write_render_png(map, opt.out_png);
    std::cout << json{{"png", opt.out_png}}.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"terrain generation and force-model harness"};
    app.require_subcommand(1);

    GenOptions gen_opt;
    auto* gen = app.add_subcommand("gen", "compile a spec file and export the terrain");
    gen->add_option("spec", gen_opt.spec_path, "terrain spec JSON file")->required();
    gen->add_option("--out", gen_opt.out_dir, "output directory");
    gen->add_option("--formats", gen_opt.formats, "export formats (raw, png, csv)")
        ->delimiter(',');

    auto* schemas = app.add_subcommand("schemas", "print the tool schemas as JSON");
    std::string schemas_out;
    schemas->add_option("--out", schemas_out, "write to a file instead of stdout");

    PromptOptions prompt_opt;
    auto* prompt =
        app.add_subcommand("prompt", "generate a terrain from a text prompt or image via a VLM");
    prompt->add_option("text", prompt_opt.text, "text description of the terrain");
    prompt->add_option("--image", prompt_opt.image_path, "image file to describe");
    prompt->add_option("--api-url", prompt_opt.api_url, "endpoint base URL (env GENTE_API_URL)");
    prompt->add_option("--api-key", prompt_opt.api_key, "API key (env GENTE_API_KEY)");
    prompt->add_option("--model", prompt_opt.model, "model name (env GENTE_MODEL)");
    prompt->add_option("--max-retries", prompt_opt.max_retries, "correction turns after attempt 1");
    prompt->add_option("--timeout", prompt_opt.timeout_s, "request timeout, seconds");
    auto* seed_opt = prompt->add_option("--seed", prompt_opt.seed, "override the spec global seed");
    prompt->add_option("--out", prompt_opt.out_dir, "output directory");
    prompt->add_option("--formats", prompt_opt.formats, "export formats (raw, png, csv)")
        ->delimiter(',');

    HarnessOptions harness_opt;
    auto* harness =
        app.add_subcommand("harness", "run a trajectory preset over a compiled terrain");
    harness->add_option("--terrain", harness_opt.terrain_dir, "directory with exported terrain")
        ->required();
    harness->add_option("--preset", harness_opt.preset, "trajectory preset name");
    harness->add_option("--out", harness_opt.out_csv, "force report CSV path");
    harness->add_option("--dt", harness_opt.dt, "step size, seconds");
    harness->add_option("--duration", harness_opt.duration, "run length, seconds");
    harness->add_option("--seed", harness_opt.seed, "noise seed");
    harness->add_option("--eps-std", harness_opt.eps_std, "episode noise std (0 disables)");
    harness->add_option("--xi-std", harness_opt.xi_std, "step noise std (0 disables)");
    harness->add_option("--physics-config", harness_opt.physics_config,
                        "JSON physics config overriding terrain-bound parameters");

    AtlasOptions atlas_opt;
    auto* atlas = app.add_subcommand("atlas", "compile every spec in a directory with a manifest");
    atlas->add_option("--specs", atlas_opt.spec_dir, "directory of spec files")->required();
    atlas->add_option("--out", atlas_opt.out_dir, "output directory");
    atlas->add_option("--formats", atlas_opt.formats, "export formats (raw, png, csv)")
        ->delimiter(',');

    RenderOptions render_opt;
    auto* render = app.add_subcommand("render", "grayscale preview PNG (darker = higher)");
    render->add_option("--in", render_opt.in_dir, "directory with heightmap.raw/.json")
        ->required();
    render->add_option("--out", render_opt.out_png, "output PNG path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) return run_gen(gen_opt);
        if (schemas->parsed()) {
            const std::string doc = gente::export_function_schemas().dump(2) + "\n";
            if (schemas_out.empty()) {
                std::cout << doc;
            } else {
                std::ofstream out(schemas_out, std::ios::trunc);
                if (!out) throw gente::IoError("cannot write " + schemas_out);
                out << doc;
            }
            return kExitOk;
        }
        if (prompt->parsed()) {
            if (prompt_opt.text.empty() == prompt_opt.image_path.empty()) {
                std::cerr << "provide exactly one of a text prompt or --image\n";
                return kExitValidation;
            }
            prompt_opt.seed_set = seed_opt->count() > 0;
            return run_prompt(prompt_opt);
        }
        if (harness->parsed()) return run_harness(harness_opt);
        if (atlas->parsed()) return run_atlas(atlas_opt);
        if (render->parsed()) return run_render(render_opt);
    } catch (const gente::SpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::out_of_range& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const gente::SaturationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const gente::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const gente::NetworkError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitOk;
}
