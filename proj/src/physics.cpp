#include "gente/physics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "gente/errors.hpp"

namespace gente::physics {

using nlohmann::json;

const char* flow_kind_name(FlowKind kind) {
    switch (kind) {
        case FlowKind::Still: return "still";
        case FlowKind::Current: return "current";
        case FlowKind::Tide: return "tide";
    }
    return "still";
}

FlowKind flow_kind_from_name(const std::string& name) {
    if (name == "still") return FlowKind::Still;
    if (name == "current") return FlowKind::Current;
    if (name == "tide") return FlowKind::Tide;
    throw std::invalid_argument("unknown flow kind: " + name);
}

void FluidParams::validate() const {
    if (!(rho > 0.0)) throw std::invalid_argument("fluid.rho must be positive");
    if (!(dyn_viscosity > 0.0)) throw std::invalid_argument("fluid.dyn_viscosity must be positive");
    if (drag_coeff < 0.82 || drag_coeff > 1.0)
        throw std::invalid_argument("fluid.drag_coeff must be within [0.82, 1.0], got " +
                                    std::to_string(drag_coeff));
    if (added_mass_coeff < 0.0)
        throw std::invalid_argument("fluid.added_mass_coeff must be >= 0");
    if (current_amplitude < 0.0 || tide_amplitude < 0.0)
        throw std::invalid_argument("fluid flow amplitudes must be >= 0");
}

void SoilParams::validate() const {
    if (!(bulldozing_coeff > 0.0)) throw std::invalid_argument("soil.bulldozing_coeff must be positive");
    if (!(bulldozing_exp > 0.0)) throw std::invalid_argument("soil.bulldozing_exp must be positive");
    if (!(friction_coeff > 0.0)) throw std::invalid_argument("soil.friction_coeff must be positive");
    if (!(presliding_scale > 0.0)) throw std::invalid_argument("soil.presliding_scale must be positive");
}

double projected_area(double radius, double submerged_length) {
    if (radius < 0.0 || submerged_length < 0.0)
        throw std::invalid_argument("projected_area: radius and submerged_length must be >= 0");
    return 2.0 * std::numbers::pi * radius * submerged_length;
}

double drag_force(double eps, const FluidParams& fluid, double area, double speed) {
    if (area < 0.0) throw std::invalid_argument("drag_force: area must be >= 0");
    return 0.5 * eps * fluid.drag_coeff * fluid.rho * area * speed * speed;
}

double reynolds(double rho, double speed, double char_length, double dyn_viscosity) {
    if (!(dyn_viscosity > 0.0))
        throw std::invalid_argument("reynolds: dyn_viscosity must be positive");
    return rho * speed * char_length / dyn_viscosity;
}

bool is_turbulent(double re) { return re > 4000.0; }

double submerged_volume(double radius, double submerged_length) {
    if (radius < 0.0 || submerged_length < 0.0)
        throw std::invalid_argument("submerged_volume: radius and submerged_length must be >= 0");
    return std::numbers::pi * radius * radius * submerged_length;
}

double added_mass(const FluidParams& fluid, double submerged_vol) {
    if (submerged_vol < 0.0) throw std::invalid_argument("added_mass: volume must be >= 0");
    return fluid.added_mass_coeff * fluid.rho * submerged_vol;
}

double effective_mass(double eps, double body_mass, const FluidParams& fluid,
                      double v_left, double v_right) {
    if (!(body_mass > 0.0)) throw std::invalid_argument("effective_mass: body_mass must be positive");
    if (v_left < 0.0 || v_right < 0.0)
        throw std::invalid_argument("effective_mass: volumes must be >= 0");
    const double m_eff =
        eps * (body_mass + (fluid.added_mass_coeff - 1.0) * fluid.rho * (v_left + v_right));
    if (m_eff <= 0.0)
        throw SaturationError("effective mass " + std::to_string(m_eff) +
                              " kg not positive: robot fully buoyant");
    return m_eff;
}

double flow_force(const FluidParams& fluid, double t, double xi) {
    switch (fluid.flow_kind) {
        case FlowKind::Still: return 0.0;
        case FlowKind::Current: return xi * fluid.current_amplitude;
        case FlowKind::Tide:
            return xi * fluid.tide_amplitude * std::cos(fluid.tide_omega * t + fluid.tide_phase);
    }
    return 0.0;
}

double bulldozing_resistance(const SoilParams& soil, double sinkage) {
    if (sinkage < 0.0) throw std::invalid_argument("bulldozing_resistance: sinkage must be >= 0");
    if (sinkage == 0.0) return 0.0;
    return soil.bulldozing_coeff * std::pow(sinkage, soil.bulldozing_exp);
}

double friction_force(const SoilParams& soil, double normal_load, double shear_displacement) {
    if (normal_load < 0.0 || shear_displacement < 0.0)
        throw std::invalid_argument("friction_force: normal_load and displacement must be >= 0");
    if (soil.presliding_scale == 0.0)
        throw std::invalid_argument("friction_force: presliding_scale must be nonzero");
    return soil.friction_coeff * normal_load *
           (1.0 - std::exp(-shear_displacement / soil.presliding_scale));
}

double horizontal_force(int wading_flag, int deformable_flag, double xi,
                        double drag, double flow, double bulldozing, double friction) {
    if ((wading_flag != 0 && wading_flag != 1) || (deformable_flag != 0 && deformable_flag != 1))
        throw std::invalid_argument("horizontal_force: flags must be binary");
    return xi * wading_flag * (drag + flow) + xi * deformable_flag * (bulldozing + friction);
}

double sample_noise(const NoiseSpec& spec, SplitMix64& rng) {
    if (spec.std_dev == 0.0) return spec.mean;
    if (spec.std_dev < 0.0) throw std::invalid_argument("sample_noise: std_dev must be >= 0");
    for (;;) {
        // Box-Muller, cosine branch only to keep the stream one-draw-per-pair
        const double u1 = rng.next_double();
        const double u2 = rng.next_double();
        const double z = std::sqrt(-2.0 * std::log(1.0 - u1)) *
                         std::cos(2.0 * std::numbers::pi * u2);
        if (std::abs(z) <= spec.truncation_sigmas) return spec.mean + spec.std_dev * z;
    }
}

namespace {

double jitter_factor(double rel_std, SplitMix64& rng) {
    NoiseSpec spec;
    spec.std_dev = rel_std;
    return sample_noise(spec, rng);
}

}  // namespace

FluidParams jittered(const FluidParams& params, double rel_std, SplitMix64& rng) {
    if (rel_std < 0.0) throw std::invalid_argument("jittered: rel_std must be >= 0");
    FluidParams out = params;
    if (rel_std == 0.0) return out;
    out.rho = std::max(1.0, params.rho * jitter_factor(rel_std, rng));
    out.drag_coeff = std::clamp(params.drag_coeff * jitter_factor(rel_std, rng), 0.82, 1.0);
    out.added_mass_coeff = std::max(0.0, params.added_mass_coeff * jitter_factor(rel_std, rng));
    out.dyn_viscosity = std::max(1e-6, params.dyn_viscosity * jitter_factor(rel_std, rng));
    out.current_amplitude = std::max(0.0, params.current_amplitude * jitter_factor(rel_std, rng));
    out.tide_amplitude = std::max(0.0, params.tide_amplitude * jitter_factor(rel_std, rng));
    return out;
}

SoilParams jittered(const SoilParams& params, double rel_std, SplitMix64& rng) {
    if (rel_std < 0.0) throw std::invalid_argument("jittered: rel_std must be >= 0");
    SoilParams out = params;
    if (rel_std == 0.0) return out;
    out.bulldozing_coeff = std::max(1e-6, params.bulldozing_coeff * jitter_factor(rel_std, rng));
    out.bulldozing_exp = std::max(1e-3, params.bulldozing_exp * jitter_factor(rel_std, rng));
    out.friction_coeff = std::max(1e-3, params.friction_coeff * jitter_factor(rel_std, rng));
    out.presliding_scale = std::max(1e-6, params.presliding_scale * jitter_factor(rel_std, rng));
    return out;
}

namespace {

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known,
                         const char* section) {
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (const char* k : known)
            if (key == k) { ok = true; break; }
        if (!ok)
            throw std::invalid_argument(std::string(section) + ": unknown key \"" + key + "\"");
    }
}

template <typename T>
void read_if(const json& j, const char* key, T& out) {
    if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

}  // namespace

FluidParams fluid_from_json(const json& j) {
    reject_unknown_keys(j,
                        {"rho", "drag_coeff", "added_mass_coeff", "dyn_viscosity", "flow_kind",
                         "current_amplitude", "tide_amplitude", "tide_omega", "tide_phase",
                         "water_level"},
                        "fluid");
    FluidParams p;
    read_if(j, "rho", p.rho);
    read_if(j, "drag_coeff", p.drag_coeff);
    read_if(j, "added_mass_coeff", p.added_mass_coeff);
    read_if(j, "dyn_viscosity", p.dyn_viscosity);
    if (auto it = j.find("flow_kind"); it != j.end())
        p.flow_kind = flow_kind_from_name(it->get<std::string>());
    read_if(j, "current_amplitude", p.current_amplitude);
    read_if(j, "tide_amplitude", p.tide_amplitude);
    read_if(j, "tide_omega", p.tide_omega);
    read_if(j, "tide_phase", p.tide_phase);
    read_if(j, "water_level", p.water_level);
    p.validate();
    return p;
}

json fluid_to_json(const FluidParams& p) {
    return json{{"rho", p.rho},
                {"drag_coeff", p.drag_coeff},
                {"added_mass_coeff", p.added_mass_coeff},
                {"dyn_viscosity", p.dyn_viscosity},
                {"flow_kind", flow_kind_name(p.flow_kind)},
                {"current_amplitude", p.current_amplitude},
                {"tide_amplitude", p.tide_amplitude},
                {"tide_omega", p.tide_omega},
                {"tide_phase", p.tide_phase},
                {"water_level", p.water_level}};
}

SoilParams soil_from_json(const json& j) {
    reject_unknown_keys(
        j, {"bulldozing_coeff", "bulldozing_exp", "friction_coeff", "presliding_scale"}, "soil");
    SoilParams p;
    read_if(j, "bulldozing_coeff", p.bulldozing_coeff);
    read_if(j, "bulldozing_exp", p.bulldozing_exp);
    read_if(j, "friction_coeff", p.friction_coeff);
    read_if(j, "presliding_scale", p.presliding_scale);
    p.validate();
    return p;
}

json soil_to_json(const SoilParams& p) {
    return json{{"bulldozing_coeff", p.bulldozing_coeff},
                {"bulldozing_exp", p.bulldozing_exp},
                {"friction_coeff", p.friction_coeff},
                {"presliding_scale", p.presliding_scale}};
}

NoiseSpec noise_from_json(const json& j) {
    reject_unknown_keys(j, {"mean", "std_dev", "truncation_sigmas", "seed"}, "noise");
    NoiseSpec p;
    read_if(j, "mean", p.mean);
    read_if(j, "std_dev", p.std_dev);
    read_if(j, "truncation_sigmas", p.truncation_sigmas);
    read_if(j, "seed", p.seed);
    if (p.std_dev < 0.0) throw std::invalid_argument("noise.std_dev must be >= 0");
    if (!(p.truncation_sigmas > 0.0))
        throw std::invalid_argument("noise.truncation_sigmas must be positive");
    return p;
}

json noise_to_json(const NoiseSpec& p) {
    return json{{"mean", p.mean},
                {"std_dev", p.std_dev},
                {"truncation_sigmas", p.truncation_sigmas},
                {"seed", p.seed}};
}

PhysicsConfig physics_config_from_json(const json& j) {
    reject_unknown_keys(j, {"fluid", "soil", "noise"}, "physics config");
    PhysicsConfig cfg;
    if (auto it = j.find("fluid"); it != j.end()) cfg.fluid = fluid_from_json(*it);
    if (auto it = j.find("soil"); it != j.end()) cfg.soil = soil_from_json(*it);
    if (auto it = j.find("noise"); it != j.end()) cfg.noise = noise_from_json(*it);
    return cfg;
}

json physics_config_to_json(const PhysicsConfig& cfg) {
    return json{{"fluid", fluid_to_json(cfg.fluid)},
                {"soil", soil_to_json(cfg.soil)},
                {"noise", noise_to_json(cfg.noise)}};
}

}  // namespace gente::physics
