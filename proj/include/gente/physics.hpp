#pragma once

#include <cstdint>

#include <nlohmann/json.hpp>

#include "gente/rng.hpp"

namespace gente::physics {

enum class FlowKind { Still, Current, Tide };

const char* flow_kind_name(FlowKind kind);
FlowKind flow_kind_from_name(const std::string& name);

// Fluid properties of a wading region. Defaults follow seawater at the
// 0.1 m leg-diameter reference case; the drag coefficient sits at the
// midpoint of the turbulent-cylinder range [0.82, 1.0].
struct FluidParams {
    double rho = 1025.0;             // water density, kg/m^3
    double drag_coeff = 0.9;         // C_d, dimensionless
    double added_mass_coeff = 0.5;   // C_m, dimensionless (~0.5 for cylinders)
    double dyn_viscosity = 0.0011;   // mu, Pa*s
    FlowKind flow_kind = FlowKind::Still;
    double current_amplitude = 0.0;  // N
    double tide_amplitude = 0.0;     // N
    double tide_omega = 0.0;         // rad/s
    double tide_phase = 0.0;         // rad
    double water_level = 0.0;        // m above the elevation datum

    void validate() const;  // throws std::invalid_argument
};

// Deformable-soil properties. The defaults are artifact choices for a
// sand-like surface and are overridable in every config surface.
struct SoilParams {
    double bulldozing_coeff = 1000.0;  // a, N/m^n
    double bulldozing_exp = 1.1;       // n, dimensionless
    double friction_coeff = 0.6;       // mu_f, dimensionless
    double presliding_scale = 0.01;    // K, m

    void validate() const;  // all strictly positive
};

// Instantaneous per-leg kinematic and contact state.
struct LegState {
    double radius = 0.05;            // r, m
    double submerged_length = 0.0;   // h(t), m
    double speed = 0.0;              // v(t), m/s
    double shear_displacement = 0.0; // x, m
    double sinkage = 0.0;            // z, m
    double normal_load = 0.0;        // F_N, N
};

// Truncated Gaussian multiplier spec; samples stay within
// [mean - truncation_sigmas * std_dev, mean + truncation_sigmas * std_dev].
struct NoiseSpec {
    double mean = 1.0;
    double std_dev = 0.1;
    double truncation_sigmas = 3.0;
    std::uint64_t seed = 0;
};

// A(t) = 2*pi*r*h(t), the leg area projected perpendicular to the flow.
double projected_area(double radius, double submerged_length);

// F_d = 1/2 * eps * C_d * rho * A * v^2. Returns a magnitude; the caller
// applies it opposite the leg's velocity.
double drag_force(double eps, const FluidParams& fluid, double area, double speed);

// Re = rho * v * L / mu.
double reynolds(double rho, double speed, double char_length, double dyn_viscosity);

// Turbulent regime above Re = 4000, where C_d is roughly constant.
bool is_turbulent(double re);

// V_sub = pi * r^2 * h.
double submerged_volume(double radius, double submerged_length);

// m_added = C_m * rho * V_sub.
double added_mass(const FluidParams& fluid, double submerged_vol);

// Net vertical fluid effect folded into the body mass:
// m_eff = eps * (m + (C_m - 1) * rho * (V_left + V_right)).
// Throws SaturationError when the result is not positive.
double effective_mass(double eps, double body_mass, const FluidParams& fluid,
                      double v_left, double v_right);

// Flow force by kind: still -> 0, current -> xi * F_current,
// tide -> xi * F_tide * cos(omega * t + phase).
double flow_force(const FluidParams& fluid, double t, double xi);

// F_B = a * z^n, soil piling against a sunken foot. Magnitude; opposes the
// foot velocity.
double bulldozing_resistance(const SoilParams& soil, double sinkage);

// F_mu = mu_f * F_N * (1 - e^(-x/K)): pre-sliding rise toward the gross
// sliding asymptote mu_f * F_N.
double friction_force(const SoilParams& soil, double normal_load, double shear_displacement);

// Flagged composition of the horizontal force families:
// xi * 1_w * (drag + flow) + xi * 1_d * (bulldozing + friction).
double horizontal_force(int wading_flag, int deformable_flag, double xi,
                        double drag, double flow, double bulldozing, double friction);

// One truncated Gaussian sample. Pure in (spec, rng state); resamples until
// the draw falls inside the truncation band.
double sample_noise(const NoiseSpec& spec, SplitMix64& rng);

// Multiplicative Gaussian jitter (relative std, truncated at 3 sigma) on the
// physical material parameters, floored at their validity bounds.
FluidParams jittered(const FluidParams& params, double rel_std, SplitMix64& rng);
SoilParams jittered(const SoilParams& params, double rel_std, SplitMix64& rng);

// JSON config section {"fluid": {...}, "soil": {...}, "noise": {...}}.
// Unknown keys are rejected.
struct PhysicsConfig {
    FluidParams fluid;
    SoilParams soil;
    NoiseSpec noise;
};

FluidParams fluid_from_json(const nlohmann::json& j);
nlohmann::json fluid_to_json(const FluidParams& p);
SoilParams soil_from_json(const nlohmann::json& j);
nlohmann::json soil_to_json(const SoilParams& p);
NoiseSpec noise_from_json(const nlohmann::json& j);
nlohmann::json noise_to_json(const NoiseSpec& p);
PhysicsConfig physics_config_from_json(const nlohmann::json& j);
nlohmann::json physics_config_to_json(const PhysicsConfig& cfg);

}  // namespace gente::physics
