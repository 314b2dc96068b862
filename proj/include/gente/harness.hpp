#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gente/physics.hpp"
#include "gente/terrain.hpp"

namespace gente {

// Kinematic run configuration. The harness drives prescribed foot
// trajectories; it does not integrate rigid-body dynamics.
struct SimConfig {
    double dt = 0.01;        // s
    double duration = 10.0;  // s
    std::uint64_t seed = 0;
    double body_mass = 30.0;  // kg
    double leg_radius = 0.05; // m
    double leg_length = 0.6;  // m
    double lever_arm = 0.5;   // center-of-mass height for torque conversion, m
    double gravity = 9.81;    // m/s^2
    double eps_std = 0.1;     // episode noise std (0 disables)
    double xi_std = 0.1;      // step noise std (0 disables)

    void validate() const;
};

struct FootSample {
    double x = 0, y = 0, z = 0;     // m
    double vx = 0, vy = 0, vz = 0;  // m/s
};

// Prescribed per-leg foot motion, sampled at dt.
struct FootTrajectory {
    std::array<std::vector<FootSample>, 2> legs;

    std::size_t steps() const { return legs[0].size(); }
};

struct TerrainSample {
    double elevation = 0.0;
    bool wading = false;
    bool deformable = false;
    double water_level = 0.0;
    int soil_region = 0;
};

// Elevation by bilinear interpolation of the four surrounding cells;
// attributes from the nearest cell. Throws std::out_of_range outside the
// map bounds.
TerrainSample query_terrain(const GeneratedTerrain& terrain, double x, double y);

// clamp(water_level - foot_z, 0, leg_length)
double submerged_length(double foot_z, double water_level, double leg_length);

// force * lever_arm, sign preserved
double torque_about_com(double horizontal_force, double lever_arm);

// tau = kp * (theta_d - theta) - kd * theta_dot
double pd_torque(double kp, double kd, double theta_d, double theta, double theta_dot);

struct LegStep {
    double h = 0.0;          // submerged length, m
    int wading = 0;          // effective flag: wading cell and submerged
    int deformable = 0;      // effective flag: deformable cell and in contact
    double drag = 0.0;       // magnitudes from the force kernels, N
    double flow = 0.0;
    double bulldozing = 0.0;
    double friction = 0.0;
    double horizontal = 0.0;  // flagged composition for this leg, N
};

struct ReportRow {
    double t = 0.0;
    double eps = 1.0;  // episode noise, constant across the run
    double xi = 1.0;   // step noise
    std::array<LegStep, 2> legs;
    double horizontal_total = 0.0;
    double torque_com = 0.0;
    double effective_mass = 0.0;
};

// Time-stamped force decomposition of a run. CSV column order is fixed:
// t,eps,xi, then for each leg (l_, r_) h,wading,deformable,drag,flow,
// bulldozing,friction,horizontal, then horizontal_total,torque_com,
// effective_mass.
struct ForceReport {
    std::vector<ReportRow> rows;

    static std::string csv_header();
    void write_csv(std::ostream& out) const;
    void write_jsonl(std::ostream& out) const;
};

// Stepwise evaluation of all force models over a terrain. Samples the
// episode noise once at construction; shear displacement accumulates per
// leg while in contact and resets on liftoff.
class Harness {
public:
    Harness(const GeneratedTerrain& terrain, const SimConfig& config);

    ReportRow step(const std::array<FootSample, 2>& feet, double t);
    double episode_noise() const { return eps_; }

private:
    const GeneratedTerrain& terrain_;
    SimConfig config_;
    double eps_;
    SplitMix64 xi_rng_;
    std::array<double, 2> shear_{0.0, 0.0};
    std::array<double, 2> prev_x_{0.0, 0.0};
    std::array<double, 2> prev_y_{0.0, 0.0};
    std::array<bool, 2> was_contact_{false, false};
};

// Runs the whole trajectory; deterministic per config seed.
ForceReport run(const GeneratedTerrain& terrain, const SimConfig& config,
                const FootTrajectory& trajectory);

enum class TrajectoryPreset { WalkInPlace, StraightWalk, Sinusoid };

std::optional<TrajectoryPreset> preset_from_name(std::string_view name);
std::vector<std::string> preset_names();

// Closed-form trajectory presets. Stance feet plant on the queried surface
// (sinking slightly into deformable cells); swing feet follow smooth lift
// profiles. Definitions are documented in the README.
FootTrajectory make_preset_trajectory(TrajectoryPreset preset, const GeneratedTerrain& terrain,
                                      const SimConfig& config);

}  // namespace gente
