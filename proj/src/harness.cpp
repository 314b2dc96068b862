#include "gente/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "gente/errors.hpp"
#include "gente/rng.hpp"

namespace gente {

void SimConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("sim.dt must be positive");
    if (duration < dt) throw std::invalid_argument("sim.duration must be >= dt");
    if (!(body_mass > 0.0) || !(leg_radius > 0.0) || !(leg_length > 0.0) || !(lever_arm > 0.0))
        throw std::invalid_argument("sim physical parameters must be positive");
    if (eps_std < 0.0 || xi_std < 0.0)
        throw std::invalid_argument("sim noise stds must be >= 0");
}

TerrainSample query_terrain(const GeneratedTerrain& terrain, double x, double y) {
    const HeightMap& map = terrain.heightmap;
    if (x < 0.0 || y < 0.0 || x > map.extent_x() || y > map.extent_y())
        throw std::out_of_range("query_terrain: (" + std::to_string(x) + ", " + std::to_string(y) +
                                ") outside map extent " + std::to_string(map.extent_x()) + " x " +
                                std::to_string(map.extent_y()));
    const double gx = x / map.cell_size;
    const double gy = y / map.cell_size;
    const int ix = std::min(static_cast<int>(gx), map.width - 2);
    const int iy = std::min(static_cast<int>(gy), map.height - 2);
    const double fx = gx - ix;
    const double fy = gy - iy;
    const double v00 = map.at(ix, iy), v10 = map.at(ix + 1, iy);
    const double v01 = map.at(ix, iy + 1), v11 = map.at(ix + 1, iy + 1);
    TerrainSample sample;
    sample.elevation = (v00 * (1 - fx) + v10 * fx) * (1 - fy) + (v01 * (1 - fx) + v11 * fx) * fy;

    const int ax = std::clamp(static_cast<int>(std::lround(gx)), 0, map.width - 1);
    const int ay = std::clamp(static_cast<int>(std::lround(gy)), 0, map.height - 1);
    sample.wading = terrain.attributes.wading(ax, ay);
    sample.deformable = terrain.attributes.deformable(ax, ay);
    sample.water_level = terrain.attributes.water_level_at(ax, ay);
    sample.soil_region = terrain.attributes.soil_region(ax, ay);
    return sample;
}

double submerged_length(double foot_z, double water_level, double leg_length) {
    if (!(leg_length > 0.0)) throw std::invalid_argument("submerged_length: leg_length must be positive");
    return std::clamp(water_level - foot_z, 0.0, leg_length);
}

double torque_about_com(double horizontal_force, double lever_arm) {
    if (!(lever_arm > 0.0)) throw std::invalid_argument("torque_about_com: lever_arm must be positive");
    return horizontal_force * lever_arm;
}

double pd_torque(double kp, double kd, double theta_d, double theta, double theta_dot) {
    if (kp < 0.0 || kd < 0.0) throw std::invalid_argument("pd_torque: gains must be >= 0");
    return kp * (theta_d - theta) - kd * theta_dot;
}

Harness::Harness(const GeneratedTerrain& terrain, const SimConfig& config)
    : terrain_(terrain), config_(config), xi_rng_(child_seed(config.seed, 1)) {
    config_.validate();
    physics::NoiseSpec eps_spec;
    eps_spec.std_dev = config_.eps_std;
    SplitMix64 eps_rng(child_seed(config_.seed, 0));
    eps_ = physics::sample_noise(eps_spec, eps_rng);  // once per simulation period
}

ReportRow Harness::step(const std::array<FootSample, 2>& feet, double t) {
    ReportRow row;
    row.t = t;
    row.eps = eps_;

    physics::NoiseSpec xi_spec;
    xi_spec.std_dev = config_.xi_std;
    row.xi = physics::sample_noise(xi_spec, xi_rng_);

    std::array<TerrainSample, 2> samples;
    std::array<bool, 2> contact{};
    std::array<double, 2> volumes{};
    for (int i = 0; i < 2; ++i) {
        const FootSample& foot = feet[i];
        samples[i] = query_terrain(terrain_, foot.x, foot.y);
        LegStep& leg = row.legs[i];
        leg.h = samples[i].wading
                    ? submerged_length(foot.z, samples[i].water_level, config_.leg_length)
                    : 0.0;
        leg.wading = samples[i].wading && leg.h > 0.0 ? 1 : 0;
        contact[i] = foot.z <= samples[i].elevation + 1e-9;
        leg.deformable = samples[i].deformable && contact[i] ? 1 : 0;
        volumes[i] = physics::submerged_volume(config_.leg_radius, leg.h);

        // shear accumulates along the ground while in contact, resets on liftoff
        if (contact[i]) {
            if (was_contact_[i])
                shear_[i] += std::hypot(foot.x - prev_x_[i], foot.y - prev_y_[i]);
        } else {
            shear_[i] = 0.0;
        }
        was_contact_[i] = contact[i];
        prev_x_[i] = foot.x;
        prev_y_[i] = foot.y;
    }

    try {
        row.effective_mass =
            physics::effective_mass(eps_, config_.body_mass, terrain_.fluid, volumes[0], volumes[1]);
    } catch (const SaturationError& e) {
        throw SaturationError(std::string(e.what()) + " at t=" + std::to_string(t));
    }

    const int n_contact = (contact[0] ? 1 : 0) + (contact[1] ? 1 : 0);
    const double flow = physics::flow_force(terrain_.fluid, t, 1.0);

    for (int i = 0; i < 2; ++i) {
        const FootSample& foot = feet[i];
        LegStep& leg = row.legs[i];
        const double speed = std::hypot(foot.vx, foot.vy);
        const double area = physics::projected_area(config_.leg_radius, leg.h);
        leg.drag = physics::drag_force(eps_, terrain_.fluid, area, speed);
        leg.flow = flow;
        if (leg.deformable) {
            physics::SoilParams soil;
            if (auto it = terrain_.soil_regions.find(samples[i].soil_region);
                it != terrain_.soil_regions.end())
                soil = it->second;
            const double sinkage = std::max(0.0, samples[i].elevation - foot.z);
            const double normal_load = row.effective_mass * config_.gravity / n_contact;
            leg.bulldozing = physics::bulldozing_resistance(soil, sinkage);
            leg.friction = physics::friction_force(soil, normal_load, shear_[i]);
        }
        leg.horizontal = physics::horizontal_force(leg.wading, leg.deformable, row.xi, leg.drag,
                                                   leg.flow, leg.bulldozing, leg.friction);
        row.horizontal_total += leg.horizontal;
    }
    row.torque_com = torque_about_com(row.horizontal_total, config_.lever_arm);
    return row;
}

ForceReport run(const GeneratedTerrain& terrain, const SimConfig& config,
                const FootTrajectory& trajectory) {
    config.validate();
    const std::size_t steps = static_cast<std::size_t>(std::llround(config.duration / config.dt));
    if (trajectory.legs[0].size() != steps || trajectory.legs[1].size() != steps)
        throw std::invalid_argument("trajectory length " + std::to_string(trajectory.legs[0].size()) +
                                    " does not match duration/dt = " + std::to_string(steps));
    Harness harness(terrain, config);
    ForceReport report;
    report.rows.reserve(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * config.dt;
        try {
            report.rows.push_back(
                harness.step({trajectory.legs[0][k], trajectory.legs[1][k]}, t));
        } catch (const std::out_of_range& e) {
            throw std::out_of_range(std::string(e.what()) + " at t=" + std::to_string(t));
        }
    }
    return report;
}

std::string ForceReport::csv_header() {
    std::string header = "t,eps,xi";
    for (const char* leg : {"l", "r"}) {
        for (const char* col :
             {"h", "wading", "deformable", "drag", "flow", "bulldozing", "friction", "horizontal"})
            header += std::string(",") + leg + "_" + col;
    }
    return header + ",horizontal_total,torque_com,effective_mass";
}

namespace {

void append_num(std::string& line, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, ",%.17g", v);
    line += buf;
}

}  // namespace

void ForceReport::write_csv(std::ostream& out) const {
    out << csv_header() << "\n";
    for (const auto& row : rows) {
        char head[32];
        std::snprintf(head, sizeof head, "%.17g", row.t);
        std::string line = head;
        append_num(line, row.eps);
        append_num(line, row.xi);
        for (const auto& leg : row.legs) {
            append_num(line, leg.h);
            line += "," + std::to_string(leg.wading);
            line += "," + std::to_string(leg.deformable);
            append_num(line, leg.drag);
            append_num(line, leg.flow);
            append_num(line, leg.bulldozing);
            append_num(line, leg.friction);
            append_num(line, leg.horizontal);
        }
        append_num(line, row.horizontal_total);
        append_num(line, row.torque_com);
        append_num(line, row.effective_mass);
        out << line << "\n";
    }
}

void ForceReport::write_jsonl(std::ostream& out) const {
    for (const auto& row : rows) {
        nlohmann::json legs = nlohmann::json::array();
        for (const auto& leg : row.legs)
            legs.push_back(nlohmann::json{{"h", leg.h},
                                          {"wading", leg.wading},
                                          {"deformable", leg.deformable},
                                          {"drag", leg.drag},
                                          {"flow", leg.flow},
                                          {"bulldozing", leg.bulldozing},
                                          {"friction", leg.friction},
                                          {"horizontal", leg.horizontal}});
        out << nlohmann::json{{"t", row.t},
                              {"eps", row.eps},
                              {"xi", row.xi},
                              {"legs", std::move(legs)},
                              {"horizontal_total", row.horizontal_total},
                              {"torque_com", row.torque_com},
                              {"effective_mass", row.effective_mass}}
                   .dump()
            << "\n";
    }
}

std::optional<TrajectoryPreset> preset_from_name(std::string_view name) {
    if (name == "walk-in-place") return TrajectoryPreset::WalkInPlace;
    if (name == "straight-walk") return TrajectoryPreset::StraightWalk;
    if (name == "sinusoid") return TrajectoryPreset::Sinusoid;
    return std::nullopt;
}

std::vector<std::string> preset_names() { return {"walk-in-place", "straight-walk", "sinusoid"}; }

namespace {

constexpr double kGaitPeriod = 0.8;       // s
constexpr double kWalkSpeed = 1.0;        // m/s
constexpr double kStepLift = 0.1;         // m
constexpr double kSinkDepth = 0.02;       // m, prescribed penetration on deformable cells
constexpr double kSinusoidAmplitude = 0.3;          // m
constexpr double kSinusoidOmega = std::numbers::pi; // rad/s
constexpr double kFootSpread = 0.1;       // m, lateral offset per leg

// stance plant height: on the surface, sunk into deformable soil
double plant_height(const GeneratedTerrain& terrain, double x, double y) {
    const TerrainSample s = query_terrain(terrain, x, y);
    return s.elevation - (s.deformable ? kSinkDepth : 0.0);
}

}  // namespace

FootTrajectory make_preset_trajectory(TrajectoryPreset preset, const GeneratedTerrain& terrain,
                                      const SimConfig& config) {
    config.validate();
    const std::size_t steps = static_cast<std::size_t>(std::llround(config.duration / config.dt));
    const HeightMap& map = terrain.heightmap;
    const double cy = map.extent_y() / 2.0;
    FootTrajectory traj;

    for (int leg = 0; leg < 2; ++leg) {
        const double phase = leg == 0 ? 0.0 : 0.5;
        const double y = std::clamp(cy + (leg == 0 ? kFootSpread : -kFootSpread), 0.0,
                                    map.extent_y());
        auto& series = traj.legs[leg];
        series.reserve(steps);

        for (std::size_t k = 0; k < steps; ++k) {
            const double t = static_cast<double>(k) * config.dt;
            FootSample foot;
            foot.y = y;

            switch (preset) {
                case TrajectoryPreset::WalkInPlace: {
                    foot.x = std::clamp(map.extent_x() / 2.0, 0.0, map.extent_x());
                    const double u = t / kGaitPeriod + phase;
                    const double s = std::sin(2.0 * std::numbers::pi * u);
                    const double ground = plant_height(terrain, foot.x, foot.y);
                    if (s > 0.0) {
                        foot.z = ground + kStepLift * s;
                        foot.vz = kStepLift * 2.0 * std::numbers::pi / kGaitPeriod *
                                  std::cos(2.0 * std::numbers::pi * u);
                    } else {
                        foot.z = ground;
                    }
                    break;
                }
                case TrajectoryPreset::StraightWalk: {
                    const double stride = kWalkSpeed * kGaitPeriod;
                    const double x0 = 0.5;
                    const double u = t / kGaitPeriod + phase;
                    const double cycle = std::floor(u);
                    const double tau = u - cycle;
                    double x, vx = 0.0, lift = 0.0, vz = 0.0;
                    if (tau < 0.5) {
                        x = x0 + stride * cycle;
                    } else {
                        const double s = (tau - 0.5) * 2.0;
                        x = x0 + stride * (cycle + (1.0 - std::cos(std::numbers::pi * s)) / 2.0);
                        vx = stride * std::numbers::pi * std::sin(std::numbers::pi * s) /
                             kGaitPeriod;
                        lift = kStepLift * std::sin(std::numbers::pi * s);
                        vz = kStepLift * std::numbers::pi * std::cos(std::numbers::pi * s) * 2.0 /
                             kGaitPeriod;
                    }
                    const double x_max = map.extent_x() - 0.2;
                    if (x >= x_max) {
                        x = x_max;
                        vx = 0.0;
                        lift = 0.0;
                        vz = 0.0;
                    }
                    foot.x = x;
                    foot.vx = vx;
                    foot.z = plant_height(terrain, foot.x, foot.y) + lift;
                    foot.vz = vz;
                    break;
                }
                case TrajectoryPreset::Sinusoid: {
                    const double cx = map.extent_x() / 2.0;
                    foot.x = cx + kSinusoidAmplitude * std::sin(kSinusoidOmega * t);
                    foot.vx = kSinusoidAmplitude * kSinusoidOmega * std::cos(kSinusoidOmega * t);
                    foot.z = plant_height(terrain, foot.x, foot.y);
                    break;
                }
            }
            series.push_back(foot);
        }
    }
    return traj;
}

}  // namespace gente
