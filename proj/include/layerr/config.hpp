#pragma once

#include "layerr/estimates.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace layerr {

struct SurfaceSpec {
    std::string shape = "sphere"; // sphere | spheroid | blob
    double radius = 1.0;          // sphere
    double a = 1.0, b = 3.0;      // spheroid semi-axes (equatorial, polar)
    ThetaMapKind theta_map = ThetaMapKind::Cosine;
};

Surface make_surface(const SurfaceSpec& spec);

enum class TargetKind { Plane, RadialSweep, Random, Shell, Explicit };

const char* to_string(TargetKind kind);

struct TargetSpec {
    TargetKind kind = TargetKind::Plane;
    // plane: points with coordinate `axis` = offset, the other two in [-extent, extent]
    char axis = 'y';
    double offset = 0.0;
    double extent = 1.5;
    int resolution = 41;
    // radial-sweep: surface point gamma(theta, 0) pushed out by distance d along the radial direction
    std::vector<double> distances;
    std::vector<double> angles;
    // random: s * gamma(direction) with s uniform in [r_min, r_max] ("surface"),
    // or radius uniform in the shell [r_min, r_max] * scale about the origin ("centroid")
    int count = 100;
    double r_min = 1.02, r_max = 2.0;
    std::string relative_to = "surface";
    unsigned long long seed = 0;
    bool has_seed = false;
    double reject_distance = 1e-3;
    // shell: sphere of the given radius, resolution x 2 resolution points
    double shell_radius = 1.0;
    // explicit
    std::vector<Vec3> points;
};

struct OutputSpec {
    std::string path; // empty means stdout
    bool timing = false;
};

struct ExperimentConfig {
    std::string name;
    SurfaceSpec surface;
    KernelSpec kernel;
    DensitySpec density;
    int n_t = 30;
    int n_phi = 60;
    TargetSpec targets;
    ConeParams cone;
    OutputSpec output;
};

/// Parses the INI form. Throws ConfigError naming the line or the section.key at fault.
ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>");
ExperimentConfig parse_config_string(const std::string& text, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

/// Validates cross-field constraints. Throws ConfigError.
void validate(const ExperimentConfig& config);

std::string to_ini(const ExperimentConfig& config);

std::vector<std::string> preset_names();
ExperimentConfig preset(const std::string& name); // throws ConfigError for unknown names

} // namespace layerr
