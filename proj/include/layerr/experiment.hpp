#pragma once

#include "layerr/config.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace layerr {

/// Worker count from LAYERR_THREADS, else the hardware concurrency (at least 1).
int thread_count();

/// Runs fn(i) for i in [0, count) on a pool of `threads` workers.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

std::vector<Vec3> generate_targets(const ExperimentConfig& config, const Surface& surface, const GridGeometry& grid);

struct PointResult {
    Vec3 x;
    double distance_to_grid = 0.0;
    double e_q = 0.0;
    double e_est = 0.0;
    double e_tz = 0.0;
    double e_gl = 0.0;
    bool tz_skipped = false;
    double t_star = 0.0;
    double phi_star = 0.0;
    double runtime_us = 0.0;
    std::string error; // empty on success
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<PointResult> points;
};

ExperimentResult run_points(const ExperimentConfig& config, int threads = 0);
ExperimentResult run_points(const ExperimentConfig& config, const std::vector<Vec3>& targets, int threads = 0);

void write_csv(std::ostream& out, const ExperimentResult& result);
std::string csv_field(const std::string& value); // RFC-4180 quoting

/// Runs the experiment and writes its CSV to config.output.path, or to `fallback` when the path is empty.
ExperimentResult run_experiment(const ExperimentConfig& config, std::ostream& fallback, int threads = 0);

struct SweepRow {
    int n = 0;
    double d = 0.0;
    double e_q_min = 0.0;
    double e_q_max = 0.0;
    double e_simplified = 0.0;
};

struct SweepOptions {
    double a = 1.0;
    double p = 0.5;
    std::vector<int> n_values{60};
    std::vector<double> distances{0.1};
    int theta_samples = 24;
    int phi_samples = 3;
};

/// Harmonic single layer, unit density, cosine map, n_t = n/2 and n_phi = n.
/// Measured errors at surface-parallel points with phi in [0, pi/n_phi].
std::vector<SweepRow> sphere_sweep(const SweepOptions& options, int threads = 0);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

struct RootsCheckReport {
    std::string surface;
    int samples = 0;
    bool residual_only = false;
    double max_deviation = 0.0;
    double max_residual = 0.0; // |R^2| / scale^2
    double min_lambda_minus_one = 0.0;
    int failures = 0;
    std::string first_failure;
    double deviation_threshold = 1e-10;
    double residual_threshold = 1e-10;
    bool passed = false;
};

/// Compares closed-form roots with Newton (sphere: theta and phi roots;
/// spheroid: phi roots) or checks Newton residuals only (blob).
RootsCheckReport roots_check(const SurfaceSpec& surface, int samples, unsigned long long seed);
void write_report(std::ostream& out, const RootsCheckReport& report);

} // namespace layerr
