#include "layerr/config.hpp"
#include "layerr/errors.hpp"
#include "layerr/experiment.hpp"
#include "layerr/quadrature.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kValidationFailure = 2;

std::ostream& open_output(const std::string& path, std::ofstream& file)
{
    if (path.empty()) return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw layerr::ConfigError("cannot open '" + path + "' for writing");
    return file;
}

void print_rule(const layerr::quad::Rule1D& rule)
{
    std::printf("i,node,weight\n");
    for (int i = 0; i < rule.n; ++i) std::printf("%d,%.17g,%.17g\n", i, rule.nodes[i], rule.weights[i]);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Quadrature error estimates for layer potentials on spherical-topology surfaces"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run an experiment described by a config file");
    std::string config_path, run_out;
    run->add_option("config", config_path, "INI config file")->required();
    run->add_option("--out", run_out, "CSV output path (overrides output.path)");

    auto* preset = app.add_subcommand("preset", "Run a named preset");
    std::string preset_name, preset_out;
    bool print_config = false, list_presets = false;
    preset->add_option("name", preset_name, "Preset name");
    preset->add_option("--out", preset_out, "CSV output path (stdout when omitted)");
    preset->add_flag("--print-config", print_config, "Print the preset as a config file instead of running it");
    preset->add_flag("--list", list_presets, "List preset names");

    auto* sweep = app.add_subcommand("sphere-sweep", "Measured error vs the simplified sphere estimate");
    layerr::SweepOptions sweep_opts;
    std::string sweep_out;
    sweep->add_option("--a", sweep_opts.a, "Sphere radius")->capture_default_str();
    sweep->add_option("--p", sweep_opts.p, "Kernel exponent (only 0.5)")->capture_default_str();
    sweep->add_option("--n", sweep_opts.n_values, "Even point counts n = n_phi = 2 n_t")->delimiter(',');
    sweep->add_option("--d", sweep_opts.distances, "Signed distances to the sphere")->delimiter(',');
    sweep->add_option("--theta-samples", sweep_opts.theta_samples)->capture_default_str();
    sweep->add_option("--phi-samples", sweep_opts.phi_samples)->capture_default_str();
    sweep->add_option("--out", sweep_out, "CSV output path (stdout when omitted)");

    auto* roots = app.add_subcommand("roots-check", "Compare closed-form roots with Newton iteration");
    layerr::SurfaceSpec roots_surface;
    std::string roots_map = "cosine";
    int roots_samples = 200;
    unsigned long long roots_seed = 1;
    roots->add_option("--surface", roots_surface.shape, "sphere|spheroid|blob")->capture_default_str();
    roots->add_option("--radius", roots_surface.radius)->capture_default_str();
    roots->add_option("--a", roots_surface.a)->capture_default_str();
    roots->add_option("--b", roots_surface.b)->capture_default_str();
    roots->add_option("--map", roots_map, "linear|cosine")->capture_default_str();
    roots->add_option("--samples", roots_samples)->capture_default_str();
    roots->add_option("--seed", roots_seed)->capture_default_str();

    auto* nodes = app.add_subcommand("nodes", "Print quadrature nodes and weights");
    std::string rule_name;
    int rule_n = 0;
    nodes->add_option("--rule", rule_name, "gl|tz|laguerre")->required()->check(CLI::IsMember({"gl", "tz", "laguerre"}));
    nodes->add_option("--n", rule_n, "Number of nodes")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*run) {
            layerr::ExperimentConfig config = layerr::load_config(config_path);
            if (!run_out.empty()) config.output.path = run_out;
            layerr::run_experiment(config, std::cout);
        } else if (*preset) {
            if (list_presets) {
                for (const auto& n : layerr::preset_names()) std::cout << n << "\n";
                return kOk;
            }
            if (preset_name.empty()) throw layerr::ConfigError("preset: a name is required (see --list)");
            layerr::ExperimentConfig config = layerr::preset(preset_name);
            config.output.path = preset_out;
            if (print_config) {
                std::cout << layerr::to_ini(config);
                return kOk;
            }
            layerr::run_experiment(config, std::cout);
        } else if (*sweep) {
            const auto rows = layerr::sphere_sweep(sweep_opts);
            std::ofstream file;
            layerr::write_sweep_csv(open_output(sweep_out, file), rows);
        } else if (*roots) {
            try {
                roots_surface.theta_map = layerr::parse_theta_map(roots_map);
            } catch (const std::invalid_argument& e) {
                throw layerr::ConfigError(std::string("--map: ") + e.what());
            }
            const auto report = layerr::roots_check(roots_surface, roots_samples, roots_seed);
            layerr::write_report(std::cout, report);
            return report.passed ? kOk : kValidationFailure;
        } else if (*nodes) {
            using namespace layerr::quad;
            try {
                print_rule(rule_name == "gl" ? gauss_legendre(rule_n)
                                             : rule_name == "tz" ? trapezoidal(rule_n) : gauss_laguerre(rule_n));
            } catch (const std::invalid_argument& e) {
                throw layerr::ConfigError(std::string("--n: ") + e.what());
            }
        }
    } catch (const layerr::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidationFailure;
    }
    return kOk;
}
