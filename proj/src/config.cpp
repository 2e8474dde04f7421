#include "layerr/config.hpp"

#include "layerr/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace layerr {

namespace pt = boost::property_tree;

Surface make_surface(const SurfaceSpec& spec)
{
    if (spec.shape == "sphere") return Surface::sphere(spec.radius, spec.theta_map);
    if (spec.shape == "spheroid") return Surface::spheroid(spec.a, spec.b, spec.theta_map);
    if (spec.shape == "blob") return Surface::blob(spec.theta_map);
    throw ConfigError("surface.shape: unknown shape '" + spec.shape + "' (expected sphere|spheroid|blob)");
}

const char* to_string(TargetKind kind)
{
    switch (kind) {
    case TargetKind::Plane: return "plane";
    case TargetKind::RadialSweep: return "radial-sweep";
    case TargetKind::Random: return "random";
    case TargetKind::Shell: return "shell";
    case TargetKind::Explicit: return "explicit";
    }
    return "?";
}

namespace {

const std::map<std::string, std::set<std::string>>& known_keys()
{
    static const std::map<std::string, std::set<std::string>> keys{
        {"experiment", {"name"}},
        {"surface", {"shape", "radius", "a", "b", "theta_map"}},
        {"kernel", {"name", "omega"}},
        {"density", {"name"}},
        {"grid", {"n_t", "n_phi"}},
        {"targets",
         {"kind", "axis", "offset", "extent", "resolution", "distances", "angles", "count", "r_min", "r_max",
          "relative_to", "seed", "reject_distance", "radius", "points"}},
        {"cone", {"A", "K_c"}},
        {"output", {"path", "timing"}},
    };
    return keys;
}

template <class T>
T get(const pt::ptree& tree, const std::string& section, const std::string& key, T fallback)
{
    const auto node = tree.get_child_optional(pt::ptree::path_type(section + "/" + key, '/'));
    if (!node) return fallback;
    const std::string raw = node->data();
    std::istringstream is(raw);
    T value{};
    is >> value;
    if (is.fail() || !(is >> std::ws).eof()) {
        throw ConfigError(section + "." + key + ": cannot parse '" + raw + "'");
    }
    return value;
}

template <>
std::string get<std::string>(const pt::ptree& tree, const std::string& section, const std::string& key,
                             std::string fallback)
{
    return tree.get<std::string>(pt::ptree::path_type(section + "/" + key, '/'), fallback);
}

template <>
bool get<bool>(const pt::ptree& tree, const std::string& section, const std::string& key, bool fallback)
{
    const std::string raw = get<std::string>(tree, section, key, fallback ? "true" : "false");
    if (raw == "true" || raw == "1" || raw == "yes" || raw == "on") return true;
    if (raw == "false" || raw == "0" || raw == "no" || raw == "off") return false;
    throw ConfigError(section + "." + key + ": expected a boolean, got '" + raw + "'");
}

std::vector<double> parse_list(const std::string& field, const std::string& raw)
{
    std::vector<double> out;
    std::string item;
    std::istringstream is(raw);
    while (std::getline(is, item, ',')) {
        std::istringstream one(item);
        double v;
        one >> v;
        if (one.fail() || !(one >> std::ws).eof()) throw ConfigError(field + ": cannot parse '" + item + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<Vec3> parse_points(const std::string& raw)
{
    std::vector<Vec3> out;
    std::string item;
    std::istringstream is(raw);
    while (std::getline(is, item, ';')) {
        if (item.find_first_not_of(" \t") == std::string::npos) continue;
        std::istringstream one(item);
        Vec3 v;
        one >> v.x >> v.y >> v.z;
        if (one.fail() || !(one >> std::ws).eof()) {
            throw ConfigError("targets.points: expected 'x y z', got '" + item + "'");
        }
        out.push_back(v);
    }
    return out;
}

template <class F>
auto wrap(const std::string& field, F&& f)
{
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(field + ": " + e.what());
    }
}

std::string join(const std::vector<double>& values)
{
    std::ostringstream os;
    os << std::setprecision(17);
    for (std::size_t i = 0; i < values.size(); ++i) os << (i ? "," : "") << values[i];
    return os.str();
}

} // namespace

ExperimentConfig parse_config(std::istream& in, const std::string& source)
{
    pt::ptree tree;
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(source + ":" + std::to_string(e.line()) + ": " + e.message());
    }

    for (const auto& [section, body] : tree) {
        const auto it = known_keys().find(section);
        if (it == known_keys().end()) throw ConfigError(source + ": unknown section [" + section + "]");
        for (const auto& entry : body) {
            if (!it->second.count(entry.first)) {
                throw ConfigError(source + ": unknown key " + section + "." + entry.first);
            }
        }
    }

    ExperimentConfig c;
    try {
        c.name = get<std::string>(tree, "experiment", "name", "");

        c.surface.shape = get<std::string>(tree, "surface", "shape", c.surface.shape);
        c.surface.radius = get(tree, "surface", "radius", c.surface.radius);
        c.surface.a = get(tree, "surface", "a", c.surface.a);
        c.surface.b = get(tree, "surface", "b", c.surface.b);
        c.surface.theta_map = wrap("surface.theta_map",
                                   [&] { return parse_theta_map(get<std::string>(tree, "surface", "theta_map", "cosine")); });

        const double omega = get(tree, "kernel", "omega", 0.0);
        c.kernel = wrap("kernel.name",
                        [&] { return parse_kernel(get<std::string>(tree, "kernel", "name", "harmonic-single"), omega); });
        c.density = wrap("density.name", [&] { return parse_density(get<std::string>(tree, "density", "name", "unit")); });

        c.n_t = get(tree, "grid", "n_t", c.n_t);
        c.n_phi = get(tree, "grid", "n_phi", 2 * c.n_t);

        TargetSpec& t = c.targets;
        const std::string kind = get<std::string>(tree, "targets", "kind", "plane");
        if (kind == "plane") t.kind = TargetKind::Plane;
        else if (kind == "radial-sweep") t.kind = TargetKind::RadialSweep;
        else if (kind == "random") t.kind = TargetKind::Random;
        else if (kind == "shell") t.kind = TargetKind::Shell;
        else if (kind == "explicit") t.kind = TargetKind::Explicit;
        else throw ConfigError("targets.kind: unknown generator '" + kind + "'");

        const std::string axis = get<std::string>(tree, "targets", "axis", "y");
        if (axis != "x" && axis != "y" && axis != "z") throw ConfigError("targets.axis: expected x|y|z");
        t.axis = axis[0];
        t.offset = get(tree, "targets", "offset", t.offset);
        t.extent = get(tree, "targets", "extent", t.extent);
        t.resolution = get(tree, "targets", "resolution", t.resolution);
        t.distances = parse_list("targets.distances", get<std::string>(tree, "targets", "distances", ""));
        t.angles = parse_list("targets.angles", get<std::string>(tree, "targets", "angles", ""));
        t.count = get(tree, "targets", "count", t.count);
        t.r_min = get(tree, "targets", "r_min", t.r_min);
        t.r_max = get(tree, "targets", "r_max", t.r_max);
        t.relative_to = get<std::string>(tree, "targets", "relative_to", t.relative_to);
        t.has_seed = tree.get_child_optional(pt::ptree::path_type("targets/seed", '/')).has_value();
        t.seed = get(tree, "targets", "seed", t.seed);
        t.reject_distance = get(tree, "targets", "reject_distance", t.reject_distance);
        t.shell_radius = get(tree, "targets", "radius", t.shell_radius);
        t.points = parse_points(get<std::string>(tree, "targets", "points", ""));

        c.cone.A = get(tree, "cone", "A", c.cone.A);
        c.cone.K_c = get(tree, "cone", "K_c", c.cone.K_c);

        c.output.path = get<std::string>(tree, "output", "path", "");
        c.output.timing = get(tree, "output", "timing", false);
    } catch (const ConfigError& e) {
        throw ConfigError(source + ": " + e.what());
    }

    try {
        validate(c);
    } catch (const ConfigError& e) {
        throw ConfigError(source + ": " + e.what());
    }
    return c;
}

ExperimentConfig parse_config_string(const std::string& text, const std::string& source)
{
    std::istringstream in(text);
    return parse_config(in, source);
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open file");
    return parse_config(in, path);
}

void validate(const ExperimentConfig& c)
{
    if (c.surface.shape != "sphere" && c.surface.shape != "spheroid" && c.surface.shape != "blob") {
        throw ConfigError("surface.shape: unknown shape '" + c.surface.shape + "'");
    }
    if (c.surface.shape == "sphere" && !(c.surface.radius > 0.0)) throw ConfigError("surface.radius: must be > 0");
    if (c.surface.shape == "spheroid" && !(c.surface.a > 0.0 && c.surface.b > 0.0)) {
        throw ConfigError("surface.a, surface.b: must be > 0");
    }
    if (c.n_t < 4) throw ConfigError("grid.n_t: must be >= 4");
    if (c.n_phi < 4) throw ConfigError("grid.n_phi: must be >= 4");
    if (!(c.cone.A > 0.0) || !(c.cone.K_c >= 0.0)) throw ConfigError("cone: A must be > 0 and K_c >= 0");

    const TargetSpec& t = c.targets;
    switch (t.kind) {
    case TargetKind::Plane:
        if (t.resolution < 1) throw ConfigError("targets.resolution: must be >= 1");
        if (!(t.extent >= 0.0)) throw ConfigError("targets.extent: must be >= 0");
        break;
    case TargetKind::RadialSweep:
        if (t.distances.empty() || t.angles.empty()) {
            throw ConfigError("targets.distances, targets.angles: radial-sweep needs both lists");
        }
        break;
    case TargetKind::Random:
        if (!t.has_seed) throw ConfigError("targets.seed: required for random targets");
        if (t.count < 1) throw ConfigError("targets.count: must be >= 1");
        if (!(t.r_min > 0.0 && t.r_max >= t.r_min)) throw ConfigError("targets.r_min, targets.r_max: need 0 < r_min <= r_max");
        if (t.relative_to != "surface" && t.relative_to != "centroid") {
            throw ConfigError("targets.relative_to: expected surface|centroid");
        }
        break;
    case TargetKind::Shell:
        if (t.resolution < 1) throw ConfigError("targets.resolution: must be >= 1");
        if (!(t.shell_radius > 0.0)) throw ConfigError("targets.radius: must be > 0");
        break;
    case TargetKind::Explicit:
        if (t.points.empty()) throw ConfigError("targets.points: explicit targets need at least one point");
        break;
    }
}

std::string to_ini(const ExperimentConfig& c)
{
    std::ostringstream os;
    os << std::setprecision(17);
    if (!c.name.empty()) os << "[experiment]\nname = " << c.name << "\n\n";
    os << "[surface]\nshape = " << c.surface.shape << "\n";
    if (c.surface.shape == "sphere") os << "radius = " << c.surface.radius << "\n";
    if (c.surface.shape == "spheroid") os << "a = " << c.surface.a << "\nb = " << c.surface.b << "\n";
    os << "theta_map = " << to_string(c.surface.theta_map) << "\n\n";
    os << "[kernel]\nname = " << to_string(c.kernel.kind) << "\n";
    if (c.kernel.kind == KernelKind::ModHelmholtzSingle) os << "omega = " << c.kernel.omega << "\n";
    os << "\n[density]\nname = " << to_string(c.density.kind) << "\n\n";
    os << "[grid]\nn_t = " << c.n_t << "\nn_phi = " << c.n_phi << "\n\n";

    const TargetSpec& t = c.targets;
    os << "[targets]\nkind = " << to_string(t.kind) << "\n";
    switch (t.kind) {
    case TargetKind::Plane:
        os << "axis = " << t.axis << "\noffset = " << t.offset << "\nextent = " << t.extent
           << "\nresolution = " << t.resolution << "\n";
        break;
    case TargetKind::RadialSweep:
        os << "distances = " << join(t.distances) << "\nangles = " << join(t.angles) << "\n";
        break;
    case TargetKind::Random:
        os << "count = " << t.count << "\nr_min = " << t.r_min << "\nr_max = " << t.r_max
           << "\nrelative_to = " << t.relative_to << "\nseed = " << t.seed
           << "\nreject_distance = " << t.reject_distance << "\n";
        break;
    case TargetKind::Shell:
        os << "radius = " << t.shell_radius << "\nresolution = " << t.resolution << "\n";
        break;
    case TargetKind::Explicit:
        os << "points = ";
        for (std::size_t i = 0; i < t.points.size(); ++i) {
            os << (i ? "; " : "") << t.points[i].x << " " << t.points[i].y << " " << t.points[i].z;
        }
        os << "\n";
        break;
    }
    os << "\n[cone]\nA = " << c.cone.A << "\nK_c = " << c.cone.K_c << "\n\n";
    os << "[output]\ntiming = " << (c.output.timing ? "true" : "false") << "\n";
    if (!c.output.path.empty()) os << "path = " << c.output.path << "\n";
    return os.str();
}

std::vector<std::string> preset_names()
{
    return {"sphere-linear", "sphere-cosine", "spheroid-wall", "spheroid-random", "blob-shell"};
}

ExperimentConfig preset(const std::string& name)
{
    ExperimentConfig c;
    c.name = name;
    if (name == "sphere-linear" || name == "sphere-cosine") {
        c.surface.shape = "sphere";
        c.surface.radius = 1.0;
        c.surface.theta_map = name == "sphere-linear" ? ThetaMapKind::Linear : ThetaMapKind::Cosine;
        c.n_t = 30;
        c.n_phi = 60;
        c.targets.kind = TargetKind::Plane;
        c.targets.axis = 'y';
        c.targets.offset = 0.0;
        c.targets.extent = 1.5;
        c.targets.resolution = 61;
    } else if (name == "spheroid-wall") {
        c.surface.shape = "spheroid";
        c.surface.a = 1.0;
        c.surface.b = 3.0;
        c.density = DensitySpec{DensityKind::Varying};
        c.n_t = 40;
        c.n_phi = 80;
        c.targets.kind = TargetKind::Plane;
        c.targets.axis = 'y';
        c.targets.offset = 1.02;
        c.targets.extent = 3.5;
        c.targets.resolution = 71;
    } else if (name == "spheroid-random") {
        c.surface.shape = "spheroid";
        c.surface.a = 1.0;
        c.surface.b = 3.0;
        c.kernel = KernelSpec::harmonic_double();
        c.density = DensitySpec{DensityKind::Varying};
        c.n_t = 60;
        c.n_phi = 120;
        c.targets.kind = TargetKind::Random;
        c.targets.count = 300;
        c.targets.r_min = 1.02;
        c.targets.r_max = 2.0;
        c.targets.relative_to = "surface";
        c.targets.seed = 2022;
        c.targets.has_seed = true;
    } else if (name == "blob-shell") {
        c.surface.shape = "blob";
        c.kernel = KernelSpec::mod_helmholtz_single(3.0);
        c.density = DensitySpec{DensityKind::Varying};
        c.n_t = 40;
        c.n_phi = 80;
        c.targets.kind = TargetKind::Shell;
        c.targets.shell_radius = 1.46;
        c.targets.resolution = 40;
    } else {
        std::string known;
        for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
        throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
    }
    validate(c);
    return c;
}

} // namespace layerr
