#include "ltp/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ltp/errors.hpp"

namespace ltp {

namespace {

// Shortest text that reads back to the same double.
std::string num(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view key, std::string_view value) {
    const std::string text(trim(value));
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError("key '" + std::string(key) + "': '" + text + "' is not a number");
    }
    if (used != text.size()) throw ConfigError("key '" + std::string(key) + "': '" + text + "' is not a number");
    if (!std::isfinite(v)) throw ConfigError("key '" + std::string(key) + "' must be finite");
    return v;
}

std::size_t parse_count(std::string_view key, std::string_view value) {
    const auto text = trim(value);
    std::size_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError("key '" + std::string(key) + "': '" + std::string(text) + "' is not a non-negative integer");
    return v;
}

}  // namespace

std::vector<double> parse_number_list(std::string_view text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto item = trim(text.substr(start, comma == std::string_view::npos ? text.size() - start : comma - start));
        if (item.empty()) throw ConfigError("empty entry in number list '" + std::string(text) + "'");
        out.push_back(parse_double("list", item));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::size_t SimulationConfig::steps() const {
    return static_cast<std::size_t>(std::llround(T / dt));
}

Potential SimulationConfig::make_potential() const { return Potential::make(potential, a, b, 1); }

InitialDensity SimulationConfig::make_initial_density() const { return InitialDensity::make(init); }

StepSettings SimulationConfig::step_settings() const {
    StepSettings s;
    s.dt = dt;
    s.jacobian = jacobian;
    s.rule = rule;
    s.domain_radius = domain_radius;
    return s;
}

void SimulationConfig::validate() const {
    if (!(h > 0.0)) throw ConfigError("h must be positive");
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(T > 0.0)) throw ConfigError("T must be positive");
    const double n = T / dt;
    const double rounded = std::round(n);
    if (rounded < 1.0 || std::abs(n - rounded) > 1e-9 * std::max(1.0, n)) {
        std::ostringstream os;
        os << "T / dt = " << n << " is not a positive integer number of steps";
        throw ConfigError(os.str());
    }
    rule.validate();
    if (weights == WeightMode::DualKernel && shape != ShapeFamily::B1)
        throw ConfigError("weights = dual_kernel requires shape = B1");
    if (flow_diagnostics && potential != PotentialKind::Quadratic)
        throw ConfigError("output.flow_diagnostics requires potential.kind = quadratic");
    if (grid_points < 8) throw ConfigError("grid.points must be >= 8");
    if (!(domain_radius > 0.0)) throw ConfigError("domain.radius must be positive");
    if (snapshots < 1) throw ConfigError("output.snapshots must be >= 1");
    if (!(dt_factor > 0.0)) throw ConfigError("study.dt_factor must be positive");
    if (!(lp_p >= 1.0)) throw ConfigError("metrics.p must be >= 1");
    if (refinement < 1) throw ConfigError("study.refinement must be >= 1");
    for (double e : sp_epsilon)
        if (!(e > 0.0)) throw ConfigError("sp.epsilon entries must be positive");
    try {
        make_potential().classify();
    } catch (const UnsupportedPotential& e) {
        throw ConfigError(e.what());
    }
}

void SimulationConfig::set(std::string_view key, std::string_view value) {
    const auto v = trim(value);
    try {
        if (key == "potential.kind") potential = parse_potential_kind(v);
        else if (key == "potential.a") a = parse_double(key, v);
        else if (key == "potential.b") b = parse_double(key, v);
        else if (key == "init") init = parse_initial_density(v);
        else if (key == "h") h = parse_double(key, v);
        else if (key == "dt") dt = parse_double(key, v);
        else if (key == "T") T = parse_double(key, v);
        else if (key == "weights") weights = parse_weight_mode(v);
        else if (key == "jacobian") jacobian = parse_jacobian_mode(v);
        else if (key == "shape") shape = parse_shape_family(v);
        else if (key == "quadrature.points_per_piece") rule.points_per_piece = static_cast<int>(parse_count(key, v));
        else if (key == "quadrature.grading_levels") rule.grading_levels = static_cast<int>(parse_count(key, v));
        else if (key == "quadrature.tolerance") rule.tolerance_target = parse_double(key, v);
        else if (key == "sp.epsilon") sp_epsilon = parse_number_list(v);
        else if (key == "output.snapshots") snapshots = parse_count(key, v);
        else if (key == "output.series_every") series_every = parse_count(key, v);
        else if (key == "output.flow_diagnostics") {
            if (v == "true" || v == "1") flow_diagnostics = true;
            else if (v == "false" || v == "0") flow_diagnostics = false;
            else throw ConfigError("output.flow_diagnostics must be true or false");
        } else if (key == "output.dir") output_dir = std::string(v);
        else if (key == "grid.points") grid_points = parse_count(key, v);
        else if (key == "domain.radius") domain_radius = parse_double(key, v);
        else if (key == "study.dt_scaling") {
            if (v == "fixed") dt_scaling = DtScaling::Fixed;
            else if (v == "h2") dt_scaling = DtScaling::H2;
            else throw ConfigError("study.dt_scaling must be fixed or h2");
        } else if (key == "study.dt_factor") dt_factor = parse_double(key, v);
        else if (key == "study.refinement") refinement = parse_count(key, v);
        else if (key == "metrics.p") lp_p = parse_double(key, v);
        else throw ConfigError("unknown configuration key '" + std::string(key) + "'");
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError("key '" + std::string(key) + "': " + e.what());
    }
}

SimulationConfig SimulationConfig::from_text(std::string_view text) {
    SimulationConfig cfg;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view sv(line);
        if (const auto hash = sv.find('#'); hash != std::string_view::npos) sv = sv.substr(0, hash);
        sv = trim(sv);
        if (sv.empty()) continue;
        const auto eq = sv.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        cfg.set(trim(sv.substr(0, eq)), sv.substr(eq + 1));
    }
    return cfg;
}

SimulationConfig SimulationConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return from_text(ss.str());
}

std::string SimulationConfig::to_text() const {
    std::ostringstream os;
    os << "potential.kind = " << to_string(potential) << '\n'
       << "potential.a = " << num(a) << '\n'
       << "potential.b = " << num(b) << '\n'
       << "init = " << to_string(init) << '\n'
       << "h = " << num(h) << '\n'
       << "dt = " << num(dt) << '\n'
       << "T = " << num(T) << '\n'
       << "weights = " << to_string(weights) << '\n'
       << "jacobian = " << to_string(jacobian) << '\n'
       << "shape = " << to_string(shape) << '\n'
       << "quadrature.points_per_piece = " << rule.points_per_piece << '\n'
       << "quadrature.grading_levels = " << rule.grading_levels << '\n'
       << "quadrature.tolerance = " << num(rule.tolerance_target) << '\n'
       << "sp.epsilon = ";
    for (std::size_t i = 0; i < sp_epsilon.size(); ++i) os << (i ? "," : "") << num(sp_epsilon[i]);
    os << '\n'
       << "output.snapshots = " << snapshots << '\n'
       << "output.series_every = " << series_every << '\n'
       << "output.flow_diagnostics = " << (flow_diagnostics ? "true" : "false") << '\n'
       << "output.dir = " << output_dir.string() << '\n'
       << "grid.points = " << grid_points << '\n'
       << "domain.radius = " << num(domain_radius) << '\n'
       << "study.dt_scaling = " << (dt_scaling == DtScaling::Fixed ? "fixed" : "h2") << '\n'
       << "study.dt_factor = " << num(dt_factor) << '\n'
       << "study.refinement = " << refinement << '\n'
       << "metrics.p = " << num(lp_p) << '\n';
    return os.str();
}

}  // namespace ltp
