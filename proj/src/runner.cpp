#include "ltp/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <optional>
#include <sstream>

#include "ltp/errors.hpp"
#include "ltp/ltp_core.hpp"
#include "ltp/oracle.hpp"
#include "ltp/sp_baseline.hpp"

namespace ltp {

namespace fs = std::filesystem;

namespace {

class CsvWriter {
public:
    CsvWriter(const fs::path& path, std::string_view header) : path_(path), out_(path) {
        if (!out_) throw std::runtime_error("cannot write '" + path.string() + "'");
        out_ << std::setprecision(17) << header << '\n';
    }

    template <typename... Ts>
    void row(const Ts&... values) {
        bool first = true;
        ((out_ << (first ? "" : ",") << values, first = false), ...);
        out_ << '\n';
    }

    const fs::path& path() const { return path_; }

private:
    fs::path path_;
    std::ofstream out_;
};

std::string step_tag(std::size_t step) {
    std::ostringstream os;
    os << std::setw(6) << std::setfill('0') << step;
    return os.str();
}

std::optional<QuadraticOracle> exact_oracle(const SimulationConfig& config) {
    if (config.potential != PotentialKind::Quadratic) return std::nullopt;
    return QuadraticOracle(config.make_initial_density());
}

struct Bounds {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double a, double b) {
        lo = std::min(lo, a);
        hi = std::max(hi, b);
    }
    void add(std::pair<double, double> p) { add(p.first, p.second); }
};

struct Errors {
    double l1, lp, linf, dbl;
};

Errors measure(std::span<const double> approx, std::span<const double> truth, const EvaluationGrid& grid, double p) {
    const double dx = grid.spacing();
    return {lp_error(approx, truth, grid, 1.0), lp_error(approx, truth, grid, p),
            lp_error(approx, truth, grid, kInfNorm),
            dbl_distance(cell_masses(approx, dx), cell_masses(truth, dx), dx)};
}

void write_errors(const fs::path& path, const ErrorReport& report) {
    CsvWriter csv(path, "method,h,dt,steps,l1,lp,linf,dbl");
    for (const auto& r : report.rows) csv.row(r.method, r.h, r.dt, r.steps, r.l1, r.lp, r.linf, r.dbl);
}

SimulationResult checked_run(const SimulationConfig& config) {
    SimulationOptions opts;
    opts.record_series = false;
    SimulationResult run = simulate(config, opts);
    if (run.stopped_early) {
        std::ostringstream os;
        os << "run with h = " << config.h << " stopped at step " << run.stop_step << ": " << run.stop_reason;
        throw NumericFailure(os.str());
    }
    return run;
}

}  // namespace

RunArtifacts run_scenario(const SimulationConfig& config) {
    config.validate();
    RunArtifacts art;
    art.directory = config.output_dir;
    fs::create_directories(art.directory);

    SimulationOptions opts;
    opts.keep_history = config.flow_diagnostics;
    art.result = simulate(config, opts);
    const SimulationResult& res = art.result;
    const Potential potential = config.make_potential();
    const auto oracle = exact_oracle(config);

    {
        std::ofstream cfg(art.directory / "config.txt");
        cfg << config.to_text();
        art.files.push_back(art.directory / "config.txt");
    }
    {
        CsvWriter csv(art.directory / "timeseries.csv", "step,t,mass,centroid,min_j,max_j,min_h,max_speed,rho_max,kappa");
        for (const auto& r : res.series)
            csv.row(r.step, r.t, r.mass, r.centroid, r.min_j, r.max_j, r.min_volume, r.max_speed, r.rho_max, r.kappa);
        art.files.push_back(csv.path());
    }
    for (const ParticleState& snap : res.snapshots) {
        const auto [lo, hi] = support_bounds(snap);
        const EvaluationGrid grid = EvaluationGrid::covering(lo, hi, 0.0, config.grid_points);
        const auto xs = grid.nodes();
        const auto rho = reconstruct_density_parallel(snap, xs);
        std::optional<SampledField> u, size;
        if (snap.size() >= 2) {
            u = reconstruct_velocity_field(snap, potential, config.rule);
            size = reconstruct_size_field(snap);
        }
        CsvWriter csv(art.directory / ("profile_" + step_tag(snap.step) + ".csv"), "x,rho_h,u_h,h_n,rho_exact");
        const double nan = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t i = 0; i < xs.size(); ++i)
            csv.row(xs[i], rho[i], u ? (*u)(xs[i]) : nan, size ? (*size)(xs[i]) : nan,
                    oracle ? oracle->density(snap.time, xs[i]) : nan);
        art.files.push_back(csv.path());
    }
    {
        const ParticleState& s = res.final_state;
        CsvWriter csv(art.directory / "particles.csv", "k,origin,x,weight,h_k,deformation,j");
        for (std::size_t k = 0; k < s.size(); ++k)
            csv.row(k, s.origins[k * s.dim], s.positions[k * s.dim], s.weights[k], s.volume[k], s.det_deformation(k),
                    s.last_jdet[k]);
        art.files.push_back(csv.path());
    }
    if (config.flow_diagnostics && oracle) {
        const FlowDiagnostics fd = flow_diagnostics(res.history, potential, *oracle);
        CsvWriter csv(art.directory / "flow.csv", "step,e_flow,e_jacobian,e_integrated");
        const double nan = std::numeric_limits<double>::quiet_NaN();
        for (std::size_t n = 0; n < fd.e_integrated.size(); ++n)
            csv.row(n, n < fd.e_flow.size() ? fd.e_flow[n] : nan, n < fd.e_jacobian.size() ? fd.e_jacobian[n] : nan,
                    fd.e_integrated[n]);
        art.files.push_back(csv.path());
    }
    {
        CsvWriter csv(art.directory / "summary.csv", "key,value");
        csv.row("status", res.stopped_early ? "stopped" : "completed");
        csv.row("steps_requested", config.steps());
        csv.row("steps_completed", res.final_state.step);
        csv.row("final_time", res.final_state.time);
        csv.row("particles", res.final_state.size());
        csv.row("mass_initial", res.initial.total_mass());
        csv.row("mass_final", res.final_state.total_mass());
        std::string reason = res.stop_reason;
        std::replace(reason.begin(), reason.end(), ',', ';');
        csv.row("stop_reason", reason);
        art.files.push_back(csv.path());
    }
    return art;
}

StudyMode parse_study_mode(std::string_view name) {
    if (name == "vs_exact") return StudyMode::VsExact;
    if (name == "self_convergence") return StudyMode::SelfConvergence;
    throw ConfigError("unknown study mode '" + std::string(name) + "' (expected vs_exact or self_convergence)");
}

std::string_view to_string(StudyMode mode) {
    return mode == StudyMode::VsExact ? "vs_exact" : "self_convergence";
}

double study_dt(const SimulationConfig& config, double h) {
    if (config.dt_scaling == DtScaling::Fixed) return config.dt;
    const double steps = std::ceil(config.T / (config.dt_factor * h * h) - 1e-9);
    return config.T / steps;
}

ErrorReport convergence_study(const SimulationConfig& config, std::span<const double> hs, StudyMode mode) {
    config.validate();
    if (hs.size() < 3) throw ConfigError("a convergence study needs at least 3 resolutions");
    for (std::size_t i = 0; i < hs.size(); ++i) {
        if (!(hs[i] > 0.0)) throw ConfigError("resolutions must be positive");
        if (i > 0 && !(hs[i] < hs[i - 1])) throw ConfigError("resolutions must be distinct and descending");
    }
    const auto oracle = exact_oracle(config);
    if (mode == StudyMode::VsExact && !oracle)
        throw ConfigError("vs_exact needs potential.kind = quadratic; use self_convergence");

    std::vector<SimulationConfig> cfgs;
    std::vector<ParticleState> finals;
    Bounds bounds;
    for (double h : hs) {
        SimulationConfig c = config;
        c.h = h;
        c.dt = study_dt(config, h);
        c.snapshots = 1;
        finals.push_back(checked_run(c).final_state);
        bounds.add(support_bounds(finals.back()));
        cfgs.push_back(c);
    }
    std::optional<ParticleState> reference;
    if (mode == StudyMode::SelfConvergence) {
        reference = reference_run(cfgs.back(), config.refinement).final_state;
        bounds.add(support_bounds(*reference));
    } else {
        bounds.add(oracle->support(config.T));
    }
    const EvaluationGrid grid = EvaluationGrid::covering(bounds.lo, bounds.hi, 2.0 * hs.front(), config.grid_points);
    const auto xs = grid.nodes();
    const auto truth = reference ? reconstruct_density_parallel(*reference, xs) : oracle->density(config.T, xs);

    ErrorReport report;
    report.p = config.lp_p;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        const auto rho = reconstruct_density_parallel(finals[i], xs);
        const Errors e = measure(rho, truth, grid, config.lp_p);
        report.rows.push_back({"ltp", hs[i], cfgs[i].dt, cfgs[i].steps(), e.l1, e.lp, e.linf, e.dbl});
    }
    auto fit = [&](std::string name, auto member) {
        std::vector<std::pair<double, double>> pairs;
        for (const auto& r : report.rows) pairs.emplace_back(r.h, r.*member);
        report.rates.push_back({std::move(name), fit_rate(pairs)});
    };
    fit("l1", &ErrorRow::l1);
    fit("lp", &ErrorRow::lp);
    fit("linf", &ErrorRow::linf);
    fit("dbl", &ErrorRow::dbl);

    fs::create_directories(config.output_dir);
    write_errors(config.output_dir / "errors.csv", report);
    CsvWriter csv(config.output_dir / "rates.csv", "metric,slope,intercept,residual");
    for (const auto& r : report.rates) csv.row(r.metric, r.fit.slope, r.fit.intercept, r.fit.residual);
    return report;
}

ErrorReport sp_sweep(const SimulationConfig& config, std::span<const double> eps) {
    config.validate();
    if (eps.size() < 3) throw ConfigError("a sweep needs at least 3 values of eps");
    for (double e : eps)
        if (!(e > 0.0)) throw ConfigError("eps values must be positive");
    const auto oracle = exact_oracle(config);
    const Potential potential = config.make_potential();
    const std::size_t steps = config.steps();

    SimulationConfig ltp_cfg = config;
    ltp_cfg.snapshots = 1;
    const SimulationResult ltp_run = checked_run(ltp_cfg);
    Bounds bounds;
    bounds.add(support_bounds(ltp_run.final_state));

    std::vector<SPState> sp;
    for (double e : eps) {
        SPState s = SPState::from_ltp(ltp_run.initial, e);
        for (std::size_t n = 0; n < steps; ++n) {
            s = sp_step(s, potential, config.dt, config.rule, config.domain_radius);
            s.time = static_cast<double>(s.step) * config.dt;
        }
        const double reach = s.shape.support_radius() * e;
        const auto [lo, hi] = std::minmax_element(s.positions.begin(), s.positions.end());
        bounds.add(*lo - reach, *hi + reach);
        sp.push_back(std::move(s));
    }
    std::optional<ParticleState> reference;
    if (oracle) {
        bounds.add(oracle->support(config.T));
    } else {
        reference = reference_run(ltp_cfg, config.refinement).final_state;
        bounds.add(support_bounds(*reference));
    }
    const EvaluationGrid grid = EvaluationGrid::covering(bounds.lo, bounds.hi, 0.0, config.grid_points);
    const auto xs = grid.nodes();
    const auto truth = reference ? reconstruct_density_parallel(*reference, xs) : oracle->density(config.T, xs);

    ErrorReport report;
    report.p = config.lp_p;
    {
        const Errors e = measure(reconstruct_density_parallel(ltp_run.final_state, xs), truth, grid, config.lp_p);
        report.rows.push_back({"ltp", config.h, config.dt, steps, e.l1, e.lp, e.linf, e.dbl});
    }
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const Errors e = measure(sp_reconstruct_grid(sp[i], xs), truth, grid, config.lp_p);
        report.rows.push_back({"sp", eps[i], config.dt, steps, e.l1, e.lp, e.linf, e.dbl});
    }
    fs::create_directories(config.output_dir);
    write_errors(config.output_dir / "sweep.csv", report);
    return report;
}

std::size_t count_peaks(std::span<const double> v, double fraction) {
    if (v.empty()) return 0;
    const double threshold = fraction * *std::max_element(v.begin(), v.end());
    std::size_t peaks = 0;
    std::size_t i = 0;
    while (i < v.size()) {
        std::size_t j = i;
        while (j + 1 < v.size() && v[j + 1] == v[i]) ++j;  // plateau [i, j]
        const bool left = i == 0 || v[i - 1] < v[i];
        const bool right = j + 1 == v.size() || v[j + 1] < v[i];
        if (left && right && v[i] > threshold) ++peaks;
        i = j + 1;
    }
    return peaks;
}

}  // namespace ltp
