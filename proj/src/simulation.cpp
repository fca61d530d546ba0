#include "ltp/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "ltp/errors.hpp"
#include "ltp/ltp_core.hpp"

namespace ltp {

std::vector<std::size_t> snapshot_steps(std::size_t total_steps, std::size_t snapshots) {
    std::vector<std::size_t> out;
    const std::size_t count = std::max<std::size_t>(snapshots, 1);
    for (std::size_t i = 0; i <= count; ++i) {
        const auto s = static_cast<std::size_t>(
            std::llround(static_cast<double>(i) * static_cast<double>(total_steps) / static_cast<double>(count)));
        if (out.empty() || out.back() != s) out.push_back(s);
    }
    return out;
}

SeriesRow summarize(const ParticleState& state, const Potential& potential, const QuadratureRule& rule) {
    const Diagnostics diag = diagnostics(state);
    SeriesRow row;
    row.step = state.step;
    row.t = state.time;
    row.mass = diag.total_mass;
    row.centroid = diag.centroid.empty() ? 0.0 : diag.centroid[0];
    row.min_j = diag.min_j;
    row.max_j = diag.max_j;
    row.min_volume = diag.min_volume;
    row.kappa = diag.max_overlap;
    if (state.size() >= 2) row.max_speed = reconstruct_velocity_field(state, potential, rule).max_abs();
    for (std::size_t k = 0; k < state.size(); ++k)
        row.rho_max = std::max(row.rho_max, reconstruct_density(state, state.positions[k]));
    return row;
}

SimulationResult simulate(const SimulationConfig& config, const SimulationOptions& options) {
    config.validate();
    const Potential potential = config.make_potential();
    const InitialDensity rho0 = config.make_initial_density();
    const StepSettings settings = config.step_settings();
    const std::size_t total = config.steps();
    const std::vector<std::size_t> snaps = snapshot_steps(total, config.snapshots);
    const std::size_t every = config.series_every > 0 ? config.series_every : std::max<std::size_t>(1, total / 100);

    SimulationResult result;
    ParticleState state = init_particles(rho0, config.h, config.weights, ShapeFunction(config.shape));
    result.initial = state;

    auto record = [&](const ParticleState& s) {
        if (std::binary_search(snaps.begin(), snaps.end(), s.step)) result.snapshots.push_back(s);
        if (options.record_series && (s.step % every == 0 || s.step == total))
            result.series.push_back(summarize(s, potential, config.rule));
        if (options.keep_history) result.history.push_back(s);
    };

    record(state);
    for (std::size_t n = 0; n < total; ++n) {
        try {
            ParticleState next = step(state, potential, settings);
            // Keep t_n = n dt exact rather than accumulated.
            next.time = static_cast<double>(next.step) * config.dt;
            state = std::move(next);
        } catch (const BlowUp& e) {
            result.stopped_early = true;
            result.stop_step = e.step();
            result.stop_reason = e.what();
            break;
        }
        record(state);
    }
    if (result.stopped_early) {
        if (result.snapshots.empty() || result.snapshots.back().step != state.step) result.snapshots.push_back(state);
        if (options.record_series && (result.series.empty() || result.series.back().step != state.step))
            result.series.push_back(summarize(state, potential, config.rule));
    }
    result.final_state = state;
    return result;
}

}  // namespace ltp
