#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ltp/config.hpp"
#include "ltp/particle_state.hpp"

namespace ltp {

/// One recorded row of the time-series output.
struct SeriesRow {
    std::size_t step = 0;
    double t = 0.0;
    double mass = 0.0;
    double centroid = 0.0;
    double min_j = 1.0;
    double max_j = 1.0;
    double min_volume = 0.0;
    double max_speed = 0.0;
    double rho_max = 0.0;  // max of rho_h over particle centers
    std::size_t kappa = 0;
};

struct SimulationResult {
    ParticleState initial;
    ParticleState final_state;
    std::vector<ParticleState> snapshots;
    std::vector<SeriesRow> series;
    std::vector<ParticleState> history;  // every step, only when requested
    bool stopped_early = false;
    std::size_t stop_step = 0;
    std::string stop_reason;
};

struct SimulationOptions {
    bool keep_history = false;
    bool record_series = true;
};

/// Steps recorded as snapshots: round(i N / snapshots), i = 0..snapshots.
std::vector<std::size_t> snapshot_steps(std::size_t total_steps, std::size_t snapshots);

SeriesRow summarize(const ParticleState& state, const Potential& potential, const QuadratureRule& rule);

/// Initialization followed by N LTP steps. A BlowUp truncates the run and is
/// reported in the result; other errors propagate.
SimulationResult simulate(const SimulationConfig& config, const SimulationOptions& options = {});

}  // namespace ltp
