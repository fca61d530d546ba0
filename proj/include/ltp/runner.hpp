#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ltp/config.hpp"
#include "ltp/metrics.hpp"
#include "ltp/simulation.hpp"

namespace ltp {

/// Files written by one run. Every CSV has a fixed header row and floats
/// with 17 significant digits.
///   timeseries.csv      step,t,mass,centroid,min_j,max_j,min_h,max_speed,rho_max,kappa
///   profile_<step>.csv  x,rho_h,u_h,h_n,rho_exact   (rho_exact is nan without a closed form)
///   particles.csv       k,origin,x,weight,h_k,deformation,j
///   flow.csv            step,e_flow,e_jacobian,e_integrated   (when requested)
///   summary.csv         key,value
struct RunArtifacts {
    std::filesystem::path directory;
    std::vector<std::filesystem::path> files;
    SimulationResult result;
};

/// init -> N steps -> recorded reconstructions. A blow-up truncates the run
/// and is recorded in summary.csv.
RunArtifacts run_scenario(const SimulationConfig& config);

enum class StudyMode { VsExact, SelfConvergence };

StudyMode parse_study_mode(std::string_view name);
std::string_view to_string(StudyMode mode);

struct ErrorRow {
    std::string method;  // "ltp" or "sp"
    double h = 0.0;      // particle spacing h, or eps for sp rows
    double dt = 0.0;
    std::size_t steps = 0;
    double l1 = 0.0;
    double lp = 0.0;
    double linf = 0.0;
    double dbl = 0.0;
};

struct RateRow {
    std::string metric;
    RateFit fit;
};

struct ErrorReport {
    double p = 2.0;
    std::vector<ErrorRow> rows;
    std::vector<RateRow> rates;
};

/// Time step used for spacing h: the configured dt, or T / ceil(T / (c h^2))
/// under h^2 scaling so that T stays an integer number of steps.
double study_dt(const SimulationConfig& config, double h);

/// Runs every h (distinct, descending, at least 3) and measures the final
/// density against the exact quadratic solution or against a run refined
/// by `config.refinement` beyond the finest h. Writes errors.csv and rates.csv
/// into config.output_dir.
ErrorReport convergence_study(const SimulationConfig& config, std::span<const double> hs, StudyMode mode);

/// Fixed-radius particle errors for each eps (at least 3) plus the LTP row at
/// the configured h, all at time T. Writes sweep.csv into config.output_dir.
ErrorReport sp_sweep(const SimulationConfig& config, std::span<const double> eps);

/// Local maxima of sampled values that exceed `fraction` times the global max.
std::size_t count_peaks(std::span<const double> values, double fraction);

}  // namespace ltp
