#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ltp/ltp_core.hpp"
#include "ltp/particle_state.hpp"
#include "ltp/potentials.hpp"
#include "ltp/quadrature.hpp"
#include "ltp/shape_kernels.hpp"

namespace ltp {

enum class DtScaling { Fixed, H2 };

/// Everything needed to run one scenario. Built from a flat `key = value`
/// file; see README for the key list.
struct SimulationConfig {
    PotentialKind potential = PotentialKind::Quadratic;
    double a = 2.0;
    double b = 1.5;
    InitialDensityId init = InitialDensityId::Rho1Gaussians;
    double h = 0.01;
    double dt = 1e-4;
    double T = 0.5;
    WeightMode weights = WeightMode::CellAverage;
    JacobianMode jacobian = JacobianMode::Exponential;
    ShapeFamily shape = ShapeFamily::B3;
    QuadratureRule rule{};
    std::vector<double> sp_epsilon{0.005, 0.01, 0.02, 0.05};
    std::size_t snapshots = 10;
    std::size_t series_every = 0;  // 0: about 100 rows per run
    bool flow_diagnostics = false;  // quadratic 1D runs only; keeps every state
    std::size_t grid_points = 4096;
    double domain_radius = 4.0;
    std::filesystem::path output_dir = "out";
    DtScaling dt_scaling = DtScaling::Fixed;
    double dt_factor = 0.25;  // dt = factor * h^2 under DtScaling::H2
    double lp_p = 2.0;
    std::size_t refinement = 2;

    /// T / dt rounded; validate() guarantees it is a positive integer.
    std::size_t steps() const;
    Potential make_potential() const;
    InitialDensity make_initial_density() const;
    StepSettings step_settings() const;

    /// Throws ConfigError on invalid or inconsistent values.
    void validate() const;

    /// Applies one `key = value` setting; throws ConfigError for unknown keys.
    void set(std::string_view key, std::string_view value);

    static SimulationConfig from_text(std::string_view text);
    static SimulationConfig from_file(const std::filesystem::path& path);

    /// Canonical `key = value` listing of every setting.
    std::string to_text() const;
};

/// Parses "0.04,0.02,0.01" into numbers; throws ConfigError.
std::vector<double> parse_number_list(std::string_view text);

}  // namespace ltp
