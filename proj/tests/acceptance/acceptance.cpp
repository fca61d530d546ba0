// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "dense_lp.hpp"
#include "ltp/config.hpp"
#include "ltp/errors.hpp"
#include "ltp/ltp_core.hpp"
#include "ltp/metrics.hpp"
#include "ltp/oracle.hpp"
#include "ltp/quadrature.hpp"
#include "ltp/runner.hpp"
#include "ltp/shape_kernels.hpp"
#include "ltp/simulation.hpp"

namespace {

using namespace ltp;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

// 1: partition of unity, unit mass, non-negativity, dual biorthogonality.
Outcome kernel_suite() {
    double worst = 0.0;
    bool nonneg = true;
    for (ShapeFamily fam : {ShapeFamily::B1, ShapeFamily::B3}) {
        const ShapeFunction phi(fam);
        const int r = static_cast<int>(phi.support_radius());
        for (int i = 0; i <= 2000; ++i) {
            const double x = -3.0 + 6.0 * i / 2000.0;
            double pu = 0.0;
            for (int k = -r - 4; k <= r + 4; ++k) pu += phi(x - k);
            worst = std::max(worst, std::abs(pu - 1.0));
            nonneg = nonneg && phi(x) >= 0.0;
        }
        double mass = 0.0;
        for (int k = -r; k < r; ++k) mass += integrate_adaptive([&](double z) { return phi(z); }, k, k + 1);
        worst = std::max(worst, std::abs(mass - 1.0));
    }
    const ShapeFunction hat(ShapeFamily::B1);
    const DualKernel dual = hat.dual();
    for (int k = -3; k <= 3; ++k) {
        // Split at every breakpoint of both factors; both are polynomial there.
        double s = 0.0;
        for (double a = -1.5; a < 1.5; a += 0.5)
            s += integrate_adaptive([&](double z) { return dual(z) * hat(z - k); }, a, a + 0.5);
        worst = std::max(worst, std::abs(s - (k == 0 ? 1.0 : 0.0)));
    }
    return {worst <= 1e-12 && nonneg, fmt("max deviation %.2e, non-negative %s", worst, nonneg ? "yes" : "no")};
}

// L1 distance between rho0 and the initial reconstruction, integrated piecewise
// between spline knots (where both sides are smooth) with a 20-point rule.
double init_l1(const InitialDensity& rho0, double h) {
    const ParticleState s = init_particles(rho0, h, WeightMode::CellAverage, ShapeFunction(ShapeFamily::B3));
    const GaussLegendre gl(20);
    const auto [lo, hi] = support_bounds(s);
    double total = 0.0;
    const long k0 = static_cast<long>(std::floor(lo / h));
    const long k1 = static_cast<long>(std::ceil(hi / h));
    for (long k = k0; k < k1; ++k) {
        const double a = k * h;
        const double b = a + h;
        for (int i = 0; i < gl.size(); ++i) {
            const double x = 0.5 * (a + b) + 0.5 * h * gl.nodes[i];
            total += 0.5 * h * gl.weights[i] * std::abs(rho0(x) - reconstruct_density(s, x));
        }
    }
    return total;
}

// 2: initialization orders.
Outcome init_orders() {
    const std::vector<double> hs{0.04, 0.02, 0.01};
    std::vector<std::pair<double, double>> smooth, bv;
    for (double h : hs) {
        smooth.emplace_back(h, init_l1(InitialDensity::rho3(), h));
        bv.emplace_back(h, init_l1(InitialDensity::rho2(), h));
    }
    const double rs = fit_rate(smooth).slope;
    const double rb = fit_rate(bv).slope;
    return {rs >= 1.8 && rb >= 0.8, fmt("smooth rate %.3f (>= 1.8), indicator rate %.3f (>= 0.8)", rs, rb)};
}

SimulationConfig quadratic_base() {
    SimulationConfig c;
    c.potential = PotentialKind::Quadratic;
    c.init = InitialDensityId::Rho1Gaussians;
    c.shape = ShapeFamily::B3;
    c.dt = 1e-4;
    c.T = 0.5;
    c.output_dir = "acceptance_out";
    return c;
}

// 3: quadratic validation against the closed form.
Outcome quadratic_validation() {
    SimulationConfig c = quadratic_base();
    c.output_dir = "acceptance_out/quadratic";
    const std::vector<double> hs{0.04, 0.02, 0.01};
    const ErrorReport rep = convergence_study(c, hs, StudyMode::VsExact);
    bool decreasing = true;
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
        decreasing = decreasing && rep.rows[i].l1 < rep.rows[i - 1].l1 && rep.rows[i].linf < rep.rows[i - 1].linf;
    const double rate = rep.rates[0].fit.slope;
    return {decreasing && rate >= 0.9 && rate <= 2.2,
            fmt("L1 %.3e %.3e %.3e, Linf %.3e %.3e %.3e, L1 rate %.3f in [0.9, 2.2]", rep.rows[0].l1, rep.rows[1].l1,
                rep.rows[2].l1, rep.rows[0].linf, rep.rows[1].linf, rep.rows[2].linf, rate)};
}

// 4: bounded-Lipschitz convergence with dt = h^2 / 4.
Outcome measure_convergence() {
    SimulationConfig c = quadratic_base();
    c.output_dir = "acceptance_out/dbl";
    c.dt_scaling = DtScaling::H2;
    c.dt_factor = 0.25;
    const std::vector<double> hs{0.08, 0.04, 0.02};
    const ErrorReport rep = convergence_study(c, hs, StudyMode::VsExact);
    const double rate = rep.rates[3].fit.slope;
    return {rate >= 0.9, fmt("dBL %.3e %.3e %.3e, rate %.3f (>= 0.9)", rep.rows[0].dbl, rep.rows[1].dbl,
                             rep.rows[2].dbl, rate)};
}

// 5: structural invariants over a singular repulsive-attractive run.
Outcome structural_invariants() {
    SimulationConfig c;
    c.potential = PotentialKind::PowerRepAttr;
    c.a = 3.0;
    c.b = 1.5;
    c.init = InitialDensityId::Rho2Indicator;
    c.h = 0.01;
    c.dt = 2.5e-5;
    c.T = 1000 * c.dt;
    c.snapshots = 1;
    SimulationOptions opts;
    opts.record_series = false;
    const SimulationResult res = simulate(c, opts);
    const ParticleState& s = res.final_state;
    const double m0 = res.initial.total_mass();
    const double drift = std::abs(s.total_mass() - m0) / m0;
    double vol = 0.0;
    double min_j = 1.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        vol = std::max(vol, std::abs(s.volume[k] * s.det_deformation(k) - s.h) / s.h);
        min_j = std::min(min_j, s.last_jdet[k]);
    }
    const auto [lo, hi] = support_bounds(s);
    const EvaluationGrid grid = EvaluationGrid::covering(lo, hi, 0.05, 8192);
    const auto rho = reconstruct_density_parallel(s, grid.nodes());
    const double rho_min = *std::min_element(rho.begin(), rho.end());
    const bool ok = !res.stopped_early && s.step == 1000 && drift <= 1e-8 && vol <= 1e-10 && min_j > 0.0 &&
                    rho_min >= 0.0;
    return {ok, fmt("steps %zu, mass drift %.2e, volume identity %.2e, min j %.6f, min density %.2e", s.step, drift,
                    vol, min_j, rho_min)};
}

// 6: exponential vs linearized Jacobian gap scales like dt^2.
Outcome jacobian_gap() {
    const ParticleState s0 = init_particles(InitialDensity::rho2(), 0.01, WeightMode::CellAverage,
                                            ShapeFunction(ShapeFamily::B3));
    const Potential pot = Potential::power_rep_attr(3.0, 1.5);
    std::vector<std::pair<double, double>> pairs;
    for (double dt : {1e-2, 5e-3, 2.5e-3}) {
        StepSettings st;
        st.dt = dt;
        st.jacobian = JacobianMode::Exponential;
        const ParticleState e = step(s0, pot, st);
        st.jacobian = JacobianMode::Linearized;
        const ParticleState l = step(s0, pot, st);
        double gap = 0.0;
        for (std::size_t k = 0; k < e.last_jacobian.size(); ++k)
            gap = std::max(gap, std::abs(e.last_jacobian[k] - l.last_jacobian[k]));
        pairs.emplace_back(dt, gap);
    }
    const double slope = fit_rate(pairs).slope;
    return {slope >= 1.9 && slope <= 2.1, fmt("gaps %.3e %.3e %.3e, slope %.4f in [1.9, 2.1]", pairs[0].second,
                                              pairs[1].second, pairs[2].second, slope)};
}

// 7: the dynamic program against a dense LP, exhaustively, plus two Diracs.
Outcome dbl_equivalence() {
    double worst = 0.0;
    std::size_t count = 0;
    for (double delta : {0.1, 0.35, 1.0}) {
        for (int n = 1; n <= 8; ++n) {
            int total = 1;
            for (int i = 0; i < n; ++i) total *= 3;
            for (int code = 0; code < total; ++code) {
                std::vector<double> mu(n, 0.0), nu(n, 0.0), m(n);
                int rem = code;
                for (int i = 0; i < n; ++i) {
                    m[i] = static_cast<double>(rem % 3 - 1);
                    rem /= 3;
                    (m[i] > 0 ? mu[i] : nu[i]) = std::abs(m[i]);
                }
                const double dp = dbl_distance(mu, nu, delta);
                const double lp = testing::dbl_lp(m, delta);
                worst = std::max(worst, std::abs(dp - lp));
                ++count;
            }
        }
    }
    // d(delta_0, delta_a) = min(a, 2) for unit Diracs on a grid of spacing delta.
    const double delta = 1e-3;
    double dirac = 0.0;
    for (double a : {0.25, 0.8, 1.5, 2.0, 3.0}) {
        const auto j = static_cast<std::size_t>(std::lround(a / delta));
        std::vector<double> mu(j + 1, 0.0), nu(j + 1, 0.0);
        mu.front() = 1.0;
        nu.back() = 1.0;
        dirac = std::max(dirac, std::abs(dbl_distance(mu, nu, delta) - std::min(a, 2.0)) / (2.0 * delta));
    }
    return {worst <= 1e-9 && dirac <= 1.0,
            fmt("%zu instances, max |DP - LP| %.2e, Dirac deviation %.2f x 2 delta", count, worst, dirac)};
}

// 8: LTP against fixed-radius particles.
Outcome ltp_vs_sp() {
    SimulationConfig c = quadratic_base();
    c.h = 0.01;
    c.dt = 0.01;
    c.output_dir = "acceptance_out/sweep";
    const std::vector<double> eps{0.005, 0.01, 0.02, 0.05};
    const ErrorReport rep = sp_sweep(c, eps);
    double best = 1e300;
    for (const auto& r : rep.rows)
        if (r.method == "sp") best = std::min(best, r.linf);
    const double ltp = rep.rows[0].linf;
    return {ltp <= 1.25 * best, fmt("LTP Linf %.3e, best SP Linf %.3e, ratio %.3f (<= 1.25)", ltp, best, ltp / best)};
}

SimulationConfig phenomenology(PotentialKind kind, double a, double b, double dt = 5e-3) {
    SimulationConfig c;
    c.potential = kind;
    c.a = a;
    c.b = b;
    c.init = InitialDensityId::Rho2Indicator;
    c.h = 0.01;
    c.dt = dt;
    c.T = 200 * dt;
    c.snapshots = 1;
    c.series_every = 1;
    return c;
}

// 9: qualitative behaviour of the attractive and repulsive-attractive runs.
Outcome phenomenology_suite() {
    auto peak = [](const SimulationResult& r) {
        double m = 0.0;
        for (const auto& row : r.series) m = std::max(m, row.rho_max);
        return m;
    };
    const SimulationResult a15 = simulate(phenomenology(PotentialKind::PowerAttractive, 1.5, 1.0));
    const SimulationResult a25 = simulate(phenomenology(PotentialKind::PowerAttractive, 2.5, 1.0));
    const double p15 = peak(a15);
    const double p25 = peak(a25);

    const SimulationResult two = simulate(phenomenology(PotentialKind::PowerRepAttr, 3.0, 2.5));
    const auto [lo, hi] = support_bounds(two.final_state);
    const EvaluationGrid grid = EvaluationGrid::covering(lo, hi, 0.0, 4096);
    const std::size_t bumps = count_peaks(reconstruct_density_parallel(two.final_state, grid.nodes()), 0.1);

    // Same 200-step budget with a longer step: the approach to the two-point
    // limit is slow and T = 1 ends at about 11% of the initial speed.
    const SimulationResult steady = simulate(phenomenology(PotentialKind::PowerRepAttr, 4.0, 2.5, 1e-2));
    const double u0 = steady.series.front().max_speed;
    const double u1 = steady.series.back().max_speed;

    const bool ok = p15 > p25 && bumps == 2 && !two.stopped_early && !steady.stopped_early && u1 < 0.1 * u0;
    return {ok, fmt("peak a=1.5 %.3e%s vs a=2.5 %.3e; (3,2.5) maxima %zu; (4,2.5) dt 1e-2 speed %.3e -> %.3e (%.1f%%)", p15,
                    a15.stopped_early ? " (stopped)" : "", p25, bumps, u0, u1, 100.0 * u1 / u0)};
}

struct Criterion {
    int id;
    const char* name;
    double budget;
    std::function<Outcome()> run;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {1, "kernel suite", 1.0, kernel_suite},
        {2, "initialization orders", 5.0, init_orders},
        {3, "quadratic validation", 60.0, quadratic_validation},
        {4, "measure-solution convergence", 60.0, measure_convergence},
        {5, "structural invariants", 120.0, structural_invariants},
        {6, "jacobian-mode gap", 10.0, jacobian_gap},
        {7, "dBL oracle equivalence", 30.0, dbl_equivalence},
        {8, "LTP vs SP", 60.0, ltp_vs_sp},
        {9, "phenomenology", 120.0, phenomenology_suite},
    };
    int failed = 0;
    for (const auto& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass = out.pass && secs < c.budget;
        failed += pass ? 0 : 1;
        std::printf("%s %d %s: %s [%.2f s / %.0f s]\n", pass ? "PASS" : "FAIL", c.id, c.name, out.detail.c_str(), secs,
                    c.budget);
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
