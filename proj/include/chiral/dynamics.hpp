// dynamics.hpp: time evolution of the low-saturation dipole equations
//
//   dσ/dt = Mσ - iΩv
//
// plus traversal-time extraction, an oscillation diagnostic for P_t, and a
// brute-force master-equation oracle for small chains.

#pragma once

#include "chiral/integrator.hpp"
#include "chiral/model.hpp"

#include <span>
#include <vector>

namespace chiral {

struct Trajectory {
    std::vector<double> times;
    CMatrix sigma_t;                  // rows: times, cols: sites
    Eigen::MatrixXd populations_t;    // |σ|²
    std::vector<double> total_population_t;  // P_t = Σ_μ |σ_μ(t)|²

    // Row `i` of populations_t divided by its sum.
    std::vector<double> normalized_at(std::size_t i) const;
};

// Adaptive RK integration from σ(0) = sigma0, sampled at t_grid (increasing,
// starting at 0). Needs no inversion of M, so it works at critical points.
Trajectory propagate(const ChainConfig& config, const CVector& sigma0,
                     std::span<const double> t_grid, IntegratorOptions options = {});

// Exact stepping for the affine system using a cached matrix exponential
// (Padé scaling-and-squaring, valid for defective M). Requires nonsingular M.
class AffinePropagator {
public:
    AffinePropagator(const ChainConfig& config, double step);

    double step() const noexcept { return step_; }
    const CVector& steady() const noexcept { return steady_; }

    // σ(t + step) from σ(t).
    CVector advance(const CVector& sigma) const;
    // σ(t + tau) from σ(t) for arbitrary tau (computes a fresh exponential).
    CVector advance_by(const CVector& sigma, double tau) const;

private:
    CMatrix m_;
    CVector steady_;
    CMatrix step_map_;
    double step_;
};

struct TraversalOptions {
    double threshold_fraction{0.5};
    double t_max{1e6};
    double coarse_step{0.5};
    double rel_tol{1e-6};
};

// First time at which the far-end population |σ_N(t)|² starting from σ(0) = 0
// reaches threshold_fraction of its steady value. Requires D > 0 for N > 1.
double traversal_time(const ChainConfig& config, TraversalOptions options = {});

struct OscillationMetric {
    double period{0.0};       // +inf when the window shows no oscillation
    double persistence{0.0};  // autocorrelation peak / lag-zero value
};

// Dominant period and persistence of a uniformly sampled signal from its
// (unbiased, mean-removed) autocorrelation. A signal whose relative spread is
// below 1e-9 counts as equilibrated (persistence 0, infinite period), as does
// one whose autocorrelation only decreases over the searched lags.
// Throws InsufficientDataError when the autocorrelation turns back up but no
// peak fits within a third of the window (fewer than three periods).
OscillationMetric subharmonic_metric(std::span<const double> p_t, std::span<const double> times);

struct OracleResult {
    CVector expectations;   // ⟨σ_μ⟩
    RVector populations;    // ⟨σ_μ† σ_μ⟩
    double trace_error{0.0};
};

inline constexpr int kOracleMaxAtoms = 6;

// Integrates the full master equation in the 2^N dimensional space from the
// ground state up to t_end. Basis: tensor product, site 1 the most significant
// qubit, bit 1 = excited.
OracleResult lindblad_oracle(const ChainConfig& config, double t_end,
                             IntegratorOptions options = {});

} // namespace chiral
