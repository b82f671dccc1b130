// steady_state.hpp: linear steady state of the weakly driven chain

#pragma once

#include "chiral/model.hpp"

namespace chiral {

// Solves beyond this condition estimate are refused as critical.
inline constexpr double kSingularThreshold = 1e12;

struct SteadyState {
    CVector sigma;         // dipole amplitudes σ^(s)
    RVector populations;   // |σ_j|²
    RVector normalized;    // P̃_j, sums to 1
    double residual{0.0};  // ‖Mσ - iΩv‖ / ‖iΩv‖
    double condition_estimate{0.0};
};

// 1-norm condition estimate of M from its LU factorization. +inf when M is
// exactly singular.
double condition_check(const CouplingMatrix& m);

// σ solving Mσ = iΩv. Throws CriticalPointError when the condition estimate
// exceeds `singular_threshold`, DomainError when Ω <= 0.
SteadyState solve_steady(const CouplingMatrix& m, const CVector& drive, double rabi,
                         double singular_threshold = kSingularThreshold);

// Convenience: build M and v from the config.
SteadyState solve_steady(const ChainConfig& config,
                         double singular_threshold = kSingularThreshold);

// Closed-form P̃₁ = A / (2A + (N-2)A²), A = |1 - e^{iξ}|², valid at D = 0,
// δ = 0, θ_s = π/2.
double edge_population_analytic(int n, double xi);

} // namespace chiral
