// observables.hpp: diagnostics of a normalized population profile P̃

#pragma once

#include <span>
#include <vector>

namespace chiral {

// ΔP̃_j = (P̃_j - 1/N) where positive, 0 otherwise.
std::vector<double> excess_population(std::span<const double> p_norm);

// (Σ ΔP̃)² / Σ ΔP̃²; 0 for a profile with no site above 1/N.
double participation_ratio(std::span<const double> p_norm);

// S(k) = |Σ_j e^{ikj} P̃_j|²
double structure_factor(std::span<const double> p_norm, double k);

// Same quantity evaluated as the explicit double sum over site pairs.
double structure_factor_pairwise(std::span<const double> p_norm, double k);

struct StructurePeak {
    double k{0.0};
    double s{0.0};
};

struct StructureSpectrum {
    std::vector<double> k_values;  // ascending, k_values[0] == 0
    std::vector<double> s_values;
    StructurePeak max_nonzero_k;
};

// Momentum grid used for S(k): the discrete momenta 2πm/N (m = 0..N-1) of the
// chain merged with 2πm/(N+1) (m = 1..N), sorted ascending.
std::vector<double> structure_k_grid(int n);

// Evaluates S on structure_k_grid(N) and records the largest S at k != 0.
StructureSpectrum structure_spectrum(std::span<const double> p_norm);

// Population imbalance between the left and right halves; the central site is
// excluded for odd N. Positive when the left half is more occupied.
double transport_imbalance(std::span<const double> p_norm);

} // namespace chiral
