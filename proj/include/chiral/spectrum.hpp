// spectrum.hpp: eigenvalues of the coupling matrix

#pragma once

#include "chiral/model.hpp"

#include <vector>

namespace chiral {

inline constexpr double kDecoherenceFreeTol = 1e-10;

struct EigenSpectrum {
    CVector eigenvalues;              // λ_n in solver order
    std::vector<int> sort_order;      // indices into eigenvalues, ascending decay rate
    std::vector<double> decay_rates;  // -Re λ, in sorted order
    std::vector<double> shifts;       // Im λ, in sorted order
};

// Full complex Schur based eigen-solve; works for defective M.
EigenSpectrum eigen_spectrum(const CouplingMatrix& m);

int decoherence_free_count(const EigenSpectrum& spectrum, double tol = kDecoherenceFreeTol);

struct SubradiantSector {
    std::vector<int> indices;     // positions in the sorted order
    std::vector<double> shifts;
};

// Sorted modes whose decay rate lies below `cutoff` (units of γ).
SubradiantSector subradiant_sector(const EigenSpectrum& spectrum, double cutoff = 1.0);

// Largest |Δ shift| between consecutive entries among the `count` most
// subradiant modes.
double max_consecutive_shift_jump(const EigenSpectrum& spectrum, int count);

} // namespace chiral
