#include "chiral/spectrum.hpp"

#include "chiral/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace chiral {

EigenSpectrum eigen_spectrum(const CouplingMatrix& m) {
    Eigen::ComplexEigenSolver<CMatrix> solver;
    solver.compute(m.entries(), /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigen_spectrum: complex Schur iteration did not converge (N = " +
                           std::to_string(m.n()) + ")");
    }

    EigenSpectrum out;
    out.eigenvalues = solver.eigenvalues();
    const int n = static_cast<int>(out.eigenvalues.size());
    out.sort_order.resize(n);
    std::iota(out.sort_order.begin(), out.sort_order.end(), 0);
    // Ties broken by shift then index so the order is fully deterministic.
    std::stable_sort(out.sort_order.begin(), out.sort_order.end(), [&](int a, int b) {
        const cplx la = out.eigenvalues(a);
        const cplx lb = out.eigenvalues(b);
        if (-la.real() != -lb.real()) {
            return -la.real() < -lb.real();
        }
        return la.imag() < lb.imag();
    });
    out.decay_rates.reserve(n);
    out.shifts.reserve(n);
    for (int idx : out.sort_order) {
        out.decay_rates.push_back(-out.eigenvalues(idx).real());
        out.shifts.push_back(out.eigenvalues(idx).imag());
    }
    return out;
}

int decoherence_free_count(const EigenSpectrum& spectrum, double tol) {
    if (!(tol > 0.0)) {
        throw DomainError("decoherence_free_count requires tol > 0");
    }
    return static_cast<int>(std::count_if(spectrum.decay_rates.begin(),
                                          spectrum.decay_rates.end(),
                                          [tol](double rate) { return std::abs(rate) < tol; }));
}

SubradiantSector subradiant_sector(const EigenSpectrum& spectrum, double cutoff) {
    if (!(cutoff > 0.0 && cutoff <= 1.0)) {
        throw DomainError("subradiant_sector cutoff must lie in (0, 1]");
    }
    SubradiantSector out;
    for (std::size_t i = 0; i < spectrum.decay_rates.size(); ++i) {
        if (spectrum.decay_rates[i] < cutoff) {
            out.indices.push_back(static_cast<int>(i));
            out.shifts.push_back(spectrum.shifts[i]);
        }
    }
    return out;
}

double max_consecutive_shift_jump(const EigenSpectrum& spectrum, int count) {
    const int n = std::min<int>(count, static_cast<int>(spectrum.shifts.size()));
    double jump = 0.0;
    for (int i = 1; i < n; ++i) {
        jump = std::max(jump, std::abs(spectrum.shifts[i] - spectrum.shifts[i - 1]));
    }
    return jump;
}

} // namespace chiral
