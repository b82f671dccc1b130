#include "chiral/steady_state.hpp"

#include "chiral/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace chiral {

double condition_check(const CouplingMatrix& m) {
    Eigen::PartialPivLU<CMatrix> lu(m.entries());
    const double rcond = lu.rcond();
    if (!(rcond > 0.0)) {
        return std::numeric_limits<double>::infinity();
    }
    return 1.0 / rcond;
}

SteadyState solve_steady(const CouplingMatrix& m, const CVector& drive, double rabi,
                         double singular_threshold) {
    if (!(rabi > 0.0)) {
        throw DomainError("solve_steady requires rabi > 0 (normalization undefined otherwise)");
    }
    if (drive.size() != m.n()) {
        throw DomainError("drive vector length does not match the coupling matrix");
    }

    Eigen::PartialPivLU<CMatrix> lu(m.entries());
    const double rcond = lu.rcond();
    const double estimate = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (!(estimate <= singular_threshold)) {
        throw CriticalPointError("coupling matrix is singular to working precision "
                                 "(condition estimate " + std::to_string(estimate) + ")",
                                 estimate);
    }

    const CVector rhs = cplx(0.0, rabi) * drive;
    SteadyState out;
    out.sigma = lu.solve(rhs);
    out.populations = out.sigma.cwiseAbs2();
    out.normalized = out.populations / out.populations.sum();
    out.residual = (m.entries() * out.sigma - rhs).norm() / rhs.norm();
    out.condition_estimate = estimate;
    return out;
}

SteadyState solve_steady(const ChainConfig& config, double singular_threshold) {
    return solve_steady(build_coupling_matrix(config), drive_vector(config), config.rabi,
                        singular_threshold);
}

double edge_population_analytic(int n, double xi) {
    if (n < 3) {
        throw DomainError("edge_population_analytic requires N >= 3");
    }
    const double a = std::norm(cplx(1.0, 0.0) - std::polar(1.0, xi));
    if (a < 1e-12) {
        throw CriticalPointError("edge population diverges at A = |1 - e^{i xi}|^2 -> 0", a);
    }
    return a / (2.0 * a + static_cast<double>(n - 2) * a * a);
}

} // namespace chiral
