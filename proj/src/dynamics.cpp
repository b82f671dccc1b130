#include "chiral/dynamics.hpp"

#include "chiral/errors.hpp"
#include "chiral/steady_state.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace chiral {

std::vector<double> Trajectory::normalized_at(std::size_t i) const {
    const Eigen::Index row = static_cast<Eigen::Index>(i);
    const double total = populations_t.row(row).sum();
    std::vector<double> out(static_cast<std::size_t>(populations_t.cols()));
    for (Eigen::Index j = 0; j < populations_t.cols(); ++j) {
        out[static_cast<std::size_t>(j)] = total > 0.0 ? populations_t(row, j) / total : 0.0;
    }
    return out;
}

Trajectory propagate(const ChainConfig& config, const CVector& sigma0,
                     std::span<const double> t_grid, IntegratorOptions options) {
    config.validate();
    const int n = config.n_atoms;
    if (sigma0.size() != n) {
        throw DomainError("initial state length does not match n_atoms");
    }
    if (t_grid.empty() || t_grid.front() != 0.0) {
        throw DomainError("time grid must start at 0");
    }
    for (std::size_t i = 1; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > t_grid[i - 1])) {
            throw DomainError("time grid must be strictly increasing");
        }
    }

    const CMatrix m = build_coupling_matrix(config).entries();
    const CVector source = cplx(0.0, -config.rabi) * drive_vector(config);
    auto rhs = [&](double, const CVector& y, CVector& dydt) { dydt.noalias() = m * y; dydt += source; };

    Trajectory out;
    out.times.assign(t_grid.begin(), t_grid.end());
    const auto rows = static_cast<Eigen::Index>(t_grid.size());
    out.sigma_t.resize(rows, n);
    out.sigma_t.row(0) = sigma0.transpose();

    DormandPrince<CVector> stepper(options);
    CVector y = sigma0;
    double t = 0.0;
    for (Eigen::Index i = 1; i < rows; ++i) {
        stepper.advance(rhs, t, y, t_grid[static_cast<std::size_t>(i)]);
        out.sigma_t.row(i) = y.transpose();
    }
    out.populations_t = out.sigma_t.cwiseAbs2();
    out.total_population_t.resize(t_grid.size());
    for (Eigen::Index i = 0; i < rows; ++i) {
        out.total_population_t[static_cast<std::size_t>(i)] = out.populations_t.row(i).sum();
    }
    return out;
}

AffinePropagator::AffinePropagator(const ChainConfig& config, double step)
    : m_(build_coupling_matrix(config).entries()), step_(step) {
    if (!(step > 0.0)) {
        throw DomainError("propagator step must be positive");
    }
    steady_ = solve_steady(config).sigma;
    step_map_ = (m_ * step_).exp();
}

CVector AffinePropagator::advance(const CVector& sigma) const {
    return steady_ + step_map_ * (sigma - steady_);
}

CVector AffinePropagator::advance_by(const CVector& sigma, double tau) const {
    if (tau == 0.0) {
        return sigma;
    }
    const CMatrix map = (m_ * tau).exp();
    return steady_ + map * (sigma - steady_);
}

double traversal_time(const ChainConfig& config, TraversalOptions options) {
    config.validate();
    if (!(options.threshold_fraction > 0.0 && options.threshold_fraction < 1.0)) {
        throw DomainError("threshold_fraction must lie in (0, 1)");
    }
    if (config.n_atoms > 1 && !(config.directionality > 0.0)) {
        throw DomainError("traversal_time needs D > 0 so that site N is the far end");
    }
    if (!(config.rabi > 0.0)) {
        throw DomainError("traversal_time requires rabi > 0");
    }

    // Throws CriticalPointError for singular M.
    const AffinePropagator prop(config, options.coarse_step);
    const Eigen::Index far = config.n_atoms - 1;
    const double target = options.threshold_fraction * std::norm(prop.steady()(far));
    auto reached = [&](const CVector& s) { return std::norm(s(far)) >= target; };

    CVector sigma = CVector::Zero(config.n_atoms);
    double t = 0.0;
    while (t < options.t_max) {
        CVector next = prop.advance(sigma);
        if (reached(next)) {
            // Bisection inside the bracketing coarse step.
            double lo = 0.0;
            double hi = options.coarse_step;
            while (hi - lo > options.rel_tol * (t + hi)) {
                const double mid = 0.5 * (lo + hi);
                if (reached(prop.advance_by(sigma, mid))) {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return t + hi;
        }
        sigma = std::move(next);
        t += options.coarse_step;
    }
    throw TimeoutError("far-end population did not reach the threshold before t_max = " +
                       std::to_string(options.t_max));
}

OscillationMetric subharmonic_metric(std::span<const double> p_t, std::span<const double> times) {
    const std::size_t n = p_t.size();
    if (n != times.size()) {
        throw DomainError("signal and time grid differ in length");
    }
    if (n < 8) {
        throw InsufficientDataError("subharmonic_metric needs at least 8 samples");
    }
    const double dt = (times[n - 1] - times[0]) / static_cast<double>(n - 1);
    if (!(dt > 0.0)) {
        throw DomainError("time grid must be increasing");
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (std::abs((times[i] - times[i - 1]) - dt) > 1e-6 * dt) {
            throw DomainError("subharmonic_metric needs a uniform time grid");
        }
    }

    const double mean = std::accumulate(p_t.begin(), p_t.end(), 0.0) / static_cast<double>(n);
    std::vector<double> x(n);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = p_t[i] - mean;
        var += x[i] * x[i];
    }
    var /= static_cast<double>(n);
    const double spread = std::sqrt(var);
    if (spread <= 1e-9 * std::max(std::abs(mean), std::numeric_limits<double>::min())) {
        return {std::numeric_limits<double>::infinity(), 0.0};
    }

    // Lags up to a third of the window: at least three periods must fit.
    const std::size_t max_lag = n / 3;
    std::vector<double> acf(max_lag + 2);
    for (std::size_t lag = 0; lag < acf.size(); ++lag) {
        double s = 0.0;
        for (std::size_t i = 0; i + lag < n; ++i) {
            s += x[i] * x[i + lag];
        }
        acf[lag] = s / static_cast<double>(n - lag) / var;
    }

    std::size_t lag = 1;
    while (lag <= max_lag && acf[lag] > 0.0) {
        ++lag;
    }
    bool turned = false;
    for (; lag <= max_lag; ++lag) {
        turned = turned || acf[lag] > acf[lag - 1];
        if (acf[lag] > acf[lag - 1] && acf[lag] >= acf[lag + 1]) {
            return {static_cast<double>(lag) * dt, acf[lag]};
        }
    }
    // Monotone decay of the autocorrelation: a drift, not an oscillation.
    if (!turned) {
        return {std::numeric_limits<double>::infinity(), 0.0};
    }
    throw InsufficientDataError("no oscillation period resolved within a third of the window");
}

} // namespace chiral
