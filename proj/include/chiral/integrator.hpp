// integrator.hpp: embedded Dormand-Prince 5(4) stepper for dense Eigen states
//
// Works on any Eigen dense type (complex vectors for the dipole equations,
// complex matrices for density matrices). The error norm is the max-norm of
// the embedded error scaled by atol + rtol·max(|y|, |y_new|).

#pragma once

#include "chiral/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace chiral {

struct IntegratorOptions {
    double rtol{1e-9};
    double atol{1e-12};
    double initial_step{0.0};   // 0 picks a step from the initial derivative
    double max_step{std::numeric_limits<double>::infinity()};
    long max_steps{50'000'000};
};

template <class State>
class DormandPrince {
public:
    explicit DormandPrince(IntegratorOptions options = {}) : opt_(options) {}

    // Advances `y` from t to t_end in place. `rhs(t, y, dydt)` writes dy/dt.
    // The accepted step size carries over between calls.
    template <class Rhs>
    void advance(Rhs&& rhs, double& t, State& y, double t_end) {
        if (t_end <= t) {
            return;
        }
        k1_.resizeLike(y);
        rhs(t, y, k1_);
        if (h_ <= 0.0) {
            h_ = opt_.initial_step > 0.0 ? opt_.initial_step : initial_step(y, k1_, t_end - t);
        }
        long steps = 0;
        while (t < t_end) {
            if (++steps > opt_.max_steps) {
                throw IntegrationError("step budget exhausted at t = " + std::to_string(t), t);
            }
            double h = std::min({h_, opt_.max_step, t_end - t});
            const bool last = h >= t_end - t;
            if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t))) {
                throw IntegrationError("step size underflow at t = " + std::to_string(t), t);
            }

            trial_step(rhs, t, y, h);
            const double err = error_norm(y);
            if (err <= 1.0) {
                t = last ? t_end : t + h;
                y = y_new_;
                k1_ = k7_;  // first-same-as-last
                const double grow = err == 0.0 ? 5.0 : std::min(5.0, 0.9 * std::pow(err, -0.2));
                // keep the proposal from the unclipped step when the last step was clipped
                if (!last || h == h_) {
                    h_ = h * grow;
                }
            } else {
                h_ = h * std::max(0.2, 0.9 * std::pow(err, -0.2));
            }
        }
    }

    double last_step() const noexcept { return h_; }

private:
    template <class Rhs>
    void trial_step(Rhs&& rhs, double t, const State& y, double h) {
        static constexpr double a21 = 1.0 / 5.0;
        static constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
        static constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
        static constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                                a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
        static constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                                a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                                a65 = -5103.0 / 18656.0;
        static constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                                b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
        static constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                                e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

        tmp_ = y + h * (a21 * k1_);
        rhs(t + h / 5.0, tmp_, k2_);
        tmp_ = y + h * (a31 * k1_ + a32 * k2_);
        rhs(t + 3.0 * h / 10.0, tmp_, k3_);
        tmp_ = y + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
        rhs(t + 4.0 * h / 5.0, tmp_, k4_);
        tmp_ = y + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
        rhs(t + 8.0 * h / 9.0, tmp_, k5_);
        tmp_ = y + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
        rhs(t + h, tmp_, k6_);
        y_new_ = y + h * (b1 * k1_ + b3 * k3_ + b4 * k4_ + b5 * k5_ + b6 * k6_);
        rhs(t + h, y_new_, k7_);
        err_ = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);
    }

    double error_norm(const State& y) const {
        const auto scale =
            (opt_.atol + opt_.rtol * y.cwiseAbs().cwiseMax(y_new_.cwiseAbs()).array()).eval();
        return (err_.cwiseAbs().array() / scale).maxCoeff();
    }

    double initial_step(const State& y, const State& dydt, double span) const {
        const double y_scale = opt_.atol + opt_.rtol * y.cwiseAbs().maxCoeff();
        const double d_scale = dydt.cwiseAbs().maxCoeff();
        double h = d_scale > 0.0 ? 0.01 * y_scale / d_scale : 1e-3;
        h = std::max(h, 1e-10 * span);
        return std::min({h, span, opt_.max_step});
    }

    IntegratorOptions opt_;
    double h_{0.0};
    State k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, y_new_, err_;
};

} // namespace chiral
