#pragma once

#include "chiral/model.hpp"

#include <random>
#include <span>

namespace testing_support {

inline chiral::ChainConfig make(int n, double xi, double d) {
    chiral::ChainConfig c;
    c.n_atoms = n;
    c.xi = xi;
    c.directionality = d;
    return c;
}

inline std::span<const double> span_of(const chiral::RVector& v) {
    return {v.data(), static_cast<std::size_t>(v.size())};
}

// Random config with every field exercised.
inline chiral::ChainConfig random_config(std::mt19937_64& rng, int n_lo, int n_hi) {
    std::uniform_int_distribution<int> n(n_lo, n_hi);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    chiral::ChainConfig c;
    c.n_atoms = n(rng);
    c.xi = 2.0 * chiral::kPi * u(rng);
    c.directionality = 2.0 * u(rng) - 1.0;
    c.rabi = 0.001 + 0.1 * u(rng);
    c.theta_s = chiral::kPi * u(rng);
    switch (static_cast<int>(3.0 * u(rng))) {
    case 0: c.detuning = chiral::UniformDetuning{2.0 * u(rng) - 1.0}; break;
    case 1: c.detuning = chiral::LinearDetuning{4.0 * u(rng) - 2.0}; break;
    default: c.detuning = chiral::HarmonicDetuning{0.5 * u(rng)}; break;
    }
    return c;
}

} // namespace testing_support
