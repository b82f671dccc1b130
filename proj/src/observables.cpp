#include "chiral/observables.hpp"

#include "chiral/errors.hpp"
#include "chiral/model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace chiral {

std::vector<double> excess_population(std::span<const double> p_norm) {
    const double uniform = 1.0 / static_cast<double>(p_norm.size());
    std::vector<double> out(p_norm.size(), 0.0);
    for (std::size_t j = 0; j < p_norm.size(); ++j) {
        if (p_norm[j] > uniform) {
            out[j] = p_norm[j] - uniform;
        }
    }
    return out;
}

double participation_ratio(std::span<const double> p_norm) {
    const auto excess = excess_population(p_norm);
    double sum = 0.0;
    double sum_sq = 0.0;
    for (double e : excess) {
        sum += e;
        sum_sq += e * e;
    }
    if (sum_sq == 0.0) {
        return 0.0;
    }
    return sum * sum / sum_sq;
}

double structure_factor(std::span<const double> p_norm, double k) {
    cplx amplitude(0.0, 0.0);
    for (std::size_t j = 0; j < p_norm.size(); ++j) {
        amplitude += std::polar(p_norm[j], k * static_cast<double>(j + 1));
    }
    return std::norm(amplitude);
}

double structure_factor_pairwise(std::span<const double> p_norm, double k) {
    cplx total(0.0, 0.0);
    const auto n = p_norm.size();
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t m = 0; m < n; ++m) {
            const double lag = static_cast<double>(j) - static_cast<double>(m);
            total += std::polar(p_norm[j] * p_norm[m], k * lag);
        }
    }
    return total.real();
}

std::vector<double> structure_k_grid(int n) {
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(2 * n));
    for (int m = 0; m < n; ++m) {
        grid.push_back(2.0 * kPi * m / n);
    }
    for (int m = 1; m <= n; ++m) {
        grid.push_back(2.0 * kPi * m / (n + 1));
    }
    std::sort(grid.begin(), grid.end());
    return grid;
}

StructureSpectrum structure_spectrum(std::span<const double> p_norm) {
    StructureSpectrum out;
    out.k_values = structure_k_grid(static_cast<int>(p_norm.size()));
    out.s_values.resize(out.k_values.size());

    const auto count = static_cast<long>(out.k_values.size());
#pragma omp parallel for schedule(static) if (count > 512)
    for (long i = 0; i < count; ++i) {
        out.s_values[i] = structure_factor(p_norm, out.k_values[i]);
    }

    for (std::size_t i = 1; i < out.k_values.size(); ++i) {
        if (out.s_values[i] > out.max_nonzero_k.s) {
            out.max_nonzero_k = {out.k_values[i], out.s_values[i]};
        }
    }
    return out;
}

double transport_imbalance(std::span<const double> p_norm) {
    const auto n = p_norm.size();
    if (n < 2) {
        throw DomainError("transport_imbalance requires N >= 2");
    }
    const std::size_t half = n / 2;  // (N-1)/2 for odd N
    double left = 0.0;
    double right = 0.0;
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        total += p_norm[j];
        if (j < half) {
            left += p_norm[j];
        } else if (j >= n - half) {
            right += p_norm[j];
        }
    }
    return (left - right) / total;
}

} // namespace chiral
