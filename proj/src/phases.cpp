#include "chiral/phases.hpp"

#include "chiral/errors.hpp"
#include "chiral/observables.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace chiral {

namespace {

std::span<const double> as_span(const RVector& v) {
    return {v.data(), static_cast<std::size_t>(v.size())};
}

ChainConfig with(const ChainConfig& base, int n, double xi) {
    ChainConfig c = base;
    c.n_atoms = n;
    c.xi = xi;
    return c;
}

double pr_at(const ChainConfig& base, int n, double xi) {
    const SteadyState s = solve_steady(with(base, n, xi));
    return participation_ratio(as_span(s.normalized));
}

// Both edges strictly above uniform.
bool bi_edge(const ChainConfig& base, int n, double xi) {
    const SteadyState s = solve_steady(with(base, n, xi));
    const double u = 1.0 / n;
    return s.normalized(0) > u && s.normalized(n - 1) > u;
}

// Least squares y = c0 + c1 x; returns {c0, c1, rms residual}.
struct LineFit {
    double c0, c1, rms;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    const double c1 = sxy / sxx;
    const double c0 = my - c1 * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (c0 + c1 * x[i]);
        ss += r * r;
    }
    return {c0, c1, std::sqrt(ss / n)};
}

std::optional<double> own_pr_exponent(std::span<const SizeObservables> obs) {
    if (obs.size() < 3) {
        return std::nullopt;
    }
    std::vector<int> n;
    std::vector<double> pr;
    for (const auto& o : obs) {
        if (!(o.pr > 0.0)) {
            return std::nullopt;
        }
        n.push_back(o.n);
        pr.push_back(o.pr);
    }
    return fit_pr_scaling(n, pr).power_law().alpha;
}

} // namespace

std::string to_token(const PhaseLabel& label) {
    switch (label.kind) {
    case PhaseKind::ETD: return "ETD";
    case PhaseKind::CO: return "CO";
    case PhaseKind::BEE: return "BEE";
    case PhaseKind::CFD: return "CFD";
    case PhaseKind::Critical: return "CRIT";
    case PhaseKind::BHE:
        switch (label.strength) {
        case BheStrength::Strong: return "BHE_S";
        case BheStrength::Moderate: return "BHE_M";
        case BheStrength::Weak: return "BHE_W";
        }
    }
    return "ETD";
}

PhaseLabel label_from_token(std::string_view token) {
    if (token == "ETD") return {PhaseKind::ETD};
    if (token == "CO") return {PhaseKind::CO};
    if (token == "BEE") return {PhaseKind::BEE};
    if (token == "CFD") return {PhaseKind::CFD};
    if (token == "CRIT") return {PhaseKind::Critical};
    if (token == "BHE_S") return {PhaseKind::BHE, BheStrength::Strong};
    if (token == "BHE_M") return {PhaseKind::BHE, BheStrength::Moderate};
    if (token == "BHE_W") return {PhaseKind::BHE, BheStrength::Weak};
    throw DomainError("unknown phase token '" + std::string(token) + "'");
}

ScalingFit fit_pr_scaling(std::span<const int> sizes, std::span<const double> pr_values) {
    if (sizes.size() != pr_values.size()) {
        throw DomainError("sizes and PR values differ in length");
    }
    if (sizes.size() < 3) {
        throw DomainError("power-law fit needs at least 3 points");
    }
    std::vector<double> x, y;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] < 1) {
            throw DomainError("sizes must be positive");
        }
        if (!(pr_values[i] > 0.0)) {
            throw DomainError("power-law fit needs PR > 0");
        }
        x.push_back(std::log(static_cast<double>(sizes[i])));
        y.push_back(std::log(pr_values[i]));
    }
    if (std::set<int>(sizes.begin(), sizes.end()).size() < 2) {
        throw DomainError("power-law fit needs at least 2 distinct sizes");
    }
    const LineFit f = fit_line(x, y);
    return {PowerLawFit{std::exp(f.c0), f.c1}, f.rms};
}

ScalingFit fit_structure_thermo(std::span<const int> sizes, std::span<const double> s_max) {
    if (sizes.size() != s_max.size()) {
        throw DomainError("sizes and S_max values differ in length");
    }
    if (sizes.size() < 2) {
        throw DomainError("thermodynamic fit needs at least 2 points");
    }
    if (std::set<int>(sizes.begin(), sizes.end()).size() < 2) {
        throw DomainError("thermodynamic fit needs at least 2 distinct sizes");
    }
    std::vector<double> x, y;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] < 1) {
            throw DomainError("sizes must be positive");
        }
        x.push_back(1.0 / sizes[i]);
        y.push_back(s_max[i]);
    }
    const LineFit f = fit_line(x, y);
    return {ThermoLimitFit{f.c1, f.c0}, f.rms};
}

SizeObservables measure(const ChainConfig& config, const SteadyState& state) {
    const auto p = as_span(state.normalized);
    SizeObservables o;
    o.n = config.n_atoms;
    o.pr = participation_ratio(p);
    const StructureSpectrum s = structure_spectrum(p);
    o.s_max = s.max_nonzero_k.s;
    o.s_max_k = s.max_nonzero_k.k;
    o.p_first = p.front();
    o.p_last = p.back();
    o.transport = o.n >= 2 ? transport_imbalance(p) : 0.0;
    o.condition_estimate = state.condition_estimate;
    return o;
}

double pr_dichotomy(double pr_a, double pr_b) {
    const double top = std::max(pr_a, pr_b);
    return top > 0.0 ? std::abs(pr_a - pr_b) / top : 0.0;
}

double cfd_dichotomy(const ChainConfig& config, int n_even, int n_odd) {
    if (n_even < 2 || n_odd < 1 || n_even % 2 != 0 || n_odd % 2 != 1 ||
        std::abs(n_even - n_odd) != 1) {
        throw DomainError("cfd_dichotomy needs an even size and an adjacent odd size");
    }
    return pr_dichotomy(pr_at(config, n_even, config.xi), pr_at(config, n_odd, config.xi));
}

double bee_bhe_boundary_analytic() { return kPi / 3.0; }

std::optional<double> locate_bee_bhe_boundary(const ChainConfig& config, int n, double tol) {
    if (n < 3) {
        throw DomainError("boundary search needs N >= 3");
    }
    const double step = kPi / 200.0;
    auto bee = [&](double xi) {
        try {
            return bi_edge(config, n, xi);
        } catch (const CriticalPointError&) {
            return false;
        }
    };

    double lo = 0.0, hi = 0.0;
    double xi = kPi / 2.0;
    if (bee(xi)) {
        // Boundary above π/2: walk up until the edges drop.
        double prev = xi;
        for (xi += step; xi < kPi; xi += step) {
            if (!bee(xi)) break;
            prev = xi;
        }
        if (xi >= kPi) {
            return std::nullopt;
        }
        lo = prev;
        hi = xi;
    } else {
        double prev = xi;
        for (xi -= step; xi > 0.0; xi -= step) {
            if (bee(xi)) break;
            prev = xi;
        }
        if (xi <= 0.0) {
            return std::nullopt;
        }
        lo = xi;
        hi = prev;
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (bee(mid) ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

std::optional<PrPeak> bhe_peak_pr(const ChainConfig& config, int n) {
    const auto boundary = locate_bee_bhe_boundary(config, n);
    if (!boundary) {
        return std::nullopt;
    }
    const double step = kPi / 1000.0;
    auto pr = [&](double xi) { return pr_at(config, n, xi); };

    double x = *boundary + 1e-9;
    double fx = pr(x);
    for (;;) {
        const double xn = x + step;
        if (xn > kPi) {
            return PrPeak{x, fx};
        }
        const double fn = pr(xn);
        if (fn < fx) break;
        x = xn;
        fx = fn;
    }

    // Golden-section refinement on [x - step, x + step].
    double a = std::max(*boundary + 1e-9, x - step);
    double b = x + step;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = pr(c), fd = pr(d);
    for (int it = 0; it < 60 && b - a > 1e-12; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = pr(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = pr(d);
        }
    }
    const double xm = 0.5 * (a + b);
    const double fm = pr(xm);
    PrPeak best{x, fx};
    if (fm > best.pr) best = {xm, fm};
    return best;
}

std::optional<double> bhe_exponent(const ChainConfig& config, std::span<const int> sizes) {
    std::vector<int> n;
    std::vector<double> pr;
    for (int size : sizes) {
        std::optional<PrPeak> peak;
        try {
            peak = bhe_peak_pr(config, size);
        } catch (const CriticalPointError&) {
            return std::nullopt;
        }
        if (!peak || !(peak->pr > 0.0)) {
            return std::nullopt;
        }
        n.push_back(size);
        pr.push_back(peak->pr);
    }
    return fit_pr_scaling(n, pr).power_law().alpha;
}

BheStrength bhe_strength(double alpha, const ClassificationOptions& options) {
    if (alpha > options.strong_alpha) return BheStrength::Strong;
    if (alpha > options.weak_alpha) return BheStrength::Moderate;
    return BheStrength::Weak;
}

std::vector<int> bhe_fit_sizes(std::span<const int> sizes, const ClassificationOptions& options) {
    std::vector<int> sorted(sizes.begin(), sizes.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    return sorted.size() >= 3 ? sorted : options.reference_sizes;
}

void resolve_bhe(Classification& c, std::optional<double> row_alpha,
                 const ClassificationOptions& options) {
    if (c.label.kind != PhaseKind::BHE) {
        return;
    }
    std::optional<double> alpha = row_alpha;
    if (!alpha) {
        alpha = own_pr_exponent(c.per_size);
    }
    c.bhe_alpha = alpha;
    c.label.strength = alpha ? bhe_strength(*alpha, options) : BheStrength::Weak;
}

Classification classify(const ChainConfig& config, std::span<const int> sizes,
                        const ClassificationOptions& options, const BheScaling* bhe_hint) {
    if (sizes.empty()) {
        throw DomainError("classification needs at least one size");
    }
    std::vector<int> sorted(sizes.begin(), sizes.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    if (sorted.front() < 1) {
        throw DomainError("sizes must be positive");
    }
    const int largest = sorted.back();

    Classification out;
    ChainConfig big = config;
    big.n_atoms = largest;
    big.validate();
    out.condition_estimate = condition_check(build_coupling_matrix(big));
    if (!(out.condition_estimate <= options.singular_threshold)) {
        out.label = {PhaseKind::Critical};
        return out;
    }
    for (int n : sorted) {
        ChainConfig c = config;
        c.n_atoms = n;
        try {
            out.per_size.push_back(measure(c, solve_steady(c, options.singular_threshold)));
        } catch (const CriticalPointError& e) {
            out.label = {PhaseKind::Critical};
            out.condition_estimate = e.condition_estimate();
            out.per_size.clear();
            return out;
        }
    }
    const SizeObservables& top = out.per_size.back();

    if (out.per_size.size() >= 2) {
        std::vector<int> n;
        std::vector<double> s;
        for (const auto& o : out.per_size) {
            n.push_back(o.n);
            s.push_back(o.s_max);
        }
        out.thermo_intercept = fit_structure_thermo(n, s).thermo_limit().b;
    } else {
        // One size: no extrapolation possible, the intercept is S_max itself.
        out.thermo_intercept = top.s_max;
    }

    auto bhe_label = [&]() {
        if (bhe_hint && bhe_hint->deferred) {
            return PhaseLabel{PhaseKind::BHE, BheStrength::Strong};
        }
        const std::optional<double> alpha =
            bhe_hint ? bhe_hint->alpha : bhe_exponent(config, bhe_fit_sizes(sorted, options));
        out.label = {PhaseKind::BHE};
        resolve_bhe(out, alpha, options);
        return out.label;
    };

    const double u = 1.0 / largest;
    const double band = options.edge_rel_tol * u;
    const bool first_hi = top.p_first > u + band, first_lo = top.p_first < u - band;
    const bool last_hi = top.p_last > u + band, last_lo = top.p_last < u - band;
    const bool in_band = !(first_hi || first_lo) || !(last_hi || last_lo);

    if (first_hi && last_hi) {
        out.label = {PhaseKind::BEE};
        return out;
    }
    if (first_lo && last_lo) {
        out.label = bhe_label();
        return out;
    }
    if (in_band && config.directionality == 0.0) {
        const double folded = std::min(config.xi, 2.0 * kPi - config.xi);
        out.label = folded < bee_bhe_boundary_analytic() ? PhaseLabel{PhaseKind::BEE} : bhe_label();
        return out;
    }
    if (*out.thermo_intercept > options.co_min_intercept) {
        out.label = {PhaseKind::CO};
        return out;
    }
    if (std::abs(config.xi - kPi) <= options.cfd_xi_window) {
        const int even = largest % 2 == 0 ? largest : largest - 1;
        if (even >= 2) {
            try {
                out.dichotomy = cfd_dichotomy(config, even, even + 1);
            } catch (const CriticalPointError&) {
                out.dichotomy.reset();
            }
            if (out.dichotomy && *out.dichotomy > options.cfd_threshold) {
                out.label = {PhaseKind::CFD};
                return out;
            }
        }
    }
    out.label = {PhaseKind::ETD};
    return out;
}

PhaseLabel classify_point(const ChainConfig& config, std::span<const int> sizes,
                          const ClassificationOptions& options) {
    return classify(config, sizes, options).label;
}

} // namespace chiral
