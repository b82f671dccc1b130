#include "chiral/sweep.hpp"

#include "chiral/errors.hpp"
#include "chiral/steady_state.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <string>

namespace chiral {

namespace {

int thread_count(int workers) { return workers > 0 ? workers : omp_get_max_threads(); }

ChainConfig cell_config(const SweepSpec& spec, double d, double xi) {
    ChainConfig c = spec.base_config;
    c.directionality = d;
    c.xi = xi;
    return c;
}

// Rethrows the lowest-index failure so error reporting is deterministic too.
void rethrow_first(const std::vector<std::exception_ptr>& errors) {
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

SizeObservables measure_one(const ChainConfig& c) {
    try {
        return measure(c, solve_steady(c));
    } catch (const CriticalPointError& e) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        return {c.n_atoms, nan, nan, nan, nan, nan, nan, e.condition_estimate()};
    }
}

} // namespace

void SweepSpec::validate() const {
    if (d_grid.empty() || xi_grid.empty()) {
        throw DomainError("sweep grid is empty");
    }
    if (sizes.empty()) {
        throw DomainError("sweep needs at least one size");
    }
    for (int n : sizes) {
        if (n < 1) throw DomainError("sizes: N must be >= 1");
    }
    for (double d : d_grid) {
        if (!(d >= -1.0 && d <= 1.0)) throw DomainError("d_grid: D must lie in [-1, 1]");
    }
    for (double xi : xi_grid) {
        if (!(xi >= 0.0 && xi <= 2.0 * kPi)) throw DomainError("xi_grid: xi must lie in [0, 2pi]");
    }
    ChainConfig probe = base_config;
    probe.directionality = d_grid.front();
    probe.xi = xi_grid.front();
    probe.validate();
}

std::vector<double> default_d_grid(int count) {
    if (count < 2) throw DomainError("grid needs at least 2 points");
    std::vector<double> g(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) g[i] = static_cast<double>(i) / (count - 1);
    return g;
}

std::vector<double> default_xi_grid(int count) {
    if (count < 1) throw DomainError("grid needs at least 1 point");
    std::vector<double> g(static_cast<std::size_t>(count));
    for (int m = 1; m <= count; ++m) g[m - 1] = kPi * m / count;
    return g;
}

PhaseDiagram compute_phase_diagram(const SweepSpec& spec, int workers) {
    spec.validate();
    const std::size_t nd = spec.d_grid.size(), nx = spec.xi_grid.size();
    const long cells = static_cast<long>(nd * nx);

    PhaseDiagram out;
    out.spec = spec;
    out.points.resize(nd * nx);
    std::vector<std::exception_ptr> errors(nd * nx);
    const BheScaling deferred{std::nullopt, true};

#pragma omp parallel for schedule(dynamic) num_threads(thread_count(workers))
    for (long i = 0; i < cells; ++i) {
        const std::size_t r = static_cast<std::size_t>(i) / nx, c = static_cast<std::size_t>(i) % nx;
        PhasePoint& p = out.points[i];
        p.d = spec.d_grid[r];
        p.xi = spec.xi_grid[c];
        try {
            p.result = classify(cell_config(spec, p.d, p.xi), spec.sizes, spec.options, &deferred);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    rethrow_first(errors);

    // BHE exponent depends on D only: one fit per row that has BHE cells.
    std::vector<long> rows;
    for (std::size_t r = 0; r < nd; ++r) {
        for (std::size_t c = 0; c < nx; ++c) {
            if (out.points[r * nx + c].result.label.kind == PhaseKind::BHE) {
                rows.push_back(static_cast<long>(r));
                break;
            }
        }
    }
    const std::vector<int> fit_sizes = bhe_fit_sizes(spec.sizes, spec.options);
    std::vector<std::optional<double>> alpha(nd);
    const long nrows = static_cast<long>(rows.size());
#pragma omp parallel for schedule(dynamic) num_threads(thread_count(workers))
    for (long k = 0; k < nrows; ++k) {
        const std::size_t r = static_cast<std::size_t>(rows[k]);
        try {
            alpha[r] = bhe_exponent(cell_config(spec, spec.d_grid[r], 0.0), fit_sizes);
        } catch (...) {
            errors[r * nx] = std::current_exception();
        }
    }
    rethrow_first(errors);

    for (std::size_t i = 0; i < out.points.size(); ++i) {
        resolve_bhe(out.points[i].result, alpha[i / nx], spec.options);
    }
    return out;
}

PhaseDiagram compute_phase_diagram_serial(const SweepSpec& spec) {
    spec.validate();
    PhaseDiagram out;
    out.spec = spec;
    for (double d : spec.d_grid) {
        for (double xi : spec.xi_grid) {
            out.points.push_back({d, xi, classify(cell_config(spec, d, xi), spec.sizes, spec.options)});
        }
    }
    return out;
}

Table phase_diagram_table(const PhaseDiagram& diagram) {
    const SweepSpec& spec = diagram.spec;
    std::vector<int> sizes(spec.sizes);
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());

    Table t;
    t.columns = {"d", "xi", "label", "condition_estimate", "thermo_b", "bhe_alpha", "dichotomy"};
    for (int n : sizes) {
        const std::string s = std::to_string(n);
        for (const char* q : {"pr_", "s_max_", "s_max_k_", "p_first_", "p_last_", "transport_"}) {
            t.columns.push_back(q + s);
        }
    }
    t.metadata["config"] = to_json(spec.base_config);
    t.metadata["sizes"] = sizes;
    t.metadata["grid"] = {{"d", spec.d_grid.size()}, {"xi", spec.xi_grid.size()}};

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (const PhasePoint& p : diagram.points) {
        const Classification& r = p.result;
        std::vector<Cell> row{p.d,
                              p.xi,
                              to_token(r.label),
                              r.condition_estimate,
                              r.thermo_intercept.value_or(nan),
                              r.bhe_alpha.value_or(nan),
                              r.dichotomy.value_or(nan)};
        for (std::size_t k = 0; k < sizes.size(); ++k) {
            if (k < r.per_size.size()) {
                const SizeObservables& o = r.per_size[k];
                row.insert(row.end(), {o.pr, o.s_max, o.s_max_k, o.p_first, o.p_last, o.transport});
            } else {
                row.insert(row.end(), 6, Cell{nan});
            }
        }
        t.add_row(std::move(row));
    }
    return t;
}

std::vector<std::filesystem::path> run_phase_diagram(const SweepSpec& spec, int workers,
                                                     PhaseDiagram* result) {
    spec.validate();
    if (!spec.out_dir.empty()) {
        ensure_writable_dir(spec.out_dir);
    }
    PhaseDiagram diagram = compute_phase_diagram(spec, workers);
    std::vector<std::filesystem::path> written;
    if (!spec.out_dir.empty()) {
        written = write_table(phase_diagram_table(diagram), spec.out_dir, "phase_diagram", spec.format);
    }
    if (result) {
        *result = std::move(diagram);
    }
    return written;
}

std::vector<SizeObservables> measure_scan(std::span<const ChainConfig> configs, int workers) {
    const long n = static_cast<long>(configs.size());
    std::vector<SizeObservables> out(configs.size());
    std::vector<std::exception_ptr> errors(configs.size());
#pragma omp parallel for schedule(dynamic) num_threads(thread_count(workers))
    for (long i = 0; i < n; ++i) {
        try {
            out[i] = measure_one(configs[i]);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    rethrow_first(errors);
    return out;
}

std::vector<SizeObservables> measure_scan_serial(std::span<const ChainConfig> configs) {
    std::vector<SizeObservables> out;
    out.reserve(configs.size());
    for (const ChainConfig& c : configs) {
        out.push_back(measure_one(c));
    }
    return out;
}

int workers_from_env(int fallback) {
    const char* env = std::getenv("CHIRAL_CHAIN_WORKERS");
    if (!env || !*env) return fallback;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1) {
        throw DomainError("CHIRAL_CHAIN_WORKERS must be a positive integer");
    }
    return static_cast<int>(v);
}

} // namespace chiral
