#include "chiral/recipes.hpp"

#include "chiral/errors.hpp"
#include "chiral/sweep.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <map>
#include <sstream>

namespace chiral {

namespace {

std::span<const double> as_span(const RVector& v) {
    return {v.data(), static_cast<std::size_t>(v.size())};
}

Table with_config(const ChainConfig& config, std::vector<std::string> columns) {
    Table t;
    t.columns = std::move(columns);
    t.metadata["config"] = to_json(config);
    return t;
}

ChainConfig make(int n, double xi, double d, DetuningProfile det = UniformDetuning{},
                 double theta_s = kPi / 2) {
    ChainConfig c;
    c.n_atoms = n;
    c.xi = xi;
    c.directionality = d;
    c.detuning = det;
    c.theta_s = theta_s;
    return c;
}

std::vector<double> linspace(double a, double b, int count) {
    std::vector<double> g(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) g[i] = a + (b - a) * i / (count - 1);
    return g;
}

std::vector<double> geomspace(double a, double b, int count) {
    std::vector<double> g = linspace(std::log(a), std::log(b), count);
    for (double& x : g) x = std::exp(x);
    return g;
}

std::string tag(double x) {
    std::ostringstream os;
    os << x;
    return os.str();
}

// Profile of one steady state: site, normalized.
RecipeOutput profile(const std::string& stem, const ChainConfig& c) {
    return {stem, steady_table(c, solve_steady(c))};
}

// PR and friends for every config in `configs`, keyed by `key` columns.
Table scan_table(const std::vector<ChainConfig>& configs, const std::vector<std::string>& key_names,
                 const std::function<std::vector<Cell>(const ChainConfig&)>& key, int workers) {
    const auto obs = measure_scan(configs, workers);
    std::vector<std::string> cols = key_names;
    cols.insert(cols.end(), {"n", "pr", "s_max", "p_first", "p_last", "transport",
                             "condition_estimate"});
    Table t = with_config(configs.front(), cols);
    for (std::size_t i = 0; i < configs.size(); ++i) {
        std::vector<Cell> row = key(configs[i]);
        const SizeObservables& o = obs[i];
        row.insert(row.end(), {static_cast<long long>(o.n), o.pr, o.s_max, o.p_first, o.p_last,
                               o.transport, o.condition_estimate});
        t.add_row(std::move(row));
    }
    return t;
}

std::vector<RecipeOutput> fig1b(int workers) {
    // PR(ξ) along horizontal cuts of the diagram.
    std::vector<ChainConfig> configs;
    for (double d : {0.0, 0.2, 0.4, 0.6, 0.8, 1.0}) {
        for (int n : {50, 100, 150}) {
            for (double xi : default_xi_grid(400)) configs.push_back(make(n, xi, d));
        }
    }
    auto key = [](const ChainConfig& c) { return std::vector<Cell>{c.directionality, c.xi}; };
    return {{"fig1b", scan_table(configs, {"d", "xi"}, key, workers)}};
}

std::vector<RecipeOutput> fig2a(int workers) {
    const std::vector<int> sizes{50, 100, 150};
    const std::vector<double> ds = geomspace(0.1, 1.0, 10);
    const long cells = static_cast<long>(sizes.size() * ds.size());
    std::vector<double> tc(static_cast<std::size_t>(cells));
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cells));
#pragma omp parallel for schedule(dynamic) num_threads(workers > 0 ? workers : omp_get_max_threads())
    for (long i = 0; i < cells; ++i) {
        try {
            tc[i] = traversal_time(make(sizes[i / ds.size()], 0.0, ds[i % ds.size()]));
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    Table t = with_config(make(sizes.front(), 0.0, ds.front()), {"n", "d", "t_c"});
    t.metadata["threshold_fraction"] = TraversalOptions{}.threshold_fraction;
    for (long i = 0; i < cells; ++i) {
        t.add_row({static_cast<long long>(sizes[i / ds.size()]), ds[i % ds.size()], tc[i]});
    }
    return {{"fig2a", std::move(t)}};
}

std::vector<RecipeOutput> fig2b(int) {
    return {profile("fig2b_co", make(50, kPi / 4, 1.0)), profile("fig2b_bee", make(50, kPi / 8, 0.0))};
}

std::vector<RecipeOutput> fig2c(int workers) {
    std::vector<ChainConfig> configs;
    for (int n : {50, 51}) {
        for (double d : linspace(0.0, 1.0, 101)) configs.push_back(make(n, kPi, d));
    }
    auto key = [](const ChainConfig& c) { return std::vector<Cell>{c.directionality}; };
    return {{"fig2c_pr", scan_table(configs, {"d"}, key, workers)},
            profile("fig2c_n50_d1", make(50, kPi, 1.0)),
            profile("fig2c_n50_d0.02", make(50, kPi, 0.02)),
            profile("fig2c_n51_d0.02", make(51, kPi, 0.02))};
}

std::vector<RecipeOutput> fig3a(int workers) {
    std::vector<ChainConfig> configs;
    for (double f : {1.0 / 32, 1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2, 3.0 / 4, 7.0 / 8}) {
        for (double s : linspace(0.0, 50.0, 501)) {
            configs.push_back(make(51, f * kPi, 0.0, LinearDetuning{s}));
        }
    }
    auto key = [](const ChainConfig& c) {
        return std::vector<Cell>{c.xi, std::get<LinearDetuning>(c.detuning).slope};
    };
    return {{"fig3a", scan_table(configs, {"xi", "slope"}, key, workers)}};
}

RecipeOutput correlation(const std::string& stem, const ChainConfig& c) {
    return {stem, correlation_table(c, solve_steady(c).normalized)};
}

std::vector<RecipeOutput> fig3b(int) {
    const int n = 51;
    const HarmonicDetuning h{1.0 / n};
    return {correlation("fig3b_xi0.25pi", make(n, kPi / 4, 0.0, h)),
            correlation("fig3b_xi0.5pi", make(n, kPi / 2, 0.0, h)),
            correlation("fig3b_xi0.975pi", make(n, 3.9 * kPi / 4, 0.0, h))};
}

std::vector<RecipeOutput> fig3c(int) {
    const int n = 51;
    const HarmonicDetuning h{0.01 / n};
    return {correlation("fig3c_d1_xi0.75pi", make(n, 3 * kPi / 4, 1.0, h)),
            correlation("fig3c_d0.01_xi1pi", make(n, kPi, 0.01, h))};
}

std::vector<RecipeOutput> fig3d(int) {
    Table s = with_config(make(101, kPi / 4, 1.0), {"theta_s", "m", "k", "S"});
    for (int j = 7; j >= 2; --j) {
        const ChainConfig c = make(101, kPi / 4, 1.0, UniformDetuning{}, j * kPi / 8);
        const StructureSpectrum sp = structure_spectrum(as_span(solve_steady(c).normalized));
        for (std::size_t m = 0; m < sp.k_values.size(); ++m) {
            s.add_row({c.theta_s, static_cast<long long>(m), sp.k_values[m], sp.s_values[m]});
        }
    }
    std::vector<RecipeOutput> out{{"fig3d_structure", std::move(s)}};
    for (double f : {7.0 / 8, 1.0 / 8, 1.0 / 2}) {
        out.push_back(profile("fig3d_theta" + tag(f) + "pi",
                              make(51, kPi / 4, 0.3, UniformDetuning{}, f * kPi)));
    }
    return out;
}

RecipeOutput trajectory(const std::string& stem, const ChainConfig& c, double t_end, double dt,
                        bool rescaled) {
    const int steps = static_cast<int>(std::lround(t_end / dt));
    std::vector<double> grid(static_cast<std::size_t>(steps) + 1);
    for (int i = 0; i <= steps; ++i) grid[i] = i * dt;
    const Trajectory tr = propagate(c, CVector::Zero(c.n_atoms), grid);
    return {stem, trajectory_table(c, tr, rescaled)};
}

std::vector<RecipeOutput> fig4a(int) {
    return {trajectory("fig4a", make(50, 0.8 * kPi, 0.2), 400.0, 0.5, false)};
}

std::vector<RecipeOutput> fig4b(int) {
    return {trajectory("fig4b", make(50, 0.8 * kPi, 0.0), 1000.0, 0.5, true)};
}

const std::vector<double> kSpectrumXi{0.01, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5};

std::vector<RecipeOutput> figS1(int) {
    Table t = with_config(make(100, 0.01 * kPi, 0.0), {"xi_over_pi", "n", "decay_rate", "shift"});
    for (double f : kSpectrumXi) {
        const EigenSpectrum sp = eigen_spectrum(build_coupling_matrix(make(100, f * kPi, 0.0)));
        for (std::size_t i = 0; i < sp.decay_rates.size(); ++i) {
            t.add_row({f, static_cast<long long>(i + 1), sp.decay_rates[i], sp.shifts[i]});
        }
    }
    return {{"figS1", std::move(t)}};
}

std::vector<RecipeOutput> figS2(int) {
    Table t = with_config(make(100, 0.01 * kPi, 0.0), {"xi_over_pi", "n", "shift"});
    for (double f : kSpectrumXi) {
        const EigenSpectrum sp = eigen_spectrum(build_coupling_matrix(make(100, f * kPi, 0.0)));
        std::vector<double> shifts = sp.shifts;
        std::sort(shifts.begin(), shifts.end());
        for (std::size_t i = 0; i < shifts.size(); ++i) {
            t.add_row({f, static_cast<long long>(i + 1), shifts[i]});
        }
    }
    return {{"figS2", std::move(t)}};
}

using Builder = std::vector<RecipeOutput> (*)(int);

const std::map<std::string, Builder>& registry() {
    static const std::map<std::string, Builder> r{
        {"fig1b", fig1b}, {"fig2a", fig2a}, {"fig2b", fig2b}, {"fig2c", fig2c},
        {"fig3a", fig3a}, {"fig3b", fig3b}, {"fig3c", fig3c}, {"fig3d", fig3d},
        {"fig4a", fig4a}, {"fig4b", fig4b}, {"figS1", figS1}, {"figS2", figS2}};
    return r;
}

} // namespace

Table steady_table(const ChainConfig& config, const SteadyState& state) {
    Table t = with_config(config, {"site", "re_sigma", "im_sigma", "population", "normalized"});
    t.metadata["condition_estimate"] = state.condition_estimate;
    t.metadata["residual"] = state.residual;
    for (Eigen::Index j = 0; j < state.sigma.size(); ++j) {
        t.add_row({static_cast<long long>(j + 1), state.sigma(j).real(), state.sigma(j).imag(),
                   state.populations(j), state.normalized(j)});
    }
    return t;
}

Table spectrum_table(const ChainConfig& config, const EigenSpectrum& spectrum) {
    Table t = with_config(config, {"n", "decay_rate", "shift"});
    for (std::size_t i = 0; i < spectrum.decay_rates.size(); ++i) {
        t.add_row({static_cast<long long>(i + 1), spectrum.decay_rates[i], spectrum.shifts[i]});
    }
    return t;
}

Table structure_table(const ChainConfig& config, const StructureSpectrum& spectrum) {
    Table t = with_config(config, {"m", "k", "S"});
    t.metadata["max_nonzero_k"] = {{"k", spectrum.max_nonzero_k.k}, {"S", spectrum.max_nonzero_k.s}};
    for (std::size_t m = 0; m < spectrum.k_values.size(); ++m) {
        t.add_row({static_cast<long long>(m), spectrum.k_values[m], spectrum.s_values[m]});
    }
    return t;
}

Table matrix_table(const ChainConfig& config, const CouplingMatrix& m) {
    Table t = with_config(config, {"mu", "nu", "re", "im"});
    for (int mu = 0; mu < m.n(); ++mu) {
        for (int nu = 0; nu < m.n(); ++nu) {
            t.add_row({static_cast<long long>(mu + 1), static_cast<long long>(nu + 1),
                       m(mu, nu).real(), m(mu, nu).imag()});
        }
    }
    return t;
}

Table correlation_table(const ChainConfig& config, const RVector& p) {
    Table t = with_config(config, {"i", "j", "value"});
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        for (Eigen::Index j = 0; j < p.size(); ++j) {
            t.add_row({static_cast<long long>(i + 1), static_cast<long long>(j + 1), p(i) * p(j)});
        }
    }
    return t;
}

Table trajectory_table(const ChainConfig& config, const Trajectory& tr, bool rescaled) {
    std::vector<std::string> cols{"t"};
    if (rescaled) cols.push_back("t_rescaled");
    cols.insert(cols.end(), {"P_t", "P_t_over_rabi"});
    for (int j = 1; j <= config.n_atoms; ++j) cols.push_back("p_" + std::to_string(j));
    Table t = with_config(config, cols);
    if (rescaled) t.metadata["t_rescaled"] = "t / 1000";
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        std::vector<Cell> row{tr.times[i]};
        if (rescaled) row.push_back(tr.times[i] / 1000.0);
        row.push_back(tr.total_population_t[i]);
        row.push_back(tr.total_population_t[i] / config.rabi);
        for (double p : tr.normalized_at(i)) row.push_back(p);
        t.add_row(std::move(row));
    }
    return t;
}

const std::vector<std::string>& recipe_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [k, _] : registry()) v.push_back(k);
        return v;
    }();
    return names;
}

std::vector<RecipeOutput> build_recipe(const std::string& name, int workers) {
    const auto it = registry().find(name);
    if (it == registry().end()) {
        std::string valid;
        for (const auto& n : recipe_names()) valid += (valid.empty() ? "" : ", ") + n;
        throw UsageError("unknown recipe '" + name + "'; valid: " + valid);
    }
    auto out = it->second(workers);
    for (auto& o : out) o.table.metadata["recipe"] = name;
    return out;
}

std::vector<std::filesystem::path> run_figure_recipe(const std::string& name,
                                                     const std::filesystem::path& dir,
                                                     OutputFormat format, int workers) {
    if (registry().find(name) == registry().end()) {
        build_recipe(name, workers);  // throws the usage error
    }
    ensure_writable_dir(dir);
    std::vector<std::filesystem::path> written;
    for (const auto& o : build_recipe(name, workers)) {
        const auto paths = write_table(o.table, dir, o.stem, format);
        written.insert(written.end(), paths.begin(), paths.end());
    }
    return written;
}

} // namespace chiral
