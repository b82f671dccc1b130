// chiral-chain: command-line front end

#include "chiral/dynamics.hpp"
#include "chiral/errors.hpp"
#include "chiral/io.hpp"
#include "chiral/model.hpp"
#include "chiral/observables.hpp"
#include "chiral/phases.hpp"
#include "chiral/recipes.hpp"
#include "chiral/spectrum.hpp"
#include "chiral/steady_state.hpp"
#include "chiral/sweep.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace chiral;
using nlohmann::json;

namespace {

struct ConfigFlags {
    std::string config_path;
    std::optional<int> n_atoms;
    std::optional<std::string> xi;
    std::optional<double> directionality;
    std::optional<double> rabi;
    std::optional<std::string> theta_s;
    std::optional<std::string> detuning;
    std::optional<double> detuning_param;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file");
        cmd->add_option("-n,--n-atoms", n_atoms, "number of atoms N");
        cmd->add_option("--xi", xi, "phase xi in radians (accepts pi/4, 0.8pi, ...)");
        cmd->add_option("-d,--directionality", directionality, "directionality D in [-1, 1]");
        cmd->add_option("--rabi", rabi, "drive amplitude in units of gamma");
        cmd->add_option("--theta-s", theta_s, "excitation angle (accepts pi/2, ...)");
        cmd->add_option("--detuning", detuning, "uniform | linear | harmonic");
        cmd->add_option("--detuning-param", detuning_param, "delta0, slope or curvature");
    }

    ChainConfig build() const {
        ChainConfig c;
        if (!config_path.empty()) {
            std::ifstream f(config_path);
            if (!f) throw IoError("cannot read config file '" + config_path + "'");
            json doc;
            try {
                doc = json::parse(f);
            } catch (const json::parse_error& e) {
                throw UsageError("config file is not valid JSON: " + std::string(e.what()));
            }
            try {
                c = config_from_json(doc);
            } catch (const DomainError& e) {
                throw UsageError(e.what());
            }
        }
        if (n_atoms) c.n_atoms = *n_atoms;
        if (xi) c.xi = parse_angle(*xi);
        if (directionality) c.directionality = *directionality;
        if (rabi) c.rabi = *rabi;
        if (theta_s) c.theta_s = parse_angle(*theta_s);
        if (detuning || detuning_param) {
            const std::string type = detuning.value_or(detuning_type_name(c.detuning));
            json d{{"type", type}, {"params", json::object()}};
            if (detuning_param) {
                const char* key = type == "uniform" ? "delta0" : type == "linear" ? "slope" : "curvature";
                d["params"][key] = *detuning_param;
            }
            c.detuning = detuning_from_json(d);
        }
        c.validate();
        return c;
    }
};

struct OutputFlags {
    std::string format{"csv"};
    std::string out;

    void attach(CLI::App* cmd) {
        cmd->add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("-o,--out", out, "output file (default: stdout)");
    }

    void emit(const Table& t) const {
        const std::string text = format == "json" ? to_json(t).dump(1) + "\n" : to_csv(t);
        if (out.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream f(out, std::ios::binary);
        if (!f || !(f << text)) throw IoError("cannot write '" + out + "'");
    }
};

// "a:b:count" evenly spaced, or a comma-separated list of angles/numbers.
std::vector<double> parse_grid(const std::string& text, const std::string& name) {
    std::vector<double> g;
    if (text.empty()) return g;
    const auto c1 = text.find(':');
    if (c1 != std::string::npos) {
        const auto c2 = text.find(':', c1 + 1);
        if (c2 == std::string::npos) throw UsageError(name + ": expected start:stop:count");
        const double a = parse_angle(text.substr(0, c1));
        const double b = parse_angle(text.substr(c1 + 1, c2 - c1 - 1));
        const int count = std::stoi(text.substr(c2 + 1));
        if (count < 1) throw UsageError(name + ": count must be >= 1");
        for (int i = 0; i < count; ++i) g.push_back(count == 1 ? a : a + (b - a) * i / (count - 1));
        return g;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) g.push_back(parse_angle(item));
    }
    return g;
}

std::vector<int> parse_sizes(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        std::size_t used = 0;
        const int n = std::stoi(item, &used);
        if (used != item.size()) throw UsageError("sizes: '" + item + "' is not an integer");
        out.push_back(n);
    }
    return out;
}

struct Failure {
    const char* kind;
    int code;
};

int report(const Failure& f, const std::string& message) {
    std::cerr << "error: " << json{{"kind", f.kind}, {"message", message}}.dump() << '\n';
    return f.code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weakly driven chiral-coupled atomic chain: steady states, spectra, dynamics, phases"};
    app.require_subcommand(1);
    app.fallthrough();
    std::optional<int> workers_flag;
    app.add_option("--workers", workers_flag, "parallel workers (env CHIRAL_CHAIN_WORKERS)")
        ->check(CLI::PositiveNumber);

    ConfigFlags cfg;
    OutputFlags outf;

    auto* matrix = app.add_subcommand("matrix", "coupling matrix entries");
    auto* steady = app.add_subcommand("steady", "steady-state amplitudes and populations");
    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues sorted by decay rate");
    auto* dynamics = app.add_subcommand("dynamics", "time evolution from the ground state");
    auto* transport = app.add_subcommand("transport", "left-right population imbalance");
    for (auto* cmd : {matrix, steady, spectrum, dynamics, transport}) {
        cfg.attach(cmd);
        outf.attach(cmd);
    }
    bool structure = false;
    steady->add_flag("--structure", structure, "emit S(k) instead of the populations");

    double t_end = 100.0, dt = 0.5;
    bool rescaled = false, traversal = false;
    dynamics->add_option("--t-end", t_end, "final time (1/gamma)");
    dynamics->add_option("--dt", dt, "sampling interval");
    dynamics->add_flag("--rescaled", rescaled, "add a t_rescaled = t/1000 column");
    dynamics->add_flag("--traversal", traversal, "report the traversal time t_c instead");

    auto* phase = app.add_subcommand("phase-diagram", "classify a (D, xi) grid");
    cfg.attach(phase);
    std::string d_grid = "0:1:41", xi_grid, sizes_text = "50,100,150", out_dir = ".";
    std::string sweep_format = "csv";
    phase->add_option("--d-grid", d_grid, "start:stop:count or comma list");
    phase->add_option("--xi-grid", xi_grid, "start:stop:count or comma list (default pi/41..pi)");
    phase->add_option("--sizes", sizes_text, "comma-separated N values");
    phase->add_option("--out-dir", out_dir, "output directory");
    phase->add_option("--format", sweep_format, "csv | json | both")
        ->check(CLI::IsMember({"csv", "json", "both"}));

    auto* recipe = app.add_subcommand("recipe", "write the data behind a figure");
    std::string recipe_name, recipe_dir = ".", recipe_format = "csv";
    bool list = false;
    recipe->add_option("name", recipe_name, "recipe name");
    recipe->add_flag("--list", list, "print the recipe names");
    recipe->add_option("--out-dir", recipe_dir, "output directory");
    recipe->add_option("--format", recipe_format, "csv | json | both")
        ->check(CLI::IsMember({"csv", "json", "both"}));

    auto* fit = app.add_subcommand("fit", "finite-size fits");
    std::string fit_kind, fit_sizes, fit_values;
    fit->add_option("kind", fit_kind, "power-law | thermo")
        ->required()
        ->check(CLI::IsMember({"power-law", "thermo"}));
    fit->add_option("--sizes", fit_sizes, "comma-separated N values")->required();
    fit->add_option("--values", fit_values, "comma-separated PR or S_max values")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report({"usage", 2}, e.what());
    }

    try {
        const int workers = workers_flag ? *workers_flag : workers_from_env(0);

        if (*matrix) {
            const ChainConfig c = cfg.build();
            outf.emit(matrix_table(c, build_coupling_matrix(c)));
        } else if (*steady) {
            const ChainConfig c = cfg.build();
            const SteadyState s = solve_steady(c);
            if (structure) {
                outf.emit(structure_table(
                    c, structure_spectrum({s.normalized.data(), static_cast<std::size_t>(s.normalized.size())})));
            } else {
                outf.emit(steady_table(c, s));
            }
        } else if (*spectrum) {
            const ChainConfig c = cfg.build();
            outf.emit(spectrum_table(c, eigen_spectrum(build_coupling_matrix(c))));
        } else if (*dynamics) {
            const ChainConfig c = cfg.build();
            if (traversal) {
                Table t;
                t.columns = {"n", "d", "xi", "t_c"};
                t.metadata["config"] = to_json(c);
                t.add_row({static_cast<long long>(c.n_atoms), c.directionality, c.xi, traversal_time(c)});
                outf.emit(t);
            } else {
                if (!(dt > 0.0) || !(t_end >= 0.0)) throw UsageError("--dt must be > 0 and --t-end >= 0");
                const long steps = std::lround(t_end / dt);
                std::vector<double> grid;
                for (long i = 0; i <= steps; ++i) grid.push_back(static_cast<double>(i) * dt);
                outf.emit(trajectory_table(c, propagate(c, CVector::Zero(c.n_atoms), grid), rescaled));
            }
        } else if (*transport) {
            const ChainConfig c = cfg.build();
            const SteadyState s = solve_steady(c);
            const SizeObservables o = measure(c, s);
            Table t;
            t.columns = {"n", "d", "xi", "transport", "pr"};
            t.metadata["config"] = to_json(c);
            t.add_row({static_cast<long long>(c.n_atoms), c.directionality, c.xi, o.transport, o.pr});
            outf.emit(t);
        } else if (*phase) {
            SweepSpec spec;
            spec.base_config = cfg.build();
            spec.d_grid = parse_grid(d_grid, "--d-grid");
            spec.xi_grid = xi_grid.empty() && !phase->get_option("--xi-grid")->count()
                               ? default_xi_grid(41)
                               : parse_grid(xi_grid, "--xi-grid");
            spec.sizes = parse_sizes(sizes_text);
            if (spec.d_grid.empty() || spec.xi_grid.empty()) throw UsageError("phase-diagram grid is empty");
            if (spec.sizes.empty()) throw UsageError("--sizes is empty");
            spec.out_dir = out_dir;
            spec.format = format_from_string(sweep_format);
            for (const auto& p : run_phase_diagram(spec, workers)) std::cout << p.string() << '\n';
        } else if (*recipe) {
            if (list) {
                for (const auto& n : recipe_names()) std::cout << n << '\n';
                return 0;
            }
            if (recipe_name.empty()) {
                std::string valid;
                for (const auto& n : recipe_names()) valid += (valid.empty() ? "" : ", ") + n;
                throw UsageError("recipe name required; valid: " + valid);
            }
            for (const auto& p : run_figure_recipe(recipe_name, recipe_dir, format_from_string(recipe_format), workers)) {
                std::cout << p.string() << '\n';
            }
        } else if (*fit) {
            const std::vector<int> n = parse_sizes(fit_sizes);
            const std::vector<double> v = parse_grid(fit_values, "--values");
            json out;
            if (fit_kind == "power-law") {
                const ScalingFit f = fit_pr_scaling(n, v);
                out = {{"kind", "power_law"}, {"beta", f.power_law().beta}, {"alpha", f.power_law().alpha},
                       {"residual", f.residual}};
            } else {
                const ScalingFit f = fit_structure_thermo(n, v);
                out = {{"kind", "thermo_limit"}, {"a", f.thermo_limit().a}, {"b", f.thermo_limit().b},
                       {"residual", f.residual}};
            }
            std::cout << out.dump() << '\n';
        }
    } catch (const UsageError& e) {
        return report({"usage", 2}, e.what());
    } catch (const DomainError& e) {
        return report({"domain", 2}, e.what());
    } catch (const CriticalPointError& e) {
        return report({"critical_point", 3},
                      std::string(e.what()) + " (condition estimate " + format_number(e.condition_estimate()) + ")");
    } catch (const IoError& e) {
        return report({"io", 4}, e.what());
    } catch (const IntegrationError& e) {
        return report({"integration", 5}, e.what());
    } catch (const TimeoutError& e) {
        return report({"timeout", 5}, e.what());
    } catch (const InsufficientDataError& e) {
        return report({"insufficient_data", 5}, e.what());
    } catch (const CapabilityError& e) {
        return report({"capability", 5}, e.what());
    } catch (const NumericError& e) {
        return report({"numeric", 5}, e.what());
    } catch (const std::invalid_argument& e) {
        return report({"usage", 2}, e.what());
    } catch (const std::exception& e) {
        return report({"internal", 1}, e.what());
    }
    return 0;
}
