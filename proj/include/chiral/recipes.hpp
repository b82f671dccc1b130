// recipes.hpp: tables for CLI subcommands and bundled figure parameterizations

#pragma once

#include "chiral/dynamics.hpp"
#include "chiral/io.hpp"
#include "chiral/model.hpp"
#include "chiral/observables.hpp"
#include "chiral/spectrum.hpp"
#include "chiral/steady_state.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace chiral {

// site, re_sigma, im_sigma, population, normalized
Table steady_table(const ChainConfig& config, const SteadyState& state);
// n, decay_rate, shift (ascending decay rate)
Table spectrum_table(const ChainConfig& config, const EigenSpectrum& spectrum);
// m, k, S
Table structure_table(const ChainConfig& config, const StructureSpectrum& spectrum);
// mu, nu, re, im
Table matrix_table(const ChainConfig& config, const CouplingMatrix& m);
// i, j, value = P̃_i P̃_j
Table correlation_table(const ChainConfig& config, const RVector& normalized);
// t, [t_rescaled = t/1000], P_t, P_t_over_rabi, p_1..p_N (normalized)
Table trajectory_table(const ChainConfig& config, const Trajectory& trajectory, bool rescaled);

struct RecipeOutput {
    std::string stem;  // file name without extension
    Table table;
};

// fig1b fig2a fig2b fig2c fig3a fig3b fig3c fig3d fig4a fig4b figS1 figS2
const std::vector<std::string>& recipe_names();

// UsageError listing the valid names for an unknown recipe.
std::vector<RecipeOutput> build_recipe(const std::string& name, int workers = 0);

std::vector<std::filesystem::path> run_figure_recipe(const std::string& name,
                                                     const std::filesystem::path& dir,
                                                     OutputFormat format, int workers = 0);

} // namespace chiral
