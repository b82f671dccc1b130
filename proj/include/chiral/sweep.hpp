// sweep.hpp: (D, ξ) phase-diagram sweeps and parameter scans
//
// Parallel kernels distribute independent cells over OpenMP threads and write
// into pre-indexed slots, so results do not depend on the worker count. Each
// kernel has a plain serial counterpart used as the test reference.

#pragma once

#include "chiral/io.hpp"
#include "chiral/model.hpp"
#include "chiral/phases.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <vector>

namespace chiral {

struct SweepSpec {
    std::vector<double> d_grid;
    std::vector<double> xi_grid;
    std::vector<int> sizes{50, 100, 150};
    ChainConfig base_config;  // n_atoms, xi and directionality are overridden per cell
    std::filesystem::path out_dir;  // empty: nothing is written
    OutputFormat format{OutputFormat::Csv};
    ClassificationOptions options;

    void validate() const;
};

// count points evenly over [0, 1].
std::vector<double> default_d_grid(int count = 41);
// π m / count for m = 1..count, i.e. (0, π].
std::vector<double> default_xi_grid(int count = 41);

struct PhasePoint {
    double d{0.0};
    double xi{0.0};
    Classification result;
};

struct PhaseDiagram {
    SweepSpec spec;
    std::vector<PhasePoint> points;  // row-major: D outer, ξ inner
};

// workers <= 0 uses the OpenMP default.
PhaseDiagram compute_phase_diagram(const SweepSpec& spec, int workers = 0);
// Reference: classify() cell by cell, no sharing of the per-row BHE exponent.
PhaseDiagram compute_phase_diagram_serial(const SweepSpec& spec);

Table phase_diagram_table(const PhaseDiagram& diagram);

// Checks out_dir before computing (IoError), then computes and writes
// phase_diagram.{csv,json}.
std::vector<std::filesystem::path> run_phase_diagram(const SweepSpec& spec, int workers = 0,
                                                     PhaseDiagram* result = nullptr);

// Observables for a batch of independent configs. Singular points come back
// with NaN observables and their condition estimate.
std::vector<SizeObservables> measure_scan(std::span<const ChainConfig> configs, int workers = 0);
std::vector<SizeObservables> measure_scan_serial(std::span<const ChainConfig> configs);

// CHIRAL_CHAIN_WORKERS if set to a positive integer, else `fallback`.
int workers_from_env(int fallback = 0);

} // namespace chiral
