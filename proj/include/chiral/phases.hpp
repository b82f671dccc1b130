// phases.hpp: steady-state phase classification and finite-size fits
//
// Labels: ETD (extended), CO (crystalline order), BEE / BHE (bi-edge / bi-hole
// excitation, BHE split into strong/moderate/weak by the finite-size exponent
// of its participation ratio), CFD (even/odd chiral-flow dichotomy) and CRIT
// (singular coupling matrix).

#pragma once

#include "chiral/model.hpp"
#include "chiral/steady_state.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace chiral {

enum class PhaseKind { ETD, CO, BEE, BHE, CFD, Critical };
enum class BheStrength { Strong, Moderate, Weak };

struct PhaseLabel {
    PhaseKind kind{PhaseKind::ETD};
    BheStrength strength{BheStrength::Strong};  // meaningful for BHE only

    bool operator==(const PhaseLabel& other) const {
        return kind == other.kind && (kind != PhaseKind::BHE || strength == other.strength);
    }
};

// ETD, CO, BEE, BHE_S, BHE_M, BHE_W, CFD, CRIT
std::string to_token(const PhaseLabel& label);
PhaseLabel label_from_token(std::string_view token);

struct PowerLawFit {
    double beta{0.0};
    double alpha{0.0};
};

struct ThermoLimitFit {
    double a{0.0};
    double b{0.0};
};

struct ScalingFit {
    std::variant<PowerLawFit, ThermoLimitFit> kind;
    double residual{0.0};  // root-mean-square residual of the fitted (linearised) form

    const PowerLawFit& power_law() const { return std::get<PowerLawFit>(kind); }
    const ThermoLimitFit& thermo_limit() const { return std::get<ThermoLimitFit>(kind); }
};

// ln PR = ln β + α ln N by least squares. Needs >= 3 points, all PR > 0.
ScalingFit fit_pr_scaling(std::span<const int> sizes, std::span<const double> pr_values);

// S_max = a/N + b by least squares. Needs >= 2 distinct sizes.
ScalingFit fit_structure_thermo(std::span<const int> sizes, std::span<const double> s_max);

struct ClassificationOptions {
    double edge_rel_tol{1e-6};       // band around 1/N treated as "on the boundary"
    double co_min_intercept{1e-5};   // b_min for CO
    double cfd_threshold{0.2};
    double cfd_xi_window{0.05 * kPi};
    double strong_alpha{0.5};
    double weak_alpha{0.1};
    double singular_threshold{kSingularThreshold};
    // Sizes for the BHE exponent fit when fewer than three sizes are supplied.
    std::vector<int> reference_sizes{25, 50, 100};
};

// Observables of one steady state, as recorded in phase-diagram output.
struct SizeObservables {
    int n{0};
    double pr{0.0};
    double s_max{0.0};
    double s_max_k{0.0};
    double p_first{0.0};
    double p_last{0.0};
    double transport{0.0};
    double condition_estimate{0.0};
};

SizeObservables measure(const ChainConfig& config, const SteadyState& state);

struct Classification {
    PhaseLabel label;
    double condition_estimate{0.0};         // at the largest size
    std::vector<SizeObservables> per_size;  // empty for Critical points
    std::optional<double> thermo_intercept;
    std::optional<double> bhe_alpha;
    std::optional<double> dichotomy;
};

// Precomputed BHE exponent for a given D (shared by every ξ of a sweep row).
struct BheScaling {
    std::optional<double> alpha;
    // Leave BHE strength unresolved (bhe_alpha empty) for a later resolve_bhe.
    bool deferred{false};
};

// Sizes used for the BHE exponent: the supplied ones when there are >= 3.
std::vector<int> bhe_fit_sizes(std::span<const int> sizes, const ClassificationOptions& options);

// Fills in strength and bhe_alpha of a BHE classification from a row
// exponent, falling back to the point's own PR scaling and then to Weak.
void resolve_bhe(Classification& c, std::optional<double> row_alpha,
                 const ClassificationOptions& options = {});

Classification classify(const ChainConfig& config, std::span<const int> sizes,
                        const ClassificationOptions& options = {},
                        const BheScaling* bhe_hint = nullptr);

PhaseLabel classify_point(const ChainConfig& config, std::span<const int> sizes,
                          const ClassificationOptions& options = {});

// |PR_a - PR_b| / max(PR_a, PR_b); 0 when both vanish.
double pr_dichotomy(double pr_a, double pr_b);

// Dichotomy of participation ratios between an even and an odd chain.
double cfd_dichotomy(const ChainConfig& config, int n_even, int n_odd);

// ξ = π/3: where A = |1 - e^{iξ}|² = 1 puts the D = 0 edge population at 1/N.
double bee_bhe_boundary_analytic();

// Numerical BEE→BHE boundary in ξ for the config's D (ξ field ignored).
// Starts at π/2 and walks in steps of π/200 toward the side where both edges
// exceed 1/N, then bisects to `tol`. nullopt when no bi-edge region exists.
std::optional<double> locate_bee_bhe_boundary(const ChainConfig& config, int n,
                                              double tol = 1e-13);

struct PrPeak {
    double xi{0.0};
    double pr{0.0};
};

// First participation-ratio maximum in ξ past the BEE→BHE boundary: the
// quantity whose size scaling separates strong/moderate/weak BHE.
std::optional<PrPeak> bhe_peak_pr(const ChainConfig& config, int n);

// α of β N^α fitted to bhe_peak_pr over `sizes`; nullopt without a boundary.
std::optional<double> bhe_exponent(const ChainConfig& config, std::span<const int> sizes);

BheStrength bhe_strength(double alpha, const ClassificationOptions& options = {});

} // namespace chiral
