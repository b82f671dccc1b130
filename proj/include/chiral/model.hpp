// model.hpp: chain configuration, coupling matrix and drive vector
//
// Units: γ = γ_L + γ_R ≡ 1, time in 1/γ. Formulas index sites 1..N; storage is
// 0-based, so site μ lives at index μ-1 of every vector and matrix.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include <json.hpp>

namespace chiral {

using cplx = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = std::numbers::pi;

// δ_μ = δ0 on every site.
struct UniformDetuning {
    double delta0{0.0};
    bool operator==(const UniformDetuning&) const = default;
};

// δ_μ = (s/N)(μ-1).
struct LinearDetuning {
    double slope{0.0};
    bool operator==(const LinearDetuning&) const = default;
};

// δ_μ = h[μ-(N+1)/2]².
struct HarmonicDetuning {
    double curvature{0.0};
    bool operator==(const HarmonicDetuning&) const = default;
};

using DetuningProfile = std::variant<UniformDetuning, LinearDetuning, HarmonicDetuning>;

struct ChainConfig {
    int n_atoms{1};
    double xi{kPi / 2};          // k_s times the lattice spacing, radians in [0, 2π]
    double directionality{0.0};  // D = (γ_R - γ_L)/γ
    double rabi{0.01};           // Ω in units of γ
    double theta_s{kPi / 2};     // excitation angle relative to the chain axis
    DetuningProfile detuning{UniformDetuning{}};

    bool operator==(const ChainConfig&) const = default;

    // Throws DomainError when any field is outside its domain.
    void validate() const;
};

struct GammaRates {
    double left;
    double right;
};

GammaRates gamma_rates(double directionality);

// mu is 1-based.
double detuning_at(const DetuningProfile& profile, int mu, int n);

// Dense N×N non-Hermitian coupling matrix in units of γ:
//   M_{μν} = -γ_L e^{iξ|μ-ν|} (μ<ν),  iδ_μ - 1/2 (μ=ν),  -γ_R e^{iξ|μ-ν|} (μ>ν).
class CouplingMatrix {
public:
    explicit CouplingMatrix(CMatrix entries) : entries_(std::move(entries)) {}

    int n() const noexcept { return static_cast<int>(entries_.rows()); }
    const CMatrix& entries() const noexcept { return entries_; }
    cplx operator()(int row, int col) const { return entries_(row, col); }

private:
    CMatrix entries_;
};

CouplingMatrix build_coupling_matrix(const ChainConfig& config);

// v_μ = exp(i cos(θ_s) ξ (μ-1)).
CVector drive_vector(const ChainConfig& config);

// Vector of δ_μ for μ = 1..N.
RVector detuning_vector(const ChainConfig& config);

// JSON document: {n_atoms, xi, directionality, rabi, theta_s,
//                 detuning: {type: uniform|linear|harmonic, params: {...}}}
nlohmann::json to_json(const ChainConfig& config);
nlohmann::json to_json(const DetuningProfile& profile);

// Keys absent from `doc` keep their value from `base`. Unknown or malformed
// keys throw DomainError naming the key.
ChainConfig config_from_json(const nlohmann::json& doc, const ChainConfig& base = {});
DetuningProfile detuning_from_json(const nlohmann::json& doc);

std::string detuning_type_name(const DetuningProfile& profile);

// Angle from text: plain numbers or multiples of pi such as "pi/4", "0.8pi",
// "3*pi/4", "-pi". Throws DomainError otherwise.
double parse_angle(std::string_view text);

} // namespace chiral
