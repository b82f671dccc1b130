// Full master-equation oracle for small chains.
//
//   dρ/dt = -i(H_eff ρ - ρ H_eff†) + γ_L c_L ρ c_L† + γ_R c_R ρ c_R†
//   H_eff = H_S + H_L + H_R - (i/2)(γ_L c_L†c_L + γ_R c_R†c_R)
//   c_L = Σ_ν e^{+iξ(ν-1)} σ_ν,  c_R = Σ_ν e^{-iξ(ν-1)} σ_ν

#include "chiral/dynamics.hpp"
#include "chiral/errors.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace chiral {

namespace {

// Lowering operator σ_μ (0-based site) in the 2^N basis; site 0 is the most
// significant bit.
CMatrix lowering(int site, int n) {
    const int dim = 1 << n;
    const int bit = 1 << (n - 1 - site);
    CMatrix op = CMatrix::Zero(dim, dim);
    for (int state = 0; state < dim; ++state) {
        if (state & bit) {
            op(state & ~bit, state) = 1.0;
        }
    }
    return op;
}

} // namespace

OracleResult lindblad_oracle(const ChainConfig& config, double t_end, IntegratorOptions options) {
    config.validate();
    const int n = config.n_atoms;
    if (n > kOracleMaxAtoms) {
        throw CapabilityError("lindblad_oracle supports at most " +
                              std::to_string(kOracleMaxAtoms) + " atoms, got " +
                              std::to_string(n));
    }
    if (!(t_end >= 0.0)) {
        throw DomainError("t_end must be >= 0");
    }

    const int dim = 1 << n;
    const auto [gamma_l, gamma_r] = gamma_rates(config.directionality);
    const CVector drive = drive_vector(config);
    const RVector delta = detuning_vector(config);

    std::vector<CMatrix> sigma;
    sigma.reserve(n);
    for (int mu = 0; mu < n; ++mu) {
        sigma.push_back(lowering(mu, n));
    }

    CMatrix h = CMatrix::Zero(dim, dim);
    CMatrix c_left = CMatrix::Zero(dim, dim);
    CMatrix c_right = CMatrix::Zero(dim, dim);
    for (int mu = 0; mu < n; ++mu) {
        const CMatrix raise = sigma[mu].adjoint();
        h += config.rabi * (drive(mu) * raise + std::conj(drive(mu)) * sigma[mu]);
        h -= delta(mu) * (raise * sigma[mu]);
        c_left += std::polar(1.0, config.xi * mu) * sigma[mu];
        c_right += std::polar(1.0, -config.xi * mu) * sigma[mu];
    }
    // Coherent exchange: -i(γ/2) Σ (e^{iξ|μ-ν|} σ_μ†σ_ν - h.c.), γ_L for μ<ν, γ_R for μ>ν.
    for (int mu = 0; mu < n; ++mu) {
        for (int nu = 0; nu < n; ++nu) {
            if (mu == nu) {
                continue;
            }
            const double g = mu < nu ? gamma_l : gamma_r;
            const CMatrix hop = std::polar(1.0, config.xi * std::abs(mu - nu)) *
                                (sigma[mu].adjoint() * sigma[nu]);
            h += cplx(0.0, -0.5 * g) * (hop - CMatrix(hop.adjoint()));
        }
    }
    const CMatrix h_eff = h - cplx(0.0, 0.5) * (gamma_l * (c_left.adjoint() * c_left) +
                                                gamma_r * (c_right.adjoint() * c_right));
    const CMatrix h_eff_dag = h_eff.adjoint();
    const CMatrix c_left_dag = c_left.adjoint();
    const CMatrix c_right_dag = c_right.adjoint();

    auto rhs = [&](double, const CMatrix& rho, CMatrix& drho) {
        drho.noalias() = cplx(0.0, -1.0) * (h_eff * rho);
        drho.noalias() += cplx(0.0, 1.0) * (rho * h_eff_dag);
        drho.noalias() += gamma_l * (c_left * rho * c_left_dag);
        drho.noalias() += gamma_r * (c_right * rho * c_right_dag);
    };

    CMatrix rho = CMatrix::Zero(dim, dim);
    rho(0, 0) = 1.0;  // all atoms in |g>
    DormandPrince<CMatrix> stepper(options);
    double t = 0.0;
    stepper.advance(rhs, t, rho, t_end);

    OracleResult out;
    out.trace_error = std::abs(rho.trace() - cplx(1.0, 0.0));
    if (out.trace_error > 1e-6) {
        throw IntegrationError("density-matrix trace drifted by " + std::to_string(out.trace_error),
                               t);
    }
    out.expectations.resize(n);
    out.populations.resize(n);
    for (int mu = 0; mu < n; ++mu) {
        out.expectations(mu) = (rho * sigma[mu]).trace();
        out.populations(mu) = (rho * sigma[mu].adjoint() * sigma[mu]).trace().real();
    }
    return out;
}

} // namespace chiral
