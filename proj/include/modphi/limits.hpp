#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "modphi/special.hpp"

namespace modphi {

inline constexpr std::uint64_t kDefaultPrimeCutoff = 1000000;

/// G(1+λ)²/G(1+2λ).
Complex rmt_factor_M(Complex lambda);

/// Partial Euler product over p ≤ prime_cutoff of (1 − 1/p)^{λ²}·₂F₁(λ,λ;1;1/p),
/// accumulated as a sum of logarithms.
Complex arithmetic_factor_A(Complex lambda, std::uint64_t prime_cutoff = kDefaultPrimeCutoff);

/// 2^{−λ²/2}(π/2)^{λ/2}·G(3/2)/G(3/2+λ).
Complex sp_factor_MSp(Complex lambda);

/// The Keating–Snaith form 2^{λ²/2}G(1+λ)√Γ(1+λ)/√(G(1+2λ)Γ(1+2λ)); equal to
/// sp_factor_MSp by the Barnes duplication formula. Square roots are taken as
/// exp(½·log), which is the principal branch on real λ > −1/2.
Complex sp_factor_keating_snaith(Complex lambda);

enum class GammaMethod { LK_INTEGRAL, BARNES_CLOSED_FORM };

/// Limit of e^{u²H_N/2}·E[exp(iu(Σ_{n≤N} γ_n/n − N))].
///   LK_INTEGRAL:        exp(∫₀^∞ (e^{iux} − 1 − iux + u²x²/2) / (x(2 sinh(x/2))²) dx)
///   BARNES_CLOSED_FORM: e^{γ_E u²/2}·(A^z e^{z²/2} G(1+z))^{−1}, z = −iu, A = √(e/2π)
/// The factor e^{γ_E u²/2} converts the log N normalisation of the Mellin
/// limit to the H_N normalisation.
Complex phi_gamma_example(double u, GammaMethod method = GammaMethod::BARNES_CLOSED_FORM);

/// Φ₁(u) = 1/Γ(e^{iu} + 1).
Complex phi1(double u);

/// Φ₂(u) truncated at p ≤ prime_cutoff, evaluated as
/// ∏ (1 − 1/p)^{e^{iu}−1}(1 − 1/p + e^{iu}/p).
Complex phi2(double u, std::uint64_t prime_cutoff = kDefaultPrimeCutoff);

/// Φ(u) = 1/Γ(e^{iu}+1)·∏_p (1 − 1/p)^{e^{iu}}(1 + e^{iu}/(p − 1)), evaluated
/// directly from this product (independently of phi1·phi2).
Complex phi_omega(double u, std::uint64_t prime_cutoff = kDefaultPrimeCutoff);

enum class LimitingId { RMT_M, ARITH_A, SP_MSP, GAMMA_EXAMPLE, OMEGA_PHI, OMEGA_PHI1, OMEGA_PHI2 };

/// A limiting function u ↦ Φ(u). Products over primes read the "cutoff"
/// parameter (default 10⁶). RMT_M, ARITH_A and SP_MSP are evaluated at λ = iu.
struct LimitingFunction {
    LimitingId id = LimitingId::GAMMA_EXAMPLE;
    std::map<std::string, double> params;

    Complex operator()(double u) const;
};

LimitingId parse_limiting_id(const std::string& name);
std::string to_string(LimitingId id);

}  // namespace modphi
