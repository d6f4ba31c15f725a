#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "modphi/levy.hpp"
#include "modphi/rng.hpp"
#include "modphi/special.hpp"

namespace modphi {

/// Mean-0, variance-1 row laws with closed-form characteristic functions.
enum class RowFamily { NORMAL, CENTERED_GAMMA, CENTERED_POISSON, SYMMETRIC_TWO_POINT };

struct RowDistribution {
    RowFamily family = RowFamily::NORMAL;

    Complex cf(double u) const;
    double sample(Rng& rng) const;
    /// One draw of X_1 + … + X_n, sampled from its exact law.
    double row_sum(std::uint64_t n, Rng& rng) const;
    /// E|X|³.
    double third_abs_moment() const;
    /// Lévy measure of the row law (the Gaussian part is σ = 1 for NORMAL);
    /// empty optional when the law is not infinitely divisible.
    std::optional<LevyMeasure> levy_measure() const;
    std::string name() const;

    static RowDistribution parse(const std::string& name);
};

/// H_N = Σ_{n≤N} 1/n by compensated summation.
double harmonic(std::uint64_t N);

/// E[e^{iuZ_N}] = ∏_{n≤N} φ_n(u/n)^n, accumulated as Σ n·log φ_n(u/n). For
/// n < 2|u| the logarithm is tracked continuously along s ↦ φ_n(su/n),
/// s ∈ [0, 1], in 32 steps. Throws BranchError if a factor has modulus ≤ 1e−14.
Complex log_mean_cf_exact(const std::vector<RowDistribution>& rows, std::uint64_t N, double u);
Complex log_mean_cf_exact(const RowDistribution& row, std::uint64_t N, double u);

/// One draw of Z_N = Σ_{n≤N} (X_1^n + … + X_n^n)/n.
double sample_log_mean(const std::vector<RowDistribution>& rows, std::uint64_t N, Rng& rng);
double sample_log_mean(const RowDistribution& row, std::uint64_t N, Rng& rng);

/// E[exp(iu(Σ_{n≤N} γ_n/n − N))] = e^{−iuN}∏(1 − iu/n)^{−n}, in log space.
Complex gamma_example_cf(std::uint64_t N, double u);

/// ν = Σ_n n·ν'_n with ν'_n(A) = ν_n(nA): atoms (x, w) of ν_n become (x/n, n·w)
/// and densities ρ_n contribute n²ρ_n(ny). Each ν_n must integrate |x|³.
LevyMeasure aggregate_levy_limit(const std::vector<LevyMeasure>& nus);

/// X + N(β_N, γ_N) with X drawn from base.
double regular_sampler(const std::function<double(Rng&)>& base, double beta_N, double gamma_N, Rng& rng);

}  // namespace modphi
