#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "modphi/rng.hpp"
#include "modphi/special.hpp"

namespace modphi {

using ComplexMatrix = Eigen::MatrixXcd;

/// Haar-distributed element of U(N): QR of a matrix of i.i.d. standard complex
/// Gaussians, columns rescaled by the phases of R's diagonal.
ComplexMatrix haar_unitary(int N, Rng& rng);

/// max |(U*U − I)_{jk}|.
double unitarity_residual(const ComplexMatrix& u);

/// det(I − X) by LU factorisation.
Complex det_one_minus(const ComplexMatrix& x);

/// ∏(1 − λ_j) over numerically computed eigenvalues.
Complex det_one_minus_eigen(const ComplexMatrix& x);

/// log|det(I − X)| from the LU diagonal (no overflow/underflow); −∞ if singular.
double log_abs_det_one_minus(const ComplexMatrix& x);

/// det(1 − x) = ∏_j |1 − e^{iθ_j}|² = ∏_j (2 − 2cos θ_j) for USp(2g) angles.
double det_one_minus(const std::vector<double>& symplectic_angles);

struct McmcOptions {
    int burn_in = 1000;  // sweeps
    int thinning = 0;    // sweeps between draws; 0 means g
};

/// Independence-Metropolis chain on [0, π]^g targeting the USp(2g) Weyl
/// density ∝ ∏_{j<k}(cos θ_j − cos θ_k)² ∏_j sin²θ_j. Proposals come from the
/// sin² density, so the acceptance ratio carries only the Vandermonde factor
/// and g = 1 is exact.
class SymplecticSampler {
public:
    SymplecticSampler(int g, std::uint64_t seed, McmcOptions options = {});

    std::vector<double> next();
    double acceptance_rate() const;
    int genus() const { return g_; }

private:
    void sweep();

    int g_;
    Rng rng_;
    McmcOptions options_;
    std::vector<double> theta_;
    std::vector<double> cos_;
    std::uint64_t proposed_ = 0;
    std::uint64_t accepted_ = 0;
};

/// Inverse of F(θ) = (θ − sin θ cos θ)/π on [0, π] by safeguarded Newton.
double sin2_inverse_cdf(double v);

/// `count` draws from independent chains (fixed stream split of seed). Throws
/// BudgetError when g ≥ 2 and a chain's acceptance rate leaves [0.1, 0.9].
std::vector<std::vector<double>> symplectic_eigenangles(int g, std::size_t count, std::uint64_t seed,
                                                        McmcOptions options = {});

/// How unitary_moment_mc draws det(1 − X). MATRIX samples X with haar_unitary
/// and factors I − X (O(N³)); VERBLUNSKY samples the Verblunsky coefficients of
/// a Haar matrix (independent, |α_k|² ~ Beta(1, N−k−1), uniform phases) and
/// runs the Szegő recursion at z = 1 (O(N)). Both give the same law.
enum class UnitarySampler { MATRIX, VERBLUNSKY };

/// log|det(1 − X)| for one Haar draw of U(N) via the Verblunsky recursion.
double verblunsky_log_abs_det_one_minus(int N, Rng& rng);

struct MomentEstimate {
    Complex value;
    Complex se{0.0, 0.0};
    std::size_t rejected = 0;  // zero-determinant draws discarded
};

/// e^{u² log N}·E[e^{iu log|det(1 − X_N)|²}] by Monte Carlo, one estimate per u
/// from a single set of Haar draws. Requires samples ≥ 1000.
std::vector<MomentEstimate> unitary_moment_mc(int N, const std::vector<double>& u, std::size_t samples,
                                              std::uint64_t seed,
                                              UnitarySampler sampler = UnitarySampler::VERBLUNSKY);
MomentEstimate unitary_moment_mc(int N, double u, std::size_t samples, std::uint64_t seed,
                                 UnitarySampler sampler = UnitarySampler::VERBLUNSKY);

/// g^{−(λ²+λ)/2}·E[det(1 − H_g)^λ] by Monte Carlo. Requires samples ≥ 1000, λ > 0.
MomentEstimate symplectic_moment_mc(int g, double lambda, std::size_t samples, std::uint64_t seed,
                                    McmcOptions options = {});

}  // namespace modphi
