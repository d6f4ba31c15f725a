#pragma once

#include <complex>

namespace modphi {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kEulerGamma = 0.577215664901532860606512090082402431;

namespace special {

/// Log-Gamma continued analytically off the poles. exp(ln_gamma(z)) == Γ(z);
/// the imaginary part is the continuous branch on Re z > 0 (it may differ by
/// 2πk from the principal argument of Γ(z) in the left half-plane).
/// Throws PoleError at z = 0, -1, -2, ...
Complex ln_gamma(Complex z);

Complex gamma(Complex z);

/// 1/Γ(z), entire: returns exactly 0 at the non-positive integers.
Complex rgamma(Complex z);

/// log G(z) for the Barnes double-gamma function, via the Weierstrass product
///   log G(1+w) = w/2 log 2π − (w + (1+γ)w²)/2 + Σ_k [k log(1+w/k) − w + w²/(2k)]
/// summed directly to K ≥ 8|w| terms and completed with the exact tail
///   Σ_{k>K} (...) = Σ_{m≥3} (−1)^{m+1} w^m/m · ζ(m−1, K+1),
/// the Hurwitz zeta values coming from Euler–Maclaurin.
/// Validated on |z| ≤ 8. Throws PoleError at the zeros z = 0, -1, -2, ...
/// and BudgetError if the tail series does not converge.
Complex log_barnes_g(Complex z);

/// G(z); returns exactly 0 at the zeros z = 0, -1, -2, ...
Complex barnes_g(Complex z);

/// Hurwitz zeta ζ(s, a) for real s > 1, a ≥ 1 (Euler–Maclaurin).
double hurwitz_zeta(double s, double a);

/// ₂F₁(a, a; 1; z) for real z in [0, 1/2] by its power series. Terms are
/// summed until the geometric tail bound drops below abs_tol·(1 − z).
/// Throws DomainError for z outside [0, 1/2].
Complex hyp2f1_diag(Complex a, double z, double abs_tol = 1e-16);

/// e^{iy} − Σ_{m<order} (iy)^m/m!, stable for small |y|.
Complex exp_i_remainder(double y, int order);

}  // namespace special
}  // namespace modphi
