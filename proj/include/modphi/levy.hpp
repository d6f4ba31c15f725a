#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "modphi/quadrature.hpp"
#include "modphi/special.hpp"

namespace modphi {

/// CANONICAL_TRAPEZOID: h(x) = x on |x| ≤ 1, sign(x)(2 − |x|) on 1 < |x| ≤ 2, 0 beyond.
/// INDICATOR:           h(x) = x·1{|x| ≤ 1}.
enum class TruncationId { CANONICAL_TRAPEZOID, INDICATOR };

double truncation(TruncationId id, double x);

/// Which integral a density is declared to satisfy near 0 and at infinity.
enum class Integrability { X2_MIN_1, ABS_X3, X4_MIN_1 };

struct LevyAtom {
    double x;
    double w;
};

struct LevyDensity {
    std::function<double(double)> rho;
    Interval domain;  // may contain 0 only as an endpoint or interior split point
    Integrability tag = Integrability::X2_MIN_1;
};

/// Atoms plus at most one absolutely continuous part. Immutable; the
/// integrability of x²∧1, |x|³ and x⁴∧1 is probed by quadrature once at
/// construction and the declared tag must hold.
class LevyMeasure {
public:
    LevyMeasure() = default;
    explicit LevyMeasure(std::vector<LevyAtom> atoms, std::optional<LevyDensity> density = std::nullopt);

    const std::vector<LevyAtom>& atoms() const { return atoms_; }
    const std::optional<LevyDensity>& density() const { return density_; }
    bool empty() const { return atoms_.empty() && !density_; }

    bool integrates(Integrability what) const;

    /// ∫ g dν. The density part is integrated piecewise with breakpoints at
    /// 0, ±1e−6, ±1, ±2 and ±40 (clipped to the domain).
    Complex integrate(const std::function<Complex(double)>& g) const;
    double integrate_real(const std::function<double(double)>& g) const;

private:
    std::vector<LevyAtom> atoms_;
    std::optional<LevyDensity> density_;
    bool x2_ = true;
    bool x3_ = true;
    bool x4_ = true;
};

/// e^{−x}/x on (0, ∞): the Lévy measure of the gamma(1) law.
LevyMeasure gamma_levy_measure();

/// 1/(x(2 sinh(x/2))²) on (0, ∞): the measure behind the gamma-example limit.
/// Only x⁴∧1 is integrable.
LevyMeasure gamma_example_limit_measure();

struct GeneratingTriplet {
    double sigma = 0.0;
    double beta = 0.0;
    LevyMeasure nu;
    TruncationId truncation = TruncationId::CANONICAL_TRAPEZOID;
};

/// −σu²/2 + iβu + ∫(e^{iux} − 1 − iu h(x)) ν(dx). Requires ∫(x²∧1)ν < ∞.
Complex levy_exponent(const GeneratingTriplet& t, double u);

/// Same law, new truncation: β' = β + ∫(h' − h) dν.
GeneratingTriplet convert_truncation(const GeneratingTriplet& t, TruncationId h_new);

/// c₁ = β + ∫(x − h)ν, c₂ = σ + ∫x²ν, c_k = ∫x^kν (k ≥ 3), for k = 1..n.
/// Throws MomentDivergenceError when ∫|x|^n ν diverges.
std::vector<double> cumulants_from_triplet(const GeneratingTriplet& t, int n);

/// ∫ h(x)³ ν(dx).
double kappa(const LevyMeasure& nu, TruncationId h);

/// Ψ_N(u) = iu(b − β_N) − u²(σ − γ_N)/2 + ∫(e^{iux} − 1 − iuh)ν  (direct form).
Complex renormalized_exponent_direct(const GeneratingTriplet& t, double beta_N, double gamma_N, double u);

/// Ψ_N(u) = iu(b − β_N) − u²(σ + ν(h²) − γ_N)/2 − iu³κ/6 + ν(k_u), with
/// k_u(x) = e^{iux} − 1 − iuh + u²h²/2 + iu³h³/6 (expanded form).
Complex renormalized_exponent(const GeneratingTriplet& t, double beta_N, double gamma_N, double u);

/// Ψ(u) = −iu³κ/6 + ∫ k_u dν. Requires ∫(x⁴∧1)ν < ∞.
Complex limiting_psi(double kappa_value, const LevyMeasure& nu, TruncationId h, double u);

}  // namespace modphi
