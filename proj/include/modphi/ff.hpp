#pragma once

#include <cstdint>
#include <functional>
#include <ostream>
#include <vector>

#include "modphi/galois.hpp"
#include "modphi/special.hpp"

namespace modphi {

/// Monic f of degree 2g+1 over F_q, coefficients a_0 … a_{2g+1} as field
/// element indices (a_{2g+1} = 1).
struct CurvePoly {
    FqPoly coeffs;
    int genus() const { return (static_cast<int>(coeffs.size()) - 2) / 2; }
};

/// Checks degree 2g+1 ≥ 3, monic, squarefree (gcd(f, f′) = 1). Throws DomainError.
void validate_curve(const FiniteField& F, const CurvePoly& f);
bool is_squarefree(const FiniteField& F, const FqPoly& f);

/// q^{2g}(q − 1).
std::uint64_t hyperelliptic_ensemble_size(std::uint64_t q, int g);

/// Largest q^{2g+1} an enumeration may touch.
inline constexpr std::uint64_t kEnumerationBudget = 100000000;

/// Visits the squarefree monic degree-(2g+1) polynomials in index order
/// (a_0 fastest). Returns the number visited. BudgetError above the budget.
std::uint64_t for_each_hyperelliptic(const FiniteField& F, int g, const std::function<void(const CurvePoly&)>& visit);
std::vector<CurvePoly> enumerate_hyperelliptic(const FiniteField& F, int g);

/// |{(x, y) ∈ F_{q^n}² : y² = f(x)}| = Σ_x (1 + χ(f(x))). Requires q^n ≤ 10⁷.
std::uint64_t count_affine_points(const CurvePoly& f, const FiniteField& F, int n);

/// P(T) = Σ a_i T^i, a_0 = 1, degree 2g.
struct LPolynomial {
    std::vector<long long> a;
    std::uint64_t q = 0;
    int genus() const { return static_cast<int>(a.size() - 1) / 2; }
};

/// Curves with q^{2g} at most this get their counts for n = g+1..2g checked
/// against the L-polynomial by default.
inline constexpr std::uint64_t kConsistencyBudget = 100000;

/// Newton identities on s_n = q^n − affine_n (n ≤ g), then the functional
/// equation. With check, counts for n = g+1..2g are recomputed directly and
/// compared (InconsistencyError on mismatch); by default the check runs when
/// q^{2g} ≤ kConsistencyBudget.
LPolynomial l_polynomial(const CurvePoly& f, const FiniteField& F, int check = -1);

/// Point counts |C̃(F_{q^n})| implied by an L-polynomial (s_n from the inverse
/// Newton identities), n = 1..n_max.
std::vector<long long> counts_from_l_polynomial(const LPolynomial& L, int n_max);

struct WeilReport {
    bool leading_one = false;
    bool functional_equation = false;  // a_{2g−i} = q^{g−i}a_i, exact
    double max_residual = 0.0;         // max_j | |α_j| − √q |
    std::vector<Complex> inverse_roots;
    /// t_j = α_j + q/α_j, one per conjugate pair, with multiplicity.
    std::vector<Complex> traces;
};

/// Writes P(T) = T^g h(T⁻¹ + qT), splits h into squarefree parts with exact
/// rational arithmetic, removes the boundary roots ±2√q exactly, and finds the
/// rest by companion-matrix eigenvalues polished with Newton steps.
WeilReport verify_weil(const LPolynomial& L);

/// θ_j = arg(α_j/√q) ∈ [0, π], one per conjugate pair, ascending.
/// DomainError when the Weil residual exceeds 1e−6; InconsistencyError when a
/// root pair is not conjugate-symmetric.
std::vector<double> frobenius_angles(const LPolynomial& L);

/// P(q^{−1/2}) = det(1 − F_f) in floating point.
double l_value_at_half(const LPolynomial& L);
/// Exact test of P(q^{−1/2}) = 0 via q^g·P(q^{−1/2}) = E + O√q with integers E, O.
bool l_vanishes_at_half(const LPolynomial& L);

struct CurveRecord {
    CurvePoly f;
    LPolynomial L;
    bool vanishing = false;
    double weil_residual = 0.0;
    std::vector<double> angles;
};

/// Every curve of H_{g,q} with its L-polynomial, Weil residual and angles, in
/// enumeration order. Chunks of the scan run in parallel.
std::vector<CurveRecord> scan_ensemble(const FiniteField& F, int g, int check = -1);

struct EnsembleMoment {
    Complex value;
    std::uint64_t ensemble_size = 0;  // |H_{g,q}|
    std::uint64_t used = 0;           // curves averaged over
    std::uint64_t excluded = 0;       // vanishing curves left out
};

/// Average of det(1 − F_f)^λ (λ ≥ 0).
EnsembleMoment ensemble_moment_lambda(const std::vector<CurveRecord>& records, double lambda,
                                      bool restrict_nonvanishing);
/// Average of e^{iu log det(1 − F_f)}. Vanishing curves make the logarithm
/// undefined, so they must be excluded (DomainError otherwise).
EnsembleMoment ensemble_moment_u(const std::vector<CurveRecord>& records, double u, bool restrict_nonvanishing);

/// Number of monic irreducibles of degree d over F_q, (1/d)Σ_{e|d} μ(e)q^{d/e}.
/// BudgetError if it does not fit in 64 bits.
std::uint64_t count_irreducibles(std::uint64_t q, int d);

/// Product over monic irreducibles π with deg π ≤ D of
/// (1 − 1/|π|)^{λ(λ+1)/2}·E[(1 − T_π|π|^{−1/2})^{−λ}], T_π ∈ {0, ±1} with
/// P(0) = 1/(1+|π|). Requires λ > 0 and 1 ≤ D ≤ 30.
double arithmetic_factor_Ah(double lambda, std::uint64_t q, int D);

/// CSV with header q,g,f,a_1..a_g,vanishing,angles (f and angles are
/// ';'-joined lists; f is a_0-first).
void write_curve_csv(std::ostream& out, const std::vector<CurveRecord>& records, std::uint64_t q, int g);

}  // namespace modphi
