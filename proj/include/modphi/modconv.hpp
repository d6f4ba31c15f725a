#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "modphi/grid.hpp"
#include "modphi/rng.hpp"
#include "modphi/special.hpp"

namespace modphi {

struct ModParameters {
    enum class Mode { GAUSSIAN, POISSON };
    Mode mode = Mode::GAUSSIAN;
    double beta = 0.0;    // GAUSSIAN
    double gamma = 0.0;   // GAUSSIAN, ≥ 0
    double lambda = 0.0;  // POISSON, > 0

    static ModParameters gaussian(double beta, double gamma);
    static ModParameters poisson(double lambda);
};

std::string to_string(ModParameters::Mode mode);

/// A characteristic-function value with componentwise standard errors
/// (zero for exact values).
struct CfValue {
    Complex value;
    Complex se{0.0, 0.0};

    double se_abs() const { return std::abs(se); }
};

/// GAUSSIAN: e^{−iuβ + u²γ/2}·cf; POISSON: e^{λ(1 − e^{iu})}·cf. The factor is
/// combined with log(cf) before exponentiating so that a tiny cf times a huge
/// factor does not overflow.
Complex renormalize(Complex cf_value, const ModParameters& params, double u);
CfValue renormalize(const CfValue& cf, const ModParameters& params, double u);

/// N ↦ (u ↦ E e^{iuZ_N}), evaluated for a batch of u at a time so that
/// empirical providers can draw one sample set per N.
struct CharFnSequence {
    enum class Kind { EXACT, EMPIRICAL };
    Kind kind = Kind::EXACT;
    std::size_t sample_count = 0;
    std::uint64_t seed = 0;
    std::function<std::vector<CfValue>(std::uint64_t N, const std::vector<double>& u)> evaluate;
};

/// Exact provider from a pointwise closed form; u values are evaluated in parallel.
CharFnSequence exact_sequence(std::function<Complex(std::uint64_t, double)> cf);

/// Empirical provider: draw(N, rng) returns one sample of Z_N. sample_count
/// draws are split over fixed streams derived from seed (and N), so values do
/// not depend on the number of worker threads.
CharFnSequence empirical_sequence(std::function<double(std::uint64_t, Rng&)> draw, std::size_t sample_count,
                                  std::uint64_t seed);

enum class Verdict { CONVERGING, DIVERGING, INCONCLUSIVE };
std::string to_string(Verdict v);

enum class DistanceKind { ABSOLUTE, RELATIVE };

struct ReportOptions {
    /// Reference limiting function; without it, consecutive ladder entries are
    /// compared (Cauchy distances).
    std::optional<std::function<Complex(double)>> reference;
    double threshold = 0.05;
    DistanceKind distance = DistanceKind::ABSOLUTE;
    /// Declares the sequence integer valued; in GAUSSIAN mode the report then
    /// also evaluates u = 2π, where |renormalized| = e^{2π²γ_N}.
    bool lattice_probe = false;
};

struct ModReportEntry {
    std::uint64_t N = 0;
    ModParameters params;
    std::vector<CfValue> values;           // renormalized, one per grid point
    std::optional<double> sup_err;         // absent for the first Cauchy entry
    std::optional<double> lattice_modulus; // |renormalized value at 2π|
};

struct ModReport {
    ModParameters::Mode mode = ModParameters::Mode::GAUSSIAN;
    EvaluationGrid grid;
    std::vector<std::uint64_t> ladder;
    std::vector<ModReportEntry> per_N;
    std::vector<Complex> reference;  // empty when no reference was supplied
    Verdict verdict = Verdict::INCONCLUSIVE;
    CharFnSequence::Kind kind = CharFnSequence::Kind::EXACT;
    std::uint64_t seed = 0;
};

/// Distances ≤ this floor count as "already converged" in the verdict rule.
inline constexpr double kDistanceFloor = 1e-12;

/// CONVERGING iff the last (up to) three distances are strictly decreasing
/// (or all at the floor) and the final one is below threshold; DIVERGING if the
/// final distance exceeds the previous one by more than 10%; else INCONCLUSIVE.
Verdict verdict_from_distances(const std::vector<double>& distances, double threshold);

ModReport convergence_report(const CharFnSequence& seq, const std::function<ModParameters(std::uint64_t)>& params_per_N,
                             const EvaluationGrid& grid, const std::vector<std::uint64_t>& ladder,
                             const ReportOptions& options = {});

/// Φ'(u) = e^{iβu − u²γ/2}Φ(u) pointwise.
std::vector<Complex> shift_parameters(const std::vector<Complex>& phi, const EvaluationGrid& grid, double beta,
                                      double gamma);

/// (1/n)Σ e^{iuZ_j} with componentwise standard errors. Throws DomainError on
/// empty input.
CfValue empirical_cf(const std::vector<double>& samples, double u);
std::vector<CfValue> empirical_cf(const std::vector<double>& samples, const std::vector<double>& u);

/// Characteristic function of (Z_N − center)/scale compared with e^{−u²/2};
/// center/scale are (β_N, √γ_N) or (λ_N, √λ_N).
ModReport clt_rescale_check(const CharFnSequence& seq, const std::function<ModParameters(std::uint64_t)>& params_per_N,
                            const EvaluationGrid& grid, const std::vector<std::uint64_t>& ladder,
                            double threshold = 0.05);

nlohmann::ordered_json to_json(const ModReport& report);

}  // namespace modphi
