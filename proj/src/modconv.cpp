#include "modphi/modconv.hpp"

#include <algorithm>
#include <cmath>

#include "modphi/error.hpp"
#include "modphi/parallel.hpp"

namespace modphi {

namespace {

constexpr std::size_t kStreams = 64;
constexpr double kTwoPi = 2.0 * kPi;

Complex log_factor(const ModParameters& p, double u) {
    if (p.mode == ModParameters::Mode::GAUSSIAN) return {0.5 * u * u * p.gamma, -u * p.beta};
    return p.lambda * (1.0 - std::polar(1.0, u));
}

// A complex rotation mixes the real and imaginary errors with an unknown
// covariance; we keep the total standard error |se| exact and split it evenly.
Complex scale_se(Complex se, Complex factor) {
    if (factor.imag() == 0.0 && factor.real() >= 0.0) return se * factor.real();
    const double total = std::abs(factor) * std::abs(se) / std::sqrt(2.0);
    return {total, total};
}

void validate(const ModParameters& p) {
    if (p.mode == ModParameters::Mode::GAUSSIAN && !(p.gamma >= 0.0)) throw DomainError("mod parameters: gamma_N must be >= 0");
    if (p.mode == ModParameters::Mode::POISSON && !(p.lambda > 0.0)) throw DomainError("mod parameters: lambda_N must be > 0");
}

void validate_ladder(const std::vector<std::uint64_t>& ladder, const EvaluationGrid& grid) {
    if (ladder.empty()) throw DomainError("report: empty N ladder");
    for (std::size_t i = 1; i < ladder.size(); ++i) {
        if (ladder[i] <= ladder[i - 1]) throw DomainError("report: N ladder must be strictly increasing");
    }
    if (grid.size() == 0) throw DomainError("report: empty grid");
    for (double u : grid.u) {
        if (!std::isfinite(u)) throw DomainError("report: grid must be finite");
    }
}

double distance(const std::vector<CfValue>& values, const std::vector<Complex>& target, DistanceKind kind) {
    double sup = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        double d = std::abs(values[i].value - target[i]);
        if (kind == DistanceKind::RELATIVE && target[i] != Complex(0.0)) d /= std::abs(target[i]);
        sup = std::max(sup, d);
    }
    return sup;
}

}  // namespace

ModParameters ModParameters::gaussian(double beta, double gamma) {
    ModParameters p;
    p.mode = Mode::GAUSSIAN;
    p.beta = beta;
    p.gamma = gamma;
    validate(p);
    return p;
}

ModParameters ModParameters::poisson(double lambda) {
    ModParameters p;
    p.mode = Mode::POISSON;
    p.lambda = lambda;
    validate(p);
    return p;
}

std::string to_string(ModParameters::Mode mode) { return mode == ModParameters::Mode::GAUSSIAN ? "gaussian" : "poisson"; }

Complex renormalize(Complex cf_value, const ModParameters& params, double u) {
    const Complex l = log_factor(params, u);
    if (cf_value == Complex(0.0)) return 0.0;
    if (std::abs(l.real()) < 600.0) return std::exp(l) * cf_value;
    return std::exp(l + std::log(cf_value));
}

CfValue renormalize(const CfValue& cf, const ModParameters& params, double u) {
    const Complex l = log_factor(params, u);
    CfValue out;
    out.value = renormalize(cf.value, params, u);
    out.se = scale_se(cf.se, std::exp(l));
    return out;
}

CharFnSequence exact_sequence(std::function<Complex(std::uint64_t, double)> cf) {
    CharFnSequence seq;
    seq.kind = CharFnSequence::Kind::EXACT;
    seq.evaluate = [cf = std::move(cf)](std::uint64_t N, const std::vector<double>& us) {
        std::vector<CfValue> out(us.size());
        parallel_for(us.size(), [&](std::size_t i) { out[i].value = cf(N, us[i]); });
        return out;
    };
    return seq;
}

CharFnSequence empirical_sequence(std::function<double(std::uint64_t, Rng&)> draw, std::size_t sample_count,
                                  std::uint64_t seed) {
    if (sample_count == 0) throw DomainError("empirical_sequence: sample_count must be >= 1");
    CharFnSequence seq;
    seq.kind = CharFnSequence::Kind::EMPIRICAL;
    seq.sample_count = sample_count;
    seq.seed = seed;
    seq.evaluate = [draw = std::move(draw), sample_count, seed](std::uint64_t N, const std::vector<double>& us) {
        std::vector<double> samples(sample_count);
        const std::size_t streams = std::min(kStreams, sample_count);
        parallel_for(streams, [&](std::size_t s) {
            Rng rng = make_stream(stream_seed(seed, N), s);
            for (std::size_t j = s; j < sample_count; j += streams) samples[j] = draw(N, rng);
        });
        return empirical_cf(samples, us);
    };
    return seq;
}

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::CONVERGING: return "CONVERGING";
        case Verdict::DIVERGING: return "DIVERGING";
        case Verdict::INCONCLUSIVE: return "INCONCLUSIVE";
    }
    return "?";
}

Verdict verdict_from_distances(const std::vector<double>& d, double threshold) {
    if (d.empty()) return Verdict::INCONCLUSIVE;
    const std::size_t start = d.size() > 3 ? d.size() - 3 : 0;
    bool decreasing = true;
    for (std::size_t i = start + 1; i < d.size(); ++i) {
        const bool at_floor = d[i] <= kDistanceFloor && d[i - 1] <= kDistanceFloor;
        if (!(d[i] < d[i - 1]) && !at_floor) decreasing = false;
    }
    if (d.size() == 1) decreasing = d[0] <= kDistanceFloor;
    if (decreasing && d.back() < threshold) return Verdict::CONVERGING;
    if (d.size() >= 2 && d.back() > 1.1 * d[d.size() - 2]) return Verdict::DIVERGING;
    return Verdict::INCONCLUSIVE;
}

ModReport convergence_report(const CharFnSequence& seq, const std::function<ModParameters(std::uint64_t)>& params_per_N,
                             const EvaluationGrid& grid, const std::vector<std::uint64_t>& ladder,
                             const ReportOptions& options) {
    validate_ladder(ladder, grid);
    ModReport report;
    report.grid = grid;
    report.ladder = ladder;
    report.kind = seq.kind;
    report.seed = seq.seed;
    if (options.reference) {
        report.reference.resize(grid.size());
        parallel_for(grid.size(), [&](std::size_t i) { report.reference[i] = (*options.reference)(grid.u[i]); });
    }

    std::vector<double> us = grid.u;
    const bool probe = options.lattice_probe;
    if (probe) us.push_back(kTwoPi);

    std::vector<double> distances;
    std::vector<double> lattice;
    for (std::size_t k = 0; k < ladder.size(); ++k) {
        const std::uint64_t N = ladder[k];
        ModReportEntry entry;
        entry.N = N;
        entry.params = params_per_N(N);
        validate(entry.params);
        if (k == 0) report.mode = entry.params.mode;
        auto raw = seq.evaluate(N, us);
        entry.values.resize(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) entry.values[i] = renormalize(raw[i], entry.params, grid.u[i]);
        if (probe && entry.params.mode == ModParameters::Mode::GAUSSIAN) {
            entry.lattice_modulus = std::abs(renormalize(raw.back(), entry.params, kTwoPi).value);
            lattice.push_back(*entry.lattice_modulus);
        }
        if (options.reference) {
            entry.sup_err = distance(entry.values, report.reference, options.distance);
        } else if (k > 0) {
            std::vector<Complex> previous;
            for (const auto& v : report.per_N.back().values) previous.push_back(v.value);
            entry.sup_err = distance(entry.values, previous, options.distance);
        }
        if (entry.sup_err) distances.push_back(*entry.sup_err);
        report.per_N.push_back(std::move(entry));
    }

    report.verdict = verdict_from_distances(distances, options.threshold);
    // Integer-valued variables have 2π-periodic characteristic functions, so
    // the renormalized value at 2π is e^{2π²γ_N}: growth there rules out
    // mod-Gaussian convergence whatever happens on the grid.
    if (lattice.size() >= 2 && lattice.back() > 1.1 * lattice[lattice.size() - 2]) report.verdict = Verdict::DIVERGING;
    return report;
}

std::vector<Complex> shift_parameters(const std::vector<Complex>& phi, const EvaluationGrid& grid, double beta,
                                      double gamma) {
    if (phi.size() != grid.size()) throw DomainError("shift_parameters: size mismatch");
    std::vector<Complex> out(phi.size());
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const double u = grid.u[i];
        out[i] = std::exp(Complex(-0.5 * u * u * gamma, beta * u)) * phi[i];
    }
    return out;
}

CfValue empirical_cf(const std::vector<double>& samples, double u) {
    return empirical_cf(samples, std::vector<double>{u}).front();
}

std::vector<CfValue> empirical_cf(const std::vector<double>& samples, const std::vector<double>& us) {
    if (samples.empty()) throw DomainError("empirical_cf: no samples");
    const double n = static_cast<double>(samples.size());
    std::vector<CfValue> out(us.size());
    parallel_for(us.size(), [&](std::size_t i) {
        const double u = us[i];
        double sc = 0.0, ss = 0.0, sc2 = 0.0, ss2 = 0.0;
        for (double z : samples) {
            const double c = std::cos(u * z);
            const double s = std::sin(u * z);
            sc += c;
            ss += s;
            sc2 += c * c;
            ss2 += s * s;
        }
        const double mc = sc / n;
        const double ms = ss / n;
        CfValue v;
        v.value = {mc, ms};
        if (samples.size() > 1) {
            const double var_c = std::max(0.0, (sc2 - n * mc * mc) / (n - 1.0));
            const double var_s = std::max(0.0, (ss2 - n * ms * ms) / (n - 1.0));
            v.se = {std::sqrt(var_c / n), std::sqrt(var_s / n)};
        }
        out[i] = v;
    });
    return out;
}

ModReport clt_rescale_check(const CharFnSequence& seq, const std::function<ModParameters(std::uint64_t)>& params_per_N,
                            const EvaluationGrid& grid, const std::vector<std::uint64_t>& ladder, double threshold) {
    validate_ladder(ladder, grid);
    ModReport report;
    report.grid = grid;
    report.ladder = ladder;
    report.kind = seq.kind;
    report.seed = seq.seed;
    for (double u : grid.u) report.reference.push_back(std::exp(-0.5 * u * u));

    std::vector<double> distances;
    for (std::size_t k = 0; k < ladder.size(); ++k) {
        const std::uint64_t N = ladder[k];
        ModReportEntry entry;
        entry.N = N;
        entry.params = params_per_N(N);
        validate(entry.params);
        if (k == 0) report.mode = entry.params.mode;
        const bool gaussian = entry.params.mode == ModParameters::Mode::GAUSSIAN;
        const double center = gaussian ? entry.params.beta : entry.params.lambda;
        const double scale = std::sqrt(gaussian ? entry.params.gamma : entry.params.lambda);
        if (!(scale > 0.0)) throw DomainError("clt_rescale_check: scale must be positive");
        std::vector<double> scaled;
        for (double u : grid.u) scaled.push_back(u / scale);
        auto raw = seq.evaluate(N, scaled);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const Complex phase = std::polar(1.0, -grid.u[i] * center / scale);
            CfValue v;
            v.value = raw[i].value * phase;
            v.se = scale_se(raw[i].se, phase);
            entry.values.push_back(v);
        }
        entry.sup_err = distance(entry.values, report.reference, DistanceKind::ABSOLUTE);
        distances.push_back(*entry.sup_err);
        report.per_N.push_back(std::move(entry));
    }
    report.verdict = verdict_from_distances(distances, threshold);
    return report;
}

nlohmann::ordered_json to_json(const ModReport& report) {
    using json = nlohmann::ordered_json;
    json j;
    j["mode"] = to_string(report.mode);
    j["kind"] = report.kind == CharFnSequence::Kind::EXACT ? "exact" : "empirical";
    j["grid"] = report.grid.u;
    j["ladder"] = report.ladder;
    json per = json::array();
    for (const auto& e : report.per_N) {
        json entry;
        entry["N"] = e.N;
        if (e.params.mode == ModParameters::Mode::GAUSSIAN) {
            entry["params"] = {{"beta", e.params.beta}, {"gamma", e.params.gamma}};
        } else {
            entry["params"] = {{"lambda", e.params.lambda}};
        }
        json values = json::array();
        for (std::size_t i = 0; i < e.values.size(); ++i) {
            json v = {{"u", report.grid.u[i]}, {"re", e.values[i].value.real()}, {"im", e.values[i].value.imag()}};
            if (report.kind == CharFnSequence::Kind::EMPIRICAL) v["se"] = e.values[i].se_abs();
            values.push_back(v);
        }
        entry["values"] = values;
        entry["sup_err"] = e.sup_err ? json(*e.sup_err) : json(nullptr);
        if (e.lattice_modulus) entry["lattice_modulus"] = *e.lattice_modulus;
        per.push_back(entry);
    }
    j["per_N"] = per;
    if (!report.reference.empty()) {
        json ref = json::array();
        for (std::size_t i = 0; i < report.reference.size(); ++i) {
            ref.push_back({{"u", report.grid.u[i]}, {"re", report.reference[i].real()}, {"im", report.reference[i].imag()}});
        }
        j["reference"] = ref;
    }
    j["verdict"] = to_string(report.verdict);
    j["seed"] = report.seed;
    return j;
}

}  // namespace modphi
