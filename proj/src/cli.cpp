#include "modphi/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "modphi/arith.hpp"
#include "modphi/arrays.hpp"
#include "modphi/error.hpp"
#include "modphi/ff.hpp"
#include "modphi/grid.hpp"
#include "modphi/levy.hpp"
#include "modphi/limits.hpp"
#include "modphi/modconv.hpp"
#include "modphi/parallel.hpp"
#include "modphi/rmt.hpp"
#include "modphi/rng.hpp"
#include "modphi/stats.hpp"

namespace modphi::cli {

namespace {

using json = nlohmann::ordered_json;

struct Options {
    // global
    std::size_t threads = 0;
    std::uint64_t seed = kDefaultSeed;
    std::string format = "json";
    std::string output;
    bool timing = false;
    // shared
    std::string grid = "-2:2:9";
    std::vector<double> lambda;
    std::uint64_t cutoff = kDefaultPrimeCutoff;
    std::uint64_t N = 0;
    std::string ladder;
    std::size_t samples = 10000;
    double threshold = 0.05;
    // limits
    std::string name;
    std::string method = "barnes";
    // id
    std::string measure = "none";
    double sigma = 0.0;
    double beta = 0.0;
    double rate = 1.0;
    double atom = 1.0;
    std::string truncation = "canonical";
    int cumulants = 0;
    std::string convert;
    // arrays
    std::string rows = "gamma";
    std::string normalization = "harmonic";
    // rmt
    std::string group = "U";
    int g = 1;
    std::string sampler = "verblunsky";
    int burn_in = 1000;
    int thinning = 0;
    // omega / models
    std::string mode = "phi";
    int k_max = 10;
    std::string cache;
    std::string model = "prime";
    // ff
    std::uint32_t p = 3;
    int k = 1;
    std::string f;
    bool restrict_nonvanishing = false;
    bool records = false;
    int bins = 10;
    int D = 20;
};

struct Result {
    json j;
    std::string csv;  // set by tasks whose data is not a table of values
};

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& s, const char* flag) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            if (item.empty() || item[0] == '-') throw std::invalid_argument(item);
            out.push_back(std::stoull(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw DomainError(std::string(flag) + ": expected a comma-separated list of positive integers");
        }
    }
    if (out.empty()) throw DomainError(std::string(flag) + ": empty list");
    return out;
}

std::vector<long long> parse_int_list(const std::string& s, const char* flag) {
    std::vector<long long> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stoll(item, &pos));
            if (pos != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw DomainError(std::string(flag) + ": expected a comma-separated list of integers");
        }
    }
    if (out.empty()) throw DomainError(std::string(flag) + ": empty list");
    return out;
}

TruncationId parse_truncation(const std::string& s) {
    if (s == "canonical") return TruncationId::CANONICAL_TRAPEZOID;
    if (s == "indicator") return TruncationId::INDICATOR;
    throw DomainError("unknown truncation '" + s + "' (canonical, indicator)");
}

json value_entry(const char* key, double x, Complex v, std::optional<double> se = std::nullopt) {
    json e = {{key, x}, {"re", v.real()}, {"im", v.imag()}};
    if (se) e["se"] = *se;
    return e;
}

json values_json(const char* key, const std::vector<double>& xs, const std::vector<Complex>& vs,
                 const std::vector<double>* se = nullptr) {
    json a = json::array();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        a.push_back(value_entry(key, xs[i], vs[i], se ? std::optional<double>((*se)[i]) : std::nullopt));
    }
    return a;
}

double sup_error(const std::vector<Complex>& a, const std::vector<Complex>& b) { return sup_distance(a, b); }

json params_json(const ModParameters& p) {
    if (p.mode == ModParameters::Mode::GAUSSIAN) return {{"beta", p.beta}, {"gamma", p.gamma}};
    return {{"lambda", p.lambda}};
}

/// Report of a ladder run in the common layout: values and sup_error of the
/// last N at top level, the whole ladder underneath.
void put_report(json& j, const ModReport& r) {
    const bool empirical = r.kind == CharFnSequence::Kind::EMPIRICAL;
    auto entry_values = [&](const ModReportEntry& e) {
        json a = json::array();
        for (std::size_t i = 0; i < e.values.size(); ++i) {
            a.push_back(value_entry("u", r.grid.u[i], e.values[i].value,
                                    empirical ? std::optional<double>(e.values[i].se_abs()) : std::nullopt));
        }
        return a;
    };
    j["grid"] = r.grid.u;
    j["values"] = entry_values(r.per_N.back());
    if (!r.reference.empty()) j["reference"] = values_json("u", r.grid.u, r.reference);
    if (r.per_N.back().sup_err) j["sup_error"] = *r.per_N.back().sup_err;
    j["verdict"] = to_string(r.verdict);
    json ladder = json::array();
    for (const auto& e : r.per_N) {
        json le = {{"N", e.N}, {"params", params_json(e.params)}};
        le["sup_error"] = e.sup_err ? json(*e.sup_err) : json(nullptr);
        if (e.lattice_modulus) le["lattice_modulus"] = *e.lattice_modulus;
        le["values"] = entry_values(e);
        ladder.push_back(le);
    }
    j["ladder"] = ladder;
}

std::string csv_from_values(const json& j) {
    std::ostringstream os;
    auto has_se = [](const json& values) {
        for (const auto& v : values)
            if (v.contains("se")) return true;
        return false;
    };
    auto ref_at = [&](std::size_t i, double x) -> std::optional<Complex> {
        if (!j.contains("reference")) return std::nullopt;
        const auto& r = j["reference"][i];
        if (r.begin().value().get<double>() != x) return std::nullopt;
        return Complex(r["re"].get<double>(), r["im"].get<double>());
    };
    auto rows = [&](const json& values, const std::string& prefix, bool se) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            const auto& v = values[i];
            const double x = v.begin().value().get<double>();
            os << prefix << num(x) << ',' << num(v["re"].get<double>()) << ',' << num(v["im"].get<double>());
            if (se) os << ',' << (v.contains("se") ? num(v["se"].get<double>()) : "");
            if (j.contains("reference")) {
                const auto r = ref_at(i, x);
                os << ',' << (r ? num(r->real()) : "") << ',' << (r ? num(r->imag()) : "");
            }
            os << '\n';
        }
    };
    if (!j.contains("values") || j["values"].empty()) throw DomainError("this task has no tabular CSV form; use --format json");
    const std::string key = j["values"][0].begin().key();
    const std::string ref_cols = j.contains("reference") ? ",ref_re,ref_im" : "";
    if (j.contains("ladder")) {
        const bool se = has_se(j["ladder"][0]["values"]);
        os << "N," << key << ",re,im" << (se ? ",se" : "") << ref_cols << '\n';
        for (const auto& e : j["ladder"]) rows(e["values"], std::to_string(e["N"].get<std::uint64_t>()) + ",", se);
    } else {
        const bool se = has_se(j["values"]);
        os << key << ",re,im" << (se ? ",se" : "") << ref_cols << '\n';
        rows(j["values"], "", se);
    }
    return os.str();
}

json base(const std::string& task, const Options& o) {
    json j;
    j["task"] = task;
    j["params"] = json::object();
    j["seed"] = o.seed;
    return j;
}

// --- limits ----------------------------------------------------------------

Result run_limits(const Options& o) {
    Result r{base("limits", o), {}};
    auto& j = r.j;
    j["params"] = {{"name", o.name}, {"cutoff", o.cutoff}};
    if (o.name == "gamma") j["params"]["method"] = o.method;
    const std::uint64_t cut = o.cutoff;
    if (!o.lambda.empty()) {
        std::function<Complex(Complex)> f;
        if (o.name == "M") f = [](Complex l) { return rmt_factor_M(l); };
        else if (o.name == "A") f = [cut](Complex l) { return arithmetic_factor_A(l, cut); };
        else if (o.name == "MSp") f = [](Complex l) { return sp_factor_MSp(l); };
        else if (o.name == "MSp-ks") f = [](Complex l) { return sp_factor_keating_snaith(l); };
        else throw DomainError("--lambda applies to M, A, MSp and MSp-ks; use --grid for '" + o.name + "'");
        std::vector<Complex> v;
        for (double l : o.lambda) v.push_back(f(Complex(l, 0.0)));
        j["values"] = values_json("lambda", o.lambda, v);
        return r;
    }
    GammaMethod method;
    if (o.method == "barnes") method = GammaMethod::BARNES_CLOSED_FORM;
    else if (o.method == "lk") method = GammaMethod::LK_INTEGRAL;
    else throw DomainError("--method: expected barnes or lk");
    std::function<Complex(double)> f;
    if (o.name == "M") f = [](double u) { return rmt_factor_M(Complex(0.0, u)); };
    else if (o.name == "A") f = [cut](double u) { return arithmetic_factor_A(Complex(0.0, u), cut); };
    else if (o.name == "MSp") f = [](double u) { return sp_factor_MSp(Complex(0.0, u)); };
    else if (o.name == "MSp-ks") f = [](double u) { return sp_factor_keating_snaith(Complex(0.0, u)); };
    else if (o.name == "gamma") f = [method](double u) { return phi_gamma_example(u, method); };
    else if (o.name == "omega") f = [cut](double u) { return phi_omega(u, cut); };
    else if (o.name == "phi1") f = [](double u) { return phi1(u); };
    else if (o.name == "phi2") f = [cut](double u) { return phi2(u, cut); };
    else throw DomainError("unknown limiting function '" + o.name + "'");
    const auto grid = EvaluationGrid::parse(o.grid);
    std::vector<Complex> v(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) { v[i] = f(grid.u[i]); });
    j["grid"] = grid.u;
    j["values"] = values_json("u", grid.u, v);
    return r;
}

// --- id ----------------------------------------------------------------------

Result run_id(const Options& o) {
    Result r{base("id", o), {}};
    auto& j = r.j;
    const TruncationId h = parse_truncation(o.truncation);
    GeneratingTriplet t;
    t.sigma = o.sigma;
    t.beta = o.beta;
    t.truncation = h;
    if (o.sigma < 0.0) throw DomainError("--sigma must be ≥ 0");
    if (o.measure == "poisson") {
        if (!(o.rate > 0.0) || o.atom == 0.0) throw DomainError("--rate must be > 0 and --atom nonzero");
        t.nu = LevyMeasure({{o.atom, o.rate}});
    } else if (o.measure == "gamma") {
        t.nu = gamma_levy_measure();
    } else if (o.measure == "gamma-limit") {
        t.nu = gamma_example_limit_measure();
    } else if (o.measure != "none") {
        throw DomainError("unknown measure '" + o.measure + "' (none, poisson, gamma, gamma-limit)");
    }
    j["params"] = {{"measure", o.measure}, {"sigma", o.sigma}, {"beta", o.beta}, {"truncation", o.truncation}};
    if (o.measure == "poisson") {
        j["params"]["rate"] = o.rate;
        j["params"]["atom"] = o.atom;
    }
    const auto grid = EvaluationGrid::parse(o.grid);
    std::vector<Complex> v(grid.size());
    const bool limit_form = o.measure == "gamma-limit";
    const double k = kappa(t.nu, h);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double u = grid.u[i];
        // ν integrates only x⁴∧1 here, so the exponent is the limiting form with κ = ∫h³ν.
        v[i] = limit_form ? limiting_psi(k, t.nu, h, u) + Complex(-0.5 * t.sigma * u * u, t.beta * u)
                          : levy_exponent(t, u);
    }
    j["exponent"] = limit_form ? "limiting_psi" : "levy_exponent";
    j["kappa"] = k;
    j["grid"] = grid.u;
    j["values"] = values_json("u", grid.u, v);
    if (o.cumulants > 0) j["cumulants"] = cumulants_from_triplet(t, o.cumulants);
    if (!o.convert.empty()) {
        const auto c = convert_truncation(t, parse_truncation(o.convert));
        double worst = 0.0;
        if (!limit_form) {
            for (std::size_t i = 0; i < grid.size(); ++i) worst = std::max(worst, std::abs(levy_exponent(c, grid.u[i]) - v[i]));
        }
        j["converted"] = {{"truncation", o.convert}, {"beta", c.beta}};
        if (!limit_form) j["converted"]["max_exponent_change"] = worst;
    }
    return r;
}

// --- arrays --------------------------------------------------------------------

Result run_arrays(const Options& o) {
    Result r{base("arrays", o), {}};
    const RowDistribution row = RowDistribution::parse(o.rows);
    const auto grid = EvaluationGrid::parse(o.grid);
    const auto ladder = parse_u64_list(o.ladder.empty() ? "10,100,1000" : o.ladder, "--ladder");
    const bool harmonic_norm = o.normalization == "harmonic";
    if (!harmonic_norm && o.normalization != "log") throw DomainError("--normalization: expected harmonic or log");
    for (auto N : ladder)
        if (N < 2) throw DomainError("--ladder entries must be ≥ 2");
    CharFnSequence seq = o.samples == 0
                             ? exact_sequence([row](std::uint64_t N, double u) { return log_mean_cf_exact(row, N, u); })
                             : empirical_sequence([row](std::uint64_t N, Rng& g) { return sample_log_mean(row, N, g); },
                                                  o.samples, o.seed);
    auto params = [harmonic_norm](std::uint64_t N) {
        return ModParameters::gaussian(0.0, harmonic_norm ? harmonic(N) : std::log(static_cast<double>(N)));
    };
    ReportOptions opts;
    opts.threshold = o.threshold;
    const double shift = harmonic_norm ? 0.0 : kEulerGamma;
    if (row.family == RowFamily::CENTERED_GAMMA) {
        opts.reference = [shift](double u) { return std::exp(-0.5 * shift * u * u) * phi_gamma_example(u); };
    } else if (row.family == RowFamily::NORMAL) {
        opts.reference = [shift](double u) { return Complex(std::exp(-0.5 * shift * u * u), 0.0); };
    }
    const auto report = convergence_report(seq, params, grid, ladder, opts);
    r.j["params"] = {{"rows", o.rows},
                     {"normalization", o.normalization},
                     {"ladder", ladder},
                     {"samples", o.samples},
                     {"threshold", o.threshold}};
    put_report(r.j, report);
    return r;
}

// --- rmt -------------------------------------------------------------------------

Result run_rmt(const Options& o) {
    Result r{base("rmt", o), {}};
    auto& j = r.j;
    if (o.group == "U") {
        UnitarySampler s;
        if (o.sampler == "verblunsky") s = UnitarySampler::VERBLUNSKY;
        else if (o.sampler == "matrix") s = UnitarySampler::MATRIX;
        else throw DomainError("--sampler: expected verblunsky or matrix");
        if (o.N < 1 || o.N > 100000) throw DomainError("--N must lie in [1, 100000] for the unitary group");
        const auto grid = EvaluationGrid::parse(o.grid);
        const auto est = unitary_moment_mc(static_cast<int>(o.N), grid.u, o.samples, o.seed, s);
        std::vector<Complex> v, ref;
        std::vector<double> se;
        std::size_t rejected = 0;
        for (std::size_t i = 0; i < est.size(); ++i) {
            v.push_back(est[i].value);
            se.push_back(std::abs(est[i].se));
            ref.push_back(rmt_factor_M(Complex(0.0, grid.u[i])));
            rejected = std::max(rejected, est[i].rejected);
        }
        j["params"] = {{"group", "U"}, {"N", o.N}, {"samples", o.samples}, {"sampler", o.sampler}};
        j["grid"] = grid.u;
        j["values"] = values_json("u", grid.u, v, &se);
        j["reference"] = values_json("u", grid.u, ref);
        j["sup_error"] = sup_error(v, ref);
        j["rejected"] = rejected;
        return r;
    }
    if (o.group != "USp") throw DomainError("--group: expected U or USp");
    const std::vector<double> lambdas = o.lambda.empty() ? std::vector<double>{1.0} : o.lambda;
    McmcOptions mc;
    mc.burn_in = o.burn_in;
    mc.thinning = o.thinning;
    if (mc.burn_in < 0 || mc.thinning < 0) throw DomainError("--burn-in and --thinning must be ≥ 0");
    std::vector<Complex> v, ref;
    std::vector<double> se;
    for (double l : lambdas) {
        const auto e = symplectic_moment_mc(o.g, l, o.samples, o.seed, mc);
        v.push_back(e.value);
        se.push_back(std::abs(e.se));
        ref.push_back(sp_factor_MSp(Complex(l, 0.0)));
    }
    j["params"] = {{"group", "USp"}, {"g", o.g}, {"samples", o.samples}, {"burn_in", o.burn_in}, {"thinning", o.thinning}};
    j["values"] = values_json("lambda", lambdas, v, &se);
    j["reference"] = values_json("lambda", lambdas, ref);
    j["sup_error"] = sup_error(v, ref);
    return r;
}

// --- omega -------------------------------------------------------------------------

Result run_omega(const Options& o) {
    Result r{base("omega", o), {}};
    auto& j = r.j;
    const std::uint64_t N = o.N ? o.N : 100000;
    const auto ladder = o.ladder.empty() ? std::vector<std::uint64_t>{N} : parse_u64_list(o.ladder, "--ladder");
    std::uint64_t top = 0;
    for (auto n : ladder) {
        if (n < 100) throw DomainError("omega: N must be ≥ 100");
        top = std::max(top, n);
    }
    const SieveTable table = omega_sieve_cached(top, o.cache);
    j["params"] = {{"mode", o.mode}, {"ladder", ladder}};
    if (o.mode == "sathe-selberg") {
        if (ladder.size() != 1) throw DomainError("sathe-selberg takes a single --N");
        const auto hist = sathe_selberg_histogram(table, o.k_max, top);
        j["params"]["k_max"] = o.k_max;
        j["lambda"] = hist.lambda;
        json rows = json::array();
        std::ostringstream csv;
        csv << "k,count,predicted,ratio\n";
        for (const auto& row : hist.rows) {
            rows.push_back({{"k", row.k}, {"count", row.count}, {"predicted", row.predicted}, {"ratio", row.ratio}});
            csv << row.k << ',' << row.count << ',' << num(row.predicted) << ',' << num(row.ratio) << '\n';
        }
        j["rows"] = rows;
        r.csv = csv.str();
        return r;
    }
    const auto grid = EvaluationGrid::parse(o.grid);
    auto loglog = [](std::uint64_t n) { return std::log(std::log(static_cast<double>(n))); };
    if (o.mode == "erdos-kac") {
        const auto report = clt_rescale_check(
            omega_sequence(table), [&](std::uint64_t n) { return ModParameters::gaussian(loglog(n), loglog(n)); }, grid,
            ladder, o.threshold);
        j["params"]["threshold"] = o.threshold;
        put_report(j, report);
        return r;
    }
    if (o.mode != "phi") throw DomainError("--mode: expected phi, erdos-kac or sathe-selberg");
    ReportOptions opts;
    opts.threshold = o.threshold;
    const std::uint64_t cut = o.cutoff;
    opts.reference = [cut](double u) { return phi_omega(u, cut); };
    const auto report = convergence_report(
        omega_prime_sequence(table), [&](std::uint64_t n) { return ModParameters::poisson(loglog(n)); }, grid, ladder,
        opts);
    j["params"]["cutoff"] = o.cutoff;
    j["params"]["threshold"] = o.threshold;
    put_report(j, report);
    return r;
}

// --- models ----------------------------------------------------------------------

Result run_models(const Options& o) {
    Result r{base("models", o), {}};
    auto& j = r.j;
    const std::uint64_t N = o.N ? o.N : 1000;
    const auto grid = EvaluationGrid::parse(o.grid);
    const std::uint64_t cut = o.cutoff;
    std::vector<Complex> v(grid.size()), ref(grid.size());
    double param = 0.0;
    if (o.model == "prime") {
        parallel_for(grid.size(), [&](std::size_t i) {
            v[i] = bernoulli_prime_model_cf(N, grid.u[i]).renormalized;
            ref[i] = phi2(grid.u[i], cut);
        });
        param = prime_model_lambda(N);
        j["params"] = {{"model", o.model}, {"y", N}, {"cutoff", cut}};
        j["lambda"] = param;
    } else if (o.model == "permutation") {
        parallel_for(grid.size(), [&](std::size_t i) {
            v[i] = permutation_cycle_model_cf(N, grid.u[i]).renormalized;
            ref[i] = phi1(grid.u[i]);
        });
        j["params"] = {{"model", o.model}, {"N", N}};
        j["lambda"] = std::log(static_cast<double>(N) + 1.0);
    } else if (o.model == "circle") {
        parallel_for(grid.size(), [&](std::size_t i) {
            v[i] = circle_model_cf(N, grid.u[i]).renormalized;
            ref[i] = arithmetic_factor_A(Complex(0.0, grid.u[i]), cut);
        });
        j["params"] = {{"model", o.model}, {"prime_cutoff", N}, {"cutoff", cut}};
        j["gamma"] = circle_model_gamma(N);
    } else {
        throw DomainError("--model: expected prime, permutation or circle");
    }
    j["grid"] = grid.u;
    j["values"] = values_json("u", grid.u, v);
    j["reference"] = values_json("u", grid.u, ref);
    j["sup_error"] = sup_error(v, ref);
    return r;
}

// --- ff --------------------------------------------------------------------------

json ff_params(const Options& o, const FiniteField& F) { return {{"p", o.p}, {"k", o.k}, {"q", F.q()}}; }

Result run_ff_scan(const Options& o) {
    Result r{base("ff scan", o), {}};
    const auto F = finite_field(o.p, o.k);
    const auto recs = scan_ensemble(*F, o.g);
    auto& j = r.j;
    j["params"] = ff_params(o, *F);
    j["params"]["g"] = o.g;
    std::uint64_t vanishing = 0;
    double worst = 0.0;
    for (const auto& c : recs) {
        vanishing += c.vanishing;
        worst = std::max(worst, c.weil_residual);
    }
    j["ensemble_size"] = recs.size();
    j["vanishing"] = vanishing;
    j["max_weil_residual"] = worst;
    if (o.records) {
        json a = json::array();
        for (const auto& c : recs) {
            a.push_back({{"f", c.f.coeffs}, {"L", c.L.a}, {"vanishing", c.vanishing}, {"angles", c.angles}});
        }
        j["curves"] = a;
    }
    std::ostringstream csv;
    write_curve_csv(csv, recs, F->q(), o.g);
    r.csv = csv.str();
    return r;
}

Result run_ff_lpoly(const Options& o) {
    Result r{base("ff lpoly", o), {}};
    const auto F = finite_field(o.p, o.k);
    const auto raw = parse_int_list(o.f, "--f");
    if (raw.back() != 1) throw DomainError("--f: the leading coefficient (last entry) must be 1");
    CurvePoly f;
    for (long long c : raw) f.coeffs.push_back(F->from_int(c));
    validate_curve(*F, f);
    const auto L = l_polynomial(f, *F);
    const auto w = verify_weil(L);
    auto& j = r.j;
    j["params"] = ff_params(o, *F);
    j["params"]["f"] = raw;
    j["genus"] = L.genus();
    j["L"] = L.a;
    std::vector<std::uint64_t> counts;
    for (int n = 1; n <= L.genus(); ++n) counts.push_back(count_affine_points(f, *F, n));
    j["affine_counts"] = counts;
    j["functional_equation"] = w.functional_equation;
    j["weil_residual"] = w.max_residual;
    j["value_at_half"] = l_value_at_half(L);
    j["vanishing"] = l_vanishes_at_half(L);
    j["angles"] = frobenius_angles(L);
    std::ostringstream csv;
    csv << "i,a_i\n";
    for (std::size_t i = 0; i < L.a.size(); ++i) csv << i << ',' << L.a[i] << '\n';
    r.csv = csv.str();
    return r;
}

Result run_ff_angles(const Options& o) {
    Result r{base("ff angles", o), {}};
    if (o.bins < 1) throw DomainError("--bins must be ≥ 1");
    const auto F = finite_field(o.p, o.k);
    const auto recs = scan_ensemble(*F, o.g);
    std::vector<double> all;
    for (const auto& c : recs) all.insert(all.end(), c.angles.begin(), c.angles.end());
    std::vector<std::uint64_t> hist(o.bins, 0);
    for (double t : all) hist[std::min<std::size_t>(o.bins - 1, static_cast<std::size_t>(t / kPi * o.bins))]++;
    auto& j = r.j;
    j["params"] = ff_params(o, *F);
    j["params"]["g"] = o.g;
    j["params"]["bins"] = o.bins;
    j["ensemble_size"] = recs.size();
    j["histogram"] = hist;
    if (o.g == 1) {
        j["ks_sin2"] = ks_one_sample(all, [](double t) { return t / kPi - std::sin(2.0 * t) / (2.0 * kPi); });
    }
    std::ostringstream csv;
    csv << "bin_lo,bin_hi,count\n";
    for (int b = 0; b < o.bins; ++b) csv << num(kPi * b / o.bins) << ',' << num(kPi * (b + 1) / o.bins) << ',' << hist[b] << '\n';
    r.csv = csv.str();
    return r;
}

Result run_ff_moments(const Options& o) {
    Result r{base("ff moments", o), {}};
    const auto F = finite_field(o.p, o.k);
    const auto recs = scan_ensemble(*F, o.g);
    auto& j = r.j;
    j["params"] = ff_params(o, *F);
    j["params"]["g"] = o.g;
    j["params"]["restrict_nonvanishing"] = o.restrict_nonvanishing;
    const double g = o.g;
    EnsembleMoment last;
    if (!o.lambda.empty()) {
        std::vector<Complex> v, ref;
        json raw = json::array();
        for (double l : o.lambda) {
            if (l < 0.0) throw DomainError("--lambda must be ≥ 0 for ensemble moments");
            last = ensemble_moment_lambda(recs, l, o.restrict_nonvanishing);
            v.push_back(std::pow(g, -0.5 * l * (l + 1.0)) * last.value);
            raw.push_back(last.value.real());
            ref.push_back(l > 0.0 ? sp_factor_MSp(Complex(l, 0.0)) * arithmetic_factor_Ah(l, F->q(), o.D) : Complex(1.0));
        }
        j["params"]["D"] = o.D;
        j["values"] = values_json("lambda", o.lambda, v);
        j["raw_moments"] = raw;
        // Exploratory comparison with M_Sp(λ)·A_h(λ); no verdict is drawn.
        j["conjecture"] = values_json("lambda", o.lambda, ref);
    } else {
        const auto grid = EvaluationGrid::parse(o.grid);
        std::vector<Complex> v;
        for (double u : grid.u) {
            last = ensemble_moment_u(recs, u, o.restrict_nonvanishing);
            v.push_back(std::exp(Complex(0.5 * u * u, -0.5 * u) * std::log(g)) * last.value);
        }
        j["grid"] = grid.u;
        j["values"] = values_json("u", grid.u, v);
    }
    j["ensemble_size"] = last.ensemble_size;
    j["used"] = last.used;
    j["excluded"] = last.excluded;
    return r;
}

Result run_ff_ah(const Options& o) {
    Result r{base("ff ah", o), {}};
    const auto F = finite_field(o.p, o.k);
    const std::vector<double> lambdas = o.lambda.empty() ? std::vector<double>{1.0} : o.lambda;
    std::vector<Complex> v, prod;
    for (double l : lambdas) {
        const double a = arithmetic_factor_Ah(l, F->q(), o.D);
        v.emplace_back(a, 0.0);
        prod.push_back(a * sp_factor_MSp(Complex(l, 0.0)));
    }
    std::vector<std::uint64_t> counts;
    for (int d = 1; d <= std::min(o.D, 12); ++d) counts.push_back(count_irreducibles(F->q(), d));
    auto& j = r.j;
    j["params"] = ff_params(o, *F);
    j["params"]["D"] = o.D;
    j["values"] = values_json("lambda", lambdas, v);
    j["msp_times_ah"] = values_json("lambda", lambdas, prod);
    j["irreducible_counts"] = counts;
    return r;
}

void emit(const Result& r, const Options& o, std::ostream& out, double ms) {
    std::string text;
    if (o.format == "csv") {
        text = r.csv.empty() ? csv_from_values(r.j) : r.csv;
    } else {
        json j = r.j;
        if (o.timing) j["runtime_ms"] = ms;
        text = j.dump(2) + "\n";
    }
    if (o.output.empty()) {
        out << text;
        out.flush();
        return;
    }
    std::ofstream f(o.output, std::ios::binary);
    if (!f) throw DomainError("cannot open --output file '" + o.output + "'");
    f << text;
    if (!f) throw DomainError("failed writing --output file '" + o.output + "'");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    std::function<Result()> task;

    CLI::App app{"modphi: mod-Gaussian and mod-Poisson convergence toolkit.\n"
                 "Every run prints one report (JSON by default, or CSV). Exit status: 0 ok, 2 invalid input,\n"
                 "3 numerical budget exhausted."};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--threads", o.threads, "Worker cap (default: MODPHI_THREADS, else 1)")->check(CLI::PositiveNumber);
    app.add_option("--seed", o.seed, "Master seed for Monte Carlo tasks")->capture_default_str();
    app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    app.add_option("--output", o.output, "Write the report to this file instead of stdout");
    app.add_flag("--timing", o.timing, "Add runtime_ms to JSON reports (breaks byte-identical output)");

    auto add_grid = [&](CLI::App* s) {
        s->add_option("--grid", o.grid, "Evaluation grid a:b:count")->capture_default_str();
    };

    auto* limits = app.add_subcommand("limits", "Evaluate a limiting function");
    limits->add_option("name", o.name, "M, A, MSp, MSp-ks, gamma, omega, phi1 or phi2")->required();
    limits->add_option("--lambda", o.lambda, "Real λ values (M, A, MSp, MSp-ks); otherwise the grid in u is used")
        ->delimiter(',');
    add_grid(limits);
    limits->add_option("--cutoff", o.cutoff, "Prime cutoff of Euler products")->capture_default_str();
    limits->add_option("--method", o.method, "gamma: barnes or lk")->capture_default_str();
    limits->callback([&] { task = [&] { return run_limits(o); }; });

    auto* id = app.add_subcommand("id", "Lévy–Khintchine exponent, cumulants and truncation conversion");
    id->add_option("--measure", o.measure, "none, poisson, gamma or gamma-limit")->capture_default_str();
    id->add_option("--sigma", o.sigma, "Gaussian variance σ")->capture_default_str();
    id->add_option("--beta", o.beta, "Drift β")->capture_default_str();
    id->add_option("--rate", o.rate, "poisson: atom weight")->capture_default_str();
    id->add_option("--atom", o.atom, "poisson: atom position")->capture_default_str();
    id->add_option("--truncation", o.truncation, "canonical or indicator")->capture_default_str();
    id->add_option("--cumulants", o.cumulants, "Number of cumulants to report")->check(CLI::NonNegativeNumber);
    id->add_option("--convert", o.convert, "Re-express the triplet with this truncation");
    add_grid(id);
    id->callback([&] { task = [&] { return run_id(o); }; });

    auto* arrays = app.add_subcommand("arrays", "Logarithmic means of triangular arrays along an N ladder");
    arrays->add_option("--rows", o.rows, "normal, gamma, poisson or twopoint")->capture_default_str();
    arrays->add_option("--ladder", o.ladder, "Comma-separated N values (default 10,100,1000)");
    arrays->add_option("--samples", o.samples, "Monte Carlo draws per N (0 = exact product)")->capture_default_str();
    arrays->add_option("--normalization", o.normalization, "harmonic (γ_N = H_N) or log (γ_N = log N)")
        ->capture_default_str();
    arrays->add_option("--threshold", o.threshold, "Verdict threshold")->capture_default_str();
    add_grid(arrays);
    arrays->callback([&] {
        if (arrays->count("--samples") == 0) o.samples = 0;
        task = [&] { return run_arrays(o); };
    });

    auto* rmt = app.add_subcommand("rmt", "Random matrix moments: U(N) or USp(2g)");
    rmt->add_option("--group", o.group, "U or USp")->capture_default_str();
    rmt->add_option("--N", o.N, "Matrix size for U");
    rmt->add_option("--g", o.g, "Rank g for USp(2g)")->capture_default_str();
    rmt->add_option("--lambda", o.lambda, "USp: real moments λ")->delimiter(',');
    rmt->add_option("--samples", o.samples, "Monte Carlo draws (≥ 1000)")->capture_default_str();
    rmt->add_option("--sampler", o.sampler, "U: verblunsky or matrix")->capture_default_str();
    rmt->add_option("--burn-in", o.burn_in, "USp: burn-in sweeps")->capture_default_str();
    rmt->add_option("--thinning", o.thinning, "USp: sweeps between draws (0 = g)")->capture_default_str();
    add_grid(rmt);
    rmt->callback([&] {
        if (rmt->count("--N") == 0) o.N = 10;
        task = [&] { return run_rmt(o); };
    });

    auto* omega = app.add_subcommand("omega", "Statistics of ω(n) from a sieve table");
    omega->add_option("--mode", o.mode, "phi, erdos-kac or sathe-selberg")->capture_default_str();
    omega->add_option("--N", o.N, "Range n ≤ N (default 100000)");
    omega->add_option("--ladder", o.ladder, "Comma-separated N values (overrides --N)");
    omega->add_option("--cache", o.cache, "Sieve cache file (MPHI format)");
    omega->add_option("--k-max", o.k_max, "sathe-selberg: largest k")->capture_default_str();
    omega->add_option("--cutoff", o.cutoff, "Prime cutoff of the reference Φ")->capture_default_str();
    omega->add_option("--threshold", o.threshold, "Verdict threshold")->capture_default_str();
    add_grid(omega);
    omega->callback([&] { task = [&] { return run_omega(o); }; });

    auto* models = app.add_subcommand("models", "Renormalized probabilistic models against their limits");
    models->add_option("--model", o.model, "prime, permutation or circle")->capture_default_str();
    models->add_option("--N", o.N, "y (prime), N (permutation) or prime cutoff (circle); default 1000");
    models->add_option("--cutoff", o.cutoff, "Prime cutoff of the reference")->capture_default_str();
    add_grid(models);
    models->callback([&] { task = [&] { return run_models(o); }; });

    auto* ff = app.add_subcommand("ff", "Hyperelliptic curves y² = f(x) over F_q, q = p^k");
    ff->require_subcommand(1);
    auto add_field = [&](CLI::App* s) {
        s->add_option("--p", o.p, "Odd prime p")->capture_default_str();
        s->add_option("--k", o.k, "Extension degree k")->capture_default_str();
    };
    auto add_genus = [&](CLI::App* s) { s->add_option("--g", o.g, "Genus")->capture_default_str(); };

    auto* scan = ff->add_subcommand("scan", "L-polynomials of every curve in H_{g,q} (CSV: one row per curve)");
    add_field(scan);
    add_genus(scan);
    scan->add_flag("--records", o.records, "Include every curve in the JSON report");
    scan->callback([&] { task = [&] { return run_ff_scan(o); }; });

    auto* lpoly = ff->add_subcommand("lpoly", "L-polynomial of one curve");
    add_field(lpoly);
    lpoly->add_option("--f", o.f,
                      "Coefficients of f, a_0 first, as comma-separated integers (read in the prime field); "
                      "degree 2g+1, leading coefficient 1, e.g. 0,-1,0,1 for x^3 - x")
        ->required();
    lpoly->callback([&] { task = [&] { return run_ff_lpoly(o); }; });

    auto* angles = ff->add_subcommand("angles", "Frobenius angle distribution of H_{g,q}");
    add_field(angles);
    add_genus(angles);
    angles->add_option("--bins", o.bins, "Histogram bins on [0, π]")->capture_default_str();
    angles->callback([&] { task = [&] { return run_ff_angles(o); }; });

    auto* moments = ff->add_subcommand("moments", "Ensemble moments of L(f, 1/2)");
    add_field(moments);
    add_genus(moments);
    moments->add_option("--lambda", o.lambda, "Real moments λ ≥ 0; otherwise the grid in u is used")->delimiter(',');
    moments->add_flag("--restrict", o.restrict_nonvanishing, "Exclude curves with L(f, 1/2) = 0");
    moments->add_option("--D", o.D, "Degree cutoff of A_h in the comparison")->capture_default_str();
    add_grid(moments);
    moments->callback([&] { task = [&] { return run_ff_moments(o); }; });

    auto* ah = ff->add_subcommand("ah", "Arithmetic factor A_h(λ) over F_q[T]");
    add_field(ah);
    ah->add_option("--lambda", o.lambda, "Real λ > 0 (default 1)")->delimiter(',');
    ah->add_option("--D", o.D, "Degree cutoff (≤ 30)")->capture_default_str();
    ah->callback([&] { task = [&] { return run_ff_ah(o); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kExitOk;
        }
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    }

    try {
        if (o.threads > 0) set_thread_count(o.threads);
        const auto t0 = std::chrono::steady_clock::now();
        const Result r = task();
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        emit(r, o, out, ms);
        return kExitOk;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const BudgetError& e) {
        err << "budget exceeded: " << e.what() << '\n';
        return kExitBudget;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace modphi::cli
