#include "modphi/arrays.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "modphi/error.hpp"
#include "modphi/parallel.hpp"

namespace modphi {

namespace {

constexpr std::size_t kBlock = 1024;
constexpr int kTrackSteps = 32;
constexpr double kBranchFloor = 1e-14;

// n·log φ(u/n), tracking the argument continuously when u/n is large.
Complex row_log(const RowDistribution& row, std::uint64_t n, double u) {
    const double nd = static_cast<double>(n);
    const double v = u / nd;
    if (nd >= 2.0 * std::abs(u)) {
        const Complex phi = row.cf(v);
        if (std::abs(phi) <= kBranchFloor) throw BranchError("log_mean_cf_exact: characteristic function vanishes");
        return nd * std::log(phi);
    }
    Complex log_phi = 0.0;
    Complex previous = 1.0;
    for (int k = 1; k <= kTrackSteps; ++k) {
        const Complex current = row.cf(v * k / kTrackSteps);
        if (std::abs(current) <= kBranchFloor) throw BranchError("log_mean_cf_exact: characteristic function vanishes");
        log_phi += std::log(current / previous);
        previous = current;
    }
    return nd * log_phi;
}

double centered_poisson_third_abs() {
    double sum = 0.0;
    double p = std::exp(-1.0);
    for (int k = 0; k < 60; ++k) {
        if (k > 0) p /= k;
        sum += std::pow(std::abs(k - 1.0), 3) * p;
    }
    return sum;
}

}  // namespace

Complex RowDistribution::cf(double u) const {
    const Complex iu(0.0, u);
    switch (family) {
        case RowFamily::NORMAL: return std::exp(-0.5 * u * u);
        case RowFamily::CENTERED_GAMMA: return std::exp(-iu) / (1.0 - iu);
        case RowFamily::CENTERED_POISSON: return std::exp(std::exp(iu) - 1.0 - iu);
        case RowFamily::SYMMETRIC_TWO_POINT: return std::cos(u);
    }
    return 0.0;
}

double RowDistribution::sample(Rng& rng) const { return row_sum(1, rng); }

double RowDistribution::row_sum(std::uint64_t n, Rng& rng) const {
    const double nd = static_cast<double>(n);
    switch (family) {
        case RowFamily::NORMAL: return std::sqrt(nd) * std::normal_distribution<double>(0.0, 1.0)(rng);
        case RowFamily::CENTERED_GAMMA: return std::gamma_distribution<double>(nd, 1.0)(rng) - nd;
        case RowFamily::CENTERED_POISSON:
            return static_cast<double>(std::poisson_distribution<std::int64_t>(nd)(rng)) - nd;
        case RowFamily::SYMMETRIC_TWO_POINT:
            return 2.0 * static_cast<double>(std::binomial_distribution<std::int64_t>(static_cast<std::int64_t>(n), 0.5)(rng)) - nd;
    }
    return 0.0;
}

double RowDistribution::third_abs_moment() const {
    switch (family) {
        case RowFamily::NORMAL: return 2.0 * std::sqrt(2.0 / kPi);
        case RowFamily::CENTERED_GAMMA: return 12.0 / std::exp(1.0) - 2.0;
        case RowFamily::CENTERED_POISSON: return centered_poisson_third_abs();
        case RowFamily::SYMMETRIC_TWO_POINT: return 1.0;
    }
    return 0.0;
}

std::optional<LevyMeasure> RowDistribution::levy_measure() const {
    switch (family) {
        case RowFamily::NORMAL: return LevyMeasure();
        case RowFamily::CENTERED_GAMMA: return gamma_levy_measure();
        case RowFamily::CENTERED_POISSON: return LevyMeasure({{1.0, 1.0}});
        case RowFamily::SYMMETRIC_TWO_POINT: return std::nullopt;
    }
    return std::nullopt;
}

std::string RowDistribution::name() const {
    switch (family) {
        case RowFamily::NORMAL: return "normal";
        case RowFamily::CENTERED_GAMMA: return "gamma";
        case RowFamily::CENTERED_POISSON: return "poisson";
        case RowFamily::SYMMETRIC_TWO_POINT: return "twopoint";
    }
    return "?";
}

RowDistribution RowDistribution::parse(const std::string& name) {
    for (RowFamily f : {RowFamily::NORMAL, RowFamily::CENTERED_GAMMA, RowFamily::CENTERED_POISSON,
                        RowFamily::SYMMETRIC_TWO_POINT}) {
        RowDistribution r{f};
        if (r.name() == name) return r;
    }
    throw DomainError("unknown row family '" + name + "' (normal, gamma, poisson, twopoint)");
}

double harmonic(std::uint64_t N) {
    // Neumaier summation.
    double sum = 0.0;
    double c = 0.0;
    for (std::uint64_t n = 1; n <= N; ++n) {
        const double term = 1.0 / static_cast<double>(n);
        const double t = sum + term;
        if (std::abs(sum) >= std::abs(term)) {
            c += (sum - t) + term;
        } else {
            c += (term - t) + sum;
        }
        sum = t;
    }
    return sum + c;
}

Complex log_mean_cf_exact(const std::vector<RowDistribution>& rows, std::uint64_t N, double u) {
    if (N < 1) throw DomainError("log_mean_cf_exact: N must be >= 1");
    if (rows.size() < N) throw DomainError("log_mean_cf_exact: need a row law for every n <= N");
    if (u == 0.0) return 1.0;
    const std::size_t blocks = (N + kBlock - 1) / kBlock;
    std::vector<Complex> partial(blocks);
    parallel_for(blocks, [&](std::size_t b) {
        Complex s = 0.0;
        const std::uint64_t end = std::min<std::uint64_t>(N, (b + 1) * kBlock);
        for (std::uint64_t n = b * kBlock + 1; n <= end; ++n) s += row_log(rows[n - 1], n, u);
        partial[b] = s;
    });
    Complex total = 0.0;
    for (const Complex& s : partial) total += s;
    return std::exp(total);
}

Complex log_mean_cf_exact(const RowDistribution& row, std::uint64_t N, double u) {
    return log_mean_cf_exact(std::vector<RowDistribution>(N, row), N, u);
}

double sample_log_mean(const std::vector<RowDistribution>& rows, std::uint64_t N, Rng& rng) {
    if (rows.size() < N) throw DomainError("sample_log_mean: need a row law for every n <= N");
    double z = 0.0;
    for (std::uint64_t n = 1; n <= N; ++n) z += rows[n - 1].row_sum(n, rng) / static_cast<double>(n);
    return z;
}

double sample_log_mean(const RowDistribution& row, std::uint64_t N, Rng& rng) {
    double z = 0.0;
    for (std::uint64_t n = 1; n <= N; ++n) z += row.row_sum(n, rng) / static_cast<double>(n);
    return z;
}

Complex gamma_example_cf(std::uint64_t N, double u) {
    if (N < 1) throw DomainError("gamma_example_cf: N must be >= 1");
    if (u == 0.0) return 1.0;
    // Each factor contributes −iu − n·log(1 − iu/n) = n·Σ_{m≥2} z^m/m, z = iu/n.
    Complex total = 0.0;
    for (std::uint64_t n = 1; n <= N; ++n) {
        const double nd = static_cast<double>(n);
        const Complex z(0.0, u / nd);
        if (std::abs(z) < 0.5) {
            Complex power = z * z;
            Complex series = 0.0;
            for (int m = 2; m < 80; ++m) {
                const Complex term = power / static_cast<double>(m);
                series += term;
                if (std::abs(term) < 1e-17 * std::abs(series)) break;
                power *= z;
            }
            total += nd * series;
        } else {
            total += Complex(0.0, -u) - nd * std::log(1.0 - z);
        }
    }
    return std::exp(total);
}

LevyMeasure aggregate_levy_limit(const std::vector<LevyMeasure>& nus) {
    std::vector<LevyAtom> atoms;
    struct Part {
        double n;
        std::function<double(double)> rho;
        Interval domain;
    };
    std::vector<Part> parts;
    double lo = 0.0;
    double hi = 0.0;
    for (std::size_t i = 0; i < nus.size(); ++i) {
        const auto& nu = nus[i];
        if (!nu.integrates(Integrability::ABS_X3)) {
            throw IntegrabilityError("aggregate_levy_limit: each ν_n must integrate |x|³");
        }
        const double n = static_cast<double>(i + 1);
        for (const auto& a : nu.atoms()) atoms.push_back({a.x / n, a.w * n});
        if (const auto& d = nu.density()) {
            const Interval scaled{d->domain.lo / n, d->domain.hi / n};
            if (parts.empty()) {
                lo = scaled.lo;
                hi = scaled.hi;
            } else {
                lo = std::min(lo, scaled.lo);
                hi = std::max(hi, scaled.hi);
            }
            parts.push_back({n, d->rho, scaled});
        }
    }
    if (parts.empty()) return atoms.empty() ? LevyMeasure() : LevyMeasure(std::move(atoms));
    auto rho = [parts](double y) {
        double s = 0.0;
        for (const auto& p : parts) {
            if (y > p.domain.lo && y < p.domain.hi) s += p.n * p.n * p.rho(p.n * y);
        }
        return s;
    };
    return LevyMeasure(std::move(atoms), LevyDensity{rho, {lo, hi}, Integrability::ABS_X3});
}

double regular_sampler(const std::function<double(Rng&)>& base, double beta_N, double gamma_N, Rng& rng) {
    if (!(gamma_N >= 0.0)) throw DomainError("regular_sampler: gamma_N must be >= 0");
    const double x = base(rng);
    if (gamma_N == 0.0) return x + beta_N;
    return x + beta_N + std::sqrt(gamma_N) * std::normal_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace modphi
