#include "modphi/arith.hpp"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <numeric>

#include "modphi/error.hpp"
#include "modphi/primes.hpp"

namespace modphi {

namespace {

constexpr char kMagic[4] = {'M', 'P', 'H', 'I'};
constexpr std::uint32_t kCacheVersion = 1;

std::uint64_t resolve_N(const SieveTable& table, std::uint64_t N) {
    if (N == 0) N = table.limit();
    if (N > table.limit()) throw DomainError("requested N exceeds the sieve table limit");
    return N;
}

Complex exp_or_zero(Complex z) {
    if (std::isinf(z.real()) && z.real() < 0.0) return 0.0;
    return std::exp(z);
}

// Σ_k counts[k]·e^{iu(k − offset)} / N.
Complex histogram_cf(const std::vector<std::uint64_t>& counts, int first_k, int offset, double u, double N) {
    Complex s(0.0);
    for (std::size_t k = first_k; k < counts.size(); ++k)
        s += static_cast<double>(counts[k]) * std::polar(1.0, u * (static_cast<double>(k) - offset));
    return s / N;
}

}  // namespace

SieveTable::SieveTable(std::uint64_t limit, std::vector<std::uint8_t> omega) : limit_(limit), omega_(std::move(omega)) {
    if (omega_.size() != limit_) throw DomainError("SieveTable: size does not match limit");
}

std::vector<std::uint64_t> SieveTable::histogram(std::uint64_t N) const {
    N = resolve_N(*this, N);
    std::vector<std::uint64_t> counts(16, 0);
    for (std::uint64_t i = 0; i < N; ++i) ++counts[omega_[i]];
    while (counts.size() > 1 && counts.back() == 0) counts.pop_back();
    return counts;
}

void SieveTable::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write sieve cache " + path);
    out.write(kMagic, 4);
    out.write(reinterpret_cast<const char*>(&kCacheVersion), sizeof kCacheVersion);
    out.write(reinterpret_cast<const char*>(&limit_), sizeof limit_);
    out.write(reinterpret_cast<const char*>(omega_.data()), static_cast<std::streamsize>(omega_.size()));
    if (!out) throw Error("failed writing sieve cache " + path);
}

SieveTable SieveTable::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open sieve cache " + path);
    char magic[4];
    std::uint32_t version = 0;
    std::uint64_t limit = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), sizeof version);
    in.read(reinterpret_cast<char*>(&limit), sizeof limit);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) throw DomainError("not a sieve cache: " + path);
    if (version != kCacheVersion) throw DomainError("unsupported sieve cache version in " + path);
    if (limit > kMaxSieveLimit) throw DomainError("sieve cache limit too large in " + path);
    std::vector<std::uint8_t> omega(limit);
    in.read(reinterpret_cast<char*>(omega.data()), static_cast<std::streamsize>(limit));
    if (!in) throw DomainError("truncated sieve cache " + path);
    return SieveTable(limit, std::move(omega));
}

SieveTable omega_sieve(std::uint64_t N) {
    if (N < 2) throw DomainError("omega_sieve: N must be >= 2");
    if (N > kMaxSieveLimit) throw BudgetError("omega_sieve: N exceeds the one-byte-per-integer memory budget");
    std::vector<std::uint8_t> omega(N, 0);
    for (std::uint32_t p : primes_up_to(N)) {
        for (std::uint64_t m = p; m <= N; m += p) ++omega[m - 1];
    }
    return SieveTable(N, std::move(omega));
}

SieveTable omega_sieve_cached(std::uint64_t N, const std::string& cache_path) {
    if (!cache_path.empty() && std::filesystem::exists(cache_path)) {
        SieveTable cached = SieveTable::load(cache_path);
        if (cached.limit() == N) return cached;
        if (cached.limit() > N) {
            std::vector<std::uint8_t> head(cached.data().begin(), cached.data().begin() + static_cast<std::ptrdiff_t>(N));
            return SieveTable(N, std::move(head));
        }
    }
    SieveTable table = omega_sieve(N);
    if (!cache_path.empty()) table.save(cache_path);
    return table;
}

Complex omega_prime_cf(const SieveTable& table, double u, std::uint64_t N) {
    N = resolve_N(table, N);
    if (u == 0.0) return static_cast<double>(N - 1) / static_cast<double>(N);
    return histogram_cf(table.histogram(N), 1, 1, u, static_cast<double>(N));
}

Complex omega_renormalized_cf(const SieveTable& table, double u, std::uint64_t N) {
    N = resolve_N(table, N);
    if (N < 100) throw DomainError("omega_renormalized_cf: N must be >= 100");
    if (u == 0.0) return 1.0;
    const Complex cf = omega_prime_cf(table, u, N);
    return renormalize(cf, ModParameters::poisson(std::log(std::log(static_cast<double>(N)))), u);
}

CharFnSequence omega_prime_sequence(const SieveTable& table) {
    CharFnSequence seq;
    seq.kind = CharFnSequence::Kind::EXACT;
    seq.evaluate = [&table](std::uint64_t N, const std::vector<double>& us) {
        N = resolve_N(table, N);
        const auto counts = table.histogram(N);
        std::vector<CfValue> out;
        for (double u : us) out.push_back({histogram_cf(counts, 1, 1, u, static_cast<double>(N))});
        return out;
    };
    return seq;
}

CharFnSequence omega_sequence(const SieveTable& table) {
    CharFnSequence seq;
    seq.kind = CharFnSequence::Kind::EXACT;
    seq.evaluate = [&table](std::uint64_t N, const std::vector<double>& us) {
        N = resolve_N(table, N);
        const auto counts = table.histogram(N);
        std::vector<CfValue> out;
        for (double u : us) out.push_back({histogram_cf(counts, 0, 0, u, static_cast<double>(N))});
        return out;
    };
    return seq;
}

SatheSelbergHistogram sathe_selberg_histogram(const SieveTable& table, int k_max, std::uint64_t N) {
    if (k_max < 0 || k_max > 15) throw DomainError("sathe_selberg_histogram: k_max must be in [0, 15]");
    N = resolve_N(table, N);
    const auto counts = table.histogram(N);
    SatheSelbergHistogram h;
    h.N = N;
    const double logN = std::log(static_cast<double>(N));
    h.lambda = std::log(logN);
    for (int k = 0; k <= k_max; ++k) {
        SatheSelbergRow row;
        row.k = k;
        row.count = static_cast<std::size_t>(k + 1) < counts.size() ? counts[k + 1] : 0;
        row.predicted = static_cast<double>(N) * std::exp(k * std::log(h.lambda) - std::lgamma(k + 1.0)) / logN;
        row.ratio = static_cast<double>(row.count) / row.predicted;
        h.rows.push_back(row);
    }
    return h;
}

double prime_model_lambda(std::uint64_t y) {
    if (y < 2) throw DomainError("prime model: y must be >= 2");
    return euler_log_sum(y, [](std::uint32_t p) { return Complex(-std::log1p(-1.0 / p)); }).real();
}

ModelValue bernoulli_prime_model_cf(std::uint64_t y, double u) {
    if (y < 2) throw DomainError("bernoulli_prime_model_cf: y must be >= 2");
    ModelValue v;
    v.lambda = prime_model_lambda(y);
    if (u == 0.0) {
        v.cf = v.renormalized = 1.0;
        return v;
    }
    const Complex e = std::polar(1.0, u);
    const Complex log_cf = euler_log_sum(y, [e](std::uint32_t p) { return std::log(1.0 + (e - 1.0) / double(p)); });
    v.cf = exp_or_zero(log_cf);
    v.renormalized = exp_or_zero(log_cf + v.lambda * (1.0 - e));
    return v;
}

ModelValue permutation_cycle_model_cf(std::uint64_t N, double u) {
    if (N < 1) throw DomainError("permutation_cycle_model_cf: N must be >= 1");
    ModelValue v;
    v.lambda = std::log1p(static_cast<double>(N));
    if (u == 0.0) {
        v.cf = v.renormalized = 1.0;
        return v;
    }
    const Complex e = std::polar(1.0, u);
    Complex s(0.0);
    for (std::uint64_t k = 1; k <= N; ++k) s += std::log((static_cast<double>(k) + e) / (static_cast<double>(k) + 1.0));
    v.cf = exp_or_zero(s);
    v.renormalized = exp_or_zero(s + v.lambda * (1.0 - e));
    return v;
}

double permutation_cycles_minus_one(std::uint64_t n, Rng& rng) {
    if (n < 1) throw DomainError("permutation size must be >= 1");
    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    for (std::uint64_t i = n - 1; i > 0; --i) {
        std::uniform_int_distribution<std::uint64_t> pick(0, i);
        std::swap(perm[i], perm[pick(rng)]);
    }
    std::vector<bool> seen(n, false);
    int cycles = 0;
    for (std::uint64_t i = 0; i < n; ++i) {
        if (seen[i]) continue;
        ++cycles;
        for (std::uint64_t j = i; !seen[j]; j = perm[j]) seen[j] = true;
    }
    return cycles - 1.0;
}

GenericBernoulliValue generic_bernoulli_mod_poisson(const std::function<double(std::uint64_t)>& x, std::uint64_t N,
                                                    double u, std::uint64_t limit_terms) {
    if (N < 1) throw DomainError("generic_bernoulli_mod_poisson: N must be >= 1");
    const Complex e = std::polar(1.0, u);
    const std::uint64_t M = std::max(N, limit_terms);
    GenericBernoulliValue v;
    Complex log_cf(0.0), log_limit(0.0);
    for (std::uint64_t n = 1; n <= M; ++n) {
        const double xn = x(n);
        if (!(xn > 0.0 && xn <= 1.0)) throw DomainError("generic_bernoulli_mod_poisson: x_n must lie in (0, 1]");
        const Complex lf = std::log(1.0 + xn * (e - 1.0));
        if (n <= N) {
            log_cf += lf;
            v.lambda += xn;
        }
        log_limit += lf + xn * (1.0 - e);
    }
    if (u == 0.0) {
        v.cf = v.renormalized = v.limit = 1.0;
        return v;
    }
    v.cf = std::exp(log_cf);
    v.renormalized = std::exp(log_cf + v.lambda * (1.0 - e));
    v.limit = std::exp(log_limit);
    return v;
}

double circle_model_gamma(std::uint64_t prime_cutoff) {
    if (prime_cutoff < 3) throw DomainError("circle model: cutoff must be >= 3");
    return 2.0 * (kEulerGamma + std::log(std::log(static_cast<double>(prime_cutoff))));
}

CircleModelValue circle_model_cf(std::uint64_t prime_cutoff, double u) {
    CircleModelValue v;
    v.gamma = circle_model_gamma(prime_cutoff);
    if (u == 0.0) {
        v.cf = v.renormalized = 1.0;
        return v;
    }
    const Complex a(0.0, u);
    const Complex log_cf = euler_log_sum(prime_cutoff, [a](std::uint32_t p) {
        return std::log(special::hyp2f1_diag(a, 1.0 / p));
    });
    v.cf = exp_or_zero(log_cf);
    v.renormalized = exp_or_zero(log_cf + 0.5 * u * u * v.gamma);
    return v;
}

double circle_model_sample(std::uint64_t prime_cutoff, Rng& rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
    double s = 0.0;
    for (std::uint32_t p : primes_up_to(prime_cutoff)) {
        const double r = 1.0 / std::sqrt(static_cast<double>(p));
        const double t = angle(rng);
        s -= std::log(1.0 - 2.0 * r * std::cos(t) + r * r);
    }
    return s;
}

}  // namespace modphi
