#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "modphi/modconv.hpp"
#include "modphi/rng.hpp"
#include "modphi/special.hpp"

namespace modphi {

/// Largest sieve the library will allocate (one byte per integer).
inline constexpr std::uint64_t kMaxSieveLimit = 2000000000ULL;

/// ω(n), the number of distinct prime divisors, for 1 ≤ n ≤ limit.
class SieveTable {
public:
    SieveTable() = default;
    SieveTable(std::uint64_t limit, std::vector<std::uint8_t> omega);

    std::uint64_t limit() const { return limit_; }
    /// ω(n) for 1 ≤ n ≤ limit.
    std::uint8_t omega(std::uint64_t n) const { return omega_[n - 1]; }
    const std::vector<std::uint8_t>& data() const { return omega_; }

    /// counts[k] = #{1 ≤ n ≤ N : ω(n) = k}; N defaults to the limit.
    std::vector<std::uint64_t> histogram(std::uint64_t N = 0) const;

    /// Flat cache file: "MPHI", u32 version, u64 N, then ω(1..N) as N bytes
    /// (little endian).
    void save(const std::string& path) const;
    static SieveTable load(const std::string& path);

private:
    std::uint64_t limit_ = 0;
    std::vector<std::uint8_t> omega_;
};

/// Additive sieve over primes ≤ N. BudgetError above kMaxSieveLimit.
SieveTable omega_sieve(std::uint64_t N);

/// Loads `cache_path` if it holds a table of at least N entries, otherwise
/// sieves and (when cache_path is non-empty) writes it.
SieveTable omega_sieve_cached(std::uint64_t N, const std::string& cache_path);

/// (1/N)·Σ_{2≤n≤N} e^{iu(ω(n)−1)}, N ≤ table limit (0 = limit).
Complex omega_prime_cf(const SieveTable& table, double u, std::uint64_t N = 0);

/// (log N)^{1−e^{iu}}·omega_prime_cf. Requires N ≥ 100.
Complex omega_renormalized_cf(const SieveTable& table, double u, std::uint64_t N = 0);

/// Exact (deterministic) sequences read from one table, for ladders N ≤ limit:
/// omega_prime_sequence gives omega_prime_cf (pair with Poisson λ = loglog N),
/// omega_sequence gives (1/N)Σ_{n≤N} e^{iuω(n)} (pair with Gaussian
/// β = γ = loglog N for the Erdős–Kác rescaling).
CharFnSequence omega_prime_sequence(const SieveTable& table);
CharFnSequence omega_sequence(const SieveTable& table);

struct SatheSelbergRow {
    int k = 0;
    std::uint64_t count = 0;  // #{2 ≤ n ≤ N : ω(n) − 1 = k}
    double predicted = 0.0;   // N·(loglog N)^k / (k!·log N)
    double ratio = 0.0;       // count / predicted
};

struct SatheSelbergHistogram {
    std::uint64_t N = 0;
    double lambda = 0.0;  // loglog N
    std::vector<SatheSelbergRow> rows;
};

/// Rows k = 0..k_max, k_max ≤ 15.
SatheSelbergHistogram sathe_selberg_histogram(const SieveTable& table, int k_max, std::uint64_t N = 0);

/// Value of a probabilistic model at one u: the exact characteristic function,
/// its mod-Poisson parameter, and the renormalized value e^{λ(1−e^{iu})}·cf.
struct ModelValue {
    Complex cf;
    double lambda = 0.0;
    Complex renormalized;
};

/// λ_y = Σ_{p≤y} −log(1 − 1/p).
double prime_model_lambda(std::uint64_t y);

/// ∏_{p≤y}(1 − 1/p + e^{iu}/p), λ = λ_y.
ModelValue bernoulli_prime_model_cf(std::uint64_t y, double u);

/// ∏_{k≤N}(k + e^{iu})/(k + 1), λ = log(N + 1).
ModelValue permutation_cycle_model_cf(std::uint64_t N, double u);

/// Number of cycles of a uniform random permutation of {1..n}, minus one
/// (Fisher–Yates, then cycle count). Its law is the N = n − 1 model above.
double permutation_cycles_minus_one(std::uint64_t n, Rng& rng);

struct GenericBernoulliValue {
    Complex cf;           // ∏_{n≤N}(1 + x_n(e^{iu} − 1))
    double lambda = 0.0;  // Σ_{n≤N} x_n
    Complex renormalized; // e^{λ(1−e^{iu})}·cf
    Complex limit;        // ∏_{n≤limit_terms}(1 + x_n(e^{iu} − 1))e^{x_n(1−e^{iu})}
};

/// x(n) must lie in (0, 1] (x_n = 1 is a constant summand); the caller asserts
/// Σ x_n² < ∞. The limit product is truncated at max(N, limit_terms) factors.
GenericBernoulliValue generic_bernoulli_mod_poisson(const std::function<double(std::uint64_t)>& x, std::uint64_t N,
                                                    double u, std::uint64_t limit_terms = 1000000);

/// γ_N = 2(γ_E + loglog N).
double circle_model_gamma(std::uint64_t prime_cutoff);

/// cf of Σ_{p≤cutoff} log|1 − X_p/√p|^{−2} with X_p i.i.d. uniform on the
/// circle, ∏ ₂F₁(iu, iu; 1; 1/p), and its Gaussian renormalization e^{u²γ_N/2}·cf.
struct CircleModelValue {
    Complex cf;
    double gamma = 0.0;
    Complex renormalized;
};
CircleModelValue circle_model_cf(std::uint64_t prime_cutoff, double u);

/// One draw of Σ_{p≤cutoff} log|1 − e^{iΘ_p}/√p|^{−2}.
double circle_model_sample(std::uint64_t prime_cutoff, Rng& rng);

}  // namespace modphi
