#include <cmath>
#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "modphi/arith.hpp"
#include "modphi/error.hpp"
#include "modphi/limits.hpp"
#include "modphi/primes.hpp"

using namespace modphi;

namespace {

int trial_division_omega(std::uint64_t n) {
    int w = 0;
    for (std::uint64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            ++w;
            while (n % p == 0) n /= p;
        }
    }
    return w + (n > 1 ? 1 : 0);
}

const SieveTable& table_1e6() {
    static const SieveTable t = omega_sieve(1000000);
    return t;
}

}  // namespace

TEST_CASE("omega_sieve matches trial division") {
    const auto t = omega_sieve(100000);
    CHECK(t.omega(1) == 0);
    CHECK(t.omega(12) == 2);
    CHECK(t.omega(30) == 3);
    CHECK(t.omega(97) == 1);
    int mismatches = 0;
    for (std::uint64_t n = 1; n <= 100000; ++n) mismatches += t.omega(n) != trial_division_omega(n);
    CHECK(mismatches == 0);
    CHECK_THROWS_AS(omega_sieve(1), DomainError);
    CHECK_THROWS_AS(omega_sieve(kMaxSieveLimit + 1), BudgetError);
}

TEST_CASE("sieve cache roundtrip") {
    const auto path = (std::filesystem::temp_directory_path() / "modphi_test_sieve.bin").string();
    std::filesystem::remove(path);
    const auto a = omega_sieve_cached(5000, path);
    REQUIRE(std::filesystem::exists(path));
    CHECK(std::filesystem::file_size(path) == 4 + 4 + 8 + 5000);
    const auto b = SieveTable::load(path);
    CHECK(b.limit() == 5000);
    CHECK(b.data() == a.data());
    const auto c = omega_sieve_cached(1000, path);
    CHECK(c.limit() == 1000);
    CHECK(c.omega(210) == 4);
    std::filesystem::remove(path);

    const auto bad = (std::filesystem::temp_directory_path() / "modphi_test_bad.bin").string();
    if (FILE* f = std::fopen(bad.c_str(), "wb")) {
        std::fputs("NOPEJUNKJUNKJUNK", f);
        std::fclose(f);
    }
    CHECK_THROWS_AS(SieveTable::load(bad), DomainError);
    std::filesystem::remove(bad);
}

TEST_CASE("Sathe-Selberg histogram") {
    const auto& t = table_1e6();
    const auto h = sathe_selberg_histogram(t, 15);
    std::uint64_t total = 0;
    for (const auto& r : h.rows) total += r.count;
    CHECK(total == t.limit() - 1);

    std::uint64_t prime_powers = 0;
    for (std::uint32_t p : primes_up_to(t.limit()))
        for (std::uint64_t q = p; q <= t.limit(); q *= p) ++prime_powers;
    CHECK(h.rows[0].count == prime_powers);
    CHECK_THROWS_AS(sathe_selberg_histogram(t, 16), DomainError);

    // The fixed-k ratio approaches 1 only at the O(1/log N) rate.
    double previous = 1e9;
    for (std::uint64_t N : {10000u, 100000u, 1000000u}) {
        const double r = sathe_selberg_histogram(t, 1, N).rows[1].ratio;
        CHECK(std::abs(r - 1.0) < previous);
        previous = std::abs(r - 1.0);
    }
}

TEST_CASE("omega renormalized characteristic function") {
    const auto& t = table_1e6();
    CHECK(omega_renormalized_cf(t, 0.0) == Complex(1.0));
    CHECK(std::abs(omega_renormalized_cf(t, -1.3) - std::conj(omega_renormalized_cf(t, 1.3))) < 1e-14);
    CHECK_THROWS_AS(omega_renormalized_cf(t, 1.0, 50), DomainError);
    CHECK_THROWS_AS(omega_renormalized_cf(t, 1.0, 2000000), DomainError);

    // Direct sum over n.
    Complex s(0.0);
    for (std::uint64_t n = 2; n <= 10000; ++n) s += std::polar(1.0, 0.7 * (t.omega(n) - 1.0));
    CHECK(std::abs(omega_prime_cf(t, 0.7, 10000) - s / 10000.0) < 1e-13);

    // Error to Φ decreases along the ladder (slowly).
    double previous = 1e9;
    for (std::uint64_t N : {10000u, 100000u, 1000000u}) {
        const double e = std::abs(omega_renormalized_cf(t, 1.0, N) - phi_omega(1.0));
        CHECK(e < previous);
        previous = e;
    }
}

TEST_CASE("Erdos-Kac rescaling improves along the ladder") {
    const auto& t = table_1e6();
    const auto r = clt_rescale_check(omega_sequence(t), [](std::uint64_t N) {
        const double l = std::log(std::log(double(N)));
        return ModParameters::gaussian(l, l);
    }, EvaluationGrid::parse("-2:2:41"), {10000, 100000, 1000000}, 0.1);
    REQUIRE(r.per_N.size() == 3);
    CHECK(*r.per_N[2].sup_err < *r.per_N[1].sup_err);
    CHECK(*r.per_N[1].sup_err < *r.per_N[0].sup_err);
}

TEST_CASE("prime Bernoulli model") {
    CHECK(bernoulli_prime_model_cf(1000, 0.0).cf == Complex(1.0));
    const double u = 0.9;
    const Complex e = std::polar(1.0, u);
    CHECK(std::abs(bernoulli_prime_model_cf(3, u).cf - (0.5 + e / 2.0) * (2.0 / 3.0 + e / 3.0)) < 1e-15);
    CHECK(prime_model_lambda(3) == doctest::Approx(std::log(2.0) + std::log(1.5)).epsilon(1e-15));
    CHECK(std::abs(bernoulli_prime_model_cf(1000000, 1.0).renormalized - phi2(1.0, 1000000)) < 1e-3);
    CHECK(std::abs(bernoulli_prime_model_cf(100, kPi).cf) < 1e-15);
    const auto a = bernoulli_prime_model_cf(5000, 1.7), b = bernoulli_prime_model_cf(5000, -1.7);
    CHECK(std::abs(a.cf - std::conj(b.cf)) < 1e-14);
}

TEST_CASE("permutation cycle model") {
    CHECK(permutation_cycle_model_cf(50, 0.0).renormalized == Complex(1.0));
    const auto v = permutation_cycle_model_cf(100000, 1.0);
    CHECK(v.lambda == doctest::Approx(std::log(100001.0)).epsilon(1e-15));
    CHECK(std::abs(v.renormalized - phi1(1.0)) < 1e-3);

    // Uniform permutations of size 100 against the product with N = 99.
    auto seq = empirical_sequence([](std::uint64_t n, Rng& rng) { return permutation_cycles_minus_one(n, rng); }, 10000,
                                  kDefaultSeed);
    const auto mc = seq.evaluate(100, {1.0}).front();
    CHECK(std::abs(mc.value - permutation_cycle_model_cf(99, 1.0).cf) <= 3.0 * mc.se_abs());

    Rng rng(1);
    CHECK(permutation_cycles_minus_one(1, rng) == 0.0);
}

TEST_CASE("generic Bernoulli mod-Poisson") {
    auto x = [](std::uint64_t n) { return 1.0 / double(n + 1); };
    const auto z = generic_bernoulli_mod_poisson(x, 100, 0.0, 1000);
    CHECK(z.cf == Complex(1.0));
    CHECK(z.limit == Complex(1.0));
    double h = 0.0;
    for (int n = 2; n <= 101; ++n) h += 1.0 / n;
    CHECK(z.lambda == doctest::Approx(h).epsilon(1e-14));

    const auto g = generic_bernoulli_mod_poisson(x, 1000, 1.2, 1000);
    const auto p = permutation_cycle_model_cf(1000, 1.2);
    CHECK(std::abs(g.cf - p.cf) < 1e-13);

    // Summable x_n: λ stays bounded and the renormalized value is already close to the limit.
    auto sq = [](std::uint64_t n) { return 1.0 / double(n * n); };
    const auto s = generic_bernoulli_mod_poisson(sq, 1000, 1.0, 100000);
    CHECK(s.lambda < kPi * kPi / 6.0);
    CHECK(std::abs(s.renormalized - s.limit) < 1e-2);
    CHECK_THROWS_AS(generic_bernoulli_mod_poisson([](std::uint64_t) { return 1.5; }, 10, 1.0, 10), DomainError);
}

TEST_CASE("circle model") {
    CHECK(circle_model_cf(100, 0.0).cf == Complex(1.0));
    CHECK_THROWS_AS(circle_model_cf(2, 1.0), DomainError);
    const auto v = circle_model_cf(1000000, 1.0);
    CHECK(std::abs(v.renormalized - arithmetic_factor_A(Complex(0.0, 1.0), 1000000)) < 1e-2);
    CHECK(std::abs(circle_model_cf(1000, -0.8).cf - std::conj(circle_model_cf(1000, 0.8).cf)) < 1e-14);

    auto seq = empirical_sequence([](std::uint64_t N, Rng& rng) { return circle_model_sample(N, rng); }, 100000,
                                  kDefaultSeed);
    const auto mc = seq.evaluate(100, {1.0}).front();
    CHECK(std::abs(mc.value - circle_model_cf(100, 1.0).cf) <= 3.0 * mc.se_abs());
}

TEST_CASE("omega limit factorises into the two models") {
    for (double u : {0.5, 1.0, 2.0}) {
        const Complex prod = permutation_cycle_model_cf(1000000, u).renormalized *
                             bernoulli_prime_model_cf(1000000, u).renormalized;
        CHECK(std::abs(prod - phi_omega(u, 1000000)) < 2e-3);
    }
}
