#include <cmath>

#include "doctest.h"
#include "modphi/error.hpp"
#include "modphi/grid.hpp"
#include "modphi/limits.hpp"
#include "modphi/primes.hpp"

using namespace modphi;

TEST_CASE("evaluation grid") {
    auto g = EvaluationGrid::parse("-3:3:61");
    REQUIRE(g.size() == 61);
    CHECK(g.u.front() == -3.0);
    CHECK(g.u.back() == 3.0);
    CHECK(g.u[30] == 0.0);
    CHECK(EvaluationGrid::parse("1.5:7:1").u == std::vector<double>{1.5});
    CHECK_THROWS_AS(EvaluationGrid::parse("0:1:0"), DomainError);
    CHECK_THROWS_AS(EvaluationGrid::parse("0:1"), DomainError);
    CHECK_THROWS_AS(EvaluationGrid::parse("0:x:3"), DomainError);
}

TEST_CASE("prime table") {
    const auto& p = primes_up_to(100);
    CHECK(p.size() == 25);
    CHECK(p.back() == 97);
    CHECK(primes_up_to(1000000).size() == 78498);
}

TEST_CASE("rmt_factor_M examples") {
    CHECK(std::abs(rmt_factor_M(0.0) - 1.0) < 1e-14);
    CHECK(std::abs(rmt_factor_M(1.0) - 1.0) < 1e-13);
    CHECK(std::abs(rmt_factor_M(2.0) - 1.0 / 12.0) < 1e-13);
    CHECK(std::abs(rmt_factor_M(3.0) - 1.0 / 8640.0) < 1e-15);
}

TEST_CASE("arithmetic_factor_A examples") {
    CHECK(arithmetic_factor_A(0.0, 1000) == Complex(1.0));
    CHECK(std::abs(arithmetic_factor_A(1.0, 100000) - 1.0) < 1e-10);
    CHECK(std::abs(arithmetic_factor_A(2.0, 1000000) - 6.0 / (kPi * kPi)) < 1e-4);
    CHECK_THROWS_AS(arithmetic_factor_A(1.0, 1), DomainError);
}

TEST_CASE("arithmetic_factor_A partial products are Cauchy") {
    const Complex lambda(0.0, 1.0);
    double previous = 1e300;
    for (std::uint64_t p : {1000u, 10000u, 100000u}) {
        const double step = std::abs(arithmetic_factor_A(lambda, 2 * p) - arithmetic_factor_A(lambda, p));
        CHECK(step < previous);
        previous = step;
    }
}

TEST_CASE("sp_factor_MSp examples") {
    CHECK(std::abs(sp_factor_MSp(0.0) - 1.0) < 1e-14);
    double expected = 1.0;
    for (int k = 1; k <= 4; ++k) {
        // ∏_{j≤k} 1/(2j−1)!!
        double dj = 1.0;
        for (int m = 2 * k - 1; m > 1; m -= 2) dj *= m;
        expected /= dj;
        CHECK(std::abs(sp_factor_MSp(static_cast<double>(k)) - expected) < 1e-9);
    }
    CHECK(std::abs(sp_factor_MSp(2.0) - 1.0 / 3.0) < 1e-9);
    CHECK(std::abs(sp_factor_MSp(3.0) - 1.0 / 45.0) < 1e-9);
    CHECK(std::abs(sp_factor_MSp(1.5) - sp_factor_keating_snaith(1.5)) < 1e-8);
    for (Complex l : {Complex(0.7, 0.0), Complex(0.2, 1.1), Complex(0.0, -2.0)}) {
        CHECK(std::abs(sp_factor_MSp(l) - sp_factor_keating_snaith(l)) < 1e-8 * std::abs(sp_factor_MSp(l)));
    }
}

TEST_CASE("gamma example: two evaluation paths") {
    CHECK(phi_gamma_example(0.0, GammaMethod::LK_INTEGRAL) == Complex(1.0));
    CHECK(phi_gamma_example(0.0, GammaMethod::BARNES_CLOSED_FORM) == Complex(1.0));
    // Frozen from an independent high-precision evaluation.
    const Complex phi1_ref(1.116126428438, -0.492038743118);
    CHECK(std::abs(phi_gamma_example(1.0, GammaMethod::BARNES_CLOSED_FORM) - phi1_ref) < 1e-11);
    for (double u = -3.0; u <= 3.0; u += 0.25) {
        const Complex lk = phi_gamma_example(u, GammaMethod::LK_INTEGRAL);
        const Complex bc = phi_gamma_example(u, GammaMethod::BARNES_CLOSED_FORM);
        CHECK(std::abs(lk - bc) < 1e-8 * std::max(1.0, std::abs(bc)));
    }
    CHECK(std::abs(phi_gamma_example(-1.3) - std::conj(phi_gamma_example(1.3))) < 1e-12);
}

TEST_CASE("omega limiting function") {
    CHECK(std::abs(phi_omega(0.0, 1000) - 1.0) < 1e-12);
    CHECK(std::abs(phi1(0.0) - 1.0) < 1e-14);
    CHECK(std::abs(phi2(0.0, 1000) - 1.0) < 1e-14);
    CHECK(std::abs(phi1(kPi)) < 1e-12);
    CHECK(std::abs(phi_omega(kPi)) < 1e-12);
    CHECK(std::abs(phi1(1.0) * phi2(1.0) - phi_omega(1.0)) < 1e-8);
}

TEST_CASE("limiting functions: normalisation and Hermitian symmetry") {
    for (LimitingId id : {LimitingId::RMT_M, LimitingId::ARITH_A, LimitingId::SP_MSP, LimitingId::GAMMA_EXAMPLE,
                          LimitingId::OMEGA_PHI, LimitingId::OMEGA_PHI1, LimitingId::OMEGA_PHI2}) {
        LimitingFunction f{id, {{"cutoff", 10000.0}}};
        CAPTURE(to_string(id));
        CHECK(std::abs(f(0.0) - 1.0) < 1e-12);
        for (double u = 0.1; u <= 3.0001; u += 0.1) {
            CHECK(std::abs(f(-u) - std::conj(f(u))) < 1e-10);
        }
        CHECK(parse_limiting_id(to_string(id)) == id);
    }
    CHECK_THROWS_AS(parse_limiting_id("nope"), DomainError);
}
