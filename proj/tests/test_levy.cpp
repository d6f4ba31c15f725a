#include <cmath>

#include "doctest.h"
#include "modphi/error.hpp"
#include "modphi/levy.hpp"
#include "modphi/limits.hpp"

using namespace modphi;

namespace {

const Complex I(0.0, 1.0);

// Gamma(1) law as a triplet: drift chosen so that the exponent is −log(1 − iu).
GeneratingTriplet gamma_triplet(TruncationId h = TruncationId::CANONICAL_TRAPEZOID) {
    GeneratingTriplet t;
    t.nu = gamma_levy_measure();
    t.truncation = h;
    t.beta = t.nu.integrate_real([h](double x) { return truncation(h, x); });
    return t;
}

GeneratingTriplet atom_triplet(double x, double w, TruncationId h = TruncationId::CANONICAL_TRAPEZOID) {
    GeneratingTriplet t;
    t.nu = LevyMeasure({{x, w}});
    t.truncation = h;
    return t;
}

// k-th derivative of the exponent at 0 by central differences, divided by i^k.
double fd_cumulant(const GeneratingTriplet& t, int k, double h = 1e-3) {
    auto psi = [&](double u) { return levy_exponent(t, u); };
    Complex d;
    switch (k) {
        case 1: d = (psi(h) - psi(-h)) / (2 * h); break;
        case 2: d = (psi(h) - 2.0 * psi(0) + psi(-h)) / (h * h); break;
        case 3: d = (psi(2 * h) - 2.0 * psi(h) + 2.0 * psi(-h) - psi(-2 * h)) / (2 * h * h * h); break;
        default: d = (psi(2 * h) - 4.0 * psi(h) + 6.0 * psi(0) - 4.0 * psi(-h) + psi(-2 * h)) / (h * h * h * h);
    }
    return (d / std::pow(I, k)).real();
}

}  // namespace

TEST_CASE("truncation functions") {
    CHECK(truncation(TruncationId::CANONICAL_TRAPEZOID, 0.3) == 0.3);
    CHECK(truncation(TruncationId::CANONICAL_TRAPEZOID, 1.5) == 0.5);
    CHECK(truncation(TruncationId::CANONICAL_TRAPEZOID, -1.5) == -0.5);
    CHECK(truncation(TruncationId::CANONICAL_TRAPEZOID, 2.5) == 0.0);
    CHECK(truncation(TruncationId::INDICATOR, 1.5) == 0.0);
    CHECK(truncation(TruncationId::INDICATOR, -0.7) == -0.7);
    // Continuity of the trapezoid at the corners.
    CHECK(std::abs(truncation(TruncationId::CANONICAL_TRAPEZOID, 1.0 + 1e-12) - 1.0) < 1e-11);
    CHECK(std::abs(truncation(TruncationId::CANONICAL_TRAPEZOID, 2.0 - 1e-12)) < 1e-11);
}

TEST_CASE("levy_exponent closed forms") {
    GeneratingTriplet gauss;
    gauss.sigma = 1.0;
    CHECK(std::abs(levy_exponent(gauss, 2.0) + 2.0) < 1e-15);

    const double lambda = 0.7;
    for (TruncationId h : {TruncationId::CANONICAL_TRAPEZOID, TruncationId::INDICATOR}) {
        const auto atom = atom_triplet(2.0, lambda, h);  // h(2) = 0 for both truncations
        for (double u : {0.5, 1.0, 3.0}) {
            CHECK(std::abs(levy_exponent(atom, u) - lambda * (std::exp(2.0 * I * u) - 1.0)) < 1e-14);
        }
    }

    for (TruncationId h : {TruncationId::CANONICAL_TRAPEZOID, TruncationId::INDICATOR}) {
        const auto g = gamma_triplet(h);
        for (double u : {0.3, 1.0, 2.0, 5.0}) {
            CHECK(std::abs(levy_exponent(g, u) + std::log(1.0 - I * u)) < 1e-10);
        }
    }
}

TEST_CASE("levy_exponent basic properties") {
    const auto g = gamma_triplet();
    CHECK(levy_exponent(g, 0.0) == Complex(0.0));
    for (double u : {0.1, 1.7, 4.0}) {
        CHECK(std::abs(levy_exponent(g, -u) - std::conj(levy_exponent(g, u))) < 1e-12);
    }
    GeneratingTriplet bad;
    bad.sigma = -1.0;
    CHECK_THROWS_AS(levy_exponent(bad, 1.0), DomainError);
}

TEST_CASE("measure construction checks") {
    CHECK_THROWS_AS(LevyMeasure({{0.0, 1.0}}), DomainError);
    CHECK_THROWS_AS(LevyMeasure({{1.0, -1.0}}), DomainError);
    LevyDensity cubic{[](double x) { return 1.0 / (x * x * x); }, {0.0, 1.0}, Integrability::X2_MIN_1};
    CHECK_THROWS_AS(LevyMeasure({}, cubic), IntegrabilityError);
    cubic.tag = Integrability::X4_MIN_1;
    const LevyMeasure ok({}, cubic);
    CHECK(ok.integrates(Integrability::X4_MIN_1));
    CHECK_FALSE(ok.integrates(Integrability::X2_MIN_1));
    GeneratingTriplet t;
    t.nu = ok;
    CHECK_THROWS_AS(levy_exponent(t, 1.0), IntegrabilityError);
    const auto limit = gamma_example_limit_measure();
    CHECK_FALSE(limit.integrates(Integrability::X2_MIN_1));
    CHECK(limit.integrates(Integrability::X4_MIN_1));
}

TEST_CASE("convert_truncation") {
    const auto atom = atom_triplet(1.5, 1.0, TruncationId::INDICATOR);
    const auto converted = convert_truncation(atom, TruncationId::CANONICAL_TRAPEZOID);
    CHECK(converted.beta == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(convert_truncation(atom, TruncationId::INDICATOR).beta == atom.beta);

    const auto g = gamma_triplet(TruncationId::INDICATOR);
    const auto g2 = convert_truncation(g, TruncationId::CANONICAL_TRAPEZOID);
    for (const auto* t : {&atom, &g}) {
        const auto other = convert_truncation(*t, TruncationId::CANONICAL_TRAPEZOID);
        for (int i = 0; i <= 20; ++i) {
            const double u = -5.0 + 0.5 * i;
            CHECK(std::abs(levy_exponent(*t, u) - levy_exponent(other, u)) < 1e-12);
        }
    }
    CHECK(std::abs(g2.beta - gamma_triplet().beta) < 1e-12);
}

TEST_CASE("cumulants") {
    GeneratingTriplet gauss;
    gauss.sigma = 2.5;
    gauss.beta = -0.4;
    auto c = cumulants_from_triplet(gauss, 3);
    CHECK(c[0] == -0.4);
    CHECK(c[1] == 2.5);
    CHECK(c[2] == 0.0);

    const double lambda = 0.3;
    c = cumulants_from_triplet(atom_triplet(2.0, lambda), 4);
    CHECK(std::abs(c[2] - 8 * lambda) < 1e-14);
    CHECK(std::abs(c[3] - 16 * lambda) < 1e-14);

    c = cumulants_from_triplet(gamma_triplet(), 6);
    CHECK(std::abs(c[0] - 1.0) < 1e-10);
    CHECK(std::abs(c[1] - 1.0) < 1e-10);
    double factorial = 1.0;
    for (int k = 3; k <= 6; ++k) {
        factorial *= k - 1;
        CHECK(std::abs(c[k - 1] - factorial) < 1e-9 * factorial);
    }

    GeneratingTriplet heavy;
    heavy.nu = LevyMeasure({}, LevyDensity{[](double x) { return 1.0 / (x * x * x); }, {1.0, kInf}, Integrability::X2_MIN_1});
    CHECK_NOTHROW(cumulants_from_triplet(heavy, 1));
    CHECK_THROWS_AS(cumulants_from_triplet(heavy, 3), MomentDivergenceError);
}

TEST_CASE("cumulants match finite differences of the exponent") {
    const auto atom = atom_triplet(2.0, 0.3);
    const auto ca = cumulants_from_triplet(atom, 4);
    for (int k = 1; k <= 4; ++k) CHECK(std::abs(fd_cumulant(atom, k) - ca[k - 1]) < 1e-4 * std::abs(ca[k - 1]));
    // Quadrature noise (~1e−14) divided by h⁴ = 1e−12 swamps the fourth
    // difference, so the gamma measure is checked up to k = 3.
    const auto g = gamma_triplet();
    const auto cg = cumulants_from_triplet(g, 3);
    for (int k = 1; k <= 3; ++k) CHECK(std::abs(fd_cumulant(g, k) - cg[k - 1]) < 1e-4 * std::abs(cg[k - 1]));
}

TEST_CASE("kappa") {
    CHECK(std::abs(kappa(LevyMeasure({{0.5, 4.0}}), TruncationId::CANONICAL_TRAPEZOID) - 0.5) < 1e-15);
    const LevyMeasure inside({{-0.25, 2.0}}, LevyDensity{[](double x) { return 1.0 / (x * x); }, {0.0, 1.0}, Integrability::X2_MIN_1});
    const double x3 = inside.integrate_real([](double x) { return x * x * x; });
    CHECK(std::abs(x3 - (0.5 - 2.0 / 64.0)) < 1e-12);
    CHECK(std::abs(kappa(inside, TruncationId::CANONICAL_TRAPEZOID) - x3) < 1e-14);
}

TEST_CASE("renormalized exponent: two forms") {
    GeneratingTriplet gauss;
    gauss.sigma = 3.0;
    gauss.beta = 1.25;
    for (double u : {0.5, 2.0}) {
        CHECK(std::abs(renormalized_exponent(gauss, 1.25, 3.0, u)) < 1e-15);
        CHECK(std::abs(renormalized_exponent_direct(gauss, 1.25, 3.0, u)) < 1e-15);
    }
    const auto g = gamma_triplet();
    for (double u : {1.0, 2.0}) {
        const Complex a = renormalized_exponent_direct(g, 0.3, 1.7, u);
        const Complex b = renormalized_exponent(g, 0.3, 1.7, u);
        CHECK(std::abs(a - b) < 1e-12);
        CHECK(std::abs(a - (levy_exponent(g, u) - I * (0.3 * u) + 0.5 * 1.7 * u * u)) < 1e-12);
    }
}

TEST_CASE("limiting_psi") {
    CHECK(limiting_psi(0.0, LevyMeasure(), TruncationId::CANONICAL_TRAPEZOID, 1.3) == Complex(0.0));
    for (double u : {0.5, 1.0, 2.0}) {
        CHECK(std::abs(limiting_psi(6.0, LevyMeasure(), TruncationId::CANONICAL_TRAPEZOID, u) + I * (u * u * u)) < 1e-14);
    }
    // The infinite aggregate of centred exponential rows: limiting_psi with
    // κ = ∫h³ν describes Φ up to the shift β = −∫(x − h)ν, γ = ∫(h² − x²)ν.
    const auto nu = gamma_example_limit_measure();
    const auto h = TruncationId::CANONICAL_TRAPEZOID;
    const double k = kappa(nu, h);
    const double beta = -nu.integrate_real([h](double x) { return x - truncation(h, x); });
    const double gamma = nu.integrate_real([h](double x) {
        const double t = truncation(h, x);
        return t * t - x * x;
    });
    for (double u : {1.0, -2.0}) {
        const Complex psi = limiting_psi(k, nu, h, u) + Complex(-0.5 * gamma * u * u, beta * u);
        CHECK(std::abs(std::exp(psi) - phi_gamma_example(u)) < 1e-6);
    }
}
