#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "modphi/error.hpp"
#include "modphi/ff.hpp"
#include "modphi/galois.hpp"
#include "modphi/parallel.hpp"
#include "modphi/rmt.hpp"
#include "modphi/stats.hpp"

using namespace modphi;

namespace {

// f mod d over F_p (d monic), brute force.
FpPoly rem_fp(FpPoly f, const FpPoly& d, std::uint32_t p) {
    while (!f.empty() && f.back() == 0) f.pop_back();
    while (f.size() >= d.size()) {
        const std::uint32_t c = f.back();
        const std::size_t s = f.size() - d.size();
        for (std::size_t i = 0; i < d.size(); ++i) f[s + i] = (f[s + i] + p * p - c * d[i]) % p;
        while (!f.empty() && f.back() == 0) f.pop_back();
    }
    return f;
}

// Irreducible iff no monic factor of degree 1..deg/2.
bool brute_irreducible(const FpPoly& f, std::uint32_t p) {
    const int k = static_cast<int>(f.size()) - 1;
    for (int e = 1; e <= k / 2; ++e) {
        std::uint64_t count = 1;
        for (int i = 0; i < e; ++i) count *= p;
        for (std::uint64_t idx = 0; idx < count; ++idx) {
            FpPoly d(e + 1, 0);
            std::uint64_t v = idx;
            for (int i = 0; i < e; ++i) {
                d[i] = v % p;
                v /= p;
            }
            d[e] = 1;
            if (rem_fp(f, d, p).empty()) return false;
        }
    }
    return true;
}

std::uint64_t brute_count_irreducible(std::uint32_t p, int d) {
    std::uint64_t count = 1, n = 0;
    for (int i = 0; i < d; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
        FpPoly f(d + 1, 0);
        std::uint64_t v = idx;
        for (int i = 0; i < d; ++i) {
            f[i] = v % p;
            v /= p;
        }
        f[d] = 1;
        n += brute_irreducible(f, p);
    }
    return n;
}

// Σ_x #{y : y² = f(x)} by a double loop over the field.
std::uint64_t brute_points(const FiniteField& F, const FqPoly& f) {
    std::uint64_t n = 0;
    for (std::uint64_t x = 0; x < F.q(); ++x) {
        const auto fx = poly_eval(F, f, x);
        for (std::uint64_t y = 0; y < F.q(); ++y) n += F.mul(y, y) == fx;
    }
    return n;
}

CurvePoly x3_minus_x(const FiniteField& F) { return CurvePoly{{0, F.from_int(-1), 0, 1}}; }

}  // namespace

TEST_CASE("least irreducible moduli") {
    CHECK(least_irreducible(3, 2) == FpPoly{1, 0, 1});
    CHECK(least_irreducible(5, 1) == FpPoly{0, 1});
    for (std::uint32_t p : {3u, 5u, 7u}) {
        for (int k = 1; k <= 4; ++k) {
            const FpPoly m = least_irreducible(p, k);
            CHECK(brute_irreducible(m, p));
            // Everything smaller in index order is reducible.
            std::uint64_t idx = 0;
            for (int i = k - 1; i >= 0; --i) idx = idx * p + m[i];
            for (std::uint64_t j = 0; j < idx; ++j) {
                FpPoly f(k + 1, 0);
                std::uint64_t v = j;
                for (int i = 0; i < k; ++i) {
                    f[i] = v % p;
                    v /= p;
                }
                f[k] = 1;
                CHECK_FALSE(brute_irreducible(f, p));
            }
        }
    }
    CHECK(is_irreducible_fp(FpPoly{1, 0, 1}, 3));
    CHECK_FALSE(is_irreducible_fp(FpPoly{2, 0, 1}, 3));
}

TEST_CASE("finite field arithmetic") {
    CHECK_THROWS_AS(FiniteField(2, 1), DomainError);
    CHECK_THROWS_AS(FiniteField(9, 1), DomainError);
    CHECK_THROWS_AS(FiniteField(3, 20), BudgetError);
    for (auto [p, k] : {std::pair{7u, 1}, std::pair{3u, 3}, std::pair{5u, 2}, std::pair{3u, 4}}) {
        const auto F = finite_field(p, k);
        const std::uint64_t q = F->q();
        std::mt19937_64 rng(p * 100 + k);
        std::uniform_int_distribution<std::uint64_t> pick(0, q - 1);
        for (int t = 0; t < 2000; ++t) {
            const auto a = pick(rng), b = pick(rng), c = pick(rng);
            CHECK(F->add(a, F->add(b, c)) == F->add(F->add(a, b), c));
            CHECK(F->mul(a, F->add(b, c)) == F->add(F->mul(a, b), F->mul(a, c)));
            CHECK(F->add(a, F->neg(a)) == 0);
            if (a) CHECK(F->mul(a, F->inv(a)) == 1);
            // Addition is coefficientwise mod p in the index encoding.
            const auto pa = F->to_poly(a), pb = F->to_poly(b);
            FpPoly s(k);
            for (int i = 0; i < k; ++i) s[i] = (pa[i] + pb[i]) % p;
            CHECK(F->add(a, b) == F->from_poly(s));
        }
        int squares = 0;
        for (std::uint64_t a = 1; a < q; ++a) squares += F->chi(a) == 1;
        CHECK(squares == int((q - 1) / 2));
        CHECK(F->pow(F->primitive(), q - 1) == 1);
        CHECK(F->pow(F->primitive(), (q - 1) / 2) == F->from_int(-1));
    }
}

TEST_CASE("field embeddings are ring homomorphisms") {
    for (auto [p, k, n] : {std::tuple{3u, 1, 2}, std::tuple{3u, 2, 2}, std::tuple{5u, 1, 3}}) {
        const auto S = finite_field(p, k);
        const auto B = finite_field(p, k * n);
        const auto& e = field_embedding(p, k, n);
        for (std::uint64_t a = 0; a < S->q(); ++a) {
            for (std::uint64_t b = 0; b < S->q(); ++b) {
                CHECK(e[S->add(a, b)] == B->add(e[a], e[b]));
                CHECK(e[S->mul(a, b)] == B->mul(e[a], e[b]));
            }
        }
    }
}

TEST_CASE("hyperelliptic enumeration") {
    const auto F3 = finite_field(3, 1);
    CHECK(enumerate_hyperelliptic(*F3, 1).size() == 18);
    CHECK(enumerate_hyperelliptic(*finite_field(5, 1), 1).size() == 100);
    for (auto [p, k, g] : {std::tuple{3u, 1, 2}, std::tuple{7u, 1, 1}, std::tuple{3u, 2, 1}}) {
        const auto F = finite_field(p, k);
        CHECK(enumerate_hyperelliptic(*F, g).size() == hyperelliptic_ensemble_size(F->q(), g));
    }
    bool has_x3 = false;
    for (const auto& f : enumerate_hyperelliptic(*F3, 1)) has_x3 |= f.coeffs == FqPoly{0, 0, 0, 1};
    CHECK_FALSE(has_x3);
    CHECK_THROWS_AS(validate_curve(*F3, CurvePoly{{0, 0, 0, 1}}), DomainError);
    CHECK_THROWS_AS(validate_curve(*F3, CurvePoly{{0, 2, 0, 2}}), DomainError);
    CHECK_THROWS_AS(enumerate_hyperelliptic(*finite_field(101, 1), 2), BudgetError);
}

TEST_CASE("point counts") {
    const auto F3 = finite_field(3, 1);
    const auto F9 = finite_field(3, 2);
    CHECK(count_affine_points(x3_minus_x(*F3), *F3, 1) == 3);
    CHECK(count_affine_points(x3_minus_x(*F3), *F3, 2) == 15);
    CHECK(count_affine_points(x3_minus_x(*F9), *F9, 1) == 15);
    for (const auto& f : enumerate_hyperelliptic(*F3, 2)) {
        for (int n : {1, 2, 3}) {
            const auto c = count_affine_points(f, *F3, n);
            CHECK(c <= 2 * std::uint64_t(std::pow(3, n)));
        }
        CHECK(count_affine_points(f, *F3, 1) == brute_points(*F3, f.coeffs));
    }
    // Base field F_9 against a direct double loop.
    int checked = 0;
    for (const auto& f : enumerate_hyperelliptic(*F9, 1)) {
        if (checked++ % 17) continue;
        CHECK(count_affine_points(f, *F9, 1) == brute_points(*F9, f.coeffs));
    }
}

TEST_CASE("L-polynomials") {
    const auto F3 = finite_field(3, 1);
    const auto F9 = finite_field(3, 2);
    CHECK(l_polynomial(x3_minus_x(*F3), *F3).a == std::vector<long long>{1, 0, 3});
    CHECK(l_polynomial(x3_minus_x(*F9), *F9).a == std::vector<long long>{1, 6, 9});

    for (int g : {1, 2}) {
        for (const auto& f : enumerate_hyperelliptic(*F3, g)) {
            const auto L = l_polynomial(f, *F3, 1);
            REQUIRE(L.a.size() == std::size_t(2 * g + 1));
            CHECK(L.a[0] == 1);
            const auto w = verify_weil(L);
            CHECK(w.functional_equation);
            CHECK(w.max_residual <= 1e-9);
            const auto implied = counts_from_l_polynomial(L, 2 * g);
            for (int n = 1; n <= 2 * g; ++n) CHECK(implied[n - 1] == (long long)count_affine_points(f, *F3, n) + 1);
        }
    }
}

TEST_CASE("verify_weil and frobenius_angles") {
    const LPolynomial a{{1, 0, 3}, 3};
    const auto wa = verify_weil(a);
    CHECK(wa.functional_equation);
    CHECK(wa.max_residual < 1e-12);
    for (const auto& al : wa.inverse_roots) {
        CHECK(std::abs(al.real()) < 1e-12);
        CHECK(std::abs(std::abs(al.imag()) - std::sqrt(3.0)) < 1e-12);
    }
    const auto ta = frobenius_angles(a);
    REQUIRE(ta.size() == 1);
    CHECK(ta[0] == doctest::Approx(kPi / 2).epsilon(1e-12));
    CHECK(std::abs(det_one_minus(ta) - l_value_at_half(a)) < 1e-9);

    const LPolynomial b{{1, 6, 9}, 9};
    const auto wb = verify_weil(b);
    CHECK(wb.max_residual < 1e-12);
    for (const auto& al : wb.inverse_roots) CHECK(std::abs(al + 3.0) < 1e-12);
    const auto tb = frobenius_angles(b);
    CHECK(tb[0] == doctest::Approx(kPi).epsilon(1e-12));
    CHECK(std::abs(det_one_minus(tb) - l_value_at_half(b)) < 1e-9);

    // Double interior pair and a boundary pair at irrational ±2√q.
    const LPolynomial c{{1, 0, 2 * 5, 0, 25}, 5};  // (1 + 5T²)²
    CHECK(verify_weil(c).max_residual < 1e-12);
    const LPolynomial d{{1, 0, -2 * 5, 0, 25}, 5};  // (1 − 5T²)² : α = ±√5
    const auto td = frobenius_angles(d);
    CHECK(td == std::vector<double>{0.0, kPi});

    // Off the circle: h(y) = y + 5 has |t| > 2√3.
    const LPolynomial bad{{1, 5, 3}, 3};
    CHECK(verify_weil(bad).max_residual > 0.1);
    CHECK_THROWS_AS(frobenius_angles(bad), DomainError);
    // Functional equation broken.
    const LPolynomial broken{{1, 0, 2}, 3};
    CHECK_FALSE(verify_weil(broken).functional_equation);

    for (const auto& L : {a, b, c}) {
        const auto th = frobenius_angles(L);
        CHECK(std::abs(det_one_minus(th) - l_value_at_half(L)) < 1e-9);
    }
}

TEST_CASE("vanishing at the central point") {
    CHECK(l_vanishes_at_half(LPolynomial{{1, -6, 9}, 9}));
    CHECK_FALSE(l_vanishes_at_half(LPolynomial{{1, 6, 9}, 9}));
    CHECK_FALSE(l_vanishes_at_half(LPolynomial{{1, 0, 3}, 3}));
    // q not a square: vanishing needs both integer parts to cancel.
    CHECK(l_vanishes_at_half(LPolynomial{{1, 0, -6, 0, 9}, 3}));  // (1 − 3T²)²
    CHECK(l_value_at_half(LPolynomial{{1, -6, 9}, 9}) == doctest::Approx(0.0));
}

TEST_CASE("ensemble scans and moments") {
    const auto F3 = finite_field(3, 1);
    const auto recs = scan_ensemble(*F3, 1);
    CHECK(recs.size() == 18);
    const auto m1 = ensemble_moment_lambda(recs, 1.0, false);
    double brute = 0.0;
    for (const auto& f : enumerate_hyperelliptic(*F3, 1)) {
        const double a1 = double(brute_points(*F3, f.coeffs)) - 3.0;
        brute += 1.0 + a1 / std::sqrt(3.0) + 1.0;
    }
    CHECK(std::abs(m1.value.real() - brute / 18.0) < 1e-12);
    CHECK(ensemble_moment_lambda(recs, 0.0, false).value == Complex(1.0));
    CHECK(m1.ensemble_size == 18);

    const auto r13 = scan_ensemble(*finite_field(13, 1), 1);
    CHECK(r13.size() == hyperelliptic_ensemble_size(13, 1));
    CHECK(std::abs(ensemble_moment_lambda(r13, 1.0, false).value.real() - 2.0) <= 0.5);

    const auto r9 = scan_ensemble(*finite_field(3, 2), 1);
    std::uint64_t vanishing = 0;
    for (const auto& r : r9) vanishing += r.L.a[1] == -6;
    CHECK(vanishing > 0);
    const auto m9 = ensemble_moment_u(r9, 0.7, true);
    CHECK(m9.excluded == vanishing);
    CHECK(m9.used + m9.excluded == r9.size());
    CHECK_THROWS_AS(ensemble_moment_u(r9, 0.7, false), DomainError);
    CHECK(ensemble_moment_lambda(r9, 1.0, true).excluded == vanishing);
}

TEST_CASE("angles equidistribute as q grows") {
    auto sin2_cdf = [](double t) { return t / kPi - std::sin(2 * t) / (2 * kPi); };
    double previous = 1.0;
    for (std::uint32_t q : {5u, 13u, 41u}) {
        std::vector<double> theta;
        for (const auto& r : scan_ensemble(*finite_field(q, 1), 1)) theta.push_back(r.angles[0]);
        const double ks = ks_one_sample(theta, sin2_cdf);
        CHECK(ks < previous);
        previous = ks;
    }
}

TEST_CASE("scans do not depend on the thread count") {
    const auto F = finite_field(7, 1);
    const std::size_t saved = thread_count();
    set_thread_count(1);
    const auto a = scan_ensemble(*F, 1);
    set_thread_count(3);
    const auto b = scan_ensemble(*F, 1);
    set_thread_count(saved);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].f.coeffs == b[i].f.coeffs);
        CHECK(a[i].angles == b[i].angles);
    }
}

TEST_CASE("irreducible counts and the arithmetic factor") {
    CHECK(count_irreducibles(3, 1) == 3);
    CHECK(count_irreducibles(3, 2) == 3);
    CHECK(count_irreducibles(3, 3) == 8);
    for (std::uint32_t p : {3u, 5u})
        for (int d = 1; d <= 4; ++d) CHECK(count_irreducibles(p, d) == brute_count_irreducible(p, d));
    // Over F_9, degree-2 irreducibles are the quadratics without roots.
    const auto F9 = finite_field(3, 2);
    std::uint64_t n = 0;
    for (std::uint64_t b = 0; b < 9; ++b)
        for (std::uint64_t c = 0; c < 9; ++c) {
            bool root = false;
            for (std::uint64_t x = 0; x < 9; ++x) root |= poly_eval(*F9, FqPoly{FiniteField::Elem(c), FiniteField::Elem(b), 1}, x) == 0;
            n += !root;
        }
    CHECK(count_irreducibles(9, 2) == n);
    CHECK_THROWS_AS(count_irreducibles(1000003, 30), BudgetError);

    CHECK(std::abs(arithmetic_factor_Ah(1e-9, 3, 20) - 1.0) < 1e-8);
    CHECK(std::abs(arithmetic_factor_Ah(2.0, 3, 20) - arithmetic_factor_Ah(2.0, 3, 12)) < 1e-6);
    CHECK_THROWS_AS(arithmetic_factor_Ah(0.0, 3, 10), DomainError);
    CHECK_THROWS_AS(arithmetic_factor_Ah(1.0, 3, 31), DomainError);
}

TEST_CASE("curve CSV") {
    const auto recs = scan_ensemble(*finite_field(3, 1), 1);
    std::ostringstream os;
    write_curve_csv(os, recs, 3, 1);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "q,g,f,a_1,vanishing,angles");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 18);
}
