#include "modphi/ff.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "modphi/error.hpp"
#include "modphi/parallel.hpp"

namespace modphi {

namespace {

using u64 = std::uint64_t;
using i128 = __int128;
using Rat = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;
using RPoly = std::vector<Rat>;  // low → high

u64 checked_pow(u64 b, int e, u64 cap) {
    u64 r = 1;
    for (int i = 0; i < e; ++i) {
        if (r > cap / b) throw BudgetError("size q^n exceeds the enumeration budget");
        r *= b;
    }
    return r;
}

std::uint64_t isqrt_exact(u64 q) {
    u64 s = static_cast<u64>(std::llround(std::sqrt(static_cast<double>(q))));
    while (s * s > q) --s;
    while ((s + 1) * (s + 1) <= q) ++s;
    return s;
}

// --- rational polynomials -------------------------------------------------

void rtrim(RPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

RPoly rderiv(const RPoly& f) {
    RPoly d;
    for (std::size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * static_cast<long long>(i));
    rtrim(d);
    return d;
}

// Quotient and remainder of a by b.
std::pair<RPoly, RPoly> rdivmod(RPoly a, const RPoly& b) {
    rtrim(a);
    if (b.empty()) throw DomainError("rational polynomial division by zero");
    if (a.size() < b.size()) return {{}, a};
    RPoly quo(a.size() - b.size() + 1, Rat(0));
    while (a.size() >= b.size() && !a.empty()) {
        const Rat c = a.back() / b.back();
        const std::size_t shift = a.size() - b.size();
        quo[shift] = c;
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
        a.pop_back();
        rtrim(a);
    }
    rtrim(quo);
    return {quo, a};
}

RPoly rmonic(RPoly f) {
    if (!f.empty()) {
        const Rat lead = f.back();
        for (auto& c : f) c /= lead;
    }
    return f;
}

RPoly rgcd(RPoly a, RPoly b) {
    rtrim(a);
    rtrim(b);
    while (!b.empty()) {
        RPoly r = rdivmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return rmonic(a);
}

RPoly rsub(RPoly a, const RPoly& b) {
    if (a.size() < b.size()) a.resize(b.size(), Rat(0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    rtrim(a);
    return a;
}

Rat reval(const RPoly& f, const Rat& x) {
    Rat r = 0;
    for (std::size_t i = f.size(); i-- > 0;) r = r * x + f[i];
    return r;
}

// Yun's squarefree decomposition: f = c·∏ a_i^i.
std::vector<std::pair<RPoly, int>> squarefree_decomposition(const RPoly& f) {
    std::vector<std::pair<RPoly, int>> out;
    const RPoly fp = rderiv(f);
    RPoly a0 = rgcd(f, fp);
    RPoly b = rdivmod(f, a0).first;
    RPoly c = rdivmod(fp, a0).first;
    RPoly d = rsub(c, rderiv(b));
    for (int i = 1; b.size() > 1; ++i) {
        RPoly a = rgcd(b, d);
        b = rdivmod(b, a).first;
        c = rdivmod(d, a).first;
        d = rsub(c, rderiv(b));
        if (a.size() > 1) out.push_back({rmonic(a), i});
        if (i > 1000) throw InconsistencyError("squarefree decomposition did not terminate");
    }
    return out;
}

// Roots of a squarefree real polynomial: companion eigenvalues, then Newton polishing.
std::vector<Complex> polished_roots(const RPoly& r) {
    const int d = static_cast<int>(r.size()) - 1;
    std::vector<double> c(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) c[i] = static_cast<double>(r[i] / r.back());
    if (d == 1) return {Complex(static_cast<double>(-r[0] / r[1]), 0.0)};
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(d, d);
    for (int i = 1; i < d; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i) comp(i, d - 1) = -c[i];
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    if (es.info() != Eigen::Success) throw BudgetError("root finding: eigenvalue iteration did not converge");
    std::vector<Complex> roots;
    for (int i = 0; i < d; ++i) {
        Complex z = es.eigenvalues()(i);
        for (int it = 0; it < 50; ++it) {
            Complex p = 1.0, dp = 0.0;
            for (int j = d - 1; j >= 0; --j) {
                dp = dp * z + p;
                p = p * z + c[j];
            }
            if (dp == 0.0) break;
            const Complex step = p / dp;
            z -= step;
            if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(z))) break;
        }
        Complex p = 1.0;
        double mag = 1.0;
        for (int j = d - 1; j >= 0; --j) {
            p = p * z + c[j];
            mag = mag * std::abs(z) + std::abs(c[j]);
        }
        if (std::abs(p) > 1e-8 * mag) throw BudgetError("root finding: Newton polishing did not converge");
        // Real polynomial: snap tiny imaginary parts of real roots.
        if (std::abs(z.imag()) <= 1e-12 * std::max(1.0, std::abs(z))) z = Complex(z.real(), 0.0);
        roots.push_back(z);
    }
    return roots;
}

std::vector<Complex> inverse_roots_from_trace(Complex t, double q) {
    if (t.imag() == 0.0) {
        const double disc = q - 0.25 * t.real() * t.real();
        if (disc >= 0.0) {
            const double s = std::sqrt(disc);
            return {Complex(0.5 * t.real(), s), Complex(0.5 * t.real(), -s)};
        }
    }
    const Complex s = std::sqrt(t * t - 4.0 * q);
    return {0.5 * (t + s), 0.5 * (t - s)};
}

// Direct inverse roots: eigenvalues of the companion of T^{2g}P(1/T).
std::vector<Complex> direct_inverse_roots(const LPolynomial& L) {
    const int n = static_cast<int>(L.a.size()) - 1;
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
    // x^n + a_1 x^{n−1} + … + a_n
    for (int i = 0; i < n; ++i) comp(i, n - 1) = -static_cast<double>(L.a[n - i]);
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    if (es.info() != Eigen::Success) throw BudgetError("root finding: eigenvalue iteration did not converge");
    std::vector<Complex> out;
    for (int i = 0; i < n; ++i) out.push_back(es.eigenvalues()(i));
    return out;
}

std::vector<double> angles_from_report(const WeilReport& w, double q) {
    if (w.max_residual > 1e-6) throw DomainError("frobenius_angles: Weil residual above 1e-6");
    if (!w.functional_equation) throw InconsistencyError("frobenius_angles: inverse roots are not paired by the functional equation");
    std::vector<double> theta;
    const double two_sqrt_q = 2.0 * std::sqrt(q);
    for (const Complex& t : w.traces) {
        if (std::abs(t.imag()) > 1e-6 * (1.0 + std::abs(t))) throw InconsistencyError("frobenius_angles: conjugate pairing violated");
        theta.push_back(std::acos(std::clamp(t.real() / two_sqrt_q, -1.0, 1.0)));
    }
    std::sort(theta.begin(), theta.end());
    return theta;
}

CurveRecord make_record(const CurvePoly& f, const FiniteField& F, int check) {
    CurveRecord r;
    r.f = f;
    r.L = l_polynomial(f, F, check);
    r.vanishing = l_vanishes_at_half(r.L);
    const WeilReport w = verify_weil(r.L);
    r.weil_residual = w.max_residual;
    r.angles = angles_from_report(w, static_cast<double>(r.L.q));
    return r;
}

}  // namespace

bool is_squarefree(const FiniteField& F, const FqPoly& f) {
    const FqPoly g = poly_gcd(F, f, derivative(F, f));
    return g.size() == 1;
}

void validate_curve(const FiniteField& F, const CurvePoly& f) {
    const std::size_t n = f.coeffs.size();
    if (n < 4 || n % 2 != 0) throw DomainError("curve: f must have odd degree 2g+1 >= 3");
    if (f.coeffs.back() != 1) throw DomainError("curve: f must be monic");
    for (auto c : f.coeffs)
        if (c >= F.q()) throw DomainError("curve: coefficient outside the field");
    if (!is_squarefree(F, f.coeffs)) throw DomainError("curve: f has a repeated root");
}

std::uint64_t hyperelliptic_ensemble_size(std::uint64_t q, int g) {
    u64 r = q - 1;
    for (int i = 0; i < 2 * g; ++i) r *= q;
    return r;
}

std::uint64_t for_each_hyperelliptic(const FiniteField& F, int g, const std::function<void(const CurvePoly&)>& visit) {
    if (g < 1) throw DomainError("hyperelliptic: g must be >= 1");
    const u64 q = F.q();
    const u64 total = checked_pow(q, 2 * g + 1, kEnumerationBudget);
    CurvePoly f;
    f.coeffs.assign(2 * g + 2, 0);
    f.coeffs.back() = 1;
    u64 visited = 0;
    for (u64 idx = 0; idx < total; ++idx) {
        u64 v = idx;
        for (int i = 0; i <= 2 * g; ++i) {
            f.coeffs[i] = static_cast<FiniteField::Elem>(v % q);
            v /= q;
        }
        if (is_squarefree(F, f.coeffs)) {
            visit(f);
            ++visited;
        }
    }
    return visited;
}

std::vector<CurvePoly> enumerate_hyperelliptic(const FiniteField& F, int g) {
    std::vector<CurvePoly> out;
    for_each_hyperelliptic(F, g, [&](const CurvePoly& f) { out.push_back(f); });
    return out;
}

std::uint64_t count_affine_points(const CurvePoly& f, const FiniteField& F, int n) {
    if (n < 1) throw DomainError("count_affine_points: n must be >= 1");
    const u64 Q = checked_pow(F.q(), n, kMaxFieldSize);
    const auto big = finite_field(F.p(), F.k() * n);
    const auto& embed = field_embedding(F.p(), F.k(), n);
    FqPoly c(f.coeffs.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = embed[f.coeffs[i]];
    const auto& B = *big;
    long long count = 0;
    for (u64 x = 0; x < Q; ++x) count += 1 + B.chi(poly_eval(B, c, static_cast<FiniteField::Elem>(x)));
    return static_cast<u64>(count);
}

LPolynomial l_polynomial(const CurvePoly& f, const FiniteField& F, int check) {
    validate_curve(F, f);
    const int g = f.genus();
    const u64 q = F.q();
    LPolynomial L;
    L.q = q;
    L.a.assign(2 * g + 1, 0);
    L.a[0] = 1;
    std::vector<long long> s(g + 1, 0);
    long long qn = 1;
    for (int n = 1; n <= g; ++n) {
        qn *= static_cast<long long>(q);
        s[n] = qn - static_cast<long long>(count_affine_points(f, F, n));
    }
    for (int m = 1; m <= g; ++m) {
        i128 acc = 0;
        for (int i = 1; i <= m; ++i) acc += static_cast<i128>(s[i]) * L.a[m - i];
        if (acc % m != 0) throw InconsistencyError("l_polynomial: Newton identity produced a non-integer coefficient");
        L.a[m] = static_cast<long long>(-acc / m);
    }
    long long qp = 1;
    for (int i = g - 1; i >= 0; --i) {
        qp *= static_cast<long long>(q);
        L.a[2 * g - i] = qp * L.a[i];
    }

    bool do_check = check > 0;
    if (check < 0) {
        long double q2g = std::pow(static_cast<long double>(q), 2 * g);
        do_check = q2g <= static_cast<long double>(kConsistencyBudget);
    }
    if (do_check && g >= 1) {
        const auto implied = counts_from_l_polynomial(L, 2 * g);
        for (int n = g + 1; n <= 2 * g; ++n) {
            const long long direct = static_cast<long long>(count_affine_points(f, F, n)) + 1;
            if (direct != implied[n - 1])
                throw InconsistencyError("l_polynomial: count over F_{q^" + std::to_string(n) + "} disagrees with the L-polynomial",
                                         static_cast<double>(implied[n - 1]), static_cast<double>(direct));
        }
    }
    return L;
}

std::vector<long long> counts_from_l_polynomial(const LPolynomial& L, int n_max) {
    const int deg = static_cast<int>(L.a.size()) - 1;
    auto a = [&](int j) -> i128 { return j <= deg ? L.a[j] : 0; };
    std::vector<i128> s(n_max + 1, 0);
    std::vector<long long> out;
    i128 qn = 1;
    for (int n = 1; n <= n_max; ++n) {
        i128 acc = -static_cast<i128>(n) * a(n);
        for (int i = 1; i < n; ++i) acc -= s[i] * a(n - i);
        s[n] = acc;
        qn *= static_cast<i128>(L.q);
        out.push_back(static_cast<long long>(qn + 1 - s[n]));
    }
    return out;
}

WeilReport verify_weil(const LPolynomial& L) {
    const int deg = static_cast<int>(L.a.size()) - 1;
    if (deg < 2 || deg % 2 != 0 || L.q < 2) throw DomainError("verify_weil: expects degree 2g >= 2 and q >= 2");
    const int g = deg / 2;
    const double q = static_cast<double>(L.q);
    const double sq = std::sqrt(q);
    WeilReport w;
    w.leading_one = L.a[0] == 1;
    w.functional_equation = w.leading_one;
    {
        BigInt qp = 1;
        for (int i = g; i >= 0; --i) {
            if (BigInt(L.a[2 * g - i]) != qp * BigInt(L.a[i])) w.functional_equation = false;
            qp *= L.q;
        }
    }

    if (!w.functional_equation) {
        w.inverse_roots = direct_inverse_roots(L);
        for (const auto& al : w.inverse_roots) w.max_residual = std::max(w.max_residual, std::abs(std::abs(al) - sq));
        return w;
    }

    // h(y) = a_g + Σ_{m=1}^{g} a_{g−m} D_m(y), D_0 = 2, D_1 = y, D_{m+1} = yD_m − qD_{m−1}.
    RPoly h(g + 1, Rat(0));
    h[0] = L.a[g];
    RPoly dprev{Rat(2)}, dcur{Rat(0), Rat(1)};
    for (int m = 1; m <= g; ++m) {
        for (std::size_t i = 0; i < dcur.size(); ++i) h[i] += Rat(L.a[g - m]) * dcur[i];
        RPoly next(dcur.size() + 1, Rat(0));
        for (std::size_t i = 0; i < dcur.size(); ++i) next[i + 1] += dcur[i];
        for (std::size_t i = 0; i < dprev.size(); ++i) next[i] -= Rat(static_cast<long long>(L.q)) * dprev[i];
        dprev = std::move(dcur);
        dcur = std::move(next);
    }
    rtrim(h);

    const u64 s = isqrt_exact(L.q);
    const bool square = s * s == L.q;
    for (auto [factor, mult] : squarefree_decomposition(h)) {
        RPoly r = factor;
        std::vector<Complex> roots;
        if (square) {
            for (long long sign : {1LL, -1LL}) {
                const Rat y0(sign * 2 * static_cast<long long>(s));
                if (r.size() > 1 && reval(r, y0) == 0) {
                    r = rdivmod(r, RPoly{-y0, Rat(1)}).first;
                    roots.push_back(Complex(static_cast<double>(y0), 0.0));
                }
            }
        } else {
            const RPoly boundary{Rat(-4 * static_cast<long long>(L.q)), Rat(0), Rat(1)};
            if (r.size() > 2) {
                auto [quo, rem] = rdivmod(r, boundary);
                if (rem.empty()) {
                    r = quo;
                    roots.push_back(Complex(2.0 * sq, 0.0));
                    roots.push_back(Complex(-2.0 * sq, 0.0));
                }
            }
        }
        if (r.size() > 1) {
            const auto rest = polished_roots(r);
            roots.insert(roots.end(), rest.begin(), rest.end());
        }
        for (int m = 0; m < mult; ++m) w.traces.insert(w.traces.end(), roots.begin(), roots.end());
    }
    if (static_cast<int>(w.traces.size()) != g) throw InconsistencyError("verify_weil: lost roots while factoring");

    for (const Complex& t : w.traces) {
        for (const Complex& al : inverse_roots_from_trace(t, q)) {
            w.inverse_roots.push_back(al);
            w.max_residual = std::max(w.max_residual, std::abs(std::abs(al) - sq));
        }
    }
    return w;
}

std::vector<double> frobenius_angles(const LPolynomial& L) {
    return angles_from_report(verify_weil(L), static_cast<double>(L.q));
}

double l_value_at_half(const LPolynomial& L) {
    const double x = 1.0 / std::sqrt(static_cast<double>(L.q));
    double r = 0.0;
    for (std::size_t i = L.a.size(); i-- > 0;) r = r * x + static_cast<double>(L.a[i]);
    return r;
}

bool l_vanishes_at_half(const LPolynomial& L) {
    const int deg = static_cast<int>(L.a.size()) - 1;
    const int g = deg / 2;
    BigInt E = 0, O = 0;
    for (int i = 0; i <= deg; ++i) {
        // q^g·q^{−i/2}: even i → q^{g−i/2}; odd i → q^{g−(i+1)/2}·√q.
        const int e = i % 2 == 0 ? g - i / 2 : g - (i + 1) / 2;
        BigInt term = L.a[i];
        for (int j = 0; j < e; ++j) term *= L.q;
        (i % 2 == 0 ? E : O) += term;
    }
    const u64 s = isqrt_exact(L.q);
    if (s * s == L.q) return E + O * BigInt(s) == 0;
    return E == 0 && O == 0;
}

std::vector<CurveRecord> scan_ensemble(const FiniteField& F, int g, int check) {
    if (g < 1) throw DomainError("scan_ensemble: g must be >= 1");
    const u64 q = F.q();
    const u64 total = checked_pow(q, 2 * g + 1, kEnumerationBudget);
    const u64 chunk_size = total / q;  // one chunk per value of a_{2g}
    std::vector<std::vector<CurveRecord>> chunks(q);
    parallel_for(q, [&](std::size_t c) {
        CurvePoly f;
        f.coeffs.assign(2 * g + 2, 0);
        f.coeffs.back() = 1;
        for (u64 idx = c * chunk_size; idx < (c + 1) * chunk_size; ++idx) {
            u64 v = idx;
            for (int i = 0; i <= 2 * g; ++i) {
                f.coeffs[i] = static_cast<FiniteField::Elem>(v % q);
                v /= q;
            }
            if (is_squarefree(F, f.coeffs)) chunks[c].push_back(make_record(f, F, check));
        }
    });
    std::vector<CurveRecord> out;
    for (auto& ch : chunks)
        for (auto& r : ch) out.push_back(std::move(r));
    return out;
}

EnsembleMoment ensemble_moment_lambda(const std::vector<CurveRecord>& records, double lambda,
                                      bool restrict_nonvanishing) {
    if (!(lambda >= 0.0)) throw DomainError("ensemble_moment: lambda must be >= 0");
    EnsembleMoment m;
    m.ensemble_size = records.size();
    double sum = 0.0;
    for (const auto& r : records) {
        if (r.vanishing && restrict_nonvanishing) {
            ++m.excluded;
            continue;
        }
        const double det = r.vanishing ? 0.0 : std::max(0.0, l_value_at_half(r.L));
        sum += std::pow(det, lambda);
        ++m.used;
    }
    if (m.used == 0) throw DomainError("ensemble_moment: no curves left to average");
    m.value = sum / static_cast<double>(m.used);
    return m;
}

EnsembleMoment ensemble_moment_u(const std::vector<CurveRecord>& records, double u, bool restrict_nonvanishing) {
    EnsembleMoment m;
    m.ensemble_size = records.size();
    Complex sum(0.0);
    for (const auto& r : records) {
        if (r.vanishing) {
            if (!restrict_nonvanishing) throw DomainError("ensemble_moment: log det(1 - F) undefined on a vanishing curve; restrict the ensemble");
            ++m.excluded;
            continue;
        }
        sum += std::polar(1.0, u * std::log(l_value_at_half(r.L)));
        ++m.used;
    }
    if (m.used == 0) throw DomainError("ensemble_moment: no curves left to average");
    m.value = sum / static_cast<double>(m.used);
    return m;
}

std::uint64_t count_irreducibles(std::uint64_t q, int d) {
    if (q < 2 || d < 1) throw DomainError("count_irreducibles: needs q >= 2 and d >= 1");
    if (d * std::log2(static_cast<double>(q)) > 120.0) throw BudgetError("count_irreducibles: q^d too large");
    auto mobius = [](int n) {
        int m = 1;
        for (int p = 2; p * p <= n; ++p) {
            if (n % p == 0) {
                n /= p;
                if (n % p == 0) return 0;
                m = -m;
            }
        }
        if (n > 1) m = -m;
        return m;
    };
    i128 sum = 0;
    for (int e = 1; e <= d; ++e) {
        if (d % e) continue;
        i128 pw = 1;
        for (int j = 0; j < d / e; ++j) pw *= q;
        sum += mobius(e) * pw;
    }
    const i128 result = sum / d;
    if (result > static_cast<i128>(~0ULL)) throw BudgetError("count_irreducibles: count exceeds 64 bits");
    return static_cast<u64>(result);
}

double arithmetic_factor_Ah(double lambda, std::uint64_t q, int D) {
    if (!(lambda > 0.0)) throw DomainError("arithmetic_factor_Ah: lambda must be > 0");
    if (D < 1 || D > 30) throw DomainError("arithmetic_factor_Ah: degree cutoff must be in [1, 30]");
    if (q < 3) throw DomainError("arithmetic_factor_Ah: q must be >= 3");
    long double total = 0.0L;
    for (int d = 1; d <= D; ++d) {
        // N_d in extended precision (exact counts may not fit 64 bits for large q^d).
        long double nd = 0.0L;
        for (int e = 1; e <= d; ++e) {
            if (d % e) continue;
            int n = e, mu = 1;
            for (int p = 2; p * p <= n; ++p) {
                if (n % p == 0) {
                    n /= p;
                    if (n % p == 0) { mu = 0; break; }
                    mu = -mu;
                }
            }
            if (mu != 0 && n > 1) mu = -mu;
            nd += mu * std::pow(static_cast<long double>(q), d / e);
        }
        nd /= d;
        const long double norm = std::pow(static_cast<long double>(q), d);
        const long double x = 1.0L / std::sqrt(norm);
        const long double pm = (std::expm1(-lambda * std::log1p(-x)) + std::expm1(-lambda * std::log1p(x)));
        const long double local = 0.5L * lambda * (lambda + 1.0L) * std::log1p(-1.0L / norm) +
                                  std::log1p(0.5L * norm / (norm + 1.0L) * pm);
        total += nd * local;
    }
    return static_cast<double>(std::exp(total));
}

void write_curve_csv(std::ostream& out, const std::vector<CurveRecord>& records, std::uint64_t q, int g) {
    out << "q,g,f";
    for (int i = 1; i <= g; ++i) out << ",a_" << i;
    out << ",vanishing,angles\n";
    char buf[64];
    for (const auto& r : records) {
        out << q << ',' << g << ',';
        for (std::size_t i = 0; i < r.f.coeffs.size(); ++i) out << (i ? ";" : "") << r.f.coeffs[i];
        for (int i = 1; i <= g; ++i) out << ',' << r.L.a[i];
        out << ',' << (r.vanishing ? 1 : 0) << ',';
        for (std::size_t i = 0; i < r.angles.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", r.angles[i]);
            out << (i ? ";" : "") << buf;
        }
        out << '\n';
    }
}

}  // namespace modphi
