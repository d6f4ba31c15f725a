#include "modphi/levy.hpp"

#include <algorithm>
#include <cmath>

#include "modphi/error.hpp"

namespace modphi {

namespace {

constexpr double kEps = 1e-6;
constexpr double kFar = 40.0;

std::vector<double> breakpoints(const Interval& domain) {
    std::vector<double> cuts = {domain.lo, domain.hi};
    for (double c : {0.0, kEps, -kEps, 1.0, -1.0, 2.0, -2.0, kFar, -kFar}) {
        if (c > domain.lo && c < domain.hi) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    return cuts;
}

Complex integrate_density(const LevyDensity& d, const std::function<Complex(double)>& g, double tol,
                          int budget) {
    const auto cuts = breakpoints(d.domain);
    Complex total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        QuadratureSpec spec;
        spec.domain = {cuts[i], cuts[i + 1]};
        spec.abs_tol = tol;
        spec.rel_tol = 1e-13;
        spec.max_subdivisions = budget;
        total += integrate([&](double x) { return g(x) * d.rho(x); }, spec).value;
    }
    return total;
}

bool probe(const LevyDensity& d, const std::function<double(double)>& weight) {
    try {
        const Complex v = integrate_density(d, [&](double x) { return Complex(weight(x)); }, 1e-10, 400);
        return std::isfinite(v.real());
    } catch (const BudgetError&) {
        return false;
    }
}

Complex k_u(double u, double x, TruncationId id) {
    if (std::abs(x) <= 1.0) return special::exp_i_remainder(u * x, 4);  // h(x) = x here
    const double h = truncation(id, x);
    const Complex i(0.0, 1.0);
    return std::exp(i * (u * x)) - 1.0 - i * (u * h) + 0.5 * u * u * h * h + i * (u * u * u * h * h * h / 6.0);
}

// e^{iux} − 1 − iuh(x), written to avoid cancellation near 0.
Complex compensated(double u, double x, TruncationId id) {
    return special::exp_i_remainder(u * x, 2) + Complex(0.0, u * (x - truncation(id, x)));
}

void require(const LevyMeasure& nu, Integrability what, const char* where) {
    if (!nu.integrates(what)) throw IntegrabilityError(std::string(where) + ": Lévy measure lacks the required integrability");
}

}  // namespace

double truncation(TruncationId id, double x) {
    const double a = std::abs(x);
    if (a <= 1.0) return x;
    if (id == TruncationId::INDICATOR || a > 2.0) return 0.0;
    return std::copysign(2.0 - a, x);
}

LevyMeasure::LevyMeasure(std::vector<LevyAtom> atoms, std::optional<LevyDensity> density)
    : atoms_(std::move(atoms)), density_(std::move(density)) {
    for (const auto& a : atoms_) {
        if (a.x == 0.0 || !std::isfinite(a.x)) throw DomainError("LevyMeasure: atom at 0 or non-finite location");
        if (!(a.w > 0.0) || !std::isfinite(a.w)) throw DomainError("LevyMeasure: atom weights must be positive");
    }
    if (!density_) return;
    const auto& d = *density_;
    if (!(d.domain.lo < d.domain.hi)) throw DomainError("LevyMeasure: empty density domain");
    x2_ = probe(d, [](double x) { return std::min(x * x, 1.0); });
    x3_ = probe(d, [](double x) { return std::abs(x * x * x); });
    x4_ = probe(d, [](double x) { return std::min(x * x * x * x, 1.0); });
    const bool declared = d.tag == Integrability::X2_MIN_1 ? x2_ : d.tag == Integrability::ABS_X3 ? x3_ : x4_;
    if (!declared) throw IntegrabilityError("LevyMeasure: density fails its declared integrability tag");
}

bool LevyMeasure::integrates(Integrability what) const {
    switch (what) {
        case Integrability::X2_MIN_1: return x2_;
        case Integrability::ABS_X3: return x3_;
        case Integrability::X4_MIN_1: return x4_;
    }
    return false;
}

Complex LevyMeasure::integrate(const std::function<Complex(double)>& g) const {
    Complex total = 0.0;
    for (const auto& a : atoms_) total += a.w * g(a.x);
    if (density_) total += integrate_density(*density_, g, 1e-15, 4000);
    return total;
}

double LevyMeasure::integrate_real(const std::function<double(double)>& g) const {
    return integrate([&](double x) { return Complex(g(x)); }).real();
}

LevyMeasure gamma_levy_measure() {
    return LevyMeasure({}, LevyDensity{[](double x) { return std::exp(-x) / x; }, {0.0, kInf}, Integrability::ABS_X3});
}

LevyMeasure gamma_example_limit_measure() {
    return LevyMeasure({}, LevyDensity{[](double x) {
                                           const double s = 2.0 * std::sinh(0.5 * x);
                                           return 1.0 / (x * s * s);
                                       },
                                       {0.0, kInf}, Integrability::X4_MIN_1});
}

Complex levy_exponent(const GeneratingTriplet& t, double u) {
    if (u == 0.0) return 0.0;
    if (t.sigma < 0.0) throw DomainError("levy_exponent: sigma must be >= 0");
    require(t.nu, Integrability::X2_MIN_1, "levy_exponent");
    const Complex jump = t.nu.empty() ? Complex(0.0) : t.nu.integrate([&](double x) { return compensated(u, x, t.truncation); });
    return Complex(-0.5 * t.sigma * u * u, t.beta * u) + jump;
}

GeneratingTriplet convert_truncation(const GeneratingTriplet& t, TruncationId h_new) {
    if (h_new == t.truncation) return t;
    GeneratingTriplet out = t;
    out.truncation = h_new;
    // h' − h vanishes on |x| ≤ 1 and beyond |x| = 2.
    out.beta += t.nu.integrate_real([&](double x) { return truncation(h_new, x) - truncation(t.truncation, x); });
    return out;
}

std::vector<double> cumulants_from_triplet(const GeneratingTriplet& t, int n) {
    if (n < 1) throw DomainError("cumulants_from_triplet: n must be >= 1");
    if (t.nu.density()) {
        double moment = 0.0;
        try {
            moment = t.nu.integrate_real([&](double x) { return std::pow(std::abs(x), n); });
        } catch (const BudgetError&) {
            moment = INFINITY;
        }
        if (!std::isfinite(moment)) throw MomentDivergenceError("cumulants_from_triplet: ∫|x|^n ν diverges");
    }
    std::vector<double> c(n);
    c[0] = t.beta + t.nu.integrate_real([&](double x) { return x - truncation(t.truncation, x); });
    if (n >= 2) c[1] = t.sigma + t.nu.integrate_real([](double x) { return x * x; });
    for (int k = 3; k <= n; ++k) c[k - 1] = t.nu.integrate_real([k](double x) { return std::pow(x, k); });
    return c;
}

double kappa(const LevyMeasure& nu, TruncationId h) {
    return nu.integrate_real([h](double x) {
        const double v = truncation(h, x);
        return v * v * v;
    });
}

Complex renormalized_exponent_direct(const GeneratingTriplet& t, double beta_N, double gamma_N, double u) {
    if (u == 0.0) return 0.0;
    const Complex jump = t.nu.empty() ? Complex(0.0) : t.nu.integrate([&](double x) { return compensated(u, x, t.truncation); });
    return Complex(-0.5 * u * u * (t.sigma - gamma_N), u * (t.beta - beta_N)) + jump;
}

Complex renormalized_exponent(const GeneratingTriplet& t, double beta_N, double gamma_N, double u) {
    if (u == 0.0) return 0.0;
    double h2 = 0.0;
    double k = 0.0;
    Complex nu_k = 0.0;
    if (!t.nu.empty()) {
        h2 = t.nu.integrate_real([&](double x) {
            const double v = truncation(t.truncation, x);
            return v * v;
        });
        k = kappa(t.nu, t.truncation);
        nu_k = t.nu.integrate([&](double x) { return k_u(u, x, t.truncation); });
    }
    return Complex(-0.5 * u * u * (t.sigma + h2 - gamma_N), u * (t.beta - beta_N) - u * u * u * k / 6.0) + nu_k;
}

Complex limiting_psi(double kappa_value, const LevyMeasure& nu, TruncationId h, double u) {
    if (u == 0.0) return 0.0;
    require(nu, Integrability::X4_MIN_1, "limiting_psi");
    const Complex tail = nu.empty() ? Complex(0.0) : nu.integrate([&](double x) { return k_u(u, x, h); });
    return Complex(0.0, -u * u * u * kappa_value / 6.0) + tail;
}

}  // namespace modphi
