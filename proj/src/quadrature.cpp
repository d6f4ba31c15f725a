#include "modphi/quadrature.hpp"

#include <array>
#include <cmath>
#include <queue>
#include <vector>

#include "modphi/error.hpp"

namespace modphi {

namespace {

// Kronrod 15-point abscissae (positive half, descending) and weights; the
// odd-indexed abscissae are the 7-point Gauss nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

struct Segment {
    double a;
    double b;
    Complex value;
    double error;
    bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod(const Integrand& g, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const Complex fc = g(center);
    Complex kronrod = fc * kWgk[7];
    Complex gauss = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const Complex sum = g(center - dx) + g(center + dx);
        kronrod += kWgk[j] * sum;
        if (j % 2 == 1) gauss += kWg[j / 2] * sum;
    }
    kronrod *= half;
    gauss *= half;
    return {a, b, kronrod, std::abs(kronrod - gauss)};
}

QuadratureResult adaptive(const Integrand& g, double a, double b, const QuadratureSpec& spec) {
    std::priority_queue<Segment> heap;
    Segment first = gauss_kronrod(g, a, b);
    Complex total = first.value;
    double error = first.error;
    heap.push(first);
    int subdivisions = 0;
    while (error > spec.abs_tol + spec.rel_tol * std::abs(total)) {
        if (subdivisions >= spec.max_subdivisions) {
            throw BudgetError("integrate: subdivision budget exhausted (estimate " +
                                  std::to_string(std::abs(total)) + ", error " + std::to_string(error) + ")",
                              std::abs(total), error);
        }
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Segment left = gauss_kronrod(g, worst.a, mid);
        Segment right = gauss_kronrod(g, mid, worst.b);
        total += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++subdivisions;
        if (heap.size() % 64 == 0) {
            // Resum to keep accumulated rounding out of the stopping test.
            auto copy = heap;
            total = 0.0;
            error = 0.0;
            while (!copy.empty()) {
                total += copy.top().value;
                error += copy.top().error;
                copy.pop();
            }
        }
    }
    return {total, error, subdivisions};
}

}  // namespace

QuadratureResult integrate(const Integrand& f, const QuadratureSpec& spec) {
    const double lo = spec.domain.lo;
    const double hi = spec.domain.hi;
    if (!(spec.abs_tol > 0.0) || !(spec.rel_tol > 0.0) || spec.max_subdivisions < 1) {
        throw DomainError("integrate: tolerances must be positive and the budget at least 1");
    }
    if (std::isnan(lo) || std::isnan(hi) || !(lo < hi)) {
        if (lo == hi) return {Complex(0.0), 0.0, 0};
        throw DomainError("integrate: empty or malformed interval");
    }

    if (std::isinf(lo) && std::isinf(hi)) {
        QuadratureSpec half = spec;
        half.abs_tol = 0.5 * spec.abs_tol;
        half.domain = {-kInf, 0.0};
        const QuadratureResult left = integrate(f, half);
        half.domain = {0.0, kInf};
        const QuadratureResult right = integrate(f, half);
        return {left.value + right.value, left.error + right.error, left.subdivisions + right.subdivisions};
    }
    if (std::isinf(hi)) {
        auto g = [&](double t) {
            const double s = 1.0 - t;
            return f(lo + t / s) / (s * s);
        };
        return adaptive(g, 0.0, 1.0, spec);
    }
    if (std::isinf(lo)) {
        auto g = [&](double t) {
            const double s = 1.0 - t;
            return f(hi - t / s) / (s * s);
        };
        return adaptive(g, 0.0, 1.0, spec);
    }
    return adaptive(f, lo, hi, spec);
}

}  // namespace modphi
