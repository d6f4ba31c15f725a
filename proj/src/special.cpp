#include "modphi/special.hpp"

#include <array>
#include <cmath>
#include <string>

#include "modphi/error.hpp"

namespace modphi::special {

namespace {

const double kLogTwoPi = std::log(2.0 * kPi);

bool is_nonpositive_integer(Complex z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

// B_{2k} / (2k (2k-1)) for k = 1..10.
constexpr std::array<double, 10> kStirling = {
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
};

// B_{2j} / (2j)! for j = 1..10, used by Euler–Maclaurin.
constexpr std::array<double, 10> kBernoulliOverFactorial = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0,
};

Complex stirling(Complex z) {
    Complex series = 0.0;
    const Complex inv = 1.0 / z;
    const Complex inv2 = inv * inv;
    Complex power = inv;
    for (double c : kStirling) {
        series += c * power;
        power *= inv2;
    }
    return (z - 0.5) * std::log(z) - z + 0.5 * kLogTwoPi + series;
}

Complex ln_gamma_right(Complex z) {
    // Shift to Re z >= 15 where the Stirling series is accurate to double precision.
    Complex shift = 0.0;
    while (z.real() < 15.0) {
        shift += std::log(z);
        z += 1.0;
    }
    return stirling(z) - shift;
}

}  // namespace

Complex ln_gamma(Complex z) {
    if (is_nonpositive_integer(z)) {
        throw PoleError("ln_gamma: pole at z = " + std::to_string(z.real()));
    }
    if (z.real() < -5.0) {
        // Reflection: Γ(z)Γ(1−z) = π / sin(πz).
        return std::log(kPi) - std::log(std::sin(kPi * z)) - ln_gamma_right(1.0 - z);
    }
    return ln_gamma_right(z);
}

Complex gamma(Complex z) { return std::exp(ln_gamma(z)); }

Complex rgamma(Complex z) {
    if (is_nonpositive_integer(z)) return 0.0;
    return std::exp(-ln_gamma(z));
}

double hurwitz_zeta(double s, double a) {
    if (!(s > 1.0) || !(a > 0.0)) throw DomainError("hurwitz_zeta: requires s > 1, a > 0");
    double direct = 0.0;
    const double target = std::max(12.0, s + 2.0);
    while (a < target) {
        direct += std::pow(a, -s);
        a += 1.0;
    }
    double sum = direct + std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s);
    // Σ B_{2j}/(2j)! · s(s+1)…(s+2j−2) · a^{−s−2j+1}
    double rising = s;
    double power = std::pow(a, -s - 1.0);
    const double inv_a2 = 1.0 / (a * a);
    for (std::size_t j = 0; j < kBernoulliOverFactorial.size(); ++j) {
        const double term = kBernoulliOverFactorial[j] * rising * power;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        const double k = 2.0 * static_cast<double>(j + 1);
        rising *= (s + k - 1.0) * (s + k);
        power *= inv_a2;
    }
    return sum;
}

Complex log_barnes_g(Complex z) {
    if (is_nonpositive_integer(z)) {
        throw PoleError("log_barnes_g: G vanishes at z = " + std::to_string(z.real()));
    }
    const Complex w = z - 1.0;
    const double modulus = std::abs(w);
    const int cutoff = std::max(32, static_cast<int>(std::ceil(8.0 * modulus)));

    Complex head = 0.0;
    for (int k = 1; k <= cutoff; ++k) {
        const double kd = k;
        const Complex t = w / kd;
        if (std::abs(t) < 0.25) {
            // k·Σ_{m≥3} (−1)^{m+1} t^m/m, avoiding the cancellation in the closed form.
            Complex power = t * t * t;
            Complex series = 0.0;
            for (int m = 3; m < 60; ++m) {
                const Complex term = (m % 2 == 1 ? 1.0 : -1.0) * power / static_cast<double>(m);
                series += term;
                if (std::abs(term) < 1e-18 * std::abs(series)) break;
                power *= t;
            }
            head += kd * series;
        } else {
            head += kd * std::log(1.0 + t) - w + w * w / (2.0 * kd);
        }
    }

    Complex tail = 0.0;
    Complex power = w * w * w;
    bool converged = modulus == 0.0;
    for (int m = 3; m < 80 && !converged; ++m) {
        const double zeta = hurwitz_zeta(m - 1.0, cutoff + 1.0);
        const Complex term = (m % 2 == 1 ? 1.0 : -1.0) * power / static_cast<double>(m) * zeta;
        tail += term;
        if (std::abs(term) <= 1e-17 * (1.0 + std::abs(head + tail))) converged = true;
        power *= w;
    }
    if (!converged) {
        throw BudgetError("log_barnes_g: tail acceleration did not converge", std::abs(head + tail));
    }

    return 0.5 * w * kLogTwoPi - 0.5 * (w + (1.0 + kEulerGamma) * w * w) + head + tail;
}

Complex barnes_g(Complex z) {
    if (is_nonpositive_integer(z)) return 0.0;
    return std::exp(log_barnes_g(z));
}

Complex hyp2f1_diag(Complex a, double z, double abs_tol) {
    if (!(z >= 0.0 && z <= 0.5)) {
        throw DomainError("hyp2f1_diag: z must lie in [0, 1/2], got " + std::to_string(z));
    }
    const double abs_a = std::abs(a);
    Complex term = 1.0;
    Complex sum = 1.0;
    for (int k = 0; k < 100000; ++k) {
        // Every later ratio |t_{j+1}/t_j| = |(a+j)/(j+1)|²z is bounded by rho.
        const double growth = abs_a <= 1.0 ? 1.0 : (abs_a + k) / (k + 1.0);
        const double rho = growth * growth * z;
        if (rho < 1.0 && std::abs(term) * rho / (1.0 - rho) <= abs_tol * (1.0 - z)) return sum;
        const Complex ratio = (a + static_cast<double>(k)) / (k + 1.0);
        term *= ratio * ratio * z;
        sum += term;
    }
    throw BudgetError("hyp2f1_diag: series budget exhausted", std::abs(sum));
}

Complex exp_i_remainder(double y, int order) {
    const Complex iy(0.0, y);
    if (std::abs(y) < 1.0) {
        Complex term = 1.0;
        for (int m = 1; m <= order; ++m) term *= iy / static_cast<double>(m);
        Complex sum = 0.0;
        for (int m = order; m < order + 40; ++m) {
            sum += term;
            if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
            term *= iy / static_cast<double>(m + 1);
        }
        return sum;
    }
    Complex value = std::exp(iy);
    Complex term = 1.0;
    for (int m = 0; m < order; ++m) {
        value -= term;
        term *= iy / static_cast<double>(m + 1);
    }
    return value;
}

}  // namespace modphi::special
