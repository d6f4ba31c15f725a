#include "modphi/limits.hpp"

#include <cmath>

#include "modphi/error.hpp"
#include "modphi/primes.hpp"
#include "modphi/quadrature.hpp"

namespace modphi {

using special::barnes_g;
using special::ln_gamma;
using special::log_barnes_g;

namespace {

bool is_nonpositive_integer(Complex z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

void check_cutoff(std::uint64_t cutoff) {
    if (cutoff < 2) throw DomainError("prime cutoff must be >= 2");
}

Complex exp_or_zero(Complex log_value) {
    if (std::isinf(log_value.real()) && log_value.real() < 0.0) return 0.0;
    return std::exp(log_value);
}

}  // namespace

Complex rmt_factor_M(Complex lambda) {
    if (is_nonpositive_integer(1.0 + 2.0 * lambda)) {
        throw PoleError("rmt_factor_M: G(1+2λ) vanishes");
    }
    if (is_nonpositive_integer(1.0 + lambda)) return 0.0;
    return std::exp(2.0 * log_barnes_g(1.0 + lambda) - log_barnes_g(1.0 + 2.0 * lambda));
}

Complex arithmetic_factor_A(Complex lambda, std::uint64_t prime_cutoff) {
    check_cutoff(prime_cutoff);
    if (lambda == Complex(0.0)) return 1.0;
    const Complex lambda2 = lambda * lambda;
    const Complex log_sum = euler_log_sum(prime_cutoff, [&](std::uint32_t p) {
        const double x = 1.0 / p;
        return lambda2 * std::log1p(-x) + std::log(special::hyp2f1_diag(lambda, x));
    });
    return exp_or_zero(log_sum);
}

Complex sp_factor_MSp(Complex lambda) {
    if (is_nonpositive_integer(1.5 + lambda)) throw PoleError("sp_factor_MSp: G(3/2+λ) vanishes");
    const Complex log_value = -0.5 * lambda * lambda * std::log(2.0) + 0.5 * lambda * std::log(kPi / 2.0) +
                              log_barnes_g(1.5) - log_barnes_g(1.5 + lambda);
    return std::exp(log_value);
}

Complex sp_factor_keating_snaith(Complex lambda) {
    if (is_nonpositive_integer(1.0 + 2.0 * lambda)) throw PoleError("sp_factor_keating_snaith: pole");
    if (is_nonpositive_integer(1.0 + lambda)) return 0.0;
    const Complex log_value = 0.5 * lambda * lambda * std::log(2.0) + log_barnes_g(1.0 + lambda) +
                              0.5 * ln_gamma(1.0 + lambda) -
                              0.5 * (log_barnes_g(1.0 + 2.0 * lambda) + ln_gamma(1.0 + 2.0 * lambda));
    return std::exp(log_value);
}

Complex phi_gamma_example(double u, GammaMethod method) {
    if (u == 0.0) return 1.0;
    if (method == GammaMethod::BARNES_CLOSED_FORM) {
        const Complex z(0.0, -u);
        const double log_a = 0.5 * (1.0 - std::log(2.0 * kPi));
        return std::exp(0.5 * kEulerGamma * u * u - z * log_a - 0.5 * z * z - log_barnes_g(1.0 + z));
    }
    // 1/(x(2 sinh(x/2))²) ~ 1/x³ at 0, and the remainder is O(x³), so the
    // integrand is bounded near 0; beyond x = 40 it is below e^{−40}·poly(u).
    auto integrand = [u](double x) -> Complex {
        if (x == 0.0) return {0.0, -u * u * u / 6.0};
        const double s = 2.0 * std::sinh(0.5 * x);
        return special::exp_i_remainder(u * x, 3) / (x * s * s);
    };
    Complex total = 0.0;
    const double cuts[] = {0.0, 1.0, 5.0, 40.0, kInf};
    for (int i = 0; i + 1 < 5; ++i) {
        QuadratureSpec spec;
        spec.domain = {cuts[i], cuts[i + 1]};
        spec.abs_tol = 1e-14;
        spec.rel_tol = 1e-13;
        total += integrate(integrand, spec).value;
    }
    return std::exp(total);
}

Complex phi1(double u) { return special::rgamma(std::polar(1.0, u) + 1.0); }

Complex phi2(double u, std::uint64_t prime_cutoff) {
    check_cutoff(prime_cutoff);
    const Complex e = std::polar(1.0, u);
    return exp_or_zero(euler_log_sum(prime_cutoff, [&](std::uint32_t p) {
        const double x = 1.0 / p;
        return (e - 1.0) * std::log1p(-x) + std::log(1.0 - x + e * x);
    }));
}

Complex phi_omega(double u, std::uint64_t prime_cutoff) {
    check_cutoff(prime_cutoff);
    const Complex e = std::polar(1.0, u);
    const Complex first = phi1(u);
    if (first == Complex(0.0)) return 0.0;
    return first * exp_or_zero(euler_log_sum(prime_cutoff, [&](std::uint32_t p) {
               return e * std::log1p(-1.0 / p) + std::log(1.0 + e / (p - 1.0));
           }));
}

Complex LimitingFunction::operator()(double u) const {
    std::uint64_t cutoff = kDefaultPrimeCutoff;
    if (auto it = params.find("cutoff"); it != params.end()) cutoff = static_cast<std::uint64_t>(it->second);
    const Complex iu(0.0, u);
    switch (id) {
        case LimitingId::RMT_M: return rmt_factor_M(iu);
        case LimitingId::ARITH_A: return arithmetic_factor_A(iu, cutoff);
        case LimitingId::SP_MSP: return sp_factor_MSp(iu);
        case LimitingId::GAMMA_EXAMPLE: return phi_gamma_example(u);
        case LimitingId::OMEGA_PHI: return phi_omega(u, cutoff);
        case LimitingId::OMEGA_PHI1: return phi1(u);
        case LimitingId::OMEGA_PHI2: return phi2(u, cutoff);
    }
    throw DomainError("unknown limiting function");
}

LimitingId parse_limiting_id(const std::string& name) {
    if (name == "M" || name == "RMT_M") return LimitingId::RMT_M;
    if (name == "A" || name == "ARITH_A") return LimitingId::ARITH_A;
    if (name == "MSp" || name == "SP_MSP") return LimitingId::SP_MSP;
    if (name == "gamma" || name == "GAMMA_EXAMPLE") return LimitingId::GAMMA_EXAMPLE;
    if (name == "omega" || name == "OMEGA_PHI") return LimitingId::OMEGA_PHI;
    if (name == "phi1" || name == "OMEGA_PHI1") return LimitingId::OMEGA_PHI1;
    if (name == "phi2" || name == "OMEGA_PHI2") return LimitingId::OMEGA_PHI2;
    throw DomainError("unknown limiting function '" + name + "'");
}

std::string to_string(LimitingId id) {
    switch (id) {
        case LimitingId::RMT_M: return "RMT_M";
        case LimitingId::ARITH_A: return "ARITH_A";
        case LimitingId::SP_MSP: return "SP_MSP";
        case LimitingId::GAMMA_EXAMPLE: return "GAMMA_EXAMPLE";
        case LimitingId::OMEGA_PHI: return "OMEGA_PHI";
        case LimitingId::OMEGA_PHI1: return "OMEGA_PHI1";
        case LimitingId::OMEGA_PHI2: return "OMEGA_PHI2";
    }
    return "?";
}

}  // namespace modphi
