#include "modphi/rmt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "modphi/error.hpp"
#include "modphi/parallel.hpp"
#include "modphi/stats.hpp"

namespace modphi {

namespace {

constexpr std::size_t kUnitaryStreams = 64;
constexpr std::size_t kSymplecticChains = 16;
constexpr int kMaxRetries = 10;

void require_samples(std::size_t samples) {
    if (samples < 1000) throw DomainError("Monte Carlo moments need at least 1000 samples");
}

}  // namespace

ComplexMatrix haar_unitary(int N, Rng& rng) {
    if (N < 1) throw DomainError("haar_unitary: N must be >= 1");
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    ComplexMatrix z(N, N);
    for (int j = 0; j < N; ++j)
        for (int i = 0; i < N; ++i) z(i, j) = Complex(normal(rng), normal(rng));
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ();
    const ComplexMatrix& r = qr.matrixQR();
    for (int j = 0; j < N; ++j) {
        const Complex d = r(j, j);
        const double a = std::abs(d);
        q.col(j) *= a > 0.0 ? d / a : Complex(1.0);
    }
    return q;
}

double unitarity_residual(const ComplexMatrix& u) {
    const ComplexMatrix e = u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols());
    return e.cwiseAbs().maxCoeff();
}

Complex det_one_minus(const ComplexMatrix& x) {
    const ComplexMatrix m = ComplexMatrix::Identity(x.rows(), x.cols()) - x;
    return m.partialPivLu().determinant();
}

Complex det_one_minus_eigen(const ComplexMatrix& x) {
    Eigen::ComplexEigenSolver<ComplexMatrix> es(x, false);
    Complex p(1.0);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) p *= 1.0 - es.eigenvalues()(i);
    return p;
}

double log_abs_det_one_minus(const ComplexMatrix& x) {
    const ComplexMatrix m = ComplexMatrix::Identity(x.rows(), x.cols()) - x;
    Eigen::PartialPivLU<ComplexMatrix> lu(m);
    const auto& f = lu.matrixLU();
    double s = 0.0;
    for (Eigen::Index i = 0; i < f.rows(); ++i) {
        const double a = std::abs(f(i, i));
        if (a == 0.0) return -std::numeric_limits<double>::infinity();
        s += std::log(a);
    }
    return s;
}

double det_one_minus(const std::vector<double>& angles) {
    double p = 1.0;
    for (double t : angles) p *= 2.0 - 2.0 * std::cos(t);
    return p;
}

double verblunsky_log_abs_det_one_minus(int N, Rng& rng) {
    if (N < 1) throw DomainError("verblunsky sampler: N must be >= 1");
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    // Φ_{k+1}(1) = Φ_k(1) − conj(α_k)·conj(Φ_k(1)); the phase of conj(Φ_k)/Φ_k is
    // absorbed by the uniform phase of α_k, so each step multiplies by 1 − r_k e^{iω}.
    double s = 0.0;
    for (int k = 0; k < N; ++k) {
        const int b = N - k - 1;
        const double r = b == 0 ? 1.0 : std::sqrt(1.0 - std::pow(1.0 - unif(rng), 1.0 / b));
        const double w = 2.0 * kPi * unif(rng);
        const double m = std::abs(Complex(1.0 - r * std::cos(w), -r * std::sin(w)));
        if (m == 0.0) return -std::numeric_limits<double>::infinity();
        s += std::log(m);
    }
    return s;
}

double sin2_inverse_cdf(double v) {
    if (v <= 0.0) return 0.0;
    if (v >= 1.0) return kPi;
    double lo = 0.0, hi = kPi;
    double t = kPi * v;
    for (int it = 0; it < 100; ++it) {
        const double f = (t - std::sin(t) * std::cos(t)) / kPi - v;
        if (f > 0.0) hi = t; else lo = t;
        const double s = std::sin(t);
        const double df = 2.0 * s * s / kPi;
        double next = df > 0.0 ? t - f / df : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - t) < 1e-15 * kPi) return next;
        t = next;
    }
    return t;
}

SymplecticSampler::SymplecticSampler(int g, std::uint64_t seed, McmcOptions options)
    : g_(g), rng_(seed), options_(options) {
    if (g < 1) throw DomainError("symplectic sampler: g must be >= 1");
    if (options_.burn_in < 0 || options_.thinning < 0) throw DomainError("symplectic sampler: negative burn-in/thinning");
    if (options_.thinning == 0) options_.thinning = g;
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    theta_.resize(g);
    cos_.resize(g);
    for (int j = 0; j < g; ++j) {
        theta_[j] = sin2_inverse_cdf(unif(rng_));
        cos_[j] = std::cos(theta_[j]);
    }
    for (int s = 0; s < options_.burn_in; ++s) sweep();
}

void SymplecticSampler::sweep() {
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int j = 0; j < g_; ++j) {
        const double t = sin2_inverse_cdf(unif(rng_));
        const double c = std::cos(t);
        double ratio = 1.0;
        for (int k = 0; k < g_; ++k) {
            if (k == j) continue;
            const double num = c - cos_[k];
            const double den = cos_[j] - cos_[k];
            ratio *= (num * num) / (den * den);
        }
        ++proposed_;
        // g = 1 never rejects; the uniform is still drawn so streams stay aligned.
        const double a = unif(rng_);
        if (a < ratio) {
            theta_[j] = t;
            cos_[j] = c;
            ++accepted_;
        }
    }
}

std::vector<double> SymplecticSampler::next() {
    for (int s = 0; s < options_.thinning; ++s) sweep();
    return theta_;
}

double SymplecticSampler::acceptance_rate() const {
    return proposed_ == 0 ? 1.0 : static_cast<double>(accepted_) / static_cast<double>(proposed_);
}

std::vector<std::vector<double>> symplectic_eigenangles(int g, std::size_t count, std::uint64_t seed,
                                                        McmcOptions options) {
    if (g < 1) throw DomainError("symplectic_eigenangles: g must be >= 1");
    std::vector<std::vector<double>> out(count);
    const std::size_t chains = std::max<std::size_t>(1, std::min(kSymplecticChains, count));
    std::vector<double> rates(chains, 1.0);
    parallel_for(chains, [&](std::size_t c) {
        SymplecticSampler sampler(g, stream_seed(seed, c), options);
        for (std::size_t j = c; j < count; j += chains) out[j] = sampler.next();
        rates[c] = sampler.acceptance_rate();
    });
    if (g >= 2) {
        for (double r : rates) {
            if (r < 0.1 || r > 0.9)
                throw BudgetError("symplectic sampler: acceptance rate " + std::to_string(r) + " outside [0.1, 0.9]", r, 0.0);
        }
    }
    return out;
}

std::vector<MomentEstimate> unitary_moment_mc(int N, const std::vector<double>& u, std::size_t samples,
                                              std::uint64_t seed, UnitarySampler sampler) {
    if (N < 1) throw DomainError("unitary_moment_mc: N must be >= 1");
    require_samples(samples);
    // L_j = log|det(1 − X)|² per draw; rejected draws are redrawn up to the retry cap.
    std::vector<double> logdet(samples);
    std::vector<std::size_t> rejected(kUnitaryStreams, 0);
    parallel_for(kUnitaryStreams, [&](std::size_t s) {
        Rng rng = make_stream(seed, s);
        for (std::size_t j = s; j < samples; j += kUnitaryStreams) {
            double l = -std::numeric_limits<double>::infinity();
            for (int attempt = 0; attempt <= kMaxRetries && !std::isfinite(l); ++attempt) {
                l = 2.0 * (sampler == UnitarySampler::MATRIX ? log_abs_det_one_minus(haar_unitary(N, rng))
                                                             : verblunsky_log_abs_det_one_minus(N, rng));
                if (!std::isfinite(l)) ++rejected[s];
            }
            if (!std::isfinite(l))
                throw BudgetError("unitary_moment_mc: zero determinant persisted past the retry cap");
            logdet[j] = l;
        }
    });
    std::size_t total_rejected = 0;
    for (auto r : rejected) total_rejected += r;

    std::vector<MomentEstimate> out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] == 0.0) {
            out[i].value = 1.0;
            out[i].rejected = total_rejected;
            continue;
        }
        std::vector<double> re(samples), im(samples);
        for (std::size_t j = 0; j < samples; ++j) {
            re[j] = std::cos(u[i] * logdet[j]);
            im[j] = std::sin(u[i] * logdet[j]);
        }
        const auto mr = mean_se(re), mi = mean_se(im);
        const double scale = std::exp(u[i] * u[i] * std::log(static_cast<double>(N)));
        out[i].value = scale * Complex(mr.mean, mi.mean);
        out[i].se = scale * Complex(mr.se, mi.se);
        out[i].rejected = total_rejected;
    }
    return out;
}

MomentEstimate unitary_moment_mc(int N, double u, std::size_t samples, std::uint64_t seed,
                                 UnitarySampler sampler) {
    return unitary_moment_mc(N, std::vector<double>{u}, samples, seed, sampler).front();
}

MomentEstimate symplectic_moment_mc(int g, double lambda, std::size_t samples, std::uint64_t seed,
                                    McmcOptions options) {
    if (!(lambda > 0.0)) throw DomainError("symplectic_moment_mc: lambda must be > 0");
    require_samples(samples);
    const auto draws = symplectic_eigenangles(g, samples, seed, options);
    std::vector<double> v(samples);
    for (std::size_t j = 0; j < samples; ++j) v[j] = std::pow(det_one_minus(draws[j]), lambda);
    const auto m = mean_se(v);
    const double scale = std::pow(static_cast<double>(g), -0.5 * (lambda * lambda + lambda));
    MomentEstimate out;
    out.value = scale * m.mean;
    out.se = scale * m.se;
    return out;
}

}  // namespace modphi
