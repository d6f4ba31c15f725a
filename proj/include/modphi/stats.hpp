#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace modphi {

/// sup_x |F_n(x) − F(x)| for the empirical CDF of samples.
inline double ks_one_sample(std::vector<double> samples, const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max({d, (i + 1) / n - f, f - i / n});
    }
    return d;
}

/// sup_x |F_a(x) − F_b(x)| for two empirical CDFs.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(i / na - j / nb));
    }
    return d;
}

/// Asymptotic two-sample KS critical value at level alpha (c(α)·√((n+m)/(nm))).
inline double ks_two_sample_critical(std::size_t n, std::size_t m, double alpha) {
    const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    return c * std::sqrt(static_cast<double>(n + m) / (static_cast<double>(n) * static_cast<double>(m)));
}

/// Sample mean and standard error of the mean.
struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& x) {
    MeanSe out;
    if (x.empty()) return out;
    const double n = static_cast<double>(x.size());
    double s = 0.0;
    for (double v : x) s += v;
    out.mean = s / n;
    if (x.size() > 1) {
        double ss = 0.0;
        for (double v : x) ss += (v - out.mean) * (v - out.mean);
        out.se = std::sqrt(ss / (n - 1.0) / n);
    }
    return out;
}

}  // namespace modphi
