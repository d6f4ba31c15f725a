#include "modphi/primes.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <mutex>

#include "modphi/error.hpp"
#include "modphi/parallel.hpp"

namespace modphi {

namespace {

std::vector<std::uint32_t> sieve(std::uint64_t limit) {
    std::vector<std::uint32_t> primes;
    if (limit < 2) return primes;
    std::vector<bool> composite(limit + 1, false);
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (composite[i]) continue;
        primes.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= limit; j += i) composite[j] = true;
    }
    return primes;
}

struct PrimeCache {
    std::mutex mutex;
    // Older tables are kept alive so references handed out earlier stay valid.
    std::deque<std::pair<std::uint64_t, std::vector<std::uint32_t>>> tables;
};

PrimeCache& cache() {
    static PrimeCache instance;
    return instance;
}

constexpr std::size_t kBlock = 2048;

}  // namespace

const std::vector<std::uint32_t>& primes_up_to(std::uint64_t limit) {
    if (limit > std::numeric_limits<std::uint32_t>::max()) throw BudgetError("primes_up_to: limit too large");
    auto& c = cache();
    std::lock_guard<std::mutex> lock(c.mutex);
    for (const auto& [bound, table] : c.tables) {
        if (bound == limit) return table;
    }
    c.tables.emplace_back(limit, sieve(limit));
    return c.tables.back().second;
}

Complex euler_log_sum(std::uint64_t cutoff, const std::function<Complex(std::uint32_t)>& log_factor) {
    const auto& primes = primes_up_to(cutoff);
    const std::size_t blocks = (primes.size() + kBlock - 1) / kBlock;
    std::vector<Complex> partial(blocks);
    parallel_for(blocks, [&](std::size_t b) {
        Complex sum = 0.0;
        const std::size_t end = std::min(primes.size(), (b + 1) * kBlock);
        for (std::size_t i = b * kBlock; i < end; ++i) sum += log_factor(primes[i]);
        partial[b] = sum;
    });
    Complex total = 0.0;
    for (const Complex& s : partial) {
        if (std::isinf(s.real()) && s.real() < 0.0) return {-std::numeric_limits<double>::infinity(), 0.0};
        total += s;
    }
    return total;
}

}  // namespace modphi
