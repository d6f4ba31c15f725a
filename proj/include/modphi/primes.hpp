#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "modphi/special.hpp"

namespace modphi {

/// All primes ≤ limit (Eratosthenes). Results are cached process-wide and
/// shared; the returned reference stays valid for the life of the process.
const std::vector<std::uint32_t>& primes_up_to(std::uint64_t limit);

/// Σ_{p ≤ cutoff} log_factor(p), accumulated in blocks of primes evaluated in
/// parallel and reduced in prime order. A term with real part −∞ (a local
/// factor that is exactly zero) is propagated so that exp() of the result is 0.
Complex euler_log_sum(std::uint64_t cutoff, const std::function<Complex(std::uint32_t)>& log_factor);

}  // namespace modphi
