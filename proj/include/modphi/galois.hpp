#pragma once

#include <cstdint>
#include <memory>
#include <vector>

namespace modphi {

/// Polynomial over F_p, coefficients low → high, each in [0, p).
using FpPoly = std::vector<std::uint32_t>;

/// Rabin irreducibility test for a monic polynomial over F_p.
bool is_irreducible_fp(const FpPoly& f, std::uint32_t p);

/// Lexicographically least monic irreducible of degree k over F_p, ordering
/// the non-leading coefficients (c_{k−1}, …, c_0) lexicographically.
FpPoly least_irreducible(std::uint32_t p, int k);

bool is_prime(std::uint64_t n);

/// Largest field the library builds tables for.
inline constexpr std::uint64_t kMaxFieldSize = 10000000;

/// F_q = F_p[T]/(m) with m = least_irreducible(p, k). An element is encoded by
/// the index Σ c_i p^i of its coefficient vector, so 0 and 1 are the usual zero
/// and one and indices < p form the prime field. Multiplication goes through
/// discrete-log tables for a primitive element, addition through Zech logs.
class FiniteField {
public:
    using Elem = std::uint32_t;

    FiniteField(std::uint32_t p, int k);

    std::uint32_t p() const { return p_; }
    int k() const { return k_; }
    std::uint64_t q() const { return q_; }
    const FpPoly& modulus() const { return modulus_; }
    Elem primitive() const { return primitive_; }

    Elem add(Elem a, Elem b) const;
    Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
    Elem neg(Elem a) const;
    Elem mul(Elem a, Elem b) const;
    Elem inv(Elem a) const;  // DomainError on 0
    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
    Elem pow(Elem a, std::uint64_t e) const;
    /// Image of an integer in the prime field.
    Elem from_int(long long n) const;

    /// Discrete log (a ≠ 0) and its inverse.
    std::uint32_t log(Elem a) const { return log_[a]; }
    Elem exp(std::uint64_t i) const { return exp_[i % (q_ - 1)]; }

    /// Quadratic character: 0 at 0, +1 on squares, −1 otherwise (the parity of
    /// the discrete log, the primitive element being a non-square).
    int chi(Elem a) const { return a == 0 ? 0 : ((log_[a] & 1u) ? -1 : 1); }

    FpPoly to_poly(Elem a) const;
    Elem from_poly(const FpPoly& c) const;

private:
    std::uint32_t p_;
    int k_;
    std::uint64_t q_;
    FpPoly modulus_;
    Elem primitive_ = 1;
    std::vector<std::uint32_t> exp_;   // size q − 1
    std::vector<std::uint32_t> log_;   // size q, log_[0] unused
    std::vector<std::int32_t> zech_;   // log(1 + g^i), −1 when 1 + g^i = 0
};

/// Shared, cached instance (construction builds O(q) tables).
std::shared_ptr<const FiniteField> finite_field(std::uint32_t p, int k);

/// A field embedding F_{p^k} → F_{p^{kn}} as an index map of size p^k.
/// Cached per (p, k, n).
const std::vector<FiniteField::Elem>& field_embedding(std::uint32_t p, int k, int n);

/// Polynomials over F_q: element indices, low → high, no trailing zeros
/// except for the zero polynomial (empty).
using FqPoly = std::vector<FiniteField::Elem>;

void trim(FqPoly& f);
FqPoly derivative(const FiniteField& F, const FqPoly& f);
/// Remainder of a by b (b ≠ 0).
FqPoly poly_mod(const FiniteField& F, FqPoly a, const FqPoly& b);
/// Monic gcd.
FqPoly poly_gcd(const FiniteField& F, FqPoly a, FqPoly b);
FiniteField::Elem poly_eval(const FiniteField& F, const FqPoly& f, FiniteField::Elem x);

}  // namespace modphi
