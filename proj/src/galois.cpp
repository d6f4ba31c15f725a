#include "modphi/galois.hpp"

#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include "modphi/error.hpp"

namespace modphi {

namespace {

using u64 = std::uint64_t;

void fp_trim(FpPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % p); }

u64 powmod(u64 a, u64 e, u64 p) {
    u64 r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

// a mod m over F_p, m monic.
FpPoly fp_mod(FpPoly a, const FpPoly& m, std::uint32_t p) {
    fp_trim(a);
    const std::size_t dm = m.size() - 1;
    while (a.size() >= m.size()) {
        const u64 c = a.back();
        const std::size_t shift = a.size() - 1 - dm;
        for (std::size_t i = 0; i <= dm; ++i) a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + p - mulmod(c, m[i], p)) % p);
        fp_trim(a);
    }
    return a;
}

FpPoly fp_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& m, std::uint32_t p) {
    if (a.empty() || b.empty()) return {};
    FpPoly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = static_cast<std::uint32_t>((r[i + j] + mulmod(a[i], b[j], p)) % p);
    }
    return fp_mod(std::move(r), m, p);
}

FpPoly fp_powmod(FpPoly a, u64 e, const FpPoly& m, std::uint32_t p) {
    FpPoly r{1};
    a = fp_mod(std::move(a), m, p);
    while (e) {
        if (e & 1) r = fp_mulmod(r, a, m, p);
        a = fp_mulmod(a, a, m, p);
        e >>= 1;
    }
    return r;
}

FpPoly fp_gcd(FpPoly a, FpPoly b, std::uint32_t p) {
    fp_trim(a);
    fp_trim(b);
    while (!b.empty()) {
        // make b monic, then a mod b
        const u64 inv = powmod(b.back(), p - 2, p);
        for (auto& c : b) c = static_cast<std::uint32_t>(mulmod(c, inv, p));
        a = fp_mod(std::move(a), b, p);
        std::swap(a, b);
    }
    return a;
}

std::vector<u64> prime_factors(u64 n) {
    std::vector<u64> out;
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

u64 ipow(u64 b, int e) {
    u64 r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

bool is_irreducible_fp(const FpPoly& f_in, std::uint32_t p) {
    FpPoly f = f_in;
    fp_trim(f);
    if (f.size() < 2 || f.back() != 1) throw DomainError("is_irreducible_fp: expects a monic polynomial of degree >= 1");
    const int k = static_cast<int>(f.size()) - 1;
    if (k == 1) return true;
    const FpPoly x{0, 1};
    auto frob = [&](int j) {
        FpPoly r = x;
        for (int i = 0; i < j; ++i) r = fp_powmod(r, p, f, p);
        return r;
    };
    auto minus_x = [&](FpPoly a) {
        if (a.size() < 2) a.resize(2, 0);
        a[1] = (a[1] + p - 1) % p;
        fp_trim(a);
        return a;
    };
    if (!minus_x(frob(k)).empty()) return false;
    for (u64 r : prime_factors(static_cast<u64>(k))) {
        const FpPoly g = fp_gcd(f, minus_x(frob(k / static_cast<int>(r))), p);
        if (g.size() != 1) return false;
    }
    return true;
}

FpPoly least_irreducible(std::uint32_t p, int k) {
    if (k < 1) throw DomainError("least_irreducible: degree must be >= 1");
    const u64 count = ipow(p, k);
    for (u64 idx = 0; idx < count; ++idx) {
        FpPoly f(k + 1, 0);
        u64 v = idx;
        for (int i = 0; i < k; ++i) {
            f[i] = static_cast<std::uint32_t>(v % p);
            v /= p;
        }
        f[k] = 1;
        if (is_irreducible_fp(f, p)) return f;
    }
    throw InconsistencyError("no irreducible polynomial found");
}

FiniteField::FiniteField(std::uint32_t p, int k) : p_(p), k_(k) {
    if (p < 3 || !is_prime(p)) throw DomainError("finite field: p must be an odd prime");
    if (k < 1) throw DomainError("finite field: k must be >= 1");
    long double qq = 1.0L;
    for (int i = 0; i < k; ++i) qq *= p;
    if (qq > static_cast<long double>(kMaxFieldSize))
        throw BudgetError("finite field: q = p^k exceeds the table budget of " + std::to_string(kMaxFieldSize));
    q_ = ipow(p, k);
    modulus_ = least_irreducible(p, k);

    const auto factors = prime_factors(q_ - 1);
    for (u64 c = 1; c < q_; ++c) {
        const FpPoly cp = to_poly(static_cast<Elem>(c));
        bool ok = true;
        for (u64 r : factors) {
            const FpPoly t = fp_powmod(cp, (q_ - 1) / r, modulus_, p_);
            if (t.size() == 1 && t[0] == 1) {
                ok = false;
                break;
            }
        }
        if (ok) {
            primitive_ = static_cast<Elem>(c);
            break;
        }
    }

    exp_.resize(q_ - 1);
    log_.assign(q_, 0);
    const FpPoly g = to_poly(primitive_);
    std::vector<std::pair<std::size_t, std::uint32_t>> g_terms;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g[i]) g_terms.push_back({i, g[i]});
    const std::size_t gdeg = g.empty() ? 0 : g.size() - 1;

    std::vector<u64> cur(k_, 0), prod(k_ + gdeg, 0);
    cur[0] = 1;
    for (u64 i = 0; i + 1 < q_; ++i) {
        u64 idx = 0;
        for (int d = k_ - 1; d >= 0; --d) idx = idx * p_ + cur[d];
        exp_[i] = static_cast<std::uint32_t>(idx);
        log_[idx] = static_cast<std::uint32_t>(i);
        std::fill(prod.begin(), prod.end(), 0);
        for (int d = 0; d < k_; ++d) {
            if (!cur[d]) continue;
            for (auto [e, c] : g_terms) prod[d + e] = (prod[d + e] + cur[d] * c) % p_;
        }
        for (std::size_t top = prod.size(); top-- > static_cast<std::size_t>(k_);) {
            const u64 c = prod[top];
            if (!c) continue;
            prod[top] = 0;
            const std::size_t shift = top - k_;
            for (int d = 0; d < k_; ++d) prod[shift + d] = (prod[shift + d] + (p_ - modulus_[d]) * c) % p_;
        }
        for (int d = 0; d < k_; ++d) cur[d] = prod[d];
    }
    if (q_ > 2) {
        // The walk must visit every nonzero element exactly once.
        for (u64 a = 1; a < q_; ++a) {
            if (exp_[log_[a]] != a) throw InconsistencyError("finite field: primitive element search failed");
        }
    }

    zech_.resize(q_ - 1);
    for (u64 i = 0; i + 1 < q_; ++i) {
        const u64 x = exp_[i];
        const u64 c0 = x % p_;
        const u64 y = x - c0 + (c0 + 1) % p_;
        zech_[i] = y == 0 ? -1 : static_cast<std::int32_t>(log_[y]);
    }
}

FiniteField::Elem FiniteField::add(Elem a, Elem b) const {
    if (a == 0) return b;
    if (b == 0) return a;
    const u64 n = q_ - 1;
    const u64 la = log_[a], lb = log_[b];
    const std::int32_t z = zech_[(lb + n - la) % n];
    if (z < 0) return 0;
    return exp_[(la + static_cast<u64>(z)) % n];
}

FiniteField::Elem FiniteField::neg(Elem a) const {
    if (a == 0) return 0;
    const u64 n = q_ - 1;
    return exp_[(log_[a] + n / 2) % n];
}

FiniteField::Elem FiniteField::mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[(static_cast<u64>(log_[a]) + log_[b]) % (q_ - 1)];
}

FiniteField::Elem FiniteField::inv(Elem a) const {
    if (a == 0) throw DomainError("finite field: division by zero");
    const u64 n = q_ - 1;
    return exp_[(n - log_[a]) % n];
}

FiniteField::Elem FiniteField::pow(Elem a, std::uint64_t e) const {
    if (e == 0) return 1;
    if (a == 0) return 0;
    const u64 n = q_ - 1;
    return exp_[mulmod(log_[a], e % n, n)];
}

FiniteField::Elem FiniteField::from_int(long long n) const {
    const long long r = n % static_cast<long long>(p_);
    return static_cast<Elem>(r < 0 ? r + p_ : r);
}

FpPoly FiniteField::to_poly(Elem a) const {
    FpPoly c(k_, 0);
    u64 v = a;
    for (int i = 0; i < k_; ++i) {
        c[i] = static_cast<std::uint32_t>(v % p_);
        v /= p_;
    }
    return c;
}

FiniteField::Elem FiniteField::from_poly(const FpPoly& c) const {
    const FpPoly r = fp_mod(c, modulus_, p_);
    u64 idx = 0;
    for (std::size_t d = r.size(); d-- > 0;) idx = idx * p_ + r[d];
    return static_cast<Elem>(idx);
}

std::shared_ptr<const FiniteField> finite_field(std::uint32_t p, int k) {
    static std::mutex mutex;
    static std::map<std::pair<std::uint32_t, int>, std::shared_ptr<const FiniteField>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{p, k}];
    if (!slot) slot = std::make_shared<const FiniteField>(p, k);
    return slot;
}

const std::vector<FiniteField::Elem>& field_embedding(std::uint32_t p, int k, int n) {
    static std::mutex mutex;
    static std::map<std::tuple<std::uint32_t, int, int>, std::vector<FiniteField::Elem>> cache;
    if (n < 1) throw DomainError("field_embedding: n must be >= 1");
    const auto small = finite_field(p, k);
    const auto big = finite_field(p, k * n);
    std::lock_guard lock(mutex);
    auto it = cache.find({p, k, n});
    if (it != cache.end()) return it->second;

    const u64 q = small->q(), Q = big->q();
    std::vector<FiniteField::Elem> map(q, 0);
    if (n == 1) {
        for (u64 a = 0; a < q; ++a) map[a] = static_cast<FiniteField::Elem>(a);
        return cache.emplace(std::make_tuple(p, k, n), std::move(map)).first->second;
    }
    // Minimal polynomial of the primitive element ζ of the small field:
    // ∏_{i<k}(T − ζ^{p^i}); its coefficients lie in the prime field.
    const auto& S = *small;
    FqPoly m{1};
    FiniteField::Elem conj = S.primitive();
    for (int i = 0; i < k; ++i) {
        FqPoly next(m.size() + 1, 0);
        for (std::size_t j = 0; j < m.size(); ++j) {
            next[j + 1] = S.add(next[j + 1], m[j]);
            next[j] = S.sub(next[j], S.mul(conj, m[j]));
        }
        m = std::move(next);
        conj = S.pow(conj, p);
    }
    for (auto c : m)
        if (c >= p) throw InconsistencyError("field_embedding: minimal polynomial not over the prime field");

    const auto& B = *big;
    const u64 step = (Q - 1) / (q - 1);
    std::int64_t found = -1;
    for (u64 j = 1; j < q - 1; ++j) {
        const FiniteField::Elem beta = B.exp(j * step);
        if (poly_eval(B, m, beta) == 0) {
            found = static_cast<std::int64_t>(j * step);
            break;
        }
    }
    if (found < 0) throw InconsistencyError("field_embedding: no root of the minimal polynomial found");
    for (u64 i = 0; i + 1 < q; ++i) map[S.exp(i)] = B.exp(i * static_cast<u64>(found));
    return cache.emplace(std::make_tuple(p, k, n), std::move(map)).first->second;
}

void trim(FqPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

FqPoly derivative(const FiniteField& F, const FqPoly& f) {
    if (f.size() <= 1) return {};
    FqPoly d(f.size() - 1);
    for (std::size_t i = 1; i < f.size(); ++i) d[i - 1] = F.mul(F.from_int(static_cast<long long>(i)), f[i]);
    trim(d);
    return d;
}

FqPoly poly_mod(const FiniteField& F, FqPoly a, const FqPoly& b) {
    if (b.empty()) throw DomainError("poly_mod: division by the zero polynomial");
    trim(a);
    const auto lead_inv = F.inv(b.back());
    const std::size_t db = b.size() - 1;
    while (a.size() >= b.size()) {
        const auto c = F.mul(a.back(), lead_inv);
        const std::size_t shift = a.size() - 1 - db;
        for (std::size_t i = 0; i <= db; ++i) a[shift + i] = F.sub(a[shift + i], F.mul(c, b[i]));
        trim(a);
    }
    return a;
}

FqPoly poly_gcd(const FiniteField& F, FqPoly a, FqPoly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        a = poly_mod(F, std::move(a), b);
        std::swap(a, b);
    }
    if (!a.empty()) {
        const auto inv = F.inv(a.back());
        for (auto& c : a) c = F.mul(c, inv);
    }
    return a;
}

FiniteField::Elem poly_eval(const FiniteField& F, const FqPoly& f, FiniteField::Elem x) {
    FiniteField::Elem r = 0;
    for (std::size_t i = f.size(); i-- > 0;) r = F.add(F.mul(r, x), f[i]);
    return r;
}

}  // namespace modphi
