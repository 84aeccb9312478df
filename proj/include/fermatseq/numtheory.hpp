#pragma once

// Integer arithmetic around Fermat quotients: quotient evaluation, primitive
// roots modulo p^2, the coset partition D_0..D_{p-1} of Z_{p^2}^*, Legendre
// residue sets and Wieferich detection.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "errors.hpp"

namespace fermatseq {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

// All mod-p^2 arithmetic keeps values in u64 and products in u128, so any
// modulus below 2^64 is safe; this guard keeps p^2 itself in u64.
inline constexpr u64 kMaxArithPrime = (u64(1) << 32) - 1;

// build_context allocates a table of p^2 entries.
inline constexpr u64 kMaxContextPrime = 4096;

inline u64 mulmod(u64 a, u64 b, u64 n) { return u64(u128(a) * b % n); }

inline u64 powmod(u64 a, u64 e, u64 n) {
    u64 r = 1 % n;
    a %= n;
    while (e > 0) {
        if (e & 1) r = mulmod(r, a, n);
        a = mulmod(a, a, n);
        e >>= 1;
    }
    return r;
}

inline bool is_prime(u64 n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (u64 d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

inline bool is_odd_prime(u64 n) { return n > 2 && is_prime(n); }

inline void require_odd_prime(u64 p, const char* who) {
    if (!is_odd_prime(p)) throw parameter_error(std::string(who) + ": p=" + std::to_string(p) + " is not an odd prime");
    if (p > kMaxArithPrime) throw parameter_error(std::string(who) + ": p exceeds the native arithmetic cap");
}

// Distinct prime factors, trial division. Adequate for p-1 and p(p-1) sizes.
inline std::vector<u64> distinct_prime_factors(u64 n) {
    std::vector<u64> out;
    for (u64 d = 2; d * d <= n; d += (d == 2 ? 1 : 2)) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

inline u64 euler_phi(u64 n) {
    u64 phi = n;
    for (u64 q : distinct_prime_factors(n)) phi -= phi / q;
    return phi;
}

// Least t >= 1 with a^t = 1 (mod n): start from phi(n) and strip prime
// factors while the power stays 1.
inline u64 multiplicative_order(u64 a, u64 n) {
    if (n < 2) throw parameter_error("multiplicative_order: modulus must be >= 2");
    a %= n;
    if (std::gcd(a, n) != 1) throw parameter_error("multiplicative_order: gcd(a, n) != 1");
    u64 t = euler_phi(n);
    for (u64 q : distinct_prime_factors(t)) {
        while (t % q == 0 && powmod(a, t / q, n) == 1) t /= q;
    }
    return t;
}

// q_p(u) in [0, p): the residue of (u^{p-1} - 1)/p, and 0 on multiples of p.
// Evaluated as u^{p-1} mod p^2 followed by an exact division by p.
inline u64 fermat_quotient(u64 p, u64 u) {
    require_odd_prime(p, "fermat_quotient");
    const u64 p2 = p * p;
    u %= p2;
    if (u % p == 0) return 0;
    const u64 w = powmod(u, p - 1, p2);
    if ((w - 1) % p != 0) throw invariant_error("fermat_quotient: u^(p-1) mod p^2 not congruent 1 mod p");
    return (w - 1) / p;
}

inline bool is_wieferich(u64 p) {
    require_odd_prime(p, "is_wieferich");
    return powmod(2, p - 1, p * p) == 1;
}

// Smallest g >= 2 of order p(p-1) modulo p^2; deterministic so every report
// and cache entry names the same generator.
inline u64 find_primitive_root_mod_p2(u64 p) {
    require_odd_prime(p, "find_primitive_root_mod_p2");
    const u64 p2 = p * p;
    const u64 target = p * (p - 1);
    for (u64 g = 2; g < p2; ++g) {
        if (g % p == 0) continue;
        if (multiplicative_order(g, p2) == target) return g;
    }
    throw invariant_error("find_primitive_root_mod_p2: no generator found");
}

// Euler criterion, mapped onto {-1, 0, +1}.
inline int legendre_symbol(u64 a, u64 p) {
    require_odd_prime(p, "legendre_symbol");
    const u64 r = powmod(a % p, (p - 1) / 2, p);
    if (r == 0) return 0;
    if (r == 1) return 1;
    if (r == p - 1) return -1;
    throw invariant_error("legendre_symbol: Euler criterion out of range");
}

// Precomputed arithmetic of one prime: generator g, delta = q_p(g), the full
// coset partition of [0, p^2) and the quadratic residue split of Z_p^*.
// Immutable once built; safe to share read-only.
struct FermatContext {
    u64 p = 0;
    u64 g = 0;
    u64 delta = 0;  // q_p(g), never 0 for a primitive root

    // coset_of[u] = l for u in D_l; equal to p (the marker) for u in P.
    std::vector<std::uint32_t> coset_of;
    std::vector<std::vector<u64>> cosets;  // D_0 .. D_{p-1}, ascending

    std::vector<u64> quadratic_residues;     // Q, subset of [1, p)
    std::vector<u64> quadratic_nonresidues;  // N

    u64 period() const { return p * p; }
    std::uint32_t multiple_of_p_marker() const { return std::uint32_t(p); }
    bool in_p_set(u64 u) const { return coset_of[u % period()] == p; }
    bool is_nonresidue(u64 l) const {
        return std::binary_search(quadratic_nonresidues.begin(), quadratic_nonresidues.end(), l);
    }
};

// Builds the partition by evaluating q_p(u) for every u < p^2, then
// cross-checks it against the independent generator walk D_{j*delta} = g^j D_0
// and the coset cardinalities before returning.
inline FermatContext build_context(u64 p) {
    require_odd_prime(p, "build_context");
    if (p > kMaxContextPrime)
        throw capacity_error("build_context: p=" + std::to_string(p) + " exceeds the coset-table cap p <= " +
                             std::to_string(kMaxContextPrime));

    FermatContext ctx;
    ctx.p = p;
    const u64 p2 = p * p;
    ctx.g = find_primitive_root_mod_p2(p);
    ctx.delta = fermat_quotient(p, ctx.g);
    if (ctx.delta == 0) throw invariant_error("build_context: primitive root has zero Fermat quotient");

    ctx.coset_of.assign(p2, 0);
    ctx.cosets.assign(p, {});
    for (u64 u = 0; u < p2; ++u) {
        if (u % p == 0) {
            ctx.coset_of[u] = ctx.multiple_of_p_marker();
        } else {
            const u64 l = fermat_quotient(p, u);
            ctx.coset_of[u] = std::uint32_t(l);
            ctx.cosets[l].push_back(u);
        }
    }

    for (u64 l = 0; l < p; ++l) {
        if (ctx.cosets[l].size() != p - 1)
            throw invariant_error("build_context: |D_" + std::to_string(l) + "| = " +
                                  std::to_string(ctx.cosets[l].size()) + ", expected p-1");
    }

    // Independent route: walk g^t and bucket exponents t = kp + j into
    // D_{j*delta mod p}; both partitions must coincide.
    {
        std::vector<std::vector<u64>> walk(p);
        u64 acc = 1;
        for (u64 t = 0; t < p * (p - 1); ++t) {
            const u64 j = t % p;
            walk[(j * ctx.delta) % p].push_back(acc);
            acc = mulmod(acc, ctx.g, p2);
        }
        for (u64 l = 0; l < p; ++l) {
            std::sort(walk[l].begin(), walk[l].end());
            walk[l].erase(std::unique(walk[l].begin(), walk[l].end()), walk[l].end());
            if (walk[l] != ctx.cosets[l])
                throw invariant_error("build_context: generator walk disagrees with q_p partition at l=" +
                                      std::to_string(l));
        }
    }

    for (u64 a = 1; a < p; ++a) {
        const int chi = legendre_symbol(a, p);
        if (chi == 1)
            ctx.quadratic_residues.push_back(a);
        else
            ctx.quadratic_nonresidues.push_back(a);
    }
    if (ctx.quadratic_residues.size() != (p - 1) / 2 || ctx.quadratic_nonresidues.size() != (p - 1) / 2)
        throw invariant_error("build_context: |Q| or |N| differs from (p-1)/2");

    return ctx;
}

}  // namespace fermatseq
