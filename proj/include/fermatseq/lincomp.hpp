#pragma once

// Three independent linear-complexity computations for one period of a binary
// sequence: Berlekamp-Massey synthesis, the gcd formula
// L = T - deg gcd(x^T - 1, S(x)), and the spectral count of nonzero DFT
// coefficients (Blahut). All three must agree; the acceptance suite checks
// that across every generated family.

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "gf2x.hpp"
#include "sequences.hpp"

namespace fermatseq {

struct LfsrProfile {
    u64 L = 0;
    Gf2Poly connection;  // 1 + c_1 x + ... + c_L x^L
};

// Massey's LFSR synthesis over F_2, fed two concatenated periods so the
// result is the complexity of the periodic extension, then re-checked by
// running the recurrence across the period wrap.
inline LfsrProfile berlekamp_massey_period(std::span<const std::uint8_t> period) {
    if (period.empty()) throw parameter_error("berlekamp_massey: empty period");
    const std::size_t T = period.size();
    auto bit = [&](std::size_t i) { return period[i % T] & 1; };

    Gf2Poly C = Gf2Poly::one();
    Gf2Poly B = Gf2Poly::one();
    u64 L = 0;
    std::size_t shift = 1;
    for (std::size_t n = 0; n < 2 * T; ++n) {
        unsigned d = bit(n);
        for (u64 i = 1; i <= L; ++i)
            if (C.coeff(i)) d ^= bit(n - i);
        if (d) {
            const Gf2Poly tmp = C;
            C += B.shifted_left(shift);
            if (2 * L <= n) {
                L = u64(n) + 1 - L;
                B = tmp;
                shift = 1;
            } else {
                ++shift;
            }
        } else {
            ++shift;
        }
    }

    if (L > T) throw invariant_error("berlekamp_massey: L exceeded the period length");
    if (C.degree() > long(L)) throw invariant_error("berlekamp_massey: connection degree exceeds L");
    // Stabilization check: the recurrence must hold on the periodic extension,
    // including across the wrap from one period into the next.
    for (std::size_t j = L; j < 2 * T + L; ++j) {
        unsigned acc = 0;
        for (u64 i = 0; i <= L; ++i)
            if (C.coeff(i)) acc ^= bit(j - i);
        if (acc) throw invariant_error("berlekamp_massey: synthesized LFSR fails at position " + std::to_string(j));
    }
    return {L, C};
}

inline LfsrProfile berlekamp_massey(const BinarySequence& seq) {
    return berlekamp_massey_period(std::span<const std::uint8_t>(seq.bits));
}

// L = T - deg gcd(x^T - 1, S(x)); the zero sequence yields 0 through the
// gcd(f, 0) = f convention.
inline u64 lc_gcd_period(std::span<const std::uint8_t> period) {
    if (period.empty()) throw parameter_error("lc_gcd: empty period");
    const std::size_t T = period.size();
    Gf2Poly S;
    for (std::size_t u = 0; u < T; ++u)
        if (period[u] & 1) S.set_coeff(u, true);
    Gf2Poly xT1 = Gf2Poly::monomial(T);
    xT1 += Gf2Poly::one();
    return u64(T) - u64(poly_gcd(xT1, S).degree());
}

inline u64 lc_gcd(const BinarySequence& seq) { return lc_gcd_period(std::span<const std::uint8_t>(seq.bits)); }

struct DftSpectrum {
    FieldElem beta;
    std::vector<FieldElem> rho;  // rho_i = sum_u s_u beta^{-iu}

    u64 size() const { return u64(rho.size()); }
};

// Naive O(T^2) transform over GF(2^m) from a precomputed table of the T
// powers of beta. Inversion is spot-checked on a handful of positions; the
// full-period inverse is exercised by tests.
inline DftSpectrum dft_period(std::span<const std::uint8_t> period, const PowerTable& beta_pow) {
    const u64 T = beta_pow.order();
    if (period.size() != T) throw parameter_error("dft: period length != order of beta");

    DftSpectrum sp;
    sp.beta = beta_pow.base();
    sp.rho.reserve(T);
    const FieldCtx* fld = sp.beta.ctx();
    for (u64 i = 0; i < T; ++i) {
        FieldElem acc = FieldElem::zero(fld);
        for (u64 u = 0; u < T; ++u) {
            if (period[u] & 1) acc += beta_pow[(T - (i * u) % T) % T];
        }
        sp.rho.push_back(acc);
    }

    for (u64 u : {u64(0), u64(1), T / 2, T - 1}) {
        FieldElem acc = FieldElem::zero(fld);
        for (u64 i = 0; i < T; ++i) {
            if (!sp.rho[i].is_zero()) acc += sp.rho[i] * beta_pow[i * u];
        }
        const bool want = (period[u] & 1) != 0;
        if (acc.is_one() != want || (!acc.is_zero() && !acc.is_one()))
            throw invariant_error("dft: inverse transform mismatch at u=" + std::to_string(u));
    }
    return sp;
}

inline void check_order(const FieldElem& beta, u64 T, const char* who) {
    if (T == 0) throw parameter_error(std::string(who) + ": T must be positive");
    if (!beta.pow(T).is_one()) throw parameter_error(std::string(who) + ": beta^T != 1");
    for (u64 r : distinct_prime_factors(T))
        if (beta.pow(T / r).is_one()) throw parameter_error(std::string(who) + ": beta has order below T");
}

inline DftSpectrum dft(const BinarySequence& seq, const FieldCtx& fld, const FieldElem& beta) {
    (void)fld;
    check_order(beta, seq.period(), "dft");
    PowerTable tbl(beta, seq.period());
    return dft_period(std::span<const std::uint8_t>(seq.bits), tbl);
}

inline u64 lc_blahut(const DftSpectrum& sp) {
    u64 n = 0;
    for (const auto& r : sp.rho)
        if (!r.is_zero()) ++n;
    return n;
}

// Sparse text dump: header, then one line per nonzero coefficient.
inline void write_spectrum(std::ostream& os, const DftSpectrum& sp) {
    os << "T=" << sp.size() << " nonzero=" << lc_blahut(sp) << "\n";
    for (u64 i = 0; i < sp.size(); ++i)
        if (!sp.rho[i].is_zero()) os << i << " " << sp.rho[i].residue().to_hex() << "\n";
}

}  // namespace fermatseq
