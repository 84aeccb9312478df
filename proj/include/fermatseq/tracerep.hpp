#pragma once

// Defining pairs and trace representations. A defining pair (g(x), beta)
// satisfies s_u = g(beta^u) for one period; the pair of a single-coset
// characteristic sequence is assembled from the coset character sums
// D_l(beta), and the pairs of the threshold / Legendre families are sums of
// those. The trace form rewrites the same polynomial as nested trace terms
// Tr^lambda_1 and Tr^{lambda p}_p with coefficients eta_j.

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "lincomp.hpp"
#include "numtheory.hpp"
#include "sequences.hpp"

namespace fermatseq {

// D_l(beta^n) = sum over u in D_l of beta^{n u}.
inline FieldElem coset_value(const FermatContext& ctx, const PowerTable& beta_pow, u64 l, u64 n) {
    if (l >= ctx.p) throw parameter_error("coset_value: coset index out of range");
    const u64 T = beta_pow.order();
    FieldElem acc = FieldElem::zero(beta_pow.base().ctx());
    for (u64 u : ctx.cosets[l]) acc += beta_pow[(n % T) * u % T];
    return acc;
}

inline FieldElem coset_value(const FermatContext& ctx, const FieldCtx& fld, const FieldElem& beta, u64 l, u64 n) {
    (void)fld;
    PowerTable tbl(beta, ctx.period());
    return coset_value(ctx, tbl, l, n);
}

struct DefiningPair {
    FieldElem beta;
    std::vector<FieldElem> coeffs;  // g(x) = sum coeffs[i] x^i, one entry per i < p^2
    SeqKind seq_kind = SeqKind::threshold;
    u64 l = 0;

    u64 weight() const {
        u64 n = 0;
        for (const auto& c : coeffs)
            if (!c.is_zero()) ++n;
        return n;
    }
};

// g(beta^u).
inline FieldElem evaluate_defining_pair(const DefiningPair& pair, const PowerTable& beta_pow, u64 u) {
    const u64 T = beta_pow.order();
    FieldElem acc = FieldElem::zero(pair.beta.ctx());
    for (u64 i = 0; i < T; ++i) {
        if (!pair.coeffs[i].is_zero()) acc += pair.coeffs[i] * beta_pow[i * (u % T) % T];
    }
    return acc;
}

// Checks s_u = g(beta^u) over the whole period; the evaluation must also land
// in {0, 1}, anything else is a construction bug.
inline void verify_defining_pair(const DefiningPair& pair, const PowerTable& beta_pow, const BinarySequence& seq,
                                 const char* who) {
    for (u64 u = 0; u < seq.period(); ++u) {
        const FieldElem v = evaluate_defining_pair(pair, beta_pow, u);
        if (!v.is_zero() && !v.is_one())
            throw invariant_error(std::string(who) + ": evaluation left F_2 at u=" + std::to_string(u));
        if (v.is_one() != (seq.bits[u] != 0))
            throw invariant_error(std::string(who) + ": defining pair disagrees with sequence at u=" +
                                  std::to_string(u));
    }
}

// Defining pair of the characteristic sequence of D_{i*delta}:
//   G(x) = sum_{j=1}^{p-1} x^{jp} + sum_{j=0}^{p-1} D_{(i+j)delta}(beta) D_{j delta}(x),
// verified against the generated sequence before returning.
inline DefiningPair characteristic_defining_pair(const FermatContext& ctx, const PowerTable& beta_pow, u64 i) {
    if (i >= ctx.p) throw parameter_error("characteristic_defining_pair: index out of range");
    const u64 p = ctx.p, T = ctx.period();
    const FieldCtx* fld = beta_pow.base().ctx();

    DefiningPair pair;
    pair.beta = beta_pow.base();
    pair.seq_kind = SeqKind::characteristic;
    pair.l = (i * ctx.delta) % p;
    pair.coeffs.assign(T, FieldElem::zero(fld));

    for (u64 j = 1; j < p; ++j) pair.coeffs[j * p] += FieldElem::one(fld);
    for (u64 j = 0; j < p; ++j) {
        const FieldElem scale = coset_value(ctx, beta_pow, ((i + j) * ctx.delta) % p, 1);
        for (u64 u : ctx.cosets[(j * ctx.delta) % p]) pair.coeffs[u] += scale;
    }

    verify_defining_pair(pair, beta_pow, gen_characteristic(ctx, pair.l), "characteristic_defining_pair");
    return pair;
}

inline DefiningPair characteristic_defining_pair(const FermatContext& ctx, const FieldCtx& fld, const FieldElem& beta,
                                                 u64 i) {
    (void)fld;
    PowerTable tbl(beta, ctx.period());
    return characteristic_defining_pair(ctx, tbl, i);
}

namespace detail {

// Coset indices whose union carries the ones of the given family.
inline std::vector<u64> one_cosets(const FermatContext& ctx, SeqKind kind) {
    std::vector<u64> ls;
    switch (kind) {
        case SeqKind::threshold:
        case SeqKind::balanced_threshold:
            for (u64 l = (ctx.p + 1) / 2; l < ctx.p; ++l) ls.push_back(l);
            break;
        case SeqKind::legendre_fermat:
        case SeqKind::balanced_legendre:
            ls = ctx.quadratic_nonresidues;
            break;
        default:
            throw parameter_error("one_cosets: kind has no coset union form");
    }
    return ls;
}

}  // namespace detail

// Sum of the characteristic pairs G_l over the family's coset union; the
// balanced variants add the full block sum_{j=0}^{p-1} x^{jp} on top.
// Verified against the generated sequence.
inline DefiningPair assemble_defining_pair(const FermatContext& ctx, const PowerTable& beta_pow, SeqKind kind) {
    const u64 p = ctx.p, T = ctx.period();
    const FieldCtx* fld = beta_pow.base().ctx();
    const std::vector<u64> ls = detail::one_cosets(ctx, kind);
    const u64 delta_inv = powmod(ctx.delta, p - 2, p);

    DefiningPair pair;
    pair.beta = beta_pow.base();
    pair.seq_kind = kind;
    pair.coeffs.assign(T, FieldElem::zero(fld));

    for (u64 l : ls) {
        const DefiningPair gl = characteristic_defining_pair(ctx, beta_pow, (l * delta_inv) % p);
        for (u64 idx = 0; idx < T; ++idx) pair.coeffs[idx] += gl.coeffs[idx];
    }
    if (kind == SeqKind::balanced_threshold || kind == SeqKind::balanced_legendre) {
        for (u64 j = 0; j < p; ++j) pair.coeffs[j * p] += FieldElem::one(fld);
    }

    verify_defining_pair(pair, beta_pow, generate(ctx, kind), "assemble_defining_pair");
    return pair;
}

inline DefiningPair assemble_defining_pair(const FermatContext& ctx, const FieldCtx& fld, const FieldElem& beta,
                                           SeqKind kind) {
    (void)fld;
    PowerTable tbl(beta, ctx.period());
    return assemble_defining_pair(ctx, tbl, kind);
}

// eta_j = sum over the family's coset union of D_{l + j*delta}(beta).
inline std::vector<FieldElem> eta_coefficients(const FermatContext& ctx, const PowerTable& beta_pow, SeqKind kind) {
    if (kind != SeqKind::threshold && kind != SeqKind::legendre_fermat)
        throw parameter_error("eta_coefficients: kind must be threshold or legendre-fermat");
    const u64 p = ctx.p;
    const std::vector<u64> ls = detail::one_cosets(ctx, kind);
    std::vector<FieldElem> eta;
    eta.reserve(p);
    for (u64 j = 0; j < p; ++j) {
        FieldElem acc = FieldElem::zero(beta_pow.base().ctx());
        for (u64 l : ls) acc += coset_value(ctx, beta_pow, (l + j * ctx.delta) % p, 1);
        eta.push_back(acc);
    }
    return eta;
}

inline std::vector<FieldElem> eta_coefficients(const FermatContext& ctx, const FieldCtx& fld, const FieldElem& beta,
                                               SeqKind kind) {
    (void)fld;
    PowerTable tbl(beta, ctx.period());
    return eta_coefficients(ctx, tbl, kind);
}

// Soft diagnostic of the conjugacy structure in the ordinary (non-Wieferich)
// case: the eta_j are pairwise distinct and each one is a p-fold-Frobenius
// orbit mate of eta_0 under squaring.
inline bool eta_conjugacy_diagnostic(const std::vector<FieldElem>& eta) {
    const std::size_t p = eta.size();
    for (std::size_t a = 0; a < p; ++a)
        for (std::size_t b = a + 1; b < p; ++b)
            if (eta[a] == eta[b]) return false;
    std::vector<FieldElem> orbit;
    orbit.reserve(p);
    FieldElem cur = eta[0];
    for (std::size_t r = 0; r < p; ++r) {
        orbit.push_back(cur);
        cur = cur.squared();
    }
    for (const auto& e : eta) {
        bool found = false;
        for (const auto& o : orbit)
            if (o == e) {
                found = true;
                break;
            }
        if (!found) return false;
    }
    return true;
}

// The integer bookkeeping of a trace representation: branch selection, trace
// degrees, and the exponent multipliers of every term. Buildable without any
// field work, which keeps the Wieferich branch testable at p = 1093.
struct TraceTermStructure {
    u64 p = 0, g = 0, delta = 0;
    u64 lambda = 0;
    bool wieferich_branch = false;
    bool p_part_coeff = false;  // (p-1)/2 reduced mod 2
    u64 blocks = 0;             // (p-1)/lambda
    std::size_t first_n = 0, first_k = 0;    // Tr^lambda_1 on the P block
    std::size_t second_n = 0, second_k = 0;  // Tr^{lambda p}_p, or Tr^lambda_1 when Wieferich
    std::vector<u64> p_block_exponents;      // p * g^k mod p^2, k < blocks
    std::vector<u64> coset_block_exponents;  // g^{kp+j} mod p^2 at index j*blocks + k

    u64 coset_exponent(u64 j, u64 k) const { return coset_block_exponents[j * blocks + k]; }
};

inline TraceTermStructure build_trace_term_structure(u64 p, u64 g, u64 delta) {
    require_odd_prime(p, "build_trace_term_structure");
    TraceTermStructure ts;
    ts.p = p;
    ts.g = g;
    ts.delta = delta;
    ts.lambda = multiplicative_order(2, p);
    ts.wieferich_branch = is_wieferich(p);
    ts.p_part_coeff = ((p - 1) / 2) % 2 == 1;
    ts.blocks = (p - 1) / ts.lambda;
    ts.first_n = std::size_t(ts.lambda);
    ts.first_k = 1;
    ts.second_n = ts.wieferich_branch ? std::size_t(ts.lambda) : std::size_t(ts.lambda * p);
    ts.second_k = ts.wieferich_branch ? 1 : std::size_t(p);

    const u64 p2 = p * p;
    ts.p_block_exponents.reserve(ts.blocks);
    for (u64 k = 0; k < ts.blocks; ++k) ts.p_block_exponents.push_back(mulmod(p, powmod(g, k, p2), p2));
    ts.coset_block_exponents.reserve(p * ts.blocks);
    for (u64 j = 0; j < p; ++j)
        for (u64 k = 0; k < ts.blocks; ++k) ts.coset_block_exponents.push_back(powmod(g, k * p + j, p2));
    return ts;
}

struct TraceRepresentation {
    TraceTermStructure terms;
    std::vector<FieldElem> eta;  // p coefficients, eta_j or eta'_j
    SeqKind seq_kind = SeqKind::threshold;
    const FieldCtx* fld = nullptr;
    PowerTable beta_pow;

    u64 p() const { return terms.p; }
    u64 lambda() const { return terms.lambda; }
    bool wieferich_branch() const { return terms.wieferich_branch; }
};

inline TraceRepresentation build_trace_representation(const FermatContext& ctx, const FieldCtx& fld,
                                                      const FieldElem& beta, SeqKind kind) {
    if (kind != SeqKind::threshold && kind != SeqKind::legendre_fermat)
        throw parameter_error("build_trace_representation: kind must be threshold or legendre-fermat");
    TraceRepresentation rep;
    rep.terms = build_trace_term_structure(ctx.p, ctx.g, ctx.delta);
    rep.seq_kind = kind;
    rep.fld = &fld;
    rep.beta_pow = PowerTable(beta, ctx.period());
    rep.eta = eta_coefficients(ctx, rep.beta_pow, kind);
    return rep;
}

// Evaluates the trace form at one position; the total must land in F_2
// (equal its own square), anything else signals a construction bug.
inline int evaluate_trace_representation(const TraceRepresentation& rep, u64 u) {
    const TraceTermStructure& ts = rep.terms;
    const u64 T = ts.p * ts.p;
    u %= T;

    FieldElem acc = FieldElem::zero(rep.fld);
    if (ts.p_part_coeff) {
        for (u64 k = 0; k < ts.blocks; ++k)
            acc += trace(*rep.fld, ts.first_n, ts.first_k, rep.beta_pow[u * ts.p_block_exponents[k] % T]);
    }
    for (u64 j = 0; j < ts.p; ++j) {
        if (rep.eta[j].is_zero()) continue;
        FieldElem inner = FieldElem::zero(rep.fld);
        for (u64 k = 0; k < ts.blocks; ++k)
            inner += trace(*rep.fld, ts.second_n, ts.second_k, rep.beta_pow[u * ts.coset_exponent(j, k) % T]);
        acc += rep.eta[j] * inner;
    }

    if (acc.squared() != acc)
        throw invariant_error("evaluate_trace_representation: total is not in F_2 at u=" + std::to_string(u));
    return acc.is_one() ? 1 : 0;
}

// Plain-text trace report: header, eta table, verification line.
inline void write_trace_report(std::ostream& os, const TraceRepresentation& rep, bool verified) {
    os << "p=" << rep.p() << " lambda=" << rep.lambda()
       << " branch=" << (rep.wieferich_branch() ? "wieferich" : "non-wieferich") << " g=" << rep.terms.g
       << " delta=" << rep.terms.delta << "\n";
    for (std::size_t j = 0; j < rep.eta.size(); ++j) os << j << " " << rep.eta[j].residue().to_hex() << "\n";
    os << "verified=" << (verified ? "true" : "false") << " period=" << rep.p() * rep.p() << "\n";
}

}  // namespace fermatseq
