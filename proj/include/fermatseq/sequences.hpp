#pragma once

// One full period (length p^2) of each binary sequence family derived from a
// FermatContext. Generation evaluates both the analytic rule and the coset
// rule and cross-asserts them, which catches indexing bugs at the source.

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "numtheory.hpp"

namespace fermatseq {

enum class SeqKind {
    threshold,
    legendre_fermat,
    characteristic,
    balanced_threshold,
    balanced_legendre,
};

inline std::string kind_token(SeqKind kind, u64 l = 0) {
    switch (kind) {
        case SeqKind::threshold: return "threshold";
        case SeqKind::legendre_fermat: return "legendre-fermat";
        case SeqKind::characteristic: return "characteristic(" + std::to_string(l) + ")";
        case SeqKind::balanced_threshold: return "balanced-threshold";
        case SeqKind::balanced_legendre: return "balanced-legendre";
    }
    throw parameter_error("kind_token: unknown kind");
}

// Parses both the file tokens and the CLI spelling ("characteristic" without
// an index is allowed; the index then comes from a --l flag).
inline bool parse_kind_token(const std::string& s, SeqKind& kind, u64& l) {
    l = 0;
    if (s == "threshold") { kind = SeqKind::threshold; return true; }
    if (s == "legendre-fermat") { kind = SeqKind::legendre_fermat; return true; }
    if (s == "balanced-threshold") { kind = SeqKind::balanced_threshold; return true; }
    if (s == "balanced-legendre") { kind = SeqKind::balanced_legendre; return true; }
    if (s == "characteristic") { kind = SeqKind::characteristic; return true; }
    if (s.rfind("characteristic(", 0) == 0 && s.back() == ')') {
        kind = SeqKind::characteristic;
        l = std::stoull(s.substr(15, s.size() - 16));
        return true;
    }
    return false;
}

struct BinarySequence {
    u64 p = 0;
    SeqKind kind = SeqKind::threshold;
    u64 l = 0;  // coset index, meaningful for characteristic sequences
    u64 g = 0;
    u64 delta = 0;
    std::vector<std::uint8_t> bits;  // exactly p^2 values in {0,1}

    u64 period() const { return u64(bits.size()); }
    u64 ones() const {
        u64 n = 0;
        for (auto b : bits) n += b;
        return n;
    }
};

namespace detail {

inline BinarySequence make_seq(const FermatContext& ctx, SeqKind kind, u64 l = 0) {
    BinarySequence s;
    s.p = ctx.p;
    s.kind = kind;
    s.l = l;
    s.g = ctx.g;
    s.delta = ctx.delta;
    s.bits.assign(ctx.period(), 0);
    return s;
}

}  // namespace detail

// e_u = 1 iff q_p(u) falls in the upper half [ (p+1)/2, p ). Cross-checked
// against the coset table.
inline BinarySequence gen_threshold(const FermatContext& ctx) {
    BinarySequence s = detail::make_seq(ctx, SeqKind::threshold);
    const u64 half = (ctx.p + 1) / 2;
    for (u64 u = 0; u < ctx.period(); ++u) {
        const u64 q = fermat_quotient(ctx.p, u);
        const std::uint8_t analytic = q >= half ? 1 : 0;
        const std::uint32_t l = ctx.coset_of[u];
        const std::uint8_t coset = (l != ctx.multiple_of_p_marker() && l >= half) ? 1 : 0;
        if (analytic != coset)
            throw invariant_error("gen_threshold: analytic and coset rules disagree at u=" + std::to_string(u));
        s.bits[u] = analytic;
    }
    return s;
}

// f_u = 1 iff q_p(u) is a quadratic non-residue mod p; zero on P, on D_0 and
// on residue-valued cosets.
inline BinarySequence gen_legendre_fermat(const FermatContext& ctx) {
    BinarySequence s = detail::make_seq(ctx, SeqKind::legendre_fermat);
    for (u64 u = 0; u < ctx.period(); ++u) {
        const u64 q = fermat_quotient(ctx.p, u);
        const std::uint8_t analytic = (u % ctx.p != 0 && q != 0 && legendre_symbol(q, ctx.p) == -1) ? 1 : 0;
        const std::uint32_t l = ctx.coset_of[u];
        const std::uint8_t coset =
            (l != ctx.multiple_of_p_marker() && ctx.is_nonresidue(l)) ? 1 : 0;
        if (analytic != coset)
            throw invariant_error("gen_legendre_fermat: analytic and coset rules disagree at u=" + std::to_string(u));
        s.bits[u] = analytic;
    }
    return s;
}

// Indicator of the single coset D_l.
inline BinarySequence gen_characteristic(const FermatContext& ctx, u64 l) {
    if (l >= ctx.p) throw parameter_error("gen_characteristic: coset index out of range");
    BinarySequence s = detail::make_seq(ctx, SeqKind::characteristic, l);
    for (u64 u : ctx.cosets[l]) s.bits[u] = 1;
    if (s.ones() != ctx.p - 1) throw invariant_error("gen_characteristic: weight != p-1");
    return s;
}

inline BinarySequence gen_balanced_threshold(const FermatContext& ctx) {
    BinarySequence s = gen_threshold(ctx);
    s.kind = SeqKind::balanced_threshold;
    for (u64 u = 0; u < ctx.period(); u += ctx.p) s.bits[u] = 1;
    return s;
}

inline BinarySequence gen_balanced_legendre(const FermatContext& ctx) {
    BinarySequence s = gen_legendre_fermat(ctx);
    s.kind = SeqKind::balanced_legendre;
    for (u64 u = 0; u < ctx.period(); u += ctx.p) s.bits[u] = 1;
    return s;
}

inline BinarySequence generate(const FermatContext& ctx, SeqKind kind, u64 l = 0) {
    switch (kind) {
        case SeqKind::threshold: return gen_threshold(ctx);
        case SeqKind::legendre_fermat: return gen_legendre_fermat(ctx);
        case SeqKind::characteristic: return gen_characteristic(ctx, l);
        case SeqKind::balanced_threshold: return gen_balanced_threshold(ctx);
        case SeqKind::balanced_legendre: return gen_balanced_legendre(ctx);
    }
    throw parameter_error("generate: unknown kind");
}

// Two-line text format: header, then the period as an ASCII 0/1 string.
inline void write_sequence_file(std::ostream& os, const BinarySequence& s) {
    os << "p=" << s.p << " kind=" << kind_token(s.kind, s.l) << " g=" << s.g << " delta=" << s.delta << "\n";
    for (auto b : s.bits) os << (b ? '1' : '0');
    os << "\n";
}

inline BinarySequence read_sequence_file(std::istream& is) {
    std::string header, body;
    if (!std::getline(is, header) || !std::getline(is, body))
        throw parameter_error("read_sequence_file: expected two lines");
    BinarySequence s;
    std::istringstream hs(header);
    std::string tok;
    bool have_p = false, have_kind = false;
    while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw parameter_error("read_sequence_file: bad header token " + tok);
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "p") { s.p = std::stoull(val); have_p = true; }
        else if (key == "kind") { if (!parse_kind_token(val, s.kind, s.l)) throw parameter_error("read_sequence_file: bad kind " + val); have_kind = true; }
        else if (key == "g") s.g = std::stoull(val);
        else if (key == "delta") s.delta = std::stoull(val);
        else throw parameter_error("read_sequence_file: unknown header key " + key);
    }
    if (!have_p || !have_kind) throw parameter_error("read_sequence_file: header missing p or kind");
    if (body.size() != s.p * s.p) throw parameter_error("read_sequence_file: body length != p^2");
    s.bits.reserve(body.size());
    for (char c : body) {
        if (c != '0' && c != '1') throw parameter_error("read_sequence_file: body must be 0/1");
        s.bits.push_back(std::uint8_t(c - '0'));
    }
    return s;
}

}  // namespace fermatseq
