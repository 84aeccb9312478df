#pragma once

// Dense polynomial arithmetic over the two-element field. Coefficients are
// packed 64 per word, bit i of word i/64 = coefficient of x^i. Everything is
// kept canonical: no stored zero words above the degree.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"

namespace fermatseq {

namespace detail {
// spread_byte[b] interleaves the bits of b with zeros: bit i -> bit 2i.
// Squaring over F_2 is exactly this spreading.
inline constexpr std::array<std::uint16_t, 256> make_spread_table() {
    std::array<std::uint16_t, 256> t{};
    for (unsigned b = 0; b < 256; ++b) {
        std::uint16_t v = 0;
        for (unsigned i = 0; i < 8; ++i)
            if (b & (1u << i)) v = std::uint16_t(v | (1u << (2 * i)));
        t[b] = v;
    }
    return t;
}
inline constexpr std::array<std::uint16_t, 256> kSpreadByte = make_spread_table();
}  // namespace detail

class Gf2Poly {
public:
    Gf2Poly() = default;

    static Gf2Poly zero() { return Gf2Poly(); }
    static Gf2Poly one() { return monomial(0); }

    static Gf2Poly monomial(std::size_t d) {
        Gf2Poly f;
        f.set_coeff(d, true);
        return f;
    }

    // Low 64 coefficient bits from an integer encoding (bit i = coeff of x^i).
    static Gf2Poly from_bits(std::uint64_t bits) {
        Gf2Poly f;
        if (bits) f.words_.push_back(bits);
        return f;
    }

    bool is_zero() const { return words_.empty(); }
    bool is_one() const { return words_.size() == 1 && words_[0] == 1; }

    // Degree of the zero polynomial is the sentinel -1.
    long degree() const {
        if (words_.empty()) return -1;
        const std::uint64_t top = words_.back();
        return long(64 * (words_.size() - 1) + (63 - __builtin_clzll(top)));
    }

    bool coeff(std::size_t i) const {
        const std::size_t w = i / 64;
        if (w >= words_.size()) return false;
        return (words_[w] >> (i % 64)) & 1;
    }

    void set_coeff(std::size_t i, bool v) {
        const std::size_t w = i / 64;
        if (w >= words_.size()) {
            if (!v) return;
            words_.resize(w + 1, 0);
        }
        if (v)
            words_[w] |= std::uint64_t(1) << (i % 64);
        else {
            words_[w] &= ~(std::uint64_t(1) << (i % 64));
            trim();
        }
    }

    std::size_t weight() const {
        std::size_t n = 0;
        for (std::uint64_t w : words_) n += std::size_t(__builtin_popcountll(w));
        return n;
    }

    Gf2Poly& operator+=(const Gf2Poly& rhs) {
        if (rhs.words_.size() > words_.size()) words_.resize(rhs.words_.size(), 0);
        for (std::size_t i = 0; i < rhs.words_.size(); ++i) words_[i] ^= rhs.words_[i];
        trim();
        return *this;
    }

    friend Gf2Poly operator+(Gf2Poly a, const Gf2Poly& b) {
        a += b;
        return a;
    }

    friend bool operator==(const Gf2Poly& a, const Gf2Poly& b) { return a.words_ == b.words_; }
    friend bool operator!=(const Gf2Poly& a, const Gf2Poly& b) { return !(a == b); }

    // Ordering by coefficient bit-string read as an integer; used by the
    // deterministic irreducible search.
    friend bool operator<(const Gf2Poly& a, const Gf2Poly& b) {
        if (a.words_.size() != b.words_.size()) return a.words_.size() < b.words_.size();
        for (std::size_t i = a.words_.size(); i-- > 0;)
            if (a.words_[i] != b.words_[i]) return a.words_[i] < b.words_[i];
        return false;
    }

    Gf2Poly shifted_left(std::size_t k) const {
        if (is_zero() || k == 0) return k == 0 ? *this : Gf2Poly(*this);
        Gf2Poly r;
        const std::size_t wshift = k / 64, bshift = k % 64;
        r.words_.assign(words_.size() + wshift + 1, 0);
        for (std::size_t i = 0; i < words_.size(); ++i) {
            r.words_[i + wshift] ^= words_[i] << bshift;
            if (bshift) r.words_[i + wshift + 1] ^= words_[i] >> (64 - bshift);
        }
        r.trim();
        return r;
    }

    friend Gf2Poly operator*(const Gf2Poly& a, const Gf2Poly& b) {
        if (a.is_zero() || b.is_zero()) return Gf2Poly();
        Gf2Poly r;
        r.words_.assign(a.words_.size() + b.words_.size(), 0);
        for (std::size_t wi = 0; wi < a.words_.size(); ++wi) {
            std::uint64_t w = a.words_[wi];
            while (w) {
                const unsigned bit = unsigned(__builtin_ctzll(w));
                w &= w - 1;
                const std::size_t shift = 64 * wi + bit;
                const std::size_t ws = shift / 64, bs = shift % 64;
                for (std::size_t j = 0; j < b.words_.size(); ++j) {
                    r.words_[ws + j] ^= b.words_[j] << bs;
                    if (bs) r.words_[ws + j + 1] ^= b.words_[j] >> (64 - bs);
                }
            }
        }
        r.trim();
        return r;
    }

    // Square via bit spreading: coefficient of x^i moves to x^{2i}.
    Gf2Poly squared() const {
        Gf2Poly r;
        r.words_.assign(2 * words_.size(), 0);
        for (std::size_t i = 0; i < words_.size(); ++i) {
            const std::uint64_t w = words_[i];
            std::uint64_t lo = 0, hi = 0;
            for (unsigned b = 0; b < 4; ++b) {
                lo |= std::uint64_t(detail::kSpreadByte[(w >> (8 * b)) & 0xff]) << (16 * b);
                hi |= std::uint64_t(detail::kSpreadByte[(w >> (8 * b + 32)) & 0xff]) << (16 * b);
            }
            r.words_[2 * i] = lo;
            r.words_[2 * i + 1] = hi;
        }
        r.trim();
        return r;
    }

    struct DivRem {
        Gf2Poly quot, rem;
    };

    DivRem divrem(const Gf2Poly& d) const {
        if (d.is_zero()) throw parameter_error("Gf2Poly::divrem: division by zero polynomial");
        DivRem out;
        out.rem = *this;
        const long dd = d.degree();
        long rd = out.rem.degree();
        while (rd >= dd) {
            const std::size_t shift = std::size_t(rd - dd);
            out.quot.set_coeff(shift, true);
            out.rem += d.shifted_left(shift);
            rd = out.rem.degree();
        }
        return out;
    }

    Gf2Poly operator%(const Gf2Poly& d) const { return divrem(d).rem; }

    // Canonical text form: "gf2x:" + hex of the coefficient bits, low-order
    // nibble first (digit j encodes coefficients of x^{4j}..x^{4j+3}).
    std::string to_hex() const {
        static const char* digits = "0123456789abcdef";
        if (is_zero()) return "gf2x:0";
        std::string s = "gf2x:";
        const std::size_t nibbles = std::size_t(degree()) / 4 + 1;
        for (std::size_t j = 0; j < nibbles; ++j) {
            const std::size_t w = j / 16;
            const unsigned v = unsigned((words_[w] >> (4 * (j % 16))) & 0xf);
            s += digits[v];
        }
        return s;
    }

    static Gf2Poly from_hex(const std::string& s) {
        const std::string prefix = "gf2x:";
        if (s.rfind(prefix, 0) != 0) throw parameter_error("Gf2Poly::from_hex: missing gf2x: prefix");
        Gf2Poly f;
        for (std::size_t j = prefix.size(); j < s.size(); ++j) {
            const char c = s[j];
            unsigned v;
            if (c >= '0' && c <= '9')
                v = unsigned(c - '0');
            else if (c >= 'a' && c <= 'f')
                v = unsigned(c - 'a' + 10);
            else if (c >= 'A' && c <= 'F')
                v = unsigned(c - 'A' + 10);
            else
                throw parameter_error("Gf2Poly::from_hex: bad hex digit");
            const std::size_t pos = 4 * (j - prefix.size());
            for (unsigned b = 0; b < 4; ++b)
                if (v & (1u << b)) f.set_coeff(pos + b, true);
        }
        return f;
    }

private:
    std::vector<std::uint64_t> words_;

    void trim() {
        while (!words_.empty() && words_.back() == 0) words_.pop_back();
    }
};

// Euclid over F_2; every nonzero polynomial is already monic.
inline Gf2Poly poly_gcd(Gf2Poly a, Gf2Poly b) {
    if (a.is_zero() && b.is_zero()) throw parameter_error("poly_gcd: gcd(0, 0) undefined");
    while (!b.is_zero()) {
        Gf2Poly r = a % b;
        a = b;
        b = r;
    }
    return a;
}

inline Gf2Poly poly_mulmod(const Gf2Poly& a, const Gf2Poly& b, const Gf2Poly& m) {
    if (m.degree() < 1) throw parameter_error("poly_mulmod: modulus must have degree >= 1");
    return (a * b) % m;
}

// Rabin's criterion: f of degree m is irreducible iff x^{2^m} = x (mod f)
// and gcd(x^{2^{m/r}} - x, f) = 1 for every prime r dividing m.
inline bool is_irreducible(const Gf2Poly& f) {
    const long m = f.degree();
    if (m < 1) throw parameter_error("is_irreducible: degree must be >= 1");
    if (m == 1) return true;

    std::vector<long> checkpoints;  // m/r for prime r | m
    long rest = m;
    for (long r = 2; r * r <= rest; ++r) {
        if (rest % r == 0) {
            checkpoints.push_back(m / r);
            while (rest % r == 0) rest /= r;
        }
    }
    if (rest > 1) checkpoints.push_back(m / rest);

    const Gf2Poly x = Gf2Poly::monomial(1) % f;
    Gf2Poly h = x;
    for (long i = 1; i <= m; ++i) {
        h = h.squared() % f;  // h = x^{2^i} mod f
        for (long cp : checkpoints) {
            if (i == cp) {
                if (poly_gcd(h + x, f).degree() != 0) return false;
            }
        }
    }
    return h == x;
}

// Lexicographically smallest irreducible of degree m: candidates are
// x^m + L(x) with the low part L enumerated by its integer encoding.
inline Gf2Poly find_irreducible(std::size_t m) {
    if (m < 1) throw parameter_error("find_irreducible: degree must be >= 1");
    if (m == 1) return Gf2Poly::monomial(1);
    for (std::uint64_t low = 1;; low += 2) {  // constant term 0 means divisible by x
        if (__builtin_popcountll(low) % 2 == 1) continue;  // f(1) = 0 means divisible by x+1
        Gf2Poly f = Gf2Poly::from_bits(low);
        f.set_coeff(m, true);
        if (is_irreducible(f)) return f;
        if (low > (std::uint64_t(1) << 62))
            throw invariant_error("find_irreducible: search exhausted the 64-bit low part");
    }
}

}  // namespace fermatseq
