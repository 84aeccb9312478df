#pragma once

// GF(2^m) = F_2[x]/(modulus), sized so that a primitive p^2-th root of unity
// exists: m is the order of 2 modulo p^2. Elements are residue polynomials of
// degree < m. One ambient field hosts every subfield quantity; subfields are
// recognized by the Frobenius fixed-point test, never constructed separately.

#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "gf2x.hpp"
#include "numtheory.hpp"

namespace fermatseq {

struct FieldCtx {
    enum class Provenance { lambda_p, lambda };  // ord_{p^2}(2) = lambda*p or lambda (Wieferich)

    u64 p = 0;
    std::size_t m = 0;
    Gf2Poly modulus;
    Provenance provenance = Provenance::lambda_p;
};

inline constexpr std::size_t kDefaultDegreeCap = 512;

class FieldElem {
public:
    FieldElem() = default;
    FieldElem(const FieldCtx* fld, Gf2Poly v) : fld_(fld), v_(std::move(v)) {}

    const Gf2Poly& residue() const { return v_; }
    const FieldCtx* ctx() const { return fld_; }
    bool is_zero() const { return v_.is_zero(); }
    bool is_one() const { return v_.is_one(); }

    FieldElem& operator+=(const FieldElem& rhs) {
        v_ += rhs.v_;
        return *this;
    }
    friend FieldElem operator+(FieldElem a, const FieldElem& b) {
        a += b;
        return a;
    }

    friend FieldElem operator*(const FieldElem& a, const FieldElem& b) {
        return FieldElem(a.fld_, (a.v_ * b.v_) % a.fld_->modulus);
    }
    FieldElem& operator*=(const FieldElem& rhs) {
        *this = *this * rhs;
        return *this;
    }

    FieldElem squared() const { return FieldElem(fld_, v_.squared() % fld_->modulus); }

    // k-fold Frobenius, x -> x^{2^k}.
    FieldElem frobenius(std::size_t k) const {
        FieldElem r = *this;
        for (std::size_t i = 0; i < k; ++i) r = r.squared();
        return r;
    }

    FieldElem pow(u64 e) const {
        FieldElem r = one(fld_);
        FieldElem base = *this;
        while (e > 0) {
            if (e & 1) r *= base;
            base = base.squared();
            e >>= 1;
        }
        return r;
    }

    // Exponent given as a bit sequence, index = significance; processed
    // most-significant-first. Covers exponents far beyond 64 bits.
    FieldElem pow_bits(const std::vector<bool>& ebits) const {
        FieldElem r = one(fld_);
        for (std::size_t i = ebits.size(); i-- > 0;) {
            r = r.squared();
            if (ebits[i]) r *= *this;
        }
        return r;
    }

    FieldElem inverse() const {
        if (is_zero()) throw parameter_error("FieldElem::inverse: zero has no inverse");
        // x^{2^m - 2}: bit 0 clear, bits 1..m-1 set.
        std::vector<bool> e(fld_->m, true);
        e[0] = false;
        return pow_bits(e);
    }

    // Membership in GF(2^n): fixed by the n-fold Frobenius.
    bool in_subfield(std::size_t n) const {
        if (n >= fld_->m) return true;
        return frobenius(n) == *this;
    }

    friend bool operator==(const FieldElem& a, const FieldElem& b) { return a.v_ == b.v_; }
    friend bool operator!=(const FieldElem& a, const FieldElem& b) { return !(a == b); }

    static FieldElem zero(const FieldCtx* fld) { return FieldElem(fld, Gf2Poly::zero()); }
    static FieldElem one(const FieldCtx* fld) { return FieldElem(fld, Gf2Poly::one()); }

private:
    const FieldCtx* fld_ = nullptr;  // must outlive the element
    Gf2Poly v_;
};

// Exact (2^m - 1)/d as an exponent bit sequence (index = significance),
// by short division of the m-bit all-ones string.
inline std::vector<bool> exact_div_mersenne(std::size_t m, u64 d) {
    if (d == 0) throw parameter_error("exact_div_mersenne: zero divisor");
    if (d > (u64(1) << 62)) throw parameter_error("exact_div_mersenne: divisor too large");
    std::vector<bool> bits(m, false);
    u64 rem = 0;
    for (std::size_t i = m; i-- > 0;) {
        rem = rem * 2 + 1;
        if (rem >= d) {
            bits[i] = true;
            rem -= d;
        }
    }
    if (rem != 0) throw parameter_error("exact_div_mersenne: d does not divide 2^m - 1");
    return bits;
}

// m := ord_{p^2}(2): lambda*p for ordinary primes, lambda for Wieferich ones.
inline FieldCtx make_field(u64 p, std::size_t degree_cap = kDefaultDegreeCap) {
    require_odd_prime(p, "make_field");
    FieldCtx fld;
    fld.p = p;
    const u64 lambda = multiplicative_order(2, p);
    const u64 m = multiplicative_order(2, p * p);
    if (is_wieferich(p)) {
        if (m != lambda) throw invariant_error("make_field: Wieferich prime with ord_{p^2}(2) != lambda");
        fld.provenance = FieldCtx::Provenance::lambda;
    } else {
        if (m != lambda * p) throw invariant_error("make_field: ord_{p^2}(2) != lambda*p");
        fld.provenance = FieldCtx::Provenance::lambda_p;
    }
    if (m > degree_cap)
        throw capacity_error("make_field: extension degree " + std::to_string(m) + " exceeds the cap " +
                             std::to_string(degree_cap));
    fld.m = std::size_t(m);
    fld.modulus = find_irreducible(fld.m);
    return fld;
}

// Deterministic primitive T-th root of unity: raise candidates x, x+1, x^2,...
// (in residue encoding order) to (2^m - 1)/T and return the first result of
// exact order T.
inline FieldElem root_of_unity(const FieldCtx& fld, u64 T) {
    if (T == 0) throw parameter_error("root_of_unity: T must be positive");
    if (T == 1) return FieldElem::one(&fld);
    if (T % 2 == 0) throw parameter_error("root_of_unity: T must be odd to divide 2^m - 1");
    if (fld.m % multiplicative_order(2, T) != 0)
        throw parameter_error("root_of_unity: T does not divide 2^m - 1");

    const std::vector<bool> e = exact_div_mersenne(fld.m, T);
    const std::vector<u64> prime_divs = distinct_prime_factors(T);

    for (u64 enc = 2;; ++enc) {
        if (enc > 65536) throw invariant_error("root_of_unity: no element of order T among small candidates");
        const FieldElem cand(&fld, Gf2Poly::from_bits(enc) % fld.modulus);
        const FieldElem y = cand.pow_bits(e);
        bool full_order = !y.is_zero();
        for (u64 r : prime_divs) {
            if (!full_order) break;
            if (y.pow(T / r).is_one()) full_order = false;
        }
        if (full_order) return y;
    }
}

// Tr^n_k(x) = x + x^{2^k} + x^{2^{2k}} + ... + x^{2^{(n/k-1)k}}, evaluated in
// the ambient field; requires k | n, n | m and x in GF(2^n).
inline FieldElem trace(const FieldCtx& fld, std::size_t n, std::size_t k, const FieldElem& x) {
    if (k == 0 || n == 0 || n % k != 0 || fld.m % n != 0)
        throw parameter_error("trace: need k | n and n | m");
    if (!x.in_subfield(n)) throw parameter_error("trace: argument not in GF(2^n)");
    FieldElem acc = x;
    FieldElem y = x;
    for (std::size_t t = 1; t < n / k; ++t) {
        y = y.frobenius(k);
        acc += y;
    }
    if (!acc.in_subfield(k)) throw invariant_error("trace: result escaped GF(2^k)");
    return acc;
}

// All T powers of an order-T element, indexed by exponent.
class PowerTable {
public:
    PowerTable() = default;
    PowerTable(const FieldElem& base, u64 order) : order_(order) {
        pw_.reserve(order);
        FieldElem acc = FieldElem::one(base.ctx());
        for (u64 i = 0; i < order; ++i) {
            pw_.push_back(acc);
            acc *= base;
        }
        if (!acc.is_one()) throw parameter_error("PowerTable: base does not have the stated order");
    }

    u64 order() const { return order_; }
    const FieldElem& base() const { return pw_.at(1 % pw_.size()); }
    const FieldElem& operator[](u64 e) const { return pw_[e % order_]; }

private:
    u64 order_ = 0;
    std::vector<FieldElem> pw_;
};

}  // namespace fermatseq
