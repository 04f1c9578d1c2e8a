#pragma once

#include <algorithm>
#include <compare>
#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "elemrank/errors.hpp"

namespace elemrank {

using BigInt = boost::multiprecision::cpp_int;

/// Nesting-depth cap for Cantor normal forms. Everything in this library
/// lives far below epsilon_0; the cap keeps exponentiation total in practice.
inline constexpr int kDefaultMaxDepth = 32;

/// Guard against astronomically large finite powers (n^m with m finite).
inline constexpr unsigned kMaxFiniteExponent = 1u << 20;

/// An ordinal below epsilon_0 in Cantor normal form:
///   w^{e_1}*c_1 + ... + w^{e_k}*c_k   with e_1 > e_2 > ... > e_k, c_i >= 1.
/// The empty sum is 0. The representation is unique, so structural equality
/// is ordinal equality. Values are immutable and cheap to share.
class Ordinal {
public:
    struct Term {
        std::shared_ptr<const Ordinal> exp; // never null
        BigInt coeff;                       // >= 1

        const Ordinal& exponent() const { return *exp; }
    };

    Ordinal() = default; // zero

    static Ordinal from_int(const BigInt& n) {
        if (n < 0) throw InvalidInputError("ordinal from negative integer");
        if (n == 0) return Ordinal();
        std::vector<Term> t;
        t.push_back(Term{zero_ptr(), n});
        return Ordinal(std::move(t));
    }

    static Ordinal omega() { return omega_power(from_int(1), 1); }

    static Ordinal omega_power(const Ordinal& e, const BigInt& c = 1) {
        if (c < 0) throw InvalidInputError("negative coefficient");
        if (c == 0) return Ordinal();
        if (e.is_zero()) return from_int(c);
        std::vector<Term> t;
        t.push_back(Term{std::make_shared<const Ordinal>(e), c});
        return Ordinal(std::move(t));
    }

    /// Canonicalize a raw term list: merge equal exponents, drop zero
    /// coefficients, sort exponents descending. Idempotent.
    static Ordinal normalize(std::vector<std::pair<Ordinal, BigInt>> raw) {
        for (const auto& [e, c] : raw) {
            (void)e;
            if (c < 0) throw InvalidInputError("negative coefficient in raw term list");
        }
        std::stable_sort(raw.begin(), raw.end(),
                         [](const auto& a, const auto& b) { return a.first > b.first; });
        std::vector<Term> t;
        for (auto& [e, c] : raw) {
            if (c == 0) continue;
            if (!t.empty() && t.back().exponent() == e)
                t.back().coeff += c;
            else
                t.push_back(Term{std::make_shared<const Ordinal>(e), c});
        }
        return Ordinal(std::move(t));
    }

    const std::vector<Term>& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }

    bool is_finite() const {
        return terms_.empty() || (terms_.size() == 1 && terms_[0].exponent().is_zero());
    }

    /// Coefficient of w^0, i.e. the finite tail of the normal form.
    BigInt finite_part() const {
        if (terms_.empty() || !terms_.back().exponent().is_zero()) return 0;
        return terms_.back().coeff;
    }

    bool is_successor() const { return finite_part() >= 1; }

    /// Nonzero with finite part 0. (0 itself is classified as neither.)
    bool is_limit() const { return !is_zero() && finite_part() == 0; }

    int depth() const {
        int d = 0;
        for (const auto& t : terms_) d = std::max(d, t.exponent().depth() + 1);
        return d;
    }

    friend bool operator==(const Ordinal& a, const Ordinal& b) { return cmp(a, b) == 0; }
    friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
        int c = cmp(a, b);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

private:
    explicit Ordinal(std::vector<Term> t) : terms_(std::move(t)) {}

    static const std::shared_ptr<const Ordinal>& zero_ptr() {
        static const std::shared_ptr<const Ordinal> z = std::make_shared<const Ordinal>();
        return z;
    }

    static int cmp(const Ordinal& a, const Ordinal& b) {
        std::size_t n = std::min(a.terms_.size(), b.terms_.size());
        for (std::size_t i = 0; i < n; ++i) {
            int c = cmp(a.terms_[i].exponent(), b.terms_[i].exponent());
            if (c != 0) return c;
            if (a.terms_[i].coeff != b.terms_[i].coeff)
                return a.terms_[i].coeff < b.terms_[i].coeff ? -1 : 1;
        }
        if (a.terms_.size() != b.terms_.size()) return a.terms_.size() < b.terms_.size() ? -1 : 1;
        return 0;
    }

    friend Ordinal add(const Ordinal&, const Ordinal&);
    friend Ordinal mul(const Ordinal&, const Ordinal&);

    std::vector<Term> terms_;
};

enum class Ordering { LT, EQ, GT };

inline Ordering compare(const Ordinal& a, const Ordinal& b) {
    auto c = a <=> b;
    if (c < 0) return Ordering::LT;
    if (c > 0) return Ordering::GT;
    return Ordering::EQ;
}

inline Ordinal leading_exponent(const Ordinal& a) {
    if (a.is_zero()) throw EvalError("leading exponent of 0 is undefined");
    return a.terms().front().exponent();
}

inline BigInt leading_coefficient(const Ordinal& a) {
    if (a.is_zero()) throw EvalError("leading coefficient of 0 is undefined");
    return a.terms().front().coeff;
}

/// CNF addition: the left argument loses every term below the leading
/// exponent of the right argument. Associative, not commutative.
inline Ordinal add(const Ordinal& a, const Ordinal& b) {
    if (b.is_zero()) return a;
    if (a.is_zero()) return b;
    const Ordinal& lb = b.terms().front().exponent();
    std::vector<Ordinal::Term> out;
    for (const auto& t : a.terms()) {
        if (t.exponent() > lb)
            out.push_back(t);
        else
            break;
    }
    std::size_t keep = out.size();
    bool merged = keep < a.terms().size() && a.terms()[keep].exponent() == lb;
    for (std::size_t i = 0; i < b.terms().size(); ++i) {
        out.push_back(b.terms()[i]);
        if (i == 0 && merged) out.back().coeff += a.terms()[keep].coeff;
    }
    return Ordinal(std::move(out));
}

/// CNF multiplication, distributing the right argument's terms from the left.
inline Ordinal mul(const Ordinal& a, const Ordinal& b) {
    if (a.is_zero() || b.is_zero()) return Ordinal();
    Ordinal result;
    for (const auto& t : b.terms()) {
        if (!t.exponent().is_zero()) {
            result = add(result, Ordinal::omega_power(add(leading_exponent(a), t.exponent()),
                                                      t.coeff));
        } else {
            // a * c for finite c: only the leading coefficient is scaled.
            std::vector<Ordinal::Term> scaled(a.terms());
            scaled.front().coeff *= t.coeff;
            result = add(result, Ordinal(std::move(scaled)));
        }
    }
    return result;
}

inline Ordinal operator+(const Ordinal& a, const Ordinal& b) { return add(a, b); }
inline Ordinal operator*(const Ordinal& a, const Ordinal& b) { return mul(a, b); }

inline Ordinal successor(const Ordinal& a) { return add(a, Ordinal::from_int(1)); }

/// Defined only for successors; the "-1" of rank arithmetic.
inline Ordinal predecessor(const Ordinal& a) {
    if (a.is_zero()) throw EvalError("predecessor of 0 is undefined");
    if (!a.is_successor()) throw EvalError("predecessor of a limit ordinal is undefined");
    std::vector<std::pair<Ordinal, BigInt>> raw;
    for (const auto& t : a.terms()) raw.emplace_back(t.exponent(), t.coeff);
    raw.back().second -= 1;
    return Ordinal::normalize(std::move(raw));
}

namespace detail {

/// Quotient q with w*q == c, defined when every exponent of c is >= 1.
inline Ordinal omega_quotient(const Ordinal& c) {
    std::vector<std::pair<Ordinal, BigInt>> raw;
    for (const auto& t : c.terms()) {
        const Ordinal& e = t.exponent();
        raw.emplace_back(e.is_finite() ? predecessor(e) : e, t.coeff);
    }
    return Ordinal::normalize(std::move(raw));
}

inline BigInt bigint_pow(BigInt base, BigInt e) {
    if (e > kMaxFiniteExponent)
        throw EvalError("finite exponent too large for exact evaluation");
    BigInt r = 1;
    while (e > 0) {
        if ((e & 1) != 0) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

} // namespace detail

/// CNF exponentiation below epsilon_0; 0^0 = 1. Throws EvalError when the
/// result would exceed the nesting-depth cap.
inline Ordinal pow(const Ordinal& a, const Ordinal& b, int max_depth = kDefaultMaxDepth) {
    Ordinal result;
    if (b.is_zero()) {
        result = Ordinal::from_int(1);
    } else if (a.is_zero()) {
        result = Ordinal();
    } else if (a == Ordinal::from_int(1)) {
        result = a;
    } else if (b.is_finite()) {
        if (a.is_finite()) {
            result = Ordinal::from_int(detail::bigint_pow(a.finite_part(), b.finite_part()));
        } else {
            BigInt n = b.finite_part();
            if (n > kMaxFiniteExponent)
                throw EvalError("finite exponent too large for exact evaluation");
            result = Ordinal::from_int(1);
            for (BigInt i = 0; i < n; ++i) result = mul(result, a);
        }
    } else {
        // Split b = c + m with c the limit part and m the finite part.
        std::vector<std::pair<Ordinal, BigInt>> limit_terms;
        for (const auto& t : b.terms())
            if (!t.exponent().is_zero()) limit_terms.emplace_back(t.exponent(), t.coeff);
        Ordinal c = Ordinal::normalize(std::move(limit_terms));
        Ordinal m = Ordinal::from_int(b.finite_part());
        Ordinal head = a.is_finite()
                           ? Ordinal::omega_power(detail::omega_quotient(c))
                           : Ordinal::omega_power(mul(leading_exponent(a), c));
        result = mul(head, pow(a, m, max_depth));
    }
    if (result.depth() > max_depth)
        throw EvalError("ordinal exceeds the normal-form depth cap ("
                        + std::to_string(max_depth) + ")");
    return result;
}

// ---------------------------------------------------------------------------
// Indexed families and sup+
// ---------------------------------------------------------------------------

/// Finite set of ordinals; sup+ takes the maximum then adjusts.
struct FiniteFamily {
    std::vector<Ordinal> values;
};

/// Constant infinite sequence a_n = value.
struct ConstantFamily {
    Ordinal value;
};

/// a_n = base + step * n, step != 0.
struct LinearFamily {
    Ordinal base;
    Ordinal step;
};

/// a_n = w^n * scale + offset, scale >= 1.
struct OmegaPowerFamily {
    BigInt scale{1};
    Ordinal offset;
};

using FamilyDescriptor = std::variant<FiniteFamily, ConstantFamily, LinearFamily, OmegaPowerFamily>;

namespace detail {
/// sup adjusted so the result is never a limit: sup itself when it is a
/// successor, sup + 1 otherwise.
inline Ordinal adjust_sup(const Ordinal& sup) {
    return sup.is_successor() ? sup : successor(sup);
}
} // namespace detail

inline Ordinal sup_plus(const FamilyDescriptor& family) {
    struct Visitor {
        Ordinal operator()(const FiniteFamily& f) const {
            if (f.values.empty()) throw InvalidInputError("sup+ of an empty finite family");
            return detail::adjust_sup(*std::max_element(f.values.begin(), f.values.end()));
        }
        Ordinal operator()(const ConstantFamily& f) const { return detail::adjust_sup(f.value); }
        Ordinal operator()(const LinearFamily& f) const {
            if (f.step.is_zero()) throw InvalidInputError("linear family with zero step");
            // sup_n (base + step*n) = base + w^{lead(step)+1}, always a limit.
            Ordinal sup = add(f.base, Ordinal::omega_power(successor(leading_exponent(f.step))));
            return successor(sup);
        }
        Ordinal operator()(const OmegaPowerFamily& f) const {
            if (f.scale < 1) throw InvalidInputError("omega-power family with scale < 1");
            // sup_n (w^n*scale + offset) = w^w; scale and offset are absorbed.
            return successor(pow(Ordinal::omega(), Ordinal::omega()));
        }
    };
    return std::visit(Visitor{}, family);
}

// ---------------------------------------------------------------------------
// Canonical printer
// ---------------------------------------------------------------------------

/// Canonical CNF text, e.g. "w^(w+1)*2 + w*3 + 5".
inline std::string to_string(const Ordinal& a) {
    if (a.is_zero()) return "0";
    std::string out;
    bool first = true;
    for (const auto& t : a.terms()) {
        if (!first) out += " + ";
        first = false;
        const Ordinal& e = t.exponent();
        if (e.is_zero()) {
            out += t.coeff.str();
            continue;
        }
        out += "w";
        if (e != Ordinal::from_int(1)) {
            out += "^";
            if (e.is_finite())
                out += e.finite_part().str();
            else if (e == Ordinal::omega())
                out += "w";
            else
                out += "(" + to_string(e) + ")";
        }
        if (t.coeff != 1) out += "*" + t.coeff.str();
    }
    return out;
}

} // namespace elemrank
