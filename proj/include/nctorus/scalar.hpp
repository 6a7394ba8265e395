#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "nctorus/errors.hpp"
#include "nctorus/number_field.hpp"
#include "nctorus/rational.hpp"
#include "nctorus/symbolic.hpp"

namespace nctorus {

enum class ScalarMode { Rational, Field, Symbolic };

inline std::string mode_name(ScalarMode m) {
    switch (m) {
        case ScalarMode::Rational: return "rational";
        case ScalarMode::Field: return "field";
        case ScalarMode::Symbolic: return "symbolic";
    }
    return "?";
}

// The arithmetic mode shared by every Scalar in one computation.
struct ScalarContext {
    ScalarMode mode = ScalarMode::Rational;
    FieldSpecPtr field; // set iff mode == Field

    static ScalarContext rational() { return {ScalarMode::Rational, nullptr}; }
    static ScalarContext symbolic() { return {ScalarMode::Symbolic, nullptr}; }
    static ScalarContext in_field(FieldSpecPtr spec) {
        if (!spec) throw BadFieldSpec("field context requires a spec");
        return {ScalarMode::Field, std::move(spec)};
    }

    bool operator==(const ScalarContext& o) const {
        return mode == o.mode && (mode != ScalarMode::Field || same_spec(field, o.field));
    }
};

// Element of Q(alpha) in power-basis coordinates over a shared spec.
struct FieldElement {
    FieldSpecPtr spec;
    std::vector<Rat> coeffs; // size == spec->degree()
};

// Exact coordinates of a Scalar over the canonical Q-basis of its mode.
struct QBasisCoordinates {
    std::vector<std::string> basis;
    std::vector<Rat> coords;
};

// Exact ring element: a rational, a real number field element, or a
// polynomial over Q in generic skew-matrix entries. All Scalars combined in
// one operation must share a mode (and, in field mode, a spec).
class Scalar {
public:
    Scalar() : value_(Rat(0)) {}
    explicit Scalar(Rat r) : value_(std::move(r)) {}
    explicit Scalar(FieldElement f) : value_(std::move(f)) { normalize_field(); }
    explicit Scalar(SymbolicPoly p) : value_(std::move(p)) {}

    static Scalar rational(long num, long den = 1) {
        Rat r(num, den);
        r.canonicalize();
        return Scalar(r);
    }

    static Scalar zero(const ScalarContext& ctx) { return from_rational_in(ctx, Rat(0)); }
    static Scalar one(const ScalarContext& ctx) { return from_rational_in(ctx, Rat(1)); }

    // Lift a rational constant into any mode.
    static Scalar from_rational_in(const ScalarContext& ctx, const Rat& r) {
        switch (ctx.mode) {
            case ScalarMode::Rational: return Scalar(r);
            case ScalarMode::Symbolic: return Scalar(SymbolicPoly(r));
            case ScalarMode::Field: {
                FieldElement f{ctx.field, std::vector<Rat>(ctx.field->degree(), Rat(0))};
                f.coeffs[0] = r;
                return Scalar(std::move(f));
            }
        }
        throw Error("INTERNAL", "bad mode");
    }

    // The generator alpha of a field context.
    static Scalar field_generator(const ScalarContext& ctx) {
        if (ctx.mode != ScalarMode::Field) throw ModeMismatch("generator needs field mode");
        FieldElement f{ctx.field, std::vector<Rat>(ctx.field->degree(), Rat(0))};
        if (f.coeffs.size() == 1) {
            f.coeffs[0] = -ctx.field->minpoly()[0]; // degree-1 field: alpha is rational
        } else {
            f.coeffs[1] = 1;
        }
        return Scalar(std::move(f));
    }

    static Scalar symbolic_entry(int i, int j) { return Scalar(SymbolicPoly::variable(i, j)); }

    ScalarMode mode() const {
        if (std::holds_alternative<Rat>(value_)) return ScalarMode::Rational;
        if (std::holds_alternative<FieldElement>(value_)) return ScalarMode::Field;
        return ScalarMode::Symbolic;
    }

    ScalarContext context() const {
        switch (mode()) {
            case ScalarMode::Rational: return ScalarContext::rational();
            case ScalarMode::Symbolic: return ScalarContext::symbolic();
            case ScalarMode::Field:
                return ScalarContext::in_field(std::get<FieldElement>(value_).spec);
        }
        throw Error("INTERNAL", "bad mode");
    }

    const Rat& as_rational() const {
        if (mode() != ScalarMode::Rational) throw ModeMismatch("not a rational scalar");
        return std::get<Rat>(value_);
    }

    const FieldElement& as_field() const {
        if (mode() != ScalarMode::Field) throw ModeMismatch("not a field scalar");
        return std::get<FieldElement>(value_);
    }

    const SymbolicPoly& as_symbolic() const {
        if (mode() != ScalarMode::Symbolic) throw ModeMismatch("not a symbolic scalar");
        return std::get<SymbolicPoly>(value_);
    }

    bool is_zero() const {
        switch (mode()) {
            case ScalarMode::Rational: return as_rational() == 0;
            case ScalarMode::Symbolic: return as_symbolic().is_zero();
            case ScalarMode::Field: {
                for (const auto& c : as_field().coeffs)
                    if (c != 0) return false;
                return true;
            }
        }
        return false;
    }

    // True when the value lies in Q regardless of mode.
    bool is_rational_value() const {
        switch (mode()) {
            case ScalarMode::Rational: return true;
            case ScalarMode::Symbolic: return as_symbolic().is_constant();
            case ScalarMode::Field: {
                const auto& c = as_field().coeffs;
                for (std::size_t i = 1; i < c.size(); ++i)
                    if (c[i] != 0) return false;
                return true;
            }
        }
        return false;
    }

    Rat rational_value() const {
        switch (mode()) {
            case ScalarMode::Rational: return as_rational();
            case ScalarMode::Symbolic:
                if (!as_symbolic().is_constant()) throw ModeMismatch("not a constant polynomial");
                return as_symbolic().constant_value();
            case ScalarMode::Field:
                if (!is_rational_value()) throw ModeMismatch("field element is irrational");
                return as_field().coeffs.empty() ? Rat(0) : as_field().coeffs[0];
        }
        throw Error("INTERNAL", "bad mode");
    }

    Scalar operator+(const Scalar& o) const { return apply(o, Op::Add); }
    Scalar operator-(const Scalar& o) const { return apply(o, Op::Sub); }
    Scalar operator*(const Scalar& o) const { return apply(o, Op::Mul); }
    Scalar operator-() const { return Scalar::zero(context()) - *this; }

    bool operator==(const Scalar& o) const {
        if (!(context() == o.context())) return false;
        return (*this - o).is_zero();
    }

    // Exact multiplicative inverse. Rational and field modes only.
    Scalar invert() const {
        switch (mode()) {
            case ScalarMode::Rational: {
                if (as_rational() == 0) throw DivisionByZero("inverting 0");
                return Scalar(Rat(1) / as_rational());
            }
            case ScalarMode::Symbolic:
                throw UnsupportedInSymbolicMode("no inverses for generic entries");
            case ScalarMode::Field: {
                const auto& f = as_field();
                if (is_zero()) throw DivisionByZero("inverting 0");
                UniPoly a = trim(UniPoly(f.coeffs.begin(), f.coeffs.end()));
                auto [g, u, v] = extended_gcd_poly(a, f.spec->minpoly());
                if (degree(g) > 0)
                    throw ReducibleFieldSpec(
                        "element shares a factor with the declared minimal polynomial");
                // u*a == 1 (mod minpoly)
                UniPoly inv = divmod_poly(u, f.spec->minpoly()).second;
                FieldElement r{f.spec, std::vector<Rat>(f.spec->degree(), Rat(0))};
                for (std::size_t i = 0; i < inv.size(); ++i) r.coeffs[i] = inv[i];
                return Scalar(std::move(r));
            }
        }
        throw Error("INTERNAL", "bad mode");
    }

    Scalar operator/(const Scalar& o) const { return *this * o.invert(); }

    // Sign under the real embedding. Rational and field modes only.
    int sign() const {
        switch (mode()) {
            case ScalarMode::Rational: return sign_of(as_rational());
            case ScalarMode::Symbolic:
                throw UnsupportedInSymbolicMode("generic entries have no sign");
            case ScalarMode::Field: return as_field().spec->sign_of_element(as_field().coeffs);
        }
        throw Error("INTERNAL", "bad mode");
    }

    // Double approximation (numeric modes).
    double to_double() const {
        switch (mode()) {
            case ScalarMode::Rational: return as_rational().get_d();
            case ScalarMode::Symbolic:
                throw UnsupportedInSymbolicMode("generic entries have no numeric value");
            case ScalarMode::Field: {
                const double alpha = as_field().spec->root_approx();
                double acc = 0;
                for (auto it = as_field().coeffs.rbegin(); it != as_field().coeffs.rend(); ++it)
                    acc = acc * alpha + it->get_d();
                return acc;
            }
        }
        throw Error("INTERNAL", "bad mode");
    }

    // Exact coordinates over the canonical Q-basis of the mode: [1] for
    // rationals, the power basis for field elements, the monomials actually
    // present for symbolic polynomials.
    QBasisCoordinates coordinates() const {
        QBasisCoordinates out;
        switch (mode()) {
            case ScalarMode::Rational:
                out.basis = {"1"};
                out.coords = {as_rational()};
                break;
            case ScalarMode::Field: {
                const int d = as_field().spec->degree();
                for (int i = 0; i < d; ++i)
                    out.basis.push_back(i == 0 ? "1" : (i == 1 ? "a" : "a^" + std::to_string(i)));
                out.coords = as_field().coeffs;
                break;
            }
            case ScalarMode::Symbolic:
                for (const auto& [m, c] : as_symbolic().terms()) {
                    out.basis.push_back(m.label());
                    out.coords.push_back(c);
                }
                if (out.basis.empty()) {
                    out.basis = {"1"};
                    out.coords = {Rat(0)};
                }
                break;
        }
        return out;
    }

    std::string str() const {
        switch (mode()) {
            case ScalarMode::Rational: return format_rational(as_rational());
            case ScalarMode::Field: {
                std::string s = "[";
                const auto& c = as_field().coeffs;
                for (std::size_t i = 0; i < c.size(); ++i)
                    s += (i ? "," : "") + format_rational(c[i]);
                return s + "]";
            }
            case ScalarMode::Symbolic: {
                if (as_symbolic().is_zero()) return "0";
                std::string s;
                for (const auto& [m, c] : as_symbolic().terms()) {
                    if (!s.empty()) s += " + ";
                    s += format_rational(c);
                    if (!m.factors.empty()) s += "*" + m.label();
                }
                return s;
            }
        }
        return "?";
    }

private:
    enum class Op { Add, Sub, Mul };

    void normalize_field() {
        auto& f = std::get<FieldElement>(value_);
        if (!f.spec) throw BadFieldSpec("field element without a spec");
        const std::size_t d = static_cast<std::size_t>(f.spec->degree());
        if (f.coeffs.size() > d) {
            UniPoly p(f.coeffs.begin(), f.coeffs.end());
            UniPoly r = divmod_poly(trim(std::move(p)), f.spec->minpoly()).second;
            f.coeffs.assign(d, Rat(0));
            for (std::size_t i = 0; i < r.size(); ++i) f.coeffs[i] = r[i];
        } else {
            f.coeffs.resize(d, Rat(0));
        }
    }

    Scalar apply(const Scalar& o, Op op) const {
        if (mode() != o.mode())
            throw ModeMismatch("cannot combine " + mode_name(mode()) + " with " +
                               mode_name(o.mode()));
        switch (mode()) {
            case ScalarMode::Rational: {
                const Rat &a = as_rational(), &b = o.as_rational();
                return Scalar(op == Op::Add ? Rat(a + b) : op == Op::Sub ? Rat(a - b) : Rat(a * b));
            }
            case ScalarMode::Symbolic: {
                const auto &a = as_symbolic(), &b = o.as_symbolic();
                return Scalar(op == Op::Add ? a + b : op == Op::Sub ? a - b : a * b);
            }
            case ScalarMode::Field: {
                const auto &a = as_field(), &b = o.as_field();
                if (!same_spec(a.spec, b.spec))
                    throw ModeMismatch("field elements over different specs");
                FieldElement r{a.spec, {}};
                if (op == Op::Mul) {
                    UniPoly pa = trim(UniPoly(a.coeffs.begin(), a.coeffs.end()));
                    UniPoly pb = trim(UniPoly(b.coeffs.begin(), b.coeffs.end()));
                    UniPoly prod = mul_poly(pa, pb);
                    r.coeffs.assign(prod.begin(), prod.end());
                } else {
                    r.coeffs = a.coeffs;
                    for (std::size_t i = 0; i < b.coeffs.size(); ++i) {
                        if (op == Op::Add)
                            r.coeffs[i] += b.coeffs[i];
                        else
                            r.coeffs[i] -= b.coeffs[i];
                    }
                }
                return Scalar(std::move(r));
            }
        }
        throw Error("INTERNAL", "bad mode");
    }

    std::variant<Rat, FieldElement, SymbolicPoly> value_;
};

inline Scalar scalar_arith(const Scalar& a, const Scalar& b, char op) {
    switch (op) {
        case '+': return a + b;
        case '-': return a - b;
        case '*': return a * b;
        default: throw Error("INTERNAL", "unknown op");
    }
}

inline Scalar scalar_invert(const Scalar& a) { return a.invert(); }
inline int scalar_sign(const Scalar& a) { return a.sign(); }
inline QBasisCoordinates scalar_coordinates(const Scalar& a) { return a.coordinates(); }

} // namespace nctorus
