#include "beltrami/field.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>

namespace beltrami {

namespace {

ElemFn elem_of(FnTag tag) {
    switch (tag) {
        case FnTag::Exp: return ElemFn::Exp;
        case FnTag::Log: return ElemFn::Log;
        case FnTag::Sin: return ElemFn::Sin;
        case FnTag::Cos: return ElemFn::Cos;
        case FnTag::Tan: return ElemFn::Tan;
        case FnTag::Sqrt: return ElemFn::Sqrt;
        case FnTag::Arctan: return ElemFn::Arctan;
        case FnTag::Artanh: return ElemFn::Artanh;
    }
    throw std::invalid_argument("unknown function tag");
}

// Number or Neg(Number) exponents take the cheap d/dv v^c route
std::optional<double> const_exponent(const Expr& e) {
    if (e.kind == Expr::Kind::Number) return e.number;
    if (e.kind == Expr::Kind::Neg && e.a->kind == Expr::Kind::Number) return -e.a->number;
    return std::nullopt;
}

void check_point(const ScalarField& f, std::span<const double> point) {
    if (!f.expr) throw std::invalid_argument("field has no expression");
    if (point.size() != f.coords.size()) {
        throw std::invalid_argument("point dimension " + std::to_string(point.size()) +
                                    " does not match chart dimension " +
                                    std::to_string(f.coords.size()));
    }
}

struct JetEval {
    std::span<const double> point;
    int dim;

    Jet2 rec(const Expr& e) const {
        switch (e.kind) {
            case Expr::Kind::Number: return Jet2::constant(dim, Complex(e.number, 0.0));
            case Expr::Kind::ImagUnit: return Jet2::constant(dim, Complex(0.0, 1.0));
            case Expr::Kind::Coord: return Jet2::seed(point, e.coord);
            case Expr::Kind::Neg: return -rec(*e.a);
            case Expr::Kind::Add: return rec(*e.a) + rec(*e.b);
            case Expr::Kind::Sub: return rec(*e.a) - rec(*e.b);
            case Expr::Kind::Mul: return rec(*e.a) * rec(*e.b);
            case Expr::Kind::Div: {
                Jet2 a = rec(*e.a);
                Jet2 b = rec(*e.b);
                try {
                    return a / b;
                } catch (const DomainError& err) {
                    throw EvalError(e.pos, err.what());
                }
            }
            case Expr::Kind::Pow: {
                Jet2 base = rec(*e.a);
                try {
                    if (auto c = const_exponent(*e.b))
                        return jet_apply(ElemFn::PowConst, base, *c);
                    // variable exponent: z^w = exp(w log z), principal branch
                    Jet2 expo = rec(*e.b);
                    return jet_apply(ElemFn::Exp, expo * jet_apply(ElemFn::Log, base));
                } catch (const DomainError& err) {
                    throw EvalError(e.pos, err.what());
                }
            }
            case Expr::Kind::Call: {
                Jet2 a = rec(*e.a);
                try {
                    return jet_apply(elem_of(e.fn), a);
                } catch (const DomainError& err) {
                    throw EvalError(e.pos, err.what());
                }
            }
            case Expr::Kind::Norm: {
                Jet2 acc = Jet2::constant(dim, Complex(0.0, 0.0));
                for (int k = 0; k < dim; ++k) {
                    Jet2 s = Jet2::seed(point, k);
                    acc = acc + s * s;
                }
                try {
                    return jet_apply(ElemFn::Sqrt, acc);
                } catch (const DomainError& err) {
                    throw EvalError(e.pos, err.what());
                }
            }
        }
        throw std::invalid_argument("unknown expression node");
    }
};

// value-only recursion; domain rules and formulas match jet_apply so the
// finite-difference stencils probe exactly the function the jets propagate
struct ValueEval {
    std::span<const double> point;

    Complex call(FnTag fn, Complex v, std::size_t pos) const {
        switch (fn) {
            case FnTag::Exp: return std::exp(v);
            case FnTag::Log:
                if (v == Complex(0.0, 0.0)) throw EvalError(pos, "log of zero");
                return std::log(v);
            case FnTag::Sin: return std::sin(v);
            case FnTag::Cos: return std::cos(v);
            case FnTag::Tan: {
                const Complex c = std::cos(v);
                if (c == Complex(0.0, 0.0)) throw EvalError(pos, "tan at a pole");
                return std::sin(v) / c;
            }
            case FnTag::Sqrt:
                if (v == Complex(0.0, 0.0)) throw EvalError(pos, "sqrt of zero");
                return std::sqrt(v);
            case FnTag::Arctan:
                if (1.0 + v * v == Complex(0.0, 0.0)) throw EvalError(pos, "arctan at ±i");
                return std::atan(v);
            case FnTag::Artanh:
                if (1.0 - v * v == Complex(0.0, 0.0)) throw EvalError(pos, "artanh at ±1");
                return std::atanh(v);
        }
        throw std::invalid_argument("unknown function tag");
    }

    Complex pow_value(Complex v, double c, std::size_t pos) const {
        const double ci = std::nearbyint(c);
        if (c == ci && std::abs(c) < 1e15) {
            try {
                return ipow(v, static_cast<long long>(ci));
            } catch (const DomainError& err) {
                throw EvalError(pos, err.what());
            }
        }
        if (v.imag() == 0.0 && v.real() <= 0.0)
            throw EvalError(pos, "non-integer power of a non-positive real argument");
        return std::exp(c * std::log(v));
    }

    Complex rec(const Expr& e) const {
        switch (e.kind) {
            case Expr::Kind::Number: return Complex(e.number, 0.0);
            case Expr::Kind::ImagUnit: return Complex(0.0, 1.0);
            case Expr::Kind::Coord:
                return Complex(point[static_cast<std::size_t>(e.coord)], 0.0);
            case Expr::Kind::Neg: return -rec(*e.a);
            case Expr::Kind::Add: return rec(*e.a) + rec(*e.b);
            case Expr::Kind::Sub: return rec(*e.a) - rec(*e.b);
            case Expr::Kind::Mul: return rec(*e.a) * rec(*e.b);
            case Expr::Kind::Div: {
                Complex a = rec(*e.a);
                Complex b = rec(*e.b);
                if (b == Complex(0.0, 0.0)) throw EvalError(e.pos, "division by zero");
                return a / b;
            }
            case Expr::Kind::Pow: {
                Complex v = rec(*e.a);
                if (auto c = const_exponent(*e.b)) return pow_value(v, *c, e.pos);
                Complex w = rec(*e.b);
                if (v == Complex(0.0, 0.0)) throw EvalError(e.pos, "log of zero");
                return std::exp(w * std::log(v));
            }
            case Expr::Kind::Call: return call(e.fn, rec(*e.a), e.pos);
            case Expr::Kind::Norm: {
                double s = 0.0;
                for (double u : point) s += u * u;
                if (s == 0.0) throw EvalError(e.pos, "sqrt of zero");
                return std::sqrt(Complex(s, 0.0));
            }
        }
        throw std::invalid_argument("unknown expression node");
    }
};

void require_same_coords(const ScalarField& f, const ScalarField& g) {
    if (f.coords != g.coords)
        throw std::invalid_argument("fields are defined on different coordinate lists");
}

}  // namespace

ScalarField make_field(std::string_view text, std::vector<std::string> coords) {
    ScalarField f;
    f.expr = parse(text, coords);
    f.coords = std::move(coords);
    return f;
}

Jet2 eval_jet2(const ScalarField& f, std::span<const double> point) {
    check_point(f, point);
    return JetEval{point, f.dim()}.rec(*f.expr);
}

Complex eval_value(const ScalarField& f, std::span<const double> point) {
    check_point(f, point);
    return ValueEval{point}.rec(*f.expr);
}

ScalarField field_add(const ScalarField& f, const ScalarField& g) {
    require_same_coords(f, g);
    return {make_add(f.expr, g.expr), f.coords};
}

ScalarField field_sub(const ScalarField& f, const ScalarField& g) {
    require_same_coords(f, g);
    return {make_sub(f.expr, g.expr), f.coords};
}

ScalarField field_mul(const ScalarField& f, const ScalarField& g) {
    require_same_coords(f, g);
    return {make_mul(f.expr, g.expr), f.coords};
}

ScalarField field_scale(Complex c, const ScalarField& f) {
    ExprPtr ce;
    if (c.imag() == 0.0) {
        ce = make_num(c.real());
    } else if (c.real() == 0.0) {
        ce = c.imag() == 1.0 ? make_imag() : make_mul(make_num(c.imag()), make_imag());
    } else {
        ce = make_add(make_num(c.real()), make_mul(make_num(c.imag()), make_imag()));
    }
    return {make_mul(std::move(ce), f.expr), f.coords};
}

ScalarField field_pow_int(const ScalarField& f, int n) {
    return {make_pow(f.expr, make_num(static_cast<double>(n))), f.coords};
}

}  // namespace beltrami
