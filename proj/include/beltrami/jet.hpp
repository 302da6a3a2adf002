#pragma once

#include <span>
#include <vector>

#include "beltrami/types.hpp"

namespace beltrami {

/// Complex 2-jet: value, gradient and Hessian of a scalar field at a point.
///
/// The Hessian is stored dense but only the upper triangle is ever computed;
/// the lower triangle is mirrored, so hess(i,j) == hess(j,i) bit for bit.
class Jet2 {
public:
    Jet2() = default;

    static Jet2 constant(int dim, Complex value);

    // jet of the coordinate function u_k at the point
    static Jet2 seed(std::span<const double> point, int k);

    int dim() const { return dim_; }
    Complex value() const { return value_; }
    Complex grad(int i) const { return grad_[static_cast<std::size_t>(i)]; }
    Complex hess(int i, int j) const {
        return hess_[static_cast<std::size_t>(i) * dim_ + j];
    }

    std::span<const Complex> grad() const { return grad_; }
    std::span<const Complex> hess_flat() const { return hess_; }

    // mutation is limited to construction sites (fd oracle, tests)
    void set_value(Complex v) { value_ = v; }
    void set_grad(int i, Complex v) { grad_[static_cast<std::size_t>(i)] = v; }
    void set_hess_sym(int i, int j, Complex v) {
        hess_[static_cast<std::size_t>(i) * dim_ + j] = v;
        hess_[static_cast<std::size_t>(j) * dim_ + i] = v;
    }

    Jet2 operator-() const;
    Jet2 operator+(const Jet2& rhs) const;
    Jet2 operator-(const Jet2& rhs) const;
    Jet2 operator*(const Jet2& rhs) const;
    Jet2 operator/(const Jet2& rhs) const;

    Jet2 operator+(Complex c) const;
    Jet2 operator-(Complex c) const;
    Jet2 operator*(Complex c) const;

private:
    int dim_ = 0;
    Complex value_{};
    std::vector<Complex> grad_;
    std::vector<Complex> hess_;  // dim*dim, row major, symmetric

    explicit Jet2(int dim);
    friend Jet2 chain_apply(const Jet2&, Complex, Complex, Complex);
};

inline Jet2 operator*(Complex c, const Jet2& x) { return x * c; }

/// Second-order chain rule: given f, f', f'' evaluated at x.value(),
/// returns the jet of f composed with x:
///   (f∘g)'  = f'(g)·g'
///   (f∘g)'' = f''(g)·g'⊗g' + f'(g)·g''
Jet2 chain_apply(const Jet2& x, Complex f, Complex df, Complex ddf);

enum class ElemFn { Neg, Exp, Log, Sin, Cos, Tan, Sqrt, Arctan, Artanh, PowConst };

/// Applies an elementary function to a jet. PowConst reads the exponent from
/// `param`; the other tags ignore it. Singular arguments (log/sqrt at 0,
/// tan at a pole, artanh at ±1, non-integer powers on the branch cut) raise
/// DomainError.
Jet2 jet_apply(ElemFn fn, const Jet2& x, double param = 0.0);

/// z^k for integer k with the convention z^0 = 1 (also at z = 0).
Complex ipow(Complex z, long long k);

}  // namespace beltrami
