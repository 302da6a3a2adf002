#include "beltrami/jet.hpp"

#include <cmath>
#include <string>

namespace beltrami {

namespace {

void require_same_dim(const Jet2& a, const Jet2& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("jet dimension mismatch: " +
                                    std::to_string(a.dim()) + " vs " +
                                    std::to_string(b.dim()));
    }
}

}  // namespace

Jet2::Jet2(int dim)
    : dim_(dim),
      grad_(static_cast<std::size_t>(dim)),
      hess_(static_cast<std::size_t>(dim) * dim) {}

Jet2 Jet2::constant(int dim, Complex value) {
    Jet2 j(dim);
    j.value_ = value;
    return j;
}

Jet2 Jet2::seed(std::span<const double> point, int k) {
    const int n = static_cast<int>(point.size());
    if (k < 0 || k >= n) {
        throw std::out_of_range("coordinate index " + std::to_string(k) +
                                " out of range for dimension " + std::to_string(n));
    }
    Jet2 j(n);
    j.value_ = Complex(point[static_cast<std::size_t>(k)], 0.0);
    j.grad_[static_cast<std::size_t>(k)] = Complex(1.0, 0.0);
    return j;
}

Jet2 Jet2::operator-() const {
    Jet2 r(dim_);
    r.value_ = -value_;
    for (int i = 0; i < dim_; ++i) r.set_grad(i, -grad(i));
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j) r.set_hess_sym(i, j, -hess(i, j));
    return r;
}

Jet2 Jet2::operator+(const Jet2& rhs) const {
    require_same_dim(*this, rhs);
    Jet2 r(dim_);
    r.value_ = value_ + rhs.value_;
    for (int i = 0; i < dim_; ++i) r.set_grad(i, grad(i) + rhs.grad(i));
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j)
            r.set_hess_sym(i, j, hess(i, j) + rhs.hess(i, j));
    return r;
}

Jet2 Jet2::operator-(const Jet2& rhs) const {
    require_same_dim(*this, rhs);
    Jet2 r(dim_);
    r.value_ = value_ - rhs.value_;
    for (int i = 0; i < dim_; ++i) r.set_grad(i, grad(i) - rhs.grad(i));
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j)
            r.set_hess_sym(i, j, hess(i, j) - rhs.hess(i, j));
    return r;
}

Jet2 Jet2::operator*(const Jet2& rhs) const {
    require_same_dim(*this, rhs);
    Jet2 r(dim_);
    r.value_ = value_ * rhs.value_;
    for (int i = 0; i < dim_; ++i)
        r.set_grad(i, grad(i) * rhs.value_ + value_ * rhs.grad(i));
    // (fg)'' = f''g + f'g' + g'f' + fg''
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j)
            r.set_hess_sym(i, j, hess(i, j) * rhs.value_ +
                                     grad(i) * rhs.grad(j) + grad(j) * rhs.grad(i) +
                                     value_ * rhs.hess(i, j));
    return r;
}

Jet2 Jet2::operator/(const Jet2& rhs) const {
    require_same_dim(*this, rhs);
    const Complex v = rhs.value();
    if (v == Complex(0.0, 0.0)) throw DomainError("division by zero");
    // multiply by the reciprocal jet: f = 1/x, f' = -1/x^2, f'' = 2/x^3
    const Complex inv = 1.0 / v;
    return *this * chain_apply(rhs, inv, -inv * inv, 2.0 * inv * inv * inv);
}

Jet2 Jet2::operator+(Complex c) const {
    Jet2 r = *this;
    r.value_ += c;
    return r;
}

Jet2 Jet2::operator-(Complex c) const {
    Jet2 r = *this;
    r.value_ -= c;
    return r;
}

Jet2 Jet2::operator*(Complex c) const {
    Jet2 r(dim_);
    r.value_ = value_ * c;
    for (int i = 0; i < dim_; ++i) r.set_grad(i, grad(i) * c);
    for (int i = 0; i < dim_; ++i)
        for (int j = i; j < dim_; ++j) r.set_hess_sym(i, j, hess(i, j) * c);
    return r;
}

Jet2 chain_apply(const Jet2& x, Complex f, Complex df, Complex ddf) {
    Jet2 r(x.dim());
    r.value_ = f;
    for (int i = 0; i < x.dim(); ++i) r.set_grad(i, df * x.grad(i));
    for (int i = 0; i < x.dim(); ++i)
        for (int j = i; j < x.dim(); ++j)
            r.set_hess_sym(i, j, ddf * x.grad(i) * x.grad(j) + df * x.hess(i, j));
    return r;
}

Complex ipow(Complex z, long long k) {
    if (k < 0) {
        if (z == Complex(0.0, 0.0)) throw DomainError("0 raised to a negative power");
        return 1.0 / ipow(z, -k);
    }
    Complex acc(1.0, 0.0);
    Complex base = z;
    while (k > 0) {
        if (k & 1) acc *= base;
        base *= base;
        k >>= 1;
    }
    return acc;
}

namespace {

Jet2 pow_const(const Jet2& x, double c) {
    const Complex v = x.value();
    const double ci = std::nearbyint(c);
    if (c == ci && std::abs(c) < 1e15) {
        const long long k = static_cast<long long>(ci);
        if (v == Complex(0.0, 0.0)) {
            if (k < 0) throw DomainError("0 raised to a negative power");
            // value 0^k, first derivative k*0^{k-1}, second k(k-1)*0^{k-2}
            Complex f = ipow(v, k);
            Complex df = (k == 0) ? Complex(0.0) : double(k) * ipow(v, k - 1);
            Complex ddf = (k == 0 || k == 1) ? Complex(0.0)
                                             : double(k) * double(k - 1) * ipow(v, k - 2);
            return chain_apply(x, f, df, ddf);
        }
        const Complex f = ipow(v, k);
        const Complex df = double(k) * f / v;
        const Complex ddf = double(k) * double(k - 1) * f / (v * v);
        return chain_apply(x, f, df, ddf);
    }
    // non-integer exponent: principal branch, argument must stay off the cut
    if (v.imag() == 0.0 && v.real() <= 0.0) {
        throw DomainError("non-integer power of a non-positive real argument");
    }
    const Complex f = std::exp(c * std::log(v));
    const Complex df = c * f / v;
    const Complex ddf = c * (c - 1.0) * f / (v * v);
    return chain_apply(x, f, df, ddf);
}

}  // namespace

Jet2 jet_apply(ElemFn fn, const Jet2& x, double param) {
    const Complex v = x.value();
    switch (fn) {
        case ElemFn::Neg:
            return -x;
        case ElemFn::Exp: {
            const Complex e = std::exp(v);
            return chain_apply(x, e, e, e);
        }
        case ElemFn::Log: {
            if (v == Complex(0.0, 0.0)) throw DomainError("log of zero");
            const Complex inv = 1.0 / v;
            return chain_apply(x, std::log(v), inv, -inv * inv);
        }
        case ElemFn::Sin:
            return chain_apply(x, std::sin(v), std::cos(v), -std::sin(v));
        case ElemFn::Cos:
            return chain_apply(x, std::cos(v), -std::sin(v), -std::cos(v));
        case ElemFn::Tan: {
            const Complex c = std::cos(v);
            if (c == Complex(0.0, 0.0)) throw DomainError("tan at a pole");
            const Complex t = std::sin(v) / c;
            const Complex dt = 1.0 + t * t;
            return chain_apply(x, t, dt, 2.0 * t * dt);
        }
        case ElemFn::Sqrt: {
            if (v == Complex(0.0, 0.0)) throw DomainError("sqrt of zero");
            const Complex s = std::sqrt(v);
            return chain_apply(x, s, 0.5 / s, -0.25 / (s * v));
        }
        case ElemFn::Arctan: {
            const Complex d = 1.0 + v * v;
            if (d == Complex(0.0, 0.0)) throw DomainError("arctan at ±i");
            return chain_apply(x, std::atan(v), 1.0 / d, -2.0 * v / (d * d));
        }
        case ElemFn::Artanh: {
            const Complex d = 1.0 - v * v;
            if (d == Complex(0.0, 0.0)) throw DomainError("artanh at ±1");
            return chain_apply(x, std::atanh(v), 1.0 / d, 2.0 * v / (d * d));
        }
        case ElemFn::PowConst:
            return pow_const(x, param);
    }
    throw std::invalid_argument("unknown elementary function tag");
}

}  // namespace beltrami
