#include "beltrami/ops.hpp"

#include <cmath>
#include <sstream>

namespace beltrami {

Complex AnalyticFn::f(Complex z) const {
    switch (tag) {
        case Tag::Identity: return z;
        case Tag::Square: return z * z;
        case Tag::Cube: return z * z * z;
        case Tag::Exp: return std::exp(z);
        case Tag::Sin: return std::sin(z);
        case Tag::Log1p: {
            const Complex w = 1.0 + z;
            if (w == Complex(0.0, 0.0)) throw DomainError("log1p at -1");
            return std::log(w);
        }
        case Tag::Polynomial: {
            // Horner on f(z)/z = c_1 + c_2 z + ... keeps f(0) = 0 exact
            Complex acc(0.0, 0.0);
            for (std::size_t n = coeffs.size(); n-- > 0;) acc = acc * z + coeffs[n];
            return acc * z;
        }
    }
    throw std::invalid_argument("unknown analytic function tag");
}

Complex AnalyticFn::df(Complex z) const {
    switch (tag) {
        case Tag::Identity: return Complex(1.0, 0.0);
        case Tag::Square: return 2.0 * z;
        case Tag::Cube: return 3.0 * z * z;
        case Tag::Exp: return std::exp(z);
        case Tag::Sin: return std::cos(z);
        case Tag::Log1p: {
            const Complex w = 1.0 + z;
            if (w == Complex(0.0, 0.0)) throw DomainError("log1p at -1");
            return 1.0 / w;
        }
        case Tag::Polynomial: {
            Complex acc(0.0, 0.0);
            for (std::size_t n = coeffs.size(); n-- > 0;)
                acc = acc * z + static_cast<double>(n + 1) * coeffs[n];
            return acc;
        }
    }
    throw std::invalid_argument("unknown analytic function tag");
}

Complex AnalyticFn::ddf(Complex z) const {
    switch (tag) {
        case Tag::Identity: return Complex(0.0, 0.0);
        case Tag::Square: return Complex(2.0, 0.0);
        case Tag::Cube: return 6.0 * z;
        case Tag::Exp: return std::exp(z);
        case Tag::Sin: return -std::sin(z);
        case Tag::Log1p: {
            const Complex w = 1.0 + z;
            if (w == Complex(0.0, 0.0)) throw DomainError("log1p at -1");
            return -1.0 / (w * w);
        }
        case Tag::Polynomial: {
            Complex acc(0.0, 0.0);
            for (std::size_t n = coeffs.size(); n-- > 1;)
                acc = acc * z + static_cast<double>((n + 1) * n) * coeffs[n];
            return acc;
        }
    }
    throw std::invalid_argument("unknown analytic function tag");
}

std::string AnalyticFn::name() const {
    switch (tag) {
        case Tag::Identity: return "identity";
        case Tag::Square: return "square";
        case Tag::Cube: return "cube";
        case Tag::Exp: return "exp";
        case Tag::Sin: return "sin";
        case Tag::Log1p: return "log1p";
        case Tag::Polynomial: {
            std::ostringstream os;
            os << "poly[";
            for (std::size_t n = 0; n < coeffs.size(); ++n) {
                if (n) os << ",";
                os << coeffs[n];
            }
            os << "]";
            return os.str();
        }
    }
    return "?";
}

ScalarField compose(const AnalyticFn& f, const ScalarField& phi) {
    switch (f.tag) {
        case AnalyticFn::Tag::Identity: return phi;
        case AnalyticFn::Tag::Square: return {make_pow(phi.expr, make_num(2.0)), phi.coords};
        case AnalyticFn::Tag::Cube: return {make_pow(phi.expr, make_num(3.0)), phi.coords};
        case AnalyticFn::Tag::Exp: return {make_call(FnTag::Exp, phi.expr), phi.coords};
        case AnalyticFn::Tag::Sin: return {make_call(FnTag::Sin, phi.expr), phi.coords};
        case AnalyticFn::Tag::Log1p:
            return {make_call(FnTag::Log, make_add(make_num(1.0), phi.expr)), phi.coords};
        case AnalyticFn::Tag::Polynomial: {
            ExprPtr sum;
            for (std::size_t n = 0; n < f.coeffs.size(); ++n) {
                if (f.coeffs[n] == 0.0) continue;
                ExprPtr term = make_mul(
                    make_num(f.coeffs[n]),
                    make_pow(phi.expr, make_num(static_cast<double>(n + 1))));
                sum = sum ? make_add(std::move(sum), std::move(term)) : std::move(term);
            }
            if (!sum) sum = make_num(0.0);
            return {std::move(sum), phi.coords};
        }
    }
    throw std::invalid_argument("unknown analytic function tag");
}

Frame frame_at(const Chart& chart, std::span<const double> point) {
    Frame fr;
    fr.point.assign(point.begin(), point.end());
    fr.metric = metric_at(chart, point);
    fr.christoffel = christoffel_at(chart, point);
    return fr;
}

Complex delta1_pair(const Jet2& phi, const Jet2& psi, const MetricAt& m) {
    const int n = phi.dim();
    Complex s(0.0, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += m.g_inv(i, j) * phi.grad(i) * psi.grad(j);
    return 2.0 * s;
}

Complex delta1(const Jet2& phi, const MetricAt& m) {
    const int n = phi.dim();
    Complex s(0.0, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += m.g_inv(i, j) * phi.grad(i) * phi.grad(j);
    return s;
}

Complex delta2(const Jet2& phi, const Frame& fr) {
    const int n = phi.dim();
    Complex s(0.0, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            Complex t = phi.hess(i, j);
            for (int k = 0; k < n; ++k) t -= fr.christoffel.at(k, i, j) * phi.grad(k);
            s += fr.metric.g_inv(i, j) * t;
        }
    }
    return s;
}

Complex delta1_pair(const ScalarField& phi, const ScalarField& psi, const Chart& chart,
                    std::span<const double> point) {
    chart.require_inside(point);
    return delta1_pair(eval_jet2(phi, point), eval_jet2(psi, point), metric_at(chart, point));
}

Complex delta1(const ScalarField& phi, const Chart& chart, std::span<const double> point) {
    chart.require_inside(point);
    return delta1(eval_jet2(phi, point), metric_at(chart, point));
}

Complex delta2(const ScalarField& phi, const Chart& chart, std::span<const double> point) {
    return delta2(eval_jet2(phi, point), frame_at(chart, point));
}

double norm_ratio(const Chart& chart, std::span<const double> point) {
    double sq = 0.0;
    for (double u : point) sq += u * u;
    if (sq == 0.0) throw DomainError("norm_ratio at the origin");
    const MetricAt m = metric_at(chart, point);
    double s = 0.0;
    for (int i = 0; i < chart.dim(); ++i)
        for (int j = 0; j < chart.dim(); ++j)
            s += m.g_inv(i, j) * point[static_cast<std::size_t>(i)] *
                 point[static_cast<std::size_t>(j)];
    return s / sq;
}

}  // namespace beltrami
