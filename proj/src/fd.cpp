#include "beltrami/fd.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace beltrami {

namespace {

Jet2 fd_core(const EvalFn& f, std::span<const double> point,
             std::span<const double> gstep, std::span<const double> hstep) {
    const int n = static_cast<int>(point.size());
    std::vector<double> u(point.begin(), point.end());

    Jet2 r = Jet2::constant(n, f(u));

    for (int i = 0; i < n; ++i) {
        const double h = gstep[static_cast<std::size_t>(i)];
        const double ui = u[static_cast<std::size_t>(i)];
        u[static_cast<std::size_t>(i)] = ui + h;
        const Complex fp = f(u);
        u[static_cast<std::size_t>(i)] = ui - h;
        const Complex fm = f(u);
        u[static_cast<std::size_t>(i)] = ui;
        r.set_grad(i, (fp - fm) / (2.0 * h));
    }

    for (int i = 0; i < n; ++i) {
        const double hi = hstep[static_cast<std::size_t>(i)];
        const double ui = u[static_cast<std::size_t>(i)];
        u[static_cast<std::size_t>(i)] = ui + hi;
        const Complex fp = f(u);
        u[static_cast<std::size_t>(i)] = ui - hi;
        const Complex fm = f(u);
        u[static_cast<std::size_t>(i)] = ui;
        r.set_hess_sym(i, i, (fp - 2.0 * r.value() + fm) / (hi * hi));

        for (int j = i + 1; j < n; ++j) {
            const double hj = hstep[static_cast<std::size_t>(j)];
            const double uj = u[static_cast<std::size_t>(j)];
            Complex s{};
            for (int si = -1; si <= 1; si += 2) {
                for (int sj = -1; sj <= 1; sj += 2) {
                    u[static_cast<std::size_t>(i)] = ui + si * hi;
                    u[static_cast<std::size_t>(j)] = uj + sj * hj;
                    s += static_cast<double>(si * sj) * f(u);
                }
            }
            u[static_cast<std::size_t>(i)] = ui;
            u[static_cast<std::size_t>(j)] = uj;
            r.set_hess_sym(i, j, s / (4.0 * hi * hj));
        }
    }
    return r;
}

void check_step(double step) {
    if (!(step > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
}

}  // namespace

Jet2 fd_jet(const EvalFn& f, std::span<const double> point, double step) {
    check_step(step);
    std::vector<double> h(point.size(), step);
    return fd_core(f, point, h, h);
}

Jet2 fd_jet(const EvalFn& f, std::span<const double> point) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double s3 = std::cbrt(eps);
    const double s4 = std::pow(eps, 0.25);
    std::vector<double> gstep(point.size()), hstep(point.size());
    for (std::size_t k = 0; k < point.size(); ++k) {
        const double scale = 1.0 + std::abs(point[k]);
        gstep[k] = s3 * scale;
        hstep[k] = s4 * scale;
    }
    return fd_core(f, point, gstep, hstep);
}

Jet2 fd_jet(const ScalarField& field, std::span<const double> point, double step) {
    return fd_jet([&field](std::span<const double> u) { return eval_value(field, u); },
                  point, step);
}

Jet2 fd_jet(const ScalarField& field, std::span<const double> point) {
    return fd_jet([&field](std::span<const double> u) { return eval_value(field, u); },
                  point);
}

}  // namespace beltrami
