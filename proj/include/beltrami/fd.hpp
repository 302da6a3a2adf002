#pragma once

#include <functional>
#include <span>

#include "beltrami/field.hpp"

namespace beltrami {

using EvalFn = std::function<Complex(std::span<const double>)>;

/// Central-difference 2-jet of a callable, the independent oracle for the
/// forward-mode jets. Gradient by (f(u+he_i) - f(u-he_i))/(2h), Hessian
/// diagonal by the second central difference, off-diagonals by the 4-point
/// cross stencil; each unordered pair is computed once and mirrored.
/// `step` is used for every stencil.
Jet2 fd_jet(const EvalFn& f, std::span<const double> point, double step);

/// Per-coordinate default steps balancing truncation against roundoff for
/// the stencil order: eps^(1/3)*(1+|u_k|) for first derivatives and
/// eps^(1/4)*(1+|u_k|) for second derivatives.
Jet2 fd_jet(const EvalFn& f, std::span<const double> point);

Jet2 fd_jet(const ScalarField& field, std::span<const double> point, double step);
Jet2 fd_jet(const ScalarField& field, std::span<const double> point);

}  // namespace beltrami
