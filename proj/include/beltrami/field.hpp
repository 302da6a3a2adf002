#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "beltrami/expr.hpp"
#include "beltrami/jet.hpp"

namespace beltrami {

/// A complex scalar field on a coordinate chart: an expression together with
/// the ordered coordinate names it was parsed against.
struct ScalarField {
    ExprPtr expr;
    std::vector<std::string> coords;

    int dim() const { return static_cast<int>(coords.size()); }
};

ScalarField make_field(std::string_view text, std::vector<std::string> coords);

/// Value, gradient and Hessian at `point` by forward 2-jet propagation.
/// Throws EvalError (holding the subexpression offset when available) where
/// the expression leaves its domain, and std::invalid_argument on a point of
/// the wrong dimension.
Jet2 eval_jet2(const ScalarField& f, std::span<const double> point);

/// Value only; cheaper, used by the finite-difference stencils.
Complex eval_value(const ScalarField& f, std::span<const double> point);

// field-level combinators (operands must share a coordinate list)
ScalarField field_add(const ScalarField& f, const ScalarField& g);
ScalarField field_sub(const ScalarField& f, const ScalarField& g);
ScalarField field_mul(const ScalarField& f, const ScalarField& g);
ScalarField field_scale(Complex c, const ScalarField& f);
ScalarField field_pow_int(const ScalarField& f, int n);

}  // namespace beltrami
