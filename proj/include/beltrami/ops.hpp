#pragma once

#include "beltrami/chart.hpp"

namespace beltrami {

/// The analytic functions the composition identities quantify over.
/// polynomial holds c_1..c_K for f(z) = sum_{n=1..K} c_n z^n, so f(0) = 0.
struct AnalyticFn {
    enum class Tag { Identity, Square, Cube, Exp, Sin, Log1p, Polynomial };

    Tag tag = Tag::Identity;
    std::vector<double> coeffs;  // Polynomial only

    static AnalyticFn identity() { return {Tag::Identity, {}}; }
    static AnalyticFn square() { return {Tag::Square, {}}; }
    static AnalyticFn cube() { return {Tag::Cube, {}}; }
    static AnalyticFn exp() { return {Tag::Exp, {}}; }
    static AnalyticFn sin() { return {Tag::Sin, {}}; }
    static AnalyticFn log1p() { return {Tag::Log1p, {}}; }
    static AnalyticFn polynomial(std::vector<double> c) { return {Tag::Polynomial, std::move(c)}; }

    Complex f(Complex z) const;
    Complex df(Complex z) const;
    Complex ddf(Complex z) const;
    std::string name() const;
};

/// f applied to the field as an expression rewrite, so the result is an
/// ordinary ScalarField differentiated by the same jet machinery.
ScalarField compose(const AnalyticFn& f, const ScalarField& phi);

/// Metric and Christoffel data of one chart point, computed once and shared
/// across operator evaluations at that point.
struct Frame {
    std::vector<double> point;
    MetricAt metric;
    ChristoffelAt christoffel;
};

Frame frame_at(const Chart& chart, std::span<const double> point);

// jet-level operators against a precomputed frame
Complex delta1_pair(const Jet2& phi, const Jet2& psi, const MetricAt& m);
Complex delta1(const Jet2& phi, const MetricAt& m);
Complex delta2(const Jet2& phi, const Frame& fr);

/// First Beltrami operator of a pair, 2 sum_ij g^ij d_i(Phi) d_j(Psi).
Complex delta1_pair(const ScalarField& phi, const ScalarField& psi, const Chart& chart,
                    std::span<const double> point);

/// First Beltrami operator, sum_ij g^ij d_i(Phi) d_j(Phi); half the pair form
/// of a field with itself.
Complex delta1(const ScalarField& phi, const Chart& chart, std::span<const double> point);

/// Second Beltrami operator, sum_ij g^ij (d_i d_j Phi - sum_k Gamma^k_ij d_k Phi).
Complex delta2(const ScalarField& phi, const Chart& chart, std::span<const double> point);

/// (sum_ij g^ij u_i u_j) / (sum_k u_k^2); the closed form that delta1 of the
/// coordinate norm must reproduce. Errors at the origin.
double norm_ratio(const Chart& chart, std::span<const double> point);

}  // namespace beltrami
