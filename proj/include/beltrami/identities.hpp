#pragma once

#include <cstdint>
#include <optional>

#include "beltrami/ops.hpp"
#include "beltrami/rng.hpp"

namespace beltrami {

/// The catalog of verified statements. Each member owns one residual
/// function evaluated by check_identity; names are the wire contract used
/// by reports and the CLI.
enum class IdentityId {
    prop1,    // first-operator product rule
    prop2,    // first-operator pair product rule
    eq10,     // pair rule specialized to a square
    prop3,    // pair rule for integer powers, n = 2..5
    eq12,     // additivity of the pair form
    thm1,     // first-operator chain rule through analytic f
    prop4,    // second-operator product rule
    prop5,    // second-operator power rule, n = 2..5
    eq17,     // second-operator square rule
    thm2,     // second-operator chain rule through analytic f
    eq19_20,  // null fields stay harmonic under analytic composition
    lemma1,   // first operator of the coordinate norm
    eq22,     // pair form of two radial compositions
    eq23,     // second operator of a radial composition
    eq24,     // the x - iy field is null and harmonic on spherical3
    thm3,     // separable harmonic construction in even dimension
    prop6i,   // chain rule collapse for the separable construction
    prop6ii,  // products of analytic functions of coordinate pairs
};

const char* identity_name(IdentityId id);
std::optional<IdentityId> identity_from_name(std::string_view name);
std::vector<IdentityId> all_identities();

/// The two readings of the angular weight in the separable construction.
/// Paper: psi(x) = 2 arctan(tan(x/2)), the identity map on the principal
/// branch, under which the construction fails for dimension >= 4.
/// Corrected: psi(x) = log(sec x + tan x), the antiderivative of sec implied
/// by the separation ODE y'/y = c sec(x), under which it holds.
enum class PsiVariant { Paper, Corrected };

const char* psi_variant_name(PsiVariant psi);   // "paper" / "corrected"
std::string psi_variant_label(PsiVariant psi);  // formula text for reports

/// Parameters of the separable harmonic field on the hyperspherical chart:
/// Phi0 = u1^{p1} * prod of angular factors, exp(i p_k u_k) at even
/// coordinate positions and exp(p_k psi(u_k)) at odd positions >= 3.
struct HarmonicSpec {
    int dim = 2;  // even, >= 2
    PsiVariant psi = PsiVariant::Corrected;
    std::vector<int> exponents;  // p_1..p_N

    /// p1 = p2 = 1, then alternating +1 (odd positions) / -1 (even).
    static HarmonicSpec defaults(int dim, PsiVariant psi);
    /// Same spec with every exponent multiplied by m (the effect of
    /// composing Phi0 with z^m).
    HarmonicSpec scaled(int m) const;
    void validate() const;
};

/// The constraint named in the product construction: p_k + p_{k+1} = 0 for
/// every consecutive pair (1,2), (3,4), ... Advisory, not enforced; the sum
/// below vanishes under the weaker |p_k| = |p_{k+1}|.
bool consecutive_pairs_cancel(const HarmonicSpec& spec);

/// The separable field as an expression over the hyperspherical coordinates.
ScalarField phi0(const HarmonicSpec& spec);

/// The bracketed sum whose vanishing is equivalent to delta1(Phi0) = 0:
///   term_1 = p1^2, term_2 = -p2^2,
///   term_k = (a_k'/a_k)^2 * prod_{j=2}^{k-1} sec^2(u_j) for k >= 3,
/// evaluated by independent arithmetic (no jets, no metric). Throws
/// DomainError when some cos(u_j) = 0.
Complex separable_expansion(const HarmonicSpec& spec, std::span<const double> point);

/// G = prod_j f_j(x_{2j-1} x_{2j}) where x_1 = u1 and x_m for m >= 2 is the
/// unit-exponent angular factor at position m (psi-typed at odd positions).
/// fns.size() must be dim/2.
ScalarField product_construction(std::span<const AnalyticFn> fns, int dim, PsiVariant psi);

enum class FieldKind { Poly, Trig, Mixed };

/// Deterministic sparse random field over the named coordinates.
/// poly: 2..4 monomials of total degree <= 3 with coefficients in [-2, 2];
/// trig: 2..4 terms c * sin/cos(u_k); mixed: one of each draw summed.
ScalarField random_field(std::uint64_t seed, std::vector<std::string> coords, FieldKind kind);

struct ResidualReport {
    IdentityId id{};
    std::string chart;
    int dim = 0;
    std::uint64_t seed = 0;
    int samples = 0;
    double max_abs_residual = 0.0;
    std::vector<double> argmax_point;
    double tolerance = 0.0;
    bool pass = false;
    std::optional<PsiVariant> psi;  // set for the psi-parameterized members
};

struct CheckOptions {
    PsiVariant psi = PsiVariant::Corrected;
    /// prop6ii factor override (size dim/2); defaults to all-identity.
    std::optional<std::vector<AnalyticFn>> product_fns;
};

/// Draws `samples` domain points (deterministic in seed, independent of
/// evaluation order), redraws the quantified random fields every 25 samples,
/// and reports the max of |LHS - RHS| / (1 + max(|LHS|, |RHS|)). A sample
/// hitting an evaluation error is redrawn up to 10 times before the whole
/// check aborts. Ties in the max go to the lowest sample index.
ResidualReport check_identity(IdentityId id, const Chart& chart, std::uint64_t seed,
                              int samples, double tol, const CheckOptions& opts = {});

nlohmann::ordered_json report_json(const ResidualReport& report);

}  // namespace beltrami
