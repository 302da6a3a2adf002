#include <cstdlib>
#include <set>
#include <string>

#include "doctest.h"

#include "beltrami/identities.hpp"
#include "beltrami/verify.hpp"
#include "oracle.hpp"

using namespace beltrami;

namespace {

Chart chart_for(IdentityId id) {
    switch (id) {
        case IdentityId::eq19_20:
        case IdentityId::eq24: return builtin_chart(ChartKind::Spherical3, 3);
        case IdentityId::thm3:
        case IdentityId::prop6i:
        case IdentityId::prop6ii: return builtin_chart(ChartKind::Hyperspherical, 4);
        default: return builtin_chart(ChartKind::Polar2, 2);
    }
}

bool reports_equal(const ResidualReport& a, const ResidualReport& b) {
    return report_json(a) == report_json(b);
}

}  // namespace

TEST_CASE("identity catalog names round-trip") {
    const std::vector<IdentityId> all = all_identities();
    CHECK(all.size() == 18);
    std::set<std::string> seen;
    for (IdentityId id : all) {
        const std::string name = identity_name(id);
        CHECK(seen.insert(name).second);
        REQUIRE(identity_from_name(name).has_value());
        CHECK(*identity_from_name(name) == id);
    }
    CHECK_FALSE(identity_from_name("nosuch").has_value());
}

TEST_CASE("every identity passes on its home chart") {
    for (IdentityId id : all_identities()) {
        CAPTURE(identity_name(id));
        const Chart chart = chart_for(id);
        const ResidualReport rep = check_identity(id, chart, 7, 25, 1e-9);
        CHECK(rep.pass);
        CHECK(rep.max_abs_residual < 1e-9);
        CHECK(rep.pass == (rep.max_abs_residual < rep.tolerance));
        CHECK(rep.samples == 25);
        CHECK(rep.seed == 7);
        CHECK(rep.chart == chart.name);
        CHECK(rep.dim == chart.dim());
        REQUIRE(rep.argmax_point.size() == static_cast<std::size_t>(chart.dim()));
        CHECK(chart.contains(rep.argmax_point));
    }
}

TEST_CASE("chart compatibility is enforced") {
    const Chart polar = builtin_chart(ChartKind::Polar2, 2);
    CHECK_THROWS_AS((void)check_identity(IdentityId::eq24, polar, 1, 5, 1e-9),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)check_identity(IdentityId::thm3, polar, 1, 5, 1e-9),
                    std::invalid_argument);
    const Chart hs4 = builtin_chart(ChartKind::Hyperspherical, 4);
    CHECK_THROWS_AS((void)check_identity(IdentityId::prop6ii, hs4, 1, 0, 1e-9),
                    std::invalid_argument);
}

TEST_CASE("the psi variants split exactly where they should") {
    const Chart hs2 = builtin_chart(ChartKind::Hyperspherical, 2);
    const Chart hs4 = builtin_chart(ChartKind::Hyperspherical, 4);

    CheckOptions paper;
    paper.psi = PsiVariant::Paper;

    // dimension 2 has no psi-weighted factor, both readings agree
    CHECK(check_identity(IdentityId::thm3, hs2, 42, 50, 1e-9, paper).pass);
    CHECK(check_identity(IdentityId::thm3, hs2, 42, 50, 1e-9).pass);

    // from dimension 4 on, the printed psi breaks the construction loudly
    const ResidualReport broken = check_identity(IdentityId::thm3, hs4, 42, 50, 1e-9, paper);
    CHECK_FALSE(broken.pass);
    CHECK(broken.max_abs_residual > 1e-3);
    REQUIRE(broken.psi.has_value());
    CHECK(*broken.psi == PsiVariant::Paper);

    const ResidualReport fixed = check_identity(IdentityId::thm3, hs4, 42, 50, 1e-9);
    CHECK(fixed.pass);
    REQUIRE(fixed.psi.has_value());
    CHECK(*fixed.psi == PsiVariant::Corrected);

    const ResidualReport products = check_identity(IdentityId::prop6ii, hs4, 42, 50, 1e-9, paper);
    CHECK_FALSE(products.pass);
    CHECK(products.max_abs_residual > 1e-3);

    // the chain-rule member is pinned to the corrected reading: it reports
    // that variant and passes no matter which one the caller asked for
    const ResidualReport chain = check_identity(IdentityId::prop6i, hs4, 42, 50, 1e-9, paper);
    CHECK(chain.pass);
    REQUIRE(chain.psi.has_value());
    CHECK(*chain.psi == PsiVariant::Corrected);
}

TEST_CASE("product construction accepts nontrivial factor lists") {
    const Chart hs4 = builtin_chart(ChartKind::Hyperspherical, 4);
    CheckOptions opts;
    opts.product_fns = {AnalyticFn::square(), AnalyticFn::exp()};
    const ResidualReport rep = check_identity(IdentityId::prop6ii, hs4, 42, 100, 1e-8, opts);
    CHECK(rep.pass);
    CHECK(rep.max_abs_residual < 1e-8);

    opts.product_fns = {AnalyticFn::square()};  // wrong arity for dim 4
    CHECK_THROWS_AS((void)check_identity(IdentityId::prop6ii, hs4, 42, 10, 1e-8, opts),
                    std::invalid_argument);
}

TEST_CASE("harmonic spec defaults and validation") {
    const HarmonicSpec spec = HarmonicSpec::defaults(6, PsiVariant::Corrected);
    CHECK(spec.exponents == std::vector<int>{1, 1, 1, -1, 1, -1});
    CHECK(spec.scaled(2).exponents == std::vector<int>{2, 2, 2, -2, 2, -2});
    CHECK_FALSE(consecutive_pairs_cancel(spec));  // p1 + p2 = 2

    HarmonicSpec strict = spec;
    strict.exponents = {1, -1, 2, -2, 3, -3};
    CHECK(consecutive_pairs_cancel(strict));

    CHECK_THROWS_AS((void)HarmonicSpec::defaults(3, PsiVariant::Corrected),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)HarmonicSpec::defaults(0, PsiVariant::Corrected),
                    std::invalid_argument);
    HarmonicSpec bad = spec;
    bad.exponents.pop_back();
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("the separable field multiplies out as specified") {
    const Point pt = {1.7, 0.9, 0.6, 2.3};

    const ScalarField fixed = phi0(HarmonicSpec::defaults(4, PsiVariant::Corrected));
    const Complex sec_tan = 1.0 / std::cos(0.6) + std::tan(0.6);
    const Complex want_fixed =
        1.7 * std::polar(1.0, 0.9) * sec_tan * std::polar(1.0, -2.3);
    CHECK(std::abs(eval_value(fixed, pt) - want_fixed) < 1e-12);

    // the printed psi is the identity on the principal branch, so its factor
    // degenerates to a plain exponential
    const ScalarField printed = phi0(HarmonicSpec::defaults(4, PsiVariant::Paper));
    const Complex want_printed =
        1.7 * std::polar(1.0, 0.9) * std::exp(0.6) * std::polar(1.0, -2.3);
    CHECK(std::abs(eval_value(printed, pt) - want_printed) < 1e-12);
}

TEST_CASE("separable expansion vanishes only for the corrected psi") {
    const Chart hs4 = builtin_chart(ChartKind::Hyperspherical, 4);
    const HarmonicSpec good = HarmonicSpec::defaults(4, PsiVariant::Corrected);
    const HarmonicSpec bad = HarmonicSpec::defaults(4, PsiVariant::Paper);
    DetRng rng(0x5EB);
    for (int trial = 0; trial < 20; ++trial) {
        const Point pt = oracle::interior_point(hs4, rng);
        CHECK(std::abs(separable_expansion(good, pt)) < 1e-12);
        CHECK(std::abs(separable_expansion(bad, pt)) > 1e-3);
    }
}

TEST_CASE("expansion shortcut equals the first operator of the field") {
    // Delta1(Phi0) = (Phi0^2 / u1^2) * bracket, for either psi reading
    const Chart hs4 = builtin_chart(ChartKind::Hyperspherical, 4);
    DetRng rng(0xAB5);
    for (PsiVariant psi : {PsiVariant::Corrected, PsiVariant::Paper}) {
        const HarmonicSpec spec = HarmonicSpec::defaults(4, psi);
        const ScalarField field = phi0(spec);
        for (int trial = 0; trial < 10; ++trial) {
            const Point pt = oracle::interior_point(hs4, rng);
            const Complex lhs = delta1(field, hs4, pt);
            const Complex val = eval_value(field, pt);
            const Complex rhs = val * val / (pt[0] * pt[0]) * separable_expansion(spec, pt);
            CHECK(oracle::rel_err(lhs, rhs) < 1e-9);

            // verdicts agree too: the bracket vanishes iff the operator does,
            // once the operator is rescaled by |Phi0|^2 / u1^2
            const double scale = std::norm(val) / (pt[0] * pt[0]);
            const bool sum_null = std::abs(separable_expansion(spec, pt)) < 1e-9;
            const bool op_null = std::abs(lhs) < 1e-9 * scale;
            CHECK(sum_null == op_null);
        }
    }
}

TEST_CASE("random fields are deterministic and well spread") {
    const std::vector<std::string> coords = {"x", "y", "z"};
    for (FieldKind kind : {FieldKind::Poly, FieldKind::Trig, FieldKind::Mixed}) {
        const ScalarField a = random_field(1234, coords, kind);
        const ScalarField b = random_field(1234, coords, kind);
        CHECK(structurally_equal(a.expr, b.expr));
    }
    std::set<std::string> prints;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
        prints.insert(print(random_field(seed, coords, FieldKind::Mixed).expr));
    CHECK(prints.size() > 95);
}

TEST_CASE("reports are identical across runs and thread counts") {
    const Chart chart = builtin_chart(ChartKind::Spherical3, 3);
    const ResidualReport once = check_identity(IdentityId::prop4, chart, 99, 60, 1e-9);
    const ResidualReport again = check_identity(IdentityId::prop4, chart, 99, 60, 1e-9);
    CHECK(reports_equal(once, again));

    REQUIRE(setenv("BELTRAMI_THREADS", "4", 1) == 0);
    const ResidualReport threaded = check_identity(IdentityId::prop4, chart, 99, 60, 1e-9);
    REQUIRE(unsetenv("BELTRAMI_THREADS") == 0);
    CHECK(reports_equal(once, threaded));

    // different seeds really change the draw
    const ResidualReport other = check_identity(IdentityId::prop4, chart, 100, 60, 1e-9);
    CHECK(once.argmax_point != other.argmax_point);
}

TEST_CASE("report json spells the contract") {
    const Chart chart = builtin_chart(ChartKind::Hyperspherical, 4);
    const ResidualReport rep = check_identity(IdentityId::thm3, chart, 3, 10, 1e-9);
    const nlohmann::ordered_json j = report_json(rep);
    std::vector<std::string> keys;
    for (const auto& item : j.items()) keys.push_back(item.key());
    CHECK(keys == std::vector<std::string>{"identity", "chart", "seed", "samples",
                                           "max_abs_residual", "argmax_point", "tolerance",
                                           "pass", "psi_variant", "dim"});
    CHECK(j["identity"] == "thm3");
    CHECK(j["psi_variant"] == "corrected");
    CHECK(j["dim"] == 4);

    // members without a psi parameter serialize it as null
    const Chart polar = builtin_chart(ChartKind::Polar2, 2);
    const nlohmann::ordered_json plain =
        report_json(check_identity(IdentityId::prop1, polar, 3, 10, 1e-9));
    CHECK(plain["psi_variant"].is_null());
}

TEST_CASE("suite rows cover the catalog and sort deterministically") {
    SuiteConfig config;
    config.samples = 5;
    const SuiteResult result = run_suite(config);
    CHECK(result.all_match());
    // 13 chart-generic x 5 charts + eq19_20 + eq24 + thm3 x 3 + prop6i x 3 + prop6ii x 2
    CHECK(result.rows.size() == 75);
    for (std::size_t k = 1; k < result.rows.size(); ++k) {
        const auto& a = result.rows[k - 1].report;
        const auto& b = result.rows[k].report;
        const auto key = [](const ResidualReport& r) {
            return std::tuple<std::string, std::string, int>(identity_name(r.id), r.chart, r.dim);
        };
        CHECK(key(a) < key(b));
    }

    SuiteConfig paper = config;
    paper.psi = PsiVariant::Paper;
    const SuiteResult broken = run_suite(paper);
    CHECK(broken.all_match());  // the failures are the expected verdicts
    int expected_failures = 0;
    for (const SuiteRow& row : broken.rows)
        if (!row.expected_pass) {
            ++expected_failures;
            CHECK_FALSE(row.report.pass);
        }
    CHECK(expected_failures == 4);  // thm3 and prop6ii in dims 4 and 6
}

TEST_CASE("suite config knobs narrow the run") {
    SuiteConfig config;
    config.only = IdentityId::lemma1;
    config.samples = 5;
    config.dims = {2, 4};
    const SuiteResult result = run_suite(config);
    CHECK(result.rows.size() == 5);
    for (const SuiteRow& row : result.rows) CHECK(row.report.id == IdentityId::lemma1);

    config.only = IdentityId::thm3;
    const SuiteResult thm3_only = run_suite(config);
    CHECK(thm3_only.rows.size() == 2);

    CHECK_THROWS_AS((void)run_suite([] {
                        SuiteConfig c;
                        c.dims = {3};
                        return c;
                    }()),
                    std::invalid_argument);
}
