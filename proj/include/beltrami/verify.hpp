#pragma once

#include "beltrami/identities.hpp"

namespace beltrami {

/// Configuration of one suite run. The default row set covers every catalog
/// member over its compatible builtin charts: the thirteen chart-generic
/// members over euclidean 2/3, polar2, spherical3 and hyperspherical4; the
/// spherical witnesses over spherical3; the separable-construction members
/// over hyperspherical charts of the listed even dims (prop6ii needs >= 4).
struct SuiteConfig {
    std::optional<IdentityId> only;
    std::uint64_t seed = 42;
    int samples = 200;
    double tol = 1e-9;
    PsiVariant psi = PsiVariant::Corrected;
    std::vector<int> dims = {2, 4, 6};
};

struct SuiteRow {
    ResidualReport report;
    /// thm3/prop6ii under the paper psi in dim >= 4 are expected to fail;
    /// everything else is expected to pass.
    bool expected_pass = true;

    bool matches() const { return report.pass == expected_pass; }
};

struct SuiteResult {
    std::vector<SuiteRow> rows;

    bool all_match() const;
};

/// Runs the configured rows, sorted by (identity name, chart name, dim).
SuiteResult run_suite(const SuiteConfig& config);

nlohmann::ordered_json suite_json(const SuiteResult& result);
std::string suite_csv(const SuiteResult& result);
std::string suite_pretty(const SuiteResult& result);

}  // namespace beltrami
