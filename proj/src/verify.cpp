#include "beltrami/verify.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace beltrami {

namespace {

struct RowPlan {
    IdentityId id;
    Chart chart;
};

bool chart_generic(IdentityId id) {
    switch (id) {
        case IdentityId::eq19_20:
        case IdentityId::eq24:
        case IdentityId::thm3:
        case IdentityId::prop6i:
        case IdentityId::prop6ii: return false;
        default: return true;
    }
}

std::vector<RowPlan> plan_rows(const SuiteConfig& config) {
    std::vector<int> dims = config.dims;
    for (int d : dims) {
        if (d < 2 || d % 2 != 0 || d > 16)
            throw std::invalid_argument("suite dims must be even and within 2..16, got " +
                                        std::to_string(d));
    }

    std::vector<RowPlan> plan;
    auto want = [&config](IdentityId id) { return !config.only || *config.only == id; };

    std::vector<Chart> generic_charts;
    bool need_generic = false;
    for (IdentityId id : all_identities()) need_generic = need_generic || (want(id) && chart_generic(id));
    if (need_generic) {
        generic_charts.push_back(builtin_chart(ChartKind::Euclidean, 2));
        generic_charts.push_back(builtin_chart(ChartKind::Euclidean, 3));
        generic_charts.push_back(builtin_chart(ChartKind::Polar2, 2));
        generic_charts.push_back(builtin_chart(ChartKind::Spherical3, 3));
        generic_charts.push_back(builtin_chart(ChartKind::Hyperspherical, 4));
    }

    for (IdentityId id : all_identities()) {
        if (!want(id)) continue;
        if (chart_generic(id)) {
            for (const Chart& c : generic_charts) plan.push_back({id, c});
        } else if (id == IdentityId::eq19_20 || id == IdentityId::eq24) {
            plan.push_back({id, builtin_chart(ChartKind::Spherical3, 3)});
        } else {
            for (int d : dims) {
                if (id == IdentityId::prop6ii && d < 4) continue;
                plan.push_back({id, builtin_chart(ChartKind::Hyperspherical, d)});
            }
        }
    }
    return plan;
}

bool expected_to_pass(const SuiteRow& row, PsiVariant psi) {
    const IdentityId id = row.report.id;
    return !((id == IdentityId::thm3 || id == IdentityId::prop6ii) &&
             psi == PsiVariant::Paper && row.report.dim >= 4);
}

}  // namespace

bool SuiteResult::all_match() const {
    return std::all_of(rows.begin(), rows.end(), [](const SuiteRow& r) { return r.matches(); });
}

SuiteResult run_suite(const SuiteConfig& config) {
    CheckOptions opts;
    opts.psi = config.psi;

    SuiteResult result;
    for (const RowPlan& p : plan_rows(config)) {
        SuiteRow row;
        row.report = check_identity(p.id, p.chart, config.seed, config.samples, config.tol, opts);
        row.expected_pass = expected_to_pass(row, config.psi);
        result.rows.push_back(std::move(row));
    }
    std::sort(result.rows.begin(), result.rows.end(), [](const SuiteRow& a, const SuiteRow& b) {
        const std::string_view an = identity_name(a.report.id);
        const std::string_view bn = identity_name(b.report.id);
        if (an != bn) return an < bn;
        if (a.report.chart != b.report.chart) return a.report.chart < b.report.chart;
        return a.report.dim < b.report.dim;
    });
    return result;
}

nlohmann::ordered_json suite_json(const SuiteResult& result) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const SuiteRow& row : result.rows) {
        nlohmann::ordered_json j = report_json(row.report);
        j["expected_pass"] = row.expected_pass;
        rows.push_back(std::move(j));
    }
    return rows;
}

std::string suite_csv(const SuiteResult& result) {
    std::ostringstream os;
    os << "identity,chart,dim,seed,samples,max_abs_residual,argmax_point,tolerance,pass,"
          "psi_variant,expected_pass\n";
    for (const SuiteRow& row : result.rows) {
        const ResidualReport& r = row.report;
        os << identity_name(r.id) << ',' << r.chart << ',' << r.dim << ',' << r.seed << ','
           << r.samples << ',';
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", r.max_abs_residual);
        os << buf << ',';
        for (std::size_t k = 0; k < r.argmax_point.size(); ++k) {
            if (k) os << ';';
            std::snprintf(buf, sizeof buf, "%.17g", r.argmax_point[k]);
            os << buf;
        }
        os << ',';
        std::snprintf(buf, sizeof buf, "%.17g", r.tolerance);
        os << buf << ',' << (r.pass ? "true" : "false") << ','
           << (r.psi ? psi_variant_name(*r.psi) : "") << ','
           << (row.expected_pass ? "true" : "false") << '\n';
    }
    return os.str();
}

std::string suite_pretty(const SuiteResult& result) {
    std::ostringstream os;
    char line[160];
    std::snprintf(line, sizeof line, "%-8s  %-16s  %3s  %-12s  %-9s  %-6s  %s\n", "identity",
                  "chart", "dim", "max residual", "psi", "pass", "verdict");
    os << line;
    int mismatches = 0;
    for (const SuiteRow& row : result.rows) {
        const ResidualReport& r = row.report;
        const bool ok = row.matches();
        if (!ok) ++mismatches;
        std::snprintf(line, sizeof line, "%-8s  %-16s  %3d  %-12.3e  %-9s  %-6s  %s\n",
                      identity_name(r.id), r.chart.c_str(), r.dim, r.max_abs_residual,
                      r.psi ? psi_variant_name(*r.psi) : "-", r.pass ? "pass" : "FAIL",
                      ok ? (r.pass ? "ok" : "ok (expected failure)") : "MISMATCH");
        os << line;
    }
    std::snprintf(line, sizeof line, "%zu rows, %d verdict mismatch%s\n", result.rows.size(),
                  mismatches, mismatches == 1 ? "" : "es");
    os << line;
    return os.str();
}

}  // namespace beltrami
