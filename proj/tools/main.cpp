#include <unistd.h>

#include <charconv>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "beltrami/verify.hpp"

namespace {

using namespace beltrami;

/// Problems with how the tool was invoked (flags, point syntax, chart files);
/// distinct from runtime domain/singularity errors so the exit codes differ.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_point(const std::string& text) {
    std::vector<double> pt;
    std::size_t at = 0;
    while (at <= text.size()) {
        std::size_t comma = text.find(',', at);
        if (comma == std::string::npos) comma = text.size();
        const char* begin = text.data() + at;
        const char* end = text.data() + comma;
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(begin, end, v);
        if (ec != std::errc() || ptr != end || begin == end)
            throw UsageError("--point expects comma-separated decimals, got '" + text + "'");
        pt.push_back(v);
        at = comma + 1;
        if (comma == text.size()) break;
    }
    return pt;
}

struct ChartRef {
    std::string builtin;
    int dim = 0;
    std::string file;
};

void add_chart_flags(CLI::App* cmd, ChartRef& ref) {
    auto* b = cmd->add_option("--builtin", ref.builtin,
                              "builtin chart: euclidean, polar2, spherical3, hyperspherical");
    cmd->add_option("--dim", ref.dim, "dimension for euclidean/hyperspherical builtins");
    auto* f = cmd->add_option("--chart-file", ref.file, "JSON chart description");
    b->excludes(f);
}

Chart resolve_chart(const ChartRef& ref) {
    if (!ref.file.empty()) {
        try {
            return load_chart_file(ref.file);
        } catch (const ChartError& e) {
            throw UsageError(e.what());
        }
    }
    if (ref.builtin.empty()) throw UsageError("need --builtin or --chart-file");
    int dim = ref.dim;
    if (dim == 0) {
        if (ref.builtin == "polar2") dim = 2;
        else if (ref.builtin == "spherical3") dim = 3;
        else throw UsageError("--builtin " + ref.builtin + " needs --dim");
    }
    try {
        return builtin_chart(ref.builtin, dim);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

std::string pick_format(const std::string& requested) {
    if (!requested.empty()) return requested;
    return isatty(fileno(stdout)) ? "pretty" : "json";
}

nlohmann::ordered_json matrix_json(const Eigen::MatrixXd& m) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

void print_matrix(const char* label, const Eigen::MatrixXd& m) {
    std::printf("%s =\n", label);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) std::printf(" %14.8g", m(i, j));
        std::printf("\n");
    }
}

int cmd_metric(const ChartRef& ref, const std::string& point_text, const std::string& format) {
    const Chart chart = resolve_chart(ref);
    const std::vector<double> pt = parse_point(point_text);
    const MetricAt m = metric_at(chart, pt);
    const std::string fmt = pick_format(format);
    if (fmt == "json") {
        nlohmann::ordered_json j;
        j["chart"] = chart.name;
        j["point"] = pt;
        j["g"] = matrix_json(m.g);
        j["g_inv"] = matrix_json(m.g_inv);
        std::printf("%s\n", j.dump().c_str());
    } else if (fmt == "csv") {
        std::printf("i,j,g,g_inv\n");
        for (int i = 0; i < chart.dim(); ++i)
            for (int j = 0; j < chart.dim(); ++j)
                std::printf("%d,%d,%.17g,%.17g\n", i, j, m.g(i, j), m.g_inv(i, j));
    } else {
        std::printf("chart %s\n", chart.name.c_str());
        print_matrix("g", m.g);
        print_matrix("g_inv", m.g_inv);
    }
    return 0;
}

int cmd_christoffel(const ChartRef& ref, const std::string& point_text,
                    const std::string& format) {
    const Chart chart = resolve_chart(ref);
    const std::vector<double> pt = parse_point(point_text);
    const ChristoffelAt gamma = christoffel_at(chart, pt);
    const int n = chart.dim();

    struct Row {
        int i, k, l;
        double value;
    };
    std::vector<Row> rows;
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l)
                if (std::abs(gamma.at(i, k, l)) > 1e-12) rows.push_back({i, k, l, gamma.at(i, k, l)});

    const std::string fmt = pick_format(format);
    if (fmt == "json") {
        nlohmann::ordered_json j;
        j["chart"] = chart.name;
        j["point"] = pt;
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const Row& r : rows) {
            nlohmann::ordered_json e;
            e["i"] = chart.coords[static_cast<std::size_t>(r.i)];
            e["k"] = chart.coords[static_cast<std::size_t>(r.k)];
            e["l"] = chart.coords[static_cast<std::size_t>(r.l)];
            e["value"] = r.value;
            arr.push_back(std::move(e));
        }
        j["gamma"] = std::move(arr);
        std::printf("%s\n", j.dump().c_str());
    } else if (fmt == "csv") {
        std::printf("i,k,l,value\n");
        for (const Row& r : rows)
            std::printf("%s,%s,%s,%.17g\n", chart.coords[static_cast<std::size_t>(r.i)].c_str(),
                        chart.coords[static_cast<std::size_t>(r.k)].c_str(),
                        chart.coords[static_cast<std::size_t>(r.l)].c_str(), r.value);
    } else {
        if (rows.empty()) {
            std::printf("all Christoffel symbols vanish (|value| <= 1e-12)\n");
        } else {
            for (const Row& r : rows)
                std::printf("Gamma^%s_{%s,%s} = %.12g\n",
                            chart.coords[static_cast<std::size_t>(r.i)].c_str(),
                            chart.coords[static_cast<std::size_t>(r.k)].c_str(),
                            chart.coords[static_cast<std::size_t>(r.l)].c_str(), r.value);
        }
    }
    return 0;
}

int cmd_delta(const std::string& op, const std::string& phi_text, const std::string& psi_text,
              const ChartRef& ref, const std::string& point_text, const std::string& format) {
    const Chart chart = resolve_chart(ref);
    const std::vector<double> pt = parse_point(point_text);
    if ((op == "1pair") != !psi_text.empty())
        throw UsageError("--psi is required exactly when --op 1pair");

    Complex result;
    try {
        const ScalarField phi = make_field(phi_text, chart.coords);
        if (op == "1") {
            result = delta1(phi, chart, pt);
        } else if (op == "1pair") {
            const ScalarField psi = make_field(psi_text, chart.coords);
            result = delta1_pair(phi, psi, chart, pt);
        } else {
            result = delta2(phi, chart, pt);
        }
    } catch (const ParseError& e) {
        throw UsageError(e.what());
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    const std::string fmt = pick_format(format);
    if (fmt == "json") {
        nlohmann::ordered_json j;
        j["re"] = result.real();
        j["im"] = result.imag();
        std::printf("%s\n", j.dump().c_str());
    } else if (fmt == "csv") {
        std::printf("re,im\n%.17g,%.17g\n", result.real(), result.imag());
    } else {
        std::printf("re %.12g\nim %.12g\n", result.real(), result.imag());
    }
    return 0;
}

int cmd_verify(const SuiteConfig& config, const std::string& format) {
    const SuiteResult result = run_suite(config);
    const std::string fmt = pick_format(format);
    if (fmt == "json") {
        std::printf("%s\n", suite_json(result).dump().c_str());
    } else if (fmt == "csv") {
        std::printf("%s", suite_csv(result).c_str());
    } else {
        std::printf("%s", suite_pretty(result).c_str());
    }
    return result.all_match() ? 0 : 1;
}

std::vector<int> parse_dims(const std::string& text) {
    std::vector<int> dims;
    std::size_t at = 0;
    while (at <= text.size()) {
        std::size_t comma = text.find(',', at);
        if (comma == std::string::npos) comma = text.size();
        int v = 0;
        auto [ptr, ec] = std::from_chars(text.data() + at, text.data() + comma, v);
        if (ec != std::errc() || ptr != text.data() + comma || comma == at)
            throw UsageError("--dims expects comma-separated integers, got '" + text + "'");
        dims.push_back(v);
        at = comma + 1;
        if (comma == text.size()) break;
    }
    return dims;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Beltrami operators on coordinate charts"};
    app.require_subcommand(1);

    ChartRef mref, cref, dref;
    std::string mpoint, cpoint, dpoint;
    std::string mformat, cformat, dformat, vformat;

    auto add_format = [](CLI::App* cmd, std::string& fmt) {
        cmd->add_option("--format", fmt, "json, csv or pretty (default: pretty on a tty)")
            ->check(CLI::IsMember({"json", "csv", "pretty"}));
    };

    CLI::App* metric = app.add_subcommand("metric", "metric tensor and inverse at a point");
    add_chart_flags(metric, mref);
    metric->add_option("--point", mpoint, "comma-separated coordinates")->required();
    add_format(metric, mformat);

    CLI::App* christoffel =
        app.add_subcommand("christoffel", "nonzero Christoffel symbols at a point");
    add_chart_flags(christoffel, cref);
    christoffel->add_option("--point", cpoint, "comma-separated coordinates")->required();
    add_format(christoffel, cformat);

    std::string dop = "2", dphi, dpsi;
    CLI::App* delta = app.add_subcommand("delta", "Beltrami operator of an expression");
    delta->add_option("--op", dop, "1, 1pair or 2")->check(CLI::IsMember({"1", "1pair", "2"}));
    delta->add_option("--phi", dphi, "field expression")->required();
    delta->add_option("--psi", dpsi, "second field for --op 1pair");
    add_chart_flags(delta, dref);
    delta->add_option("--point", dpoint, "comma-separated coordinates")->required();
    add_format(delta, dformat);

    std::string vsuite, videntity, vpsi = "corrected", vdims;
    SuiteConfig config;
    CLI::App* verify = app.add_subcommand("verify", "run identity residual checks");
    auto* osuite = verify->add_option("--suite", vsuite, "run the whole catalog")
                       ->check(CLI::IsMember({"all"}));
    auto* oident = verify->add_option("--identity", videntity, "run a single identity");
    osuite->excludes(oident);
    verify->add_option("--seed", config.seed, "sampling seed (default 42)");
    verify->add_option("--samples", config.samples, "samples per row (default 200)");
    verify->add_option("--tol", config.tol, "pass tolerance (default 1e-9)");
    verify->add_option("--psi", vpsi, "paper or corrected (default corrected)")
        ->check(CLI::IsMember({"paper", "corrected"}));
    verify->add_option("--dims", vdims, "hyperspherical dims, e.g. 2,4,6");
    add_format(verify, vformat);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (metric->parsed()) return cmd_metric(mref, mpoint, mformat);
        if (christoffel->parsed()) return cmd_christoffel(cref, cpoint, cformat);
        if (delta->parsed()) return cmd_delta(dop, dphi, dpsi, dref, dpoint, dformat);
        if (verify->parsed()) {
            if (!videntity.empty()) {
                const auto id = identity_from_name(videntity);
                if (!id) throw UsageError("unknown identity '" + videntity + "'");
                config.only = *id;
            }
            config.psi = vpsi == "paper" ? PsiVariant::Paper : PsiVariant::Corrected;
            if (!vdims.empty()) config.dims = parse_dims(vdims);
            return cmd_verify(config, vformat);
        }
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const EvalError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const ChartError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 2;
}
