#include "beltrami/chart.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "beltrami/rng.hpp"

namespace beltrami {

namespace {

std::string fmt_point(std::span<const double> point) {
    std::ostringstream os;
    os << '(';
    for (std::size_t k = 0; k < point.size(); ++k) {
        if (k) os << ", ";
        os << point[k];
    }
    os << ')';
    return os.str();
}

bool has_imag_unit(const Expr& e) {
    if (e.kind == Expr::Kind::ImagUnit) return true;
    if (e.a && has_imag_unit(*e.a)) return true;
    if (e.b && has_imag_unit(*e.b)) return true;
    return false;
}

void check_dim_range(const std::string& kind, int dim, int lo, int hi) {
    if (dim < lo || dim > hi) {
        throw std::invalid_argument(kind + " chart supports dimensions " + std::to_string(lo) +
                                    ".." + std::to_string(hi) + ", got " + std::to_string(dim));
    }
}

ScalarField parse_component(const std::string& text, const std::vector<std::string>& coords) {
    return make_field(text, coords);
}

/// Smallest Jacobian singular value must clear 1e-8 at 20 fixed-seed domain
/// points; rejects embeddings that collapse directions anywhere we sample.
void check_full_rank(const Chart& chart) {
    DetRng rng(0xC0FFEE);
    std::vector<double> p(static_cast<std::size_t>(chart.dim()));
    for (int trial = 0; trial < 20; ++trial) {
        for (int k = 0; k < chart.dim(); ++k) {
            auto [lo, hi] = chart.domain[static_cast<std::size_t>(k)];
            p[static_cast<std::size_t>(k)] = rng.next_in(lo, hi);
        }
        std::vector<Jet2> jets = embedding_jets(chart, p);
        Eigen::MatrixXd J(chart.ambient_dim(), chart.dim());
        for (int m = 0; m < chart.ambient_dim(); ++m)
            for (int k = 0; k < chart.dim(); ++k)
                J(m, k) = jets[static_cast<std::size_t>(m)].grad(k).real();
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
        if (svd.singularValues().minCoeff() <= 1e-8) {
            throw ChartError("embedding is rank-deficient at " + fmt_point(p) +
                             " (smallest singular value " +
                             std::to_string(svd.singularValues().minCoeff()) + ")");
        }
    }
}

Eigen::MatrixXd metric_from_jets(const std::vector<Jet2>& jets, int n,
                                 std::span<const double> point) {
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i) {
        for (int k = i; k < n; ++k) {
            double s = 0.0;
            for (const Jet2& jm : jets) s += jm.grad(i).real() * jm.grad(k).real();
            g(i, k) = s;
            g(k, i) = s;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues()(0);
    const double lmax = es.eigenvalues()(n - 1);
    if (lmin <= 0.0) {
        throw ChartError("metric is not positive-definite at " + fmt_point(point) +
                         " (smallest eigenvalue " + std::to_string(lmin) + ")");
    }
    if (lmax > 1e12 * lmin) {
        throw ChartError("metric is numerically singular at " + fmt_point(point) +
                         " (condition number " + std::to_string(lmax / lmin) + " > 1e12)");
    }
    return g;
}

Eigen::MatrixXd invert_spd(const Eigen::MatrixXd& g, std::span<const double> point) {
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success) {
        throw ChartError("metric is not positive-definite at " + fmt_point(point));
    }
    Eigen::MatrixXd inv = llt.solve(Eigen::MatrixXd::Identity(g.rows(), g.cols()));
    return 0.5 * (inv + inv.transpose()).eval();
}

std::vector<Eigen::MatrixXd> partials_from_jets(const std::vector<Jet2>& jets, int n) {
    std::vector<Eigen::MatrixXd> dg(static_cast<std::size_t>(n), Eigen::MatrixXd::Zero(n, n));
    for (int l = 0; l < n; ++l) {
        for (int i = 0; i < n; ++i) {
            for (int k = i; k < n; ++k) {
                double s = 0.0;
                for (const Jet2& jm : jets)
                    s += jm.hess(l, i).real() * jm.grad(k).real() +
                         jm.grad(i).real() * jm.hess(l, k).real();
                dg[static_cast<std::size_t>(l)](i, k) = s;
                dg[static_cast<std::size_t>(l)](k, i) = s;
            }
        }
    }
    return dg;
}

}  // namespace

bool Chart::contains(std::span<const double> point) const {
    if (point.size() != coords.size()) return false;
    for (std::size_t k = 0; k < coords.size(); ++k) {
        if (!(point[k] > domain[k].first && point[k] < domain[k].second)) return false;
    }
    return true;
}

void Chart::require_inside(std::span<const double> point) const {
    if (point.size() != coords.size()) {
        throw DomainError("point dimension " + std::to_string(point.size()) +
                          " does not match chart '" + name + "' dimension " +
                          std::to_string(coords.size()));
    }
    for (std::size_t k = 0; k < coords.size(); ++k) {
        if (!(point[k] > domain[k].first && point[k] < domain[k].second)) {
            std::ostringstream os;
            os << "coordinate " << coords[k] << " = " << point[k] << " outside ("
               << domain[k].first << ", " << domain[k].second << ") of chart '" << name << "'";
            throw DomainError(os.str());
        }
    }
}

Chart builtin_chart(ChartKind kind, int dim) {
    Chart c;
    switch (kind) {
        case ChartKind::Euclidean: {
            check_dim_range("euclidean", dim, 1, 16);
            c.name = "euclidean" + std::to_string(dim);
            for (int k = 1; k <= dim; ++k) c.coords.push_back("x" + std::to_string(k));
            for (int k = 1; k <= dim; ++k)
                c.embedding.push_back(parse_component("x" + std::to_string(k), c.coords));
            c.domain.assign(static_cast<std::size_t>(dim), {-5.0, 5.0});
            return c;
        }
        case ChartKind::Polar2: {
            check_dim_range("polar2", dim, 2, 2);
            c.name = "polar2";
            c.coords = {"r", "theta"};
            c.embedding = {parse_component("r*cos(theta)", c.coords),
                           parse_component("r*sin(theta)", c.coords)};
            c.domain = {{0.1, 5.0}, {0.1, 6.18}};
            return c;
        }
        case ChartKind::Spherical3: {
            check_dim_range("spherical3", dim, 3, 3);
            c.name = "spherical3";
            c.coords = {"r", "theta", "phi"};
            c.embedding = {parse_component("r*sin(theta)*cos(phi)", c.coords),
                           parse_component("r*sin(theta)*sin(phi)", c.coords),
                           parse_component("r*cos(theta)", c.coords)};
            // theta stays inside (0, pi/2) so sin(theta) is bounded away from
            // zero and g_phiphi = r^2 sin^2(theta) keeps the metric regular
            c.domain = {{0.1, 5.0}, {0.1, 1.2}, {0.1, 6.18}};
            return c;
        }
        case ChartKind::Hyperspherical: {
            check_dim_range("hyperspherical", dim, 2, 16);
            c.name = "hyperspherical" + std::to_string(dim);
            c.coords.push_back("r");
            for (int j = 1; j < dim; ++j) c.coords.push_back("theta" + std::to_string(j));
            // cosine cascade: x_1 = r prod_{j<N} cos(theta_j),
            // x_m = r prod_{j<=N-m} cos(theta_j) * sin(theta_{N-m+1}) for m >= 2,
            // ending at x_N = r sin(theta_1)
            for (int m = 1; m <= dim; ++m) {
                std::string s = "r";
                const int ncos = (m == 1) ? dim - 1 : dim - m;
                for (int j = 1; j <= ncos; ++j) s += "*cos(theta" + std::to_string(j) + ")";
                if (m >= 2) s += "*sin(theta" + std::to_string(dim - m + 1) + ")";
                c.embedding.push_back(parse_component(s, c.coords));
            }
            c.domain.push_back({0.1, 5.0});
            for (int j = 1; j < dim - 1; ++j) c.domain.push_back({-1.2, 1.2});
            c.domain.push_back({0.1, 6.18});
            return c;
        }
    }
    throw std::invalid_argument("unknown chart kind");
}

Chart builtin_chart(const std::string& kind, int dim) {
    if (kind == "euclidean") return builtin_chart(ChartKind::Euclidean, dim);
    if (kind == "polar2") return builtin_chart(ChartKind::Polar2, dim);
    if (kind == "spherical3") return builtin_chart(ChartKind::Spherical3, dim);
    if (kind == "hyperspherical") return builtin_chart(ChartKind::Hyperspherical, dim);
    throw std::invalid_argument("unknown chart kind '" + kind +
                                "' (euclidean, polar2, spherical3, hyperspherical)");
}

Chart load_chart(const nlohmann::json& doc) {
    if (!doc.is_object()) throw ChartError("chart document must be a JSON object");
    auto require = [&doc](const char* key) -> const nlohmann::json& {
        auto it = doc.find(key);
        if (it == doc.end()) throw ChartError(std::string("missing field '") + key + "'");
        return *it;
    };

    Chart c;
    const nlohmann::json& jname = require("name");
    if (!jname.is_string()) throw ChartError("name: expected a string");
    c.name = jname.get<std::string>();

    const nlohmann::json& jcoords = require("coords");
    if (!jcoords.is_array() || jcoords.empty()) throw ChartError("coords: expected a non-empty array");
    for (std::size_t k = 0; k < jcoords.size(); ++k) {
        if (!jcoords[k].is_string())
            throw ChartError("coords[" + std::to_string(k) + "]: expected a string");
        c.coords.push_back(jcoords[k].get<std::string>());
    }

    const nlohmann::json& jdomain = require("domain");
    if (!jdomain.is_array() || jdomain.size() != c.coords.size()) {
        throw ChartError("domain: expected " + std::to_string(c.coords.size()) +
                         " [lo, hi] pairs");
    }
    for (std::size_t k = 0; k < jdomain.size(); ++k) {
        const std::string path = "domain[" + std::to_string(k) + "]";
        if (!jdomain[k].is_array() || jdomain[k].size() != 2 ||
            !jdomain[k][0].is_number() || !jdomain[k][1].is_number()) {
            throw ChartError(path + ": expected [lo, hi]");
        }
        const double lo = jdomain[k][0].get<double>();
        const double hi = jdomain[k][1].get<double>();
        if (!(lo < hi)) throw ChartError(path + ": interval is empty");
        c.domain.push_back({lo, hi});
    }

    const nlohmann::json& jemb = require("embedding");
    if (!jemb.is_array() || jemb.size() < c.coords.size()) {
        throw ChartError("embedding: expected at least " + std::to_string(c.coords.size()) +
                         " expressions, got " + std::to_string(jemb.size()));
    }
    for (std::size_t m = 0; m < jemb.size(); ++m) {
        const std::string path = "embedding[" + std::to_string(m) + "]";
        if (!jemb[m].is_string()) throw ChartError(path + ": expected an expression string");
        try {
            c.embedding.push_back(make_field(jemb[m].get<std::string>(), c.coords));
        } catch (const ParseError& e) {
            throw ChartError(path + ": " + e.what());
        } catch (const std::invalid_argument& e) {
            throw ChartError(path + ": " + e.what());
        }
        if (has_imag_unit(*c.embedding.back().expr)) {
            throw ChartError(path + ": embedding components must be real-valued (no 'i')");
        }
    }

    check_full_rank(c);
    return c;
}

Chart load_chart_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ChartError("cannot open chart file '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::parse_error& e) {
        throw ChartError("chart file '" + path + "': " + e.what());
    }
    try {
        return load_chart(doc);
    } catch (const ChartError& e) {
        throw ChartError("chart file '" + path + "': " + e.what());
    }
}

std::vector<Jet2> embedding_jets(const Chart& chart, std::span<const double> point) {
    chart.require_inside(point);
    std::vector<Jet2> jets;
    jets.reserve(chart.embedding.size());
    for (std::size_t m = 0; m < chart.embedding.size(); ++m) {
        Jet2 j = eval_jet2(chart.embedding[m], point);
        bool real = j.value().imag() == 0.0;
        for (Complex gval : j.grad()) real = real && gval.imag() == 0.0;
        for (Complex hval : j.hess_flat()) real = real && hval.imag() == 0.0;
        if (!real) {
            throw ChartError("embedding component " + std::to_string(m) +
                             " is not real-valued at " + fmt_point(point));
        }
        jets.push_back(std::move(j));
    }
    return jets;
}

MetricAt metric_at(const Chart& chart, std::span<const double> point) {
    const std::vector<Jet2> jets = embedding_jets(chart, point);
    Eigen::MatrixXd g = metric_from_jets(jets, chart.dim(), point);
    Eigen::MatrixXd inv = invert_spd(g, point);
    return {std::move(g), std::move(inv)};
}

std::vector<Eigen::MatrixXd> metric_partials(const Chart& chart, std::span<const double> point) {
    const std::vector<Jet2> jets = embedding_jets(chart, point);
    metric_from_jets(jets, chart.dim(), point);  // surface PD/conditioning problems
    return partials_from_jets(jets, chart.dim());
}

ChristoffelAt christoffel_at(const Chart& chart, std::span<const double> point) {
    const int n = chart.dim();
    const std::vector<Jet2> jets = embedding_jets(chart, point);
    const Eigen::MatrixXd g = metric_from_jets(jets, n, point);
    const Eigen::MatrixXd g_inv = invert_spd(g, point);
    const std::vector<Eigen::MatrixXd> dg = partials_from_jets(jets, n);

    ChristoffelAt out;
    out.gamma.assign(static_cast<std::size_t>(n), Eigen::MatrixXd::Zero(n, n));
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            for (int l = k; l < n; ++l) {
                double s = 0.0;
                for (int nn = 0; nn < n; ++nn) {
                    s += g_inv(i, nn) *
                         (dg[static_cast<std::size_t>(k)](nn, l) +
                          dg[static_cast<std::size_t>(l)](k, nn) -
                          dg[static_cast<std::size_t>(nn)](k, l));
                }
                out.gamma[static_cast<std::size_t>(i)](k, l) = 0.5 * s;
                out.gamma[static_cast<std::size_t>(i)](l, k) = 0.5 * s;
            }
        }
    }
    return out;
}

std::vector<double> hyperspherical_diagonal(int dim, std::span<const double> point) {
    if (dim < 2 || static_cast<int>(point.size()) != dim) {
        throw std::invalid_argument("hyperspherical_diagonal needs dim >= 2 matching the point");
    }
    std::vector<double> d(static_cast<std::size_t>(dim));
    d[0] = 1.0;
    d[1] = point[0] * point[0];
    for (int k = 2; k < dim; ++k) {
        const double c = std::cos(point[static_cast<std::size_t>(k - 1)]);
        d[static_cast<std::size_t>(k)] = d[static_cast<std::size_t>(k - 1)] * c * c;
    }
    return d;
}

}  // namespace beltrami
