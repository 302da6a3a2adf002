#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "beltrami/field.hpp"

namespace beltrami {

/// A coordinate chart given as an embedding of N curvilinear coordinates into
/// M-dimensional Euclidean space, with a per-coordinate open box domain. The
/// metric and everything downstream is induced from the embedding.
struct Chart {
    std::string name;
    std::vector<std::string> coords;
    std::vector<ScalarField> embedding;  // M >= N real-valued components
    std::vector<std::pair<double, double>> domain;

    int dim() const { return static_cast<int>(coords.size()); }
    int ambient_dim() const { return static_cast<int>(embedding.size()); }

    bool contains(std::span<const double> point) const;
    /// Throws DomainError naming the offending coordinate and interval.
    void require_inside(std::span<const double> point) const;
};

enum class ChartKind { Euclidean, Polar2, Spherical3, Hyperspherical };

/// Builtin charts. euclidean: identity embedding, domain (-5,5)^N, any
/// N in [1,16]. polar2 (N=2) and spherical3 (N=3): the usual polar and
/// spherical coordinates. hyperspherical (N in [2,16]): the cosine-cascade
/// embedding whose metric is diagonal {1, u1^2, u1^2 cos^2(u2), ...}.
/// Domains keep r away from 0 and the cascade angles away from cos = 0;
/// the final angle ranges over (0.1, 6.18).
Chart builtin_chart(ChartKind kind, int dim);
Chart builtin_chart(const std::string& kind, int dim);

/// Chart file schema: {"name": str, "coords": [str...], "embedding":
/// [expr-str...], "domain": [[lo, hi]...]} with len(coords) = len(domain) = N
/// and len(embedding) = M >= N. Embeddings must be real-valued (no `i`).
/// Errors carry the JSON field path; a rank-deficient embedding (smallest
/// Jacobian singular value <= 1e-8 at any of 20 fixed-seed sample points) is
/// rejected with a witness point.
Chart load_chart(const nlohmann::json& doc);
Chart load_chart_file(const std::string& path);

struct MetricAt {
    Eigen::MatrixXd g;      // induced metric J^T J, symmetric positive-definite
    Eigen::MatrixXd g_inv;  // matrix inverse, symmetrized
};

/// Throws DomainError outside the domain, ChartError when g is not
/// positive-definite or its condition number exceeds 1e12.
MetricAt metric_at(const Chart& chart, std::span<const double> point);

/// partials[l](i,k) = d g_ik / d u_l, exact from embedding 2-jets:
/// d_l g_ik = sum_m (d_l d_i x^m) (d_k x^m) + (d_i x^m) (d_l d_k x^m).
/// Symmetric in (i,k) bit for bit.
std::vector<Eigen::MatrixXd> metric_partials(const Chart& chart, std::span<const double> point);

struct ChristoffelAt {
    std::vector<Eigen::MatrixXd> gamma;  // gamma[i](k,l), symmetric in (k,l)

    double at(int i, int k, int l) const { return gamma[static_cast<std::size_t>(i)](k, l); }
};

/// Gamma^i_kl = 1/2 sum_n g^in (d_k g_nl + d_l g_kn - d_n g_kl).
ChristoffelAt christoffel_at(const Chart& chart, std::span<const double> point);

/// Closed-form metric diagonal {1, u1^2, u1^2 cos^2(u2), ...,
/// u1^2 prod_{j=2}^{N-1} cos^2(u_j)} of the hyperspherical chart; test
/// cross-check only, the induced metric is the primary path.
std::vector<double> hyperspherical_diagonal(int dim, std::span<const double> point);

/// Value and first two derivatives of every embedding component (the data
/// behind metric_at and metric_partials); throws ChartError if a component
/// evaluates to a non-real value.
std::vector<Jet2> embedding_jets(const Chart& chart, std::span<const double> point);

}  // namespace beltrami
