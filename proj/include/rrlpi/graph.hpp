#ifndef RRLPI_GRAPH_HPP
#define RRLPI_GRAPH_HPP

#include "rrlpi/core.hpp"

#include <functional>
#include <map>
#include <string>

namespace rrlpi {

// Feature matrix, columns are samples.
struct DataMatrix {
    Matrix values; // m x n
    Index rows() const { return values.rows(); }
    Index cols() const { return values.cols(); }

    void validate() const {
        if (cols() < 2) throw DomainViolation("data matrix needs at least 2 samples");
        if (!values.allFinite()) throw DomainViolation("data matrix has non-finite entries");
    }
};

// Symmetric nonnegative affinity with degree structure.
struct AffinityGraph {
    Matrix W;       // n x n, zero diagonal, entries in [0,1]
    Vector d;       // overall edge weights, d_i = sum_j w_ij
    double d_typ{}; // median of d
    double g{};     // half the total edge weight

    Index size() const { return W.rows(); }
};

struct Laplacian {
    Matrix L; // D - W
    Vector d; // diagonal of D
};

inline double typical_edge_weight(const Vector& d) { return median(d); }

inline AffinityGraph affinity_from_weights(Matrix W) {
    AffinityGraph G;
    G.d = W.rowwise().sum();
    G.g = 0.5 * W.sum();
    G.d_typ = typical_edge_weight(G.d);
    G.W = std::move(W);
    return G;
}

// w_ij = max(0, cos(x_i, x_j)), zero diagonal.
inline AffinityGraph cosine_affinity(const DataMatrix& X) {
    X.validate();
    const Index n = X.cols();
    Matrix Xn(X.rows(), n);
    for (Index j = 0; j < n; ++j) {
        const double norm = X.values.col(j).norm();
        if (norm == 0.0) throw ZeroColumn(j);
        Xn.col(j) = X.values.col(j) / norm;
    }
    Matrix W = Xn.transpose() * Xn;
    W = W.cwiseMax(0.0).cwiseMin(1.0);
    W = 0.5 * (W + W.transpose()).eval(); // exact symmetry
    W.diagonal().setZero();
    return affinity_from_weights(std::move(W));
}

using AffinityFn = std::function<AffinityGraph(const DataMatrix&)>;

// Registry of similarity measures keyed by name; "cosine" is the default.
// The elastic net similarity of the enumeration experiments is intentionally
// not registered: its defining construction is external to this project.
inline std::map<std::string, AffinityFn>& affinity_registry() {
    static std::map<std::string, AffinityFn> reg = {
        {"cosine", [](const DataMatrix& X) { return cosine_affinity(X); }},
    };
    return reg;
}

inline AffinityGraph build_affinity(const DataMatrix& X, const std::string& name = "cosine") {
    auto& reg = affinity_registry();
    auto it = reg.find(name);
    if (it == reg.end()) throw DomainViolation("unknown affinity measure: " + name);
    return it->second(X);
}

inline Laplacian laplacian(const AffinityGraph& G) {
    Laplacian lap;
    lap.L = -G.W;
    lap.L.diagonal() += G.d;
    lap.d = G.d;
    return lap;
}

// Error terms of the edge-weight model d_i = d_typ + eps_i.
inline Vector edge_weight_errors(const AffinityGraph& G) {
    return G.d.array() - G.d_typ;
}

} // namespace rrlpi

#endif
