#ifndef RRLPI_THEORY_HPP
#define RRLPI_THEORY_HPP

#include "rrlpi/eigensolver.hpp"
#include "rrlpi/graph.hpp"
#include "rrlpi/rng.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <string>
#include <vector>

namespace rrlpi {

// Two 2-vertex blocks with intra-block weights w1 and w2; every cross pair is
// connected with weight wu (wu = 0 gives the uncorrelated pair of blocks).
inline AffinityGraph two_block_graph(double w1, double w2, double wu = 0.0) {
    if (w1 <= 0.0 || w2 <= 0.0 || wu < 0.0) throw DomainViolation("block weights");
    Matrix W = Matrix::Zero(4, 4);
    W(0, 1) = W(1, 0) = w1;
    W(2, 3) = W(3, 2) = w2;
    for (Index i : {0, 1}) {
        for (Index j : {2, 3}) W(i, j) = W(j, i) = wu;
    }
    return affinity_from_weights(W);
}

// Closed-form Laplacian spectrum of the two uncorrelated blocks, ascending.
inline Vector uncorrelated_block_eigs(double w1, double w2, EigMode mode) {
    if (w1 <= 0.0 || w2 <= 0.0) throw DomainViolation("block weights must be positive");
    Vector out(4);
    if (mode == EigMode::Generalized) {
        out << 0.0, 0.0, 2.0, 2.0;
    } else {
        out << 0.0, 0.0, 2.0 * std::min(w1, w2), 2.0 * std::max(w1, w2);
    }
    return out;
}

// Closed-form spectrum once the blocks are bridged by corruption weight wu.
inline Vector corrupted_block_eigs(double w1, double w2, double wu, EigMode mode) {
    if (wu <= 0.0 || wu >= std::min(w1, w2)) throw DomainViolation("need 0 < wu < min(w1, w2)");
    if (w1 == w2) throw DomainViolation("need w1 != w2");
    Vector out(4);
    if (mode == EigMode::Generalized) {
        const double lambda1 =
            2.0 * (w1 * wu + w2 * wu + 4.0 * wu * wu) / ((w1 + 2.0 * wu) * (w2 + 2.0 * wu));
        out << 0.0, lambda1, 2.0 * (w2 + wu) / (w2 + 2.0 * wu), 2.0 * (w1 + wu) / (w1 + 2.0 * wu);
    } else {
        out << 0.0, 4.0 * wu, 2.0 * w2 + 2.0 * wu, 2.0 * w1 + 2.0 * wu;
    }
    std::sort(out.data(), out.data() + out.size());
    return out;
}

struct WeightedPinvCheck {
    bool pass{};
    double max_residual{};
    std::array<double, 4> residuals{};
};

// Forms the column-weighted matrix X* = X Omega and the candidate inverse
// G = V Sigma^{-1} U^T from the SVD of X, then measures the four weighted
// Moore-Penrose conditions on the pair: X*GX* = X*, GX*G = G, X*G symmetric,
// and Omega GX* symmetric. Residuals are Frobenius norms relative to |X|_F.
// All four hold exactly when V^T Omega V = I (in particular for Omega = I).
inline WeightedPinvCheck weighted_pinv_check(const Matrix& X, const Vector& omega,
                                             double rel_tol = 1e-8) {
    if (omega.size() != X.cols()) throw DimensionMismatch("weighted_pinv_check");
    for (Index i = 0; i < omega.size(); ++i)
        if (omega[i] <= 0.0) throw RankDeficient("weights must be positive definite");

    Eigen::JacobiSVD<Matrix> svd(X, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& sv = svd.singularValues();
    const Index rank_needed = std::min(X.rows(), X.cols());
    const double sv_tol = 1e-12 * std::max(1.0, sv.size() > 0 ? sv[0] : 0.0);
    for (Index i = 0; i < rank_needed; ++i)
        if (i >= sv.size() || sv[i] <= sv_tol) throw RankDeficient("matrix is rank deficient");

    const Matrix Xs = X * omega.asDiagonal();
    const Matrix G =
        svd.matrixV() * sv.cwiseInverse().asDiagonal() * svd.matrixU().transpose();

    const double ref = std::max(X.norm(), 1e-300);
    WeightedPinvCheck out;
    out.residuals[0] = (Xs * G * Xs - Xs).norm() / ref;
    out.residuals[1] = (G * Xs * G - G).norm() / ref;
    const Matrix XsG = Xs * G;
    const Matrix GXs = G * Xs;
    const Matrix OGXs = omega.asDiagonal() * GXs;
    out.residuals[2] = (XsG - XsG.transpose()).norm() / ref;
    out.residuals[3] = (OGXs - OGXs.transpose()).norm() / ref;
    out.max_residual = *std::max_element(out.residuals.begin(), out.residuals.end());
    out.pass = out.max_residual <= rel_tol;
    return out;
}

struct OracleRow {
    std::string name;
    double residual{};
    double tol{};
    bool pass{};
};

namespace detail {

inline double eig_set_distance(const Vector& a, Vector b) {
    std::sort(b.data(), b.data() + b.size());
    return (a - b).cwiseAbs().maxCoeff();
}

} // namespace detail

// Closed-form formulas evaluated against the numerical solver, plus the
// weighted-pseudoinverse checks; every row must pass on a healthy build.
inline std::vector<OracleRow> verify_theory(std::uint64_t seed = 42) {
    std::vector<OracleRow> rows;
    auto add = [&rows](const std::string& name, double residual, double tol) {
        rows.push_back({name, residual, tol, residual <= tol});
    };

    const double w1 = 0.9, w2 = 0.8, wu = 0.1;
    {
        const AffinityGraph G = two_block_graph(w1, w2, 0.0);
        const Laplacian lap = laplacian(G);
        add("uncorrelated-generalized",
            detail::eig_set_distance(uncorrelated_block_eigs(w1, w2, EigMode::Generalized),
                                     eig_generalized(lap).values),
            1e-10);
        add("uncorrelated-standard",
            detail::eig_set_distance(uncorrelated_block_eigs(w1, w2, EigMode::Standard),
                                     eig_sym(lap.L).values),
            1e-10);
    }
    {
        const AffinityGraph G = two_block_graph(w1, w2, wu);
        const Laplacian lap = laplacian(G);
        add("corrupted-generalized",
            detail::eig_set_distance(corrupted_block_eigs(w1, w2, wu, EigMode::Generalized),
                                     eig_generalized(lap).values),
            1e-10);
        add("corrupted-standard",
            detail::eig_set_distance(corrupted_block_eigs(w1, w2, wu, EigMode::Standard),
                                     eig_sym(lap.L).values),
            1e-10);
    }
    {
        // random triples with wu < min(w1, w2)/2
        const CounterRng rng(seed);
        double worst = 0.0;
        for (int t = 0; t < 200; ++t) {
            const double a = 0.05 + 0.95 * rng.uniform(1, static_cast<std::uint64_t>(t), 0);
            double b = 0.05 + 0.95 * rng.uniform(1, static_cast<std::uint64_t>(t), 1);
            if (a == b) b *= 0.5;
            const double u =
                0.45 * std::min(a, b) * (0.05 + 0.95 * rng.uniform(1, static_cast<std::uint64_t>(t), 2));
            const AffinityGraph G = two_block_graph(a, b, u);
            const Laplacian lap = laplacian(G);
            worst = std::max(
                worst,
                detail::eig_set_distance(corrupted_block_eigs(a, b, u, EigMode::Generalized),
                                         eig_generalized(lap).values));
            worst = std::max(
                worst, detail::eig_set_distance(corrupted_block_eigs(a, b, u, EigMode::Standard),
                                                eig_sym(lap.L).values));
        }
        add("corrupted-random-200", worst, 1e-8);
    }
    {
        const CounterRng rng(seed);
        Matrix X(5, 3);
        for (Index i = 0; i < X.size(); ++i)
            X(i / 3, i % 3) = 2.0 * rng.uniform(2, static_cast<std::uint64_t>(i)) - 1.0;
        add("pinv-identity-weights", weighted_pinv_check(X, Vector::Ones(3)).max_residual, 1e-8);
    }
    {
        // Wide matrix whose right singular vectors have disjoint supports, so
        // a nontrivial diagonal Omega still satisfies V^T Omega V = I.
        Matrix X = Matrix::Zero(2, 4);
        X(0, 0) = X(0, 1) = 1.0;
        X(1, 2) = 2.0;
        X(1, 3) = 2.0;
        Vector omega(4);
        omega << 0.5, 1.5, 1.25, 0.75; // pairs average to 1 on each support
        add("pinv-nontrivial-weights", weighted_pinv_check(X, omega).max_residual, 1e-8);
    }
    return rows;
}

} // namespace rrlpi

#endif
