#include "rrlpi/eigensolver.hpp"
#include "rrlpi/theory.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace rrlpi;

TEST_CASE("eig_sym on a diagonal matrix returns the diagonal sorted") {
    Matrix A = Matrix::Zero(3, 3);
    A(0, 0) = 3.0;
    A(1, 1) = 1.0;
    A(2, 2) = 2.0;
    const EigenDecomposition ed = eig_sym(A);
    CHECK(ed.values[0] == Catch::Approx(1.0).margin(1e-12));
    CHECK(ed.values[1] == Catch::Approx(2.0).margin(1e-12));
    CHECK(ed.values[2] == Catch::Approx(3.0).margin(1e-12));
}

TEST_CASE("eig_sym 2x2 closed form") {
    Matrix A(2, 2);
    A << 2.0, 1.0, 1.0, 2.0;
    const EigenDecomposition ed = eig_sym(A);
    CHECK(ed.values[0] == Catch::Approx(1.0).margin(1e-12));
    CHECK(ed.values[1] == Catch::Approx(3.0).margin(1e-12));
}

TEST_CASE("eig_sym rejects asymmetric input") {
    Matrix A(2, 2);
    A << 1.0, 0.5, 0.0, 1.0;
    CHECK_THROWS_AS(eig_sym(A), NotSymmetric);
}

TEST_CASE("eig_sym residual and orthogonality on random symmetric matrices") {
    for (Index n : {1, 2, 5, 30}) {
        Matrix R = Matrix::Random(n, n);
        Matrix A = 0.5 * (R + R.transpose());
        const EigenDecomposition ed = eig_sym(A);
        CHECK((A * ed.vectors - ed.vectors * ed.values.asDiagonal()).cwiseAbs().maxCoeff() <
              1e-10);
        CHECK((ed.vectors.transpose() * ed.vectors - Matrix::Identity(n, n))
                  .cwiseAbs()
                  .maxCoeff() < 1e-10);
        for (Index i = 1; i < n; ++i) CHECK(ed.values[i] >= ed.values[i - 1]);
    }
}

TEST_CASE("generalized decomposition solves L y = lambda D y") {
    DataMatrix X;
    X.values = Matrix::Random(4, 12).cwiseAbs();
    const AffinityGraph G = cosine_affinity(X);
    const Laplacian lap = laplacian(G);
    const EigenDecomposition ed = eig_generalized(lap);
    for (Index i = 0; i < ed.values.size(); ++i) {
        const Vector r = lap.L * ed.vectors.col(i) -
                         ed.values[i] * (lap.d.asDiagonal() * ed.vectors.col(i));
        CHECK(r.cwiseAbs().maxCoeff() < 1e-9);
    }
    CHECK(ed.values[0] == Catch::Approx(0.0).margin(1e-10));
}

TEST_CASE("isolated vertex is rejected in the generalized problem") {
    Matrix W = Matrix::Zero(3, 3);
    W(0, 1) = W(1, 0) = 1.0; // vertex 2 isolated
    const Laplacian lap = laplacian(affinity_from_weights(W));
    CHECK_THROWS_AS(eig_generalized(lap), IsolatedVertex);
}

TEST_CASE("count_near_zero on a sorted spectrum") {
    Vector v(4);
    v << 0.0, 1e-12, 0.5, 1.0;
    CHECK(count_near_zero(v, 1e-8) == 2);
    CHECK(count_near_zero(v, 2.0) == 4);
}

TEST_CASE("fiedler vector of two bridged blocks separates the blocks") {
    const AffinityGraph G = two_block_graph(0.9, 0.8, 0.05);
    const EmbeddingVector f = fiedler_le(G, EigMode::Generalized);
    // vertices {0,1} form one block, {2,3} the other
    CHECK(f.y[0] * f.y[1] > 0.0);
    CHECK(f.y[2] * f.y[3] > 0.0);
    CHECK(f.y[0] * f.y[2] < 0.0);
    CHECK_FALSE(f.degenerate_spectrum);
}

TEST_CASE("fix_sign makes the dominant entry positive") {
    Vector y(3);
    y << 0.1, -0.9, 0.2;
    fix_sign(y);
    CHECK(y[1] == 0.9);
    fix_sign(y);
    CHECK(y[1] == 0.9); // idempotent
}

TEST_CASE("complete graph with equal weights reports a degenerate spectrum") {
    Matrix W = Matrix::Ones(5, 5);
    W.diagonal().setZero();
    const EmbeddingVector f = fiedler_le(affinity_from_weights(W), EigMode::Generalized);
    CHECK(f.degenerate_spectrum);
}

TEST_CASE("disconnected blocks give a zero Fiedler value") {
    const AffinityGraph G = two_block_graph(0.9, 0.8, 0.0);
    const EmbeddingVector f = fiedler_le(G, EigMode::Generalized);
    CHECK(std::abs(f.eigenvalue) < 1e-10);
}
