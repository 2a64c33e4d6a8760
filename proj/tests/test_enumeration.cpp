#include "rrlpi/enumeration.hpp"
#include "rrlpi/rng.hpp"
#include "rrlpi/theory.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace rrlpi;

namespace {

// Pairwise-sum form of modularity, used as an independent oracle:
// Q = (1/2g) sum_ij (w_ij - d_i d_j / 2g) [c_i == c_j]
double modularity_oracle(const AffinityGraph& G, const LabelVector& labels) {
    const double two_g = 2.0 * G.g;
    double q = 0.0;
    for (Index i = 0; i < G.size(); ++i) {
        for (Index j = 0; j < G.size(); ++j) {
            if (labels.labels[static_cast<size_t>(i)] != labels.labels[static_cast<size_t>(j)])
                continue;
            q += G.W(i, j) - G.d[i] * G.d[j] / two_g;
        }
    }
    return q / two_g;
}

} // namespace

TEST_CASE("disjoint 2-cliques split into their cliques give Q = 0.5") {
    Matrix W = Matrix::Zero(4, 4);
    W(0, 1) = W(1, 0) = 1.0;
    W(2, 3) = W(3, 2) = 1.0;
    const AffinityGraph G = affinity_from_weights(W);
    LabelVector labels;
    labels.labels = {1, 1, 2, 2};
    labels.K = 2;
    CHECK(std::abs(modularity(G, labels) - 0.5) <= 1e-12);
}

TEST_CASE("a single community has Q = 0") {
    Matrix W = Matrix::Zero(4, 4);
    W(0, 1) = W(1, 0) = 0.7;
    W(2, 3) = W(3, 2) = 0.4;
    W(1, 2) = W(2, 1) = 0.2;
    const AffinityGraph G = affinity_from_weights(W);
    LabelVector labels;
    labels.labels = {1, 1, 1, 1};
    labels.K = 1;
    CHECK(std::abs(modularity(G, labels)) <= 1e-12);
}

TEST_CASE("modularity matches the pairwise oracle on random weighted graphs") {
    const CounterRng rng(77);
    for (int t = 0; t < 30; ++t) {
        const Index n = 4 + static_cast<Index>(rng.bits(1, t) % 5); // n <= 8
        Matrix W = Matrix::Zero(n, n);
        for (Index i = 0; i < n; ++i)
            for (Index j = i + 1; j < n; ++j)
                W(i, j) = W(j, i) = rng.uniform(2, t, static_cast<std::uint64_t>(i * n + j));
        const AffinityGraph G = affinity_from_weights(W);
        LabelVector labels;
        labels.K = 3;
        for (Index i = 0; i < n; ++i)
            labels.labels.push_back(1 + static_cast<int>(rng.bits(3, t, static_cast<std::uint64_t>(i)) % 3));
        const double q = modularity(G, labels);
        CHECK(q == Catch::Approx(modularity_oracle(G, labels)).margin(1e-12));
        CHECK(q >= -1.0);
        CHECK(q <= 1.0);
    }
}

TEST_CASE("modularity input validation") {
    const AffinityGraph G = affinity_from_weights(Matrix::Zero(3, 3));
    LabelVector labels;
    labels.labels = {1, 1, 1};
    labels.K = 1;
    CHECK_THROWS_AS(modularity(G, labels), EmptyGraph);
    const AffinityGraph G2 = two_block_graph(0.9, 0.8, 0.1);
    CHECK_THROWS_AS(modularity(G2, labels), DimensionMismatch);
}

TEST_CASE("enumeration recovers K=2 on two weakly bridged blocks") {
    // two 4-cliques with a weak bridge
    const Index n = 8;
    Matrix W = Matrix::Zero(n, n);
    for (Index i = 0; i < 4; ++i)
        for (Index j = i + 1; j < 4; ++j) W(i, j) = W(j, i) = 1.0;
    for (Index i = 4; i < 8; ++i)
        for (Index j = i + 1; j < 8; ++j) W(i, j) = W(j, i) = 1.0;
    W(3, 4) = W(4, 3) = 0.05;
    const AffinityGraph G = affinity_from_weights(W);
    const EmbeddingVector f = fiedler_le(G, EigMode::Generalized);
    const EnumerationResult res = enumerate_clusters(G, f.y, 1, 5);
    CHECK(res.k_hat == 2);
    REQUIRE(res.table.size() == 5);
    CHECK(res.table[0].K == 1);
    CHECK(std::abs(res.table[0].Q) <= 1e-12);
}

TEST_CASE("enumeration rejects invalid ranges") {
    const AffinityGraph G = two_block_graph(0.9, 0.8, 0.1);
    const Vector y = Vector::Random(4);
    CHECK_THROWS_AS(enumerate_clusters(G, y, 0, 3), DomainViolation);
    CHECK_THROWS_AS(enumerate_clusters(G, y, 3, 2), DomainViolation);
    CHECK_THROWS_AS(enumerate_clusters(G, y, 1, 5), DomainViolation);
}

TEST_CASE("kmedoids partitioner is usable in enumeration") {
    const AffinityGraph G = two_block_graph(0.9, 0.8, 0.05);
    const EmbeddingVector f = fiedler_le(G, EigMode::Generalized);
    const EnumerationResult res = enumerate_clusters(G, f.y, 1, 3, kmedoids_partitioner());
    CHECK(res.k_hat == 2);
}
