#include "rrlpi/synth.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace rrlpi;

TEST_CASE("counter rng draws are reproducible and in [0,1)") {
    const CounterRng a(42), b(42), c(43);
    CHECK(a.bits(1, 2, 3, 4) == b.bits(1, 2, 3, 4));
    CHECK(a.bits(1, 2, 3, 4) != c.bits(1, 2, 3, 4));
    CHECK(a.bits(1, 2, 3, 4) != a.bits(1, 2, 4, 3));
    for (int i = 0; i < 1000; ++i) {
        const double u = a.uniform(9, i);
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
}

TEST_CASE("counter rng uniform mean is near 1/2") {
    const CounterRng rng(7);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) sum += rng.uniform(0, i);
    CHECK(sum / n == Catch::Approx(0.5).margin(0.01));
}

TEST_CASE("default synthetic spec matches the reference parameter table") {
    const SyntheticSpec spec = default_synthetic_spec(50);
    REQUIRE(spec.centroids.size() == 3);
    CHECK(spec.centroids[0][0] == 5.50);
    CHECK(spec.centroids[0][5] == 4.50);
    CHECK(spec.centroids[1][2] == 5.50);
    CHECK(spec.centroids[2][0] == 8.50);
    CHECK(spec.scales == std::vector<double>{0.5, 0.5, 0.5});
    CHECK(spec.counts == std::vector<Index>{50, 50, 50});
    CHECK(spec.outlier2.mu[0] == 7.00);
    CHECK(spec.outlier2.theta == 1.5);
}

TEST_CASE("generated clusters stay inside their uniform support") {
    SyntheticSpec spec = default_synthetic_spec(30);
    spec.seed = 5;
    const SyntheticData data = generate(spec);
    REQUIRE(data.X.cols() == 90);
    REQUIRE(data.X.rows() == 6);
    for (Index col = 0; col < 90; ++col) {
        const auto k = static_cast<size_t>(data.labels.labels[static_cast<size_t>(col)] - 1);
        for (Index f = 0; f < 6; ++f) {
            const double lo = spec.centroids[k][f] - 0.5 * spec.scales[k];
            const double hi = spec.centroids[k][f] + 0.5 * spec.scales[k];
            CHECK(data.X.values(f, col) >= lo);
            CHECK(data.X.values(f, col) <= hi);
        }
    }
    CHECK(std::count(data.outlier_mask.begin(), data.outlier_mask.end(), true) == 0);
}

TEST_CASE("type I outliers replace exactly the requested count across clusters") {
    SyntheticSpec spec = default_synthetic_spec(30);
    spec.seed = 5;
    spec.outlier1 = {10, 8.0};
    const SyntheticData data = generate(spec);
    CHECK(data.X.cols() == 90); // replacement, not appending
    CHECK(std::count(data.outlier_mask.begin(), data.outlier_mask.end(), true) == 10);
    // round-robin: counts per cluster differ by at most one
    std::vector<int> per_cluster(3, 0);
    for (size_t i = 0; i < data.outlier_mask.size(); ++i) {
        if (data.outlier_mask[i])
            per_cluster[static_cast<size_t>(data.labels.labels[i] - 1)] += 1;
    }
    const auto [mn, mx] = std::minmax_element(per_cluster.begin(), per_cluster.end());
    CHECK(*mx - *mn <= 1);
    CHECK(data.labels.K == 3);
}

TEST_CASE("type II outliers are appended as an extra group") {
    SyntheticSpec spec = default_synthetic_spec(20);
    spec.seed = 9;
    spec.outlier2.count = 7;
    const SyntheticData data = generate(spec);
    REQUIRE(data.X.cols() == 67);
    CHECK(data.labels.K == 4);
    for (Index col = 60; col < 67; ++col) {
        CHECK(data.labels.labels[static_cast<size_t>(col)] == 4);
        CHECK(data.outlier_mask[static_cast<size_t>(col)]);
        for (Index f = 0; f < 6; ++f) {
            CHECK(data.X.values(f, col) >=
                  spec.outlier2.mu[f] - 0.5 * spec.outlier2.theta);
            CHECK(data.X.values(f, col) <=
                  spec.outlier2.mu[f] + 0.5 * spec.outlier2.theta);
        }
    }
}

TEST_CASE("generation is deterministic in (seed, run) and varies across runs") {
    SyntheticSpec spec = default_synthetic_spec(15);
    spec.seed = 3;
    spec.outlier1 = {4, 6.0};
    const SyntheticData a = generate(spec, 0);
    const SyntheticData b = generate(spec, 0);
    const SyntheticData c = generate(spec, 1);
    CHECK((a.X.values - b.X.values).cwiseAbs().maxCoeff() == 0.0);
    CHECK(a.outlier_mask == b.outlier_mask);
    CHECK((a.X.values - c.X.values).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("synthetic spec validation") {
    SyntheticSpec spec = default_synthetic_spec(10);
    spec.scales = {0.5, 0.5};
    CHECK_THROWS_AS(generate(spec), DimensionMismatch);
    spec = default_synthetic_spec(10);
    spec.scales[1] = -1.0;
    CHECK_THROWS_AS(generate(spec), DomainViolation);
    spec = default_synthetic_spec(10);
    spec.outlier2.count = 2;
    spec.outlier2.mu = Vector::Ones(4);
    CHECK_THROWS_AS(generate(spec), DimensionMismatch);
}

TEST_CASE("monte carlo sweep reports deterministic per-cell rows") {
    std::vector<SweepCell> cells;
    SweepCell cell;
    cell.name = "clean";
    cell.spec = default_synthetic_spec(15);
    cells.push_back(cell);
    const std::vector<MethodSpec> methods = {{EmbeddingKind::LE, false, 0.0},
                                             {EmbeddingKind::RRLPI, true, 0.0}};
    const auto rows = monte_carlo(cells, methods, 3, 19);
    const auto rows2 = monte_carlo(cells, methods, 3, 19);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].method == "le");
    CHECK(rows[1].method == "rrlpi");
    for (size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].mean == rows2[i].mean);
        CHECK(rows[i].stddev == rows2[i].stddev);
        CHECK(rows[i].n_runs == 3);
        CHECK(rows[i].n_failed == 0);
        CHECK(rows[i].mean > 0.8); // clean, well separated clusters
    }
}
