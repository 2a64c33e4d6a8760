#include "rrlpi/penalty.hpp"
#include "rrlpi/rng.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace rrlpi;

namespace {

Vector make_vector(std::initializer_list<double> xs) {
    Vector v(static_cast<Index>(xs.size()));
    Index i = 0;
    for (double x : xs) v[i++] = x;
    return v;
}

// Brute-force minimum squared cross-set distance.
double brute_min_cross(const std::vector<double>& s, const std::vector<double>& t) {
    double best = std::numeric_limits<double>::max();
    for (double a : s)
        for (double b : t) best = std::min(best, (a - b) * (a - b));
    return best;
}

} // namespace

TEST_CASE("rescale maps onto [0,1] and preserves order") {
    const Vector y = make_vector({-2.0, 0.0, 6.0});
    const Vector r = rescale(y);
    CHECK(r[0] == 0.0);
    CHECK(r[1] == Catch::Approx(0.25));
    CHECK(r[2] == 1.0);
}

TEST_CASE("constant embedding cannot be rescaled") {
    CHECK_THROWS_AS(rescale(Vector::Ones(5)), ConstantEmbedding);
}

TEST_CASE("split at kappa=0 assigns strictly positive entries to s") {
    const Vector y_hat = make_vector({0.5, -0.1, 0.0, 2.0});
    const Vector y_bar = rescale(y_hat);
    const SplitSets sets = split_sets(y_hat, y_bar, 0.0);
    REQUIRE(sets.s.size() == 2);
    REQUIRE(sets.t.size() == 2);
    CHECK(sets.s_index == std::vector<Index>{0, 3});
    CHECK(sets.t_index == std::vector<Index>{1, 2});
}

TEST_CASE("delta threshold frozen values") {
    CHECK(delta_threshold(300, 1.0) == Catch::Approx(0.3132502048662627).epsilon(1e-12));
    CHECK(delta_threshold(100, 1.0) == Catch::Approx(0.36127358642731205).epsilon(1e-12));
    CHECK(delta_threshold(100, 2.0) == Catch::Approx(2.0 * 0.36127358642731205).epsilon(1e-12));
    CHECK_THROWS_AS(delta_threshold(2, 1.0), DomainViolation);
}

TEST_CASE("well separated sets need no pruning") {
    SplitSets sets;
    sets.s = {0.9, 0.95, 1.0};
    sets.t = {0.0, 0.05, 0.1};
    const GammaCandidateResult res = prune_to_separation(sets, 0.25, 1);
    CHECK(res.separated);
    CHECK(res.n_discarded == 0);
    CHECK(res.sets_valid);
    CHECK(res.gap == Catch::Approx((0.9 - 0.1) * (0.9 - 0.1)));
}

TEST_CASE("pruning removes straddling pairs until separation") {
    SplitSets sets;
    sets.s = {0.9, 0.95, 1.0, 0.45};
    sets.t = {0.0, 0.05, 0.1, 0.5};
    // the 0.45/0.5 cross pair blocks separation at delta 0.25
    const GammaCandidateResult res = prune_to_separation(sets, 0.25, 1);
    CHECK(res.separated);
    CHECK(res.n_discarded == 2);
}

TEST_CASE("pruning stops before violating the minimum set size") {
    SplitSets sets;
    sets.s = {0.5, 0.52};
    sets.t = {0.49, 0.51};
    const GammaCandidateResult res = prune_to_separation(sets, 0.25, 2);
    CHECK_FALSE(res.separated);
    CHECK(res.n_discarded == 0);
}

TEST_CASE("prune bookkeeping invariants on random instances") {
    const CounterRng rng(99);
    for (int t = 0; t < 50; ++t) {
        SplitSets sets;
        const int ns = 3 + static_cast<int>(rng.bits(1, t) % 20);
        const int nt = 3 + static_cast<int>(rng.bits(2, t) % 20);
        for (int i = 0; i < ns; ++i) sets.s.push_back(rng.uniform(3, t, i));
        for (int i = 0; i < nt; ++i) sets.t.push_back(rng.uniform(4, t, i));
        const double delta = 0.01 + 0.2 * rng.uniform(5, t);
        const GammaCandidateResult res = prune_to_separation(sets, delta, 2);
        CHECK(res.n_discarded % 2 == 0);
        CHECK(res.n_discarded <= static_cast<Index>(2 * std::min(sets.s.size(), sets.t.size())));
        // unpruned instances agree with the brute-force cross distance
        if (res.n_discarded == 0 && res.separated) {
            CHECK(brute_min_cross(sets.s, sets.t) > delta);
        }
        if (res.n_discarded == 0 && !res.separated && !sets.s.empty() && !sets.t.empty()) {
            CHECK(brute_min_cross(sets.s, sets.t) <= delta);
        }
    }
}

TEST_CASE("adjacent-in-sorted-order pair equals the brute-force minimum") {
    const CounterRng rng(123);
    for (int t = 0; t < 100; ++t) {
        std::vector<detail::TaggedValue> merged;
        std::vector<double> s, tt;
        for (int i = 0; i < 12; ++i) {
            const double v = rng.uniform(1, t, i);
            if (rng.bits(2, t, i) % 2) {
                s.push_back(v);
                merged.push_back({v, true});
            } else {
                tt.push_back(v);
                merged.push_back({v, false});
            }
        }
        if (s.empty() || tt.empty()) continue;
        std::stable_sort(merged.begin(), merged.end(),
                         [](const auto& a, const auto& b) { return a.value < b.value; });
        size_t ai = 0, bi = 0;
        double d2 = 0.0;
        REQUIRE(detail::min_cross_pair(merged, ai, bi, d2));
        CHECK(d2 == Catch::Approx(brute_min_cross(s, tt)).margin(1e-15));
    }
}

TEST_CASE("gamma selection prefers fewest discarded among separated") {
    std::vector<GammaCandidateResult> results;
    results.push_back({1e-6, 8, true, 0.5, true});
    results.push_back({1e-4, 2, true, 0.1, true});
    results.push_back({1e-2, 2, true, 0.9, true}); // tie on N_r -> smaller gamma wins
    results.push_back({1e+1, 0, false, 2.0, true});
    CHECK(select_gamma(results) == 1e-4);
}

TEST_CASE("gamma selection falls back to the largest gap") {
    std::vector<GammaCandidateResult> results;
    results.push_back({1e-6, 4, false, 0.1, true});
    results.push_back({1e-4, 2, false, 0.4, false});
    results.push_back({1e-2, 0, false, 0.2, true});
    CHECK(select_gamma(results) == 1e-4);
    // separated-but-undersized candidates still compete only through the gap
    results.push_back({1e-1, 0, true, 0.3, false});
    CHECK(select_gamma(results) == 1e-4);
    CHECK_THROWS_AS(select_gamma({}), NonEmptyRequired);
}

TEST_CASE("log grid endpoints and monotonicity") {
    const auto grid = log_spaced_grid(1e-8, 1000.0, 20);
    REQUIRE(grid.size() == 20);
    CHECK(grid.front() == Catch::Approx(1e-8));
    CHECK(grid.back() == Catch::Approx(1000.0));
    for (size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] > grid[i - 1]);
}

TEST_CASE("search config validation") {
    GammaSearchConfig cfg;
    cfg.gamma_min = 1.0;
    cfg.gamma_max = 0.5;
    CHECK_THROWS_AS(cfg.validate(), DomainViolation);
    cfg = {};
    cfg.n_candidates = 1;
    CHECK_THROWS_AS(cfg.validate(), DomainViolation);
    cfg = {};
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("auto gamma driver is deterministic and emits one result per candidate") {
    srand(21);
    DataMatrix X;
    X.values = (Matrix::Random(6, 60).array() + 1.5).matrix();
    const AffinityGraph G = cosine_affinity(X);
    const AutoGammaResult a = estimate_fiedler_rrlpi(X, G);
    const AutoGammaResult b = estimate_fiedler_rrlpi(X, G);
    REQUIRE(a.candidates.size() == 20);
    CHECK(a.gamma_hat == b.gamma_hat);
    CHECK((a.embedding.y - b.embedding.y).cwiseAbs().maxCoeff() == 0.0);
    bool found = false;
    for (const auto& c : a.candidates) found = found || c.gamma == a.gamma_hat;
    CHECK(found);
}
