#include <qsearch/grover.hpp>

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace qsearch;

namespace {

// Brute-force statevector success after t iterations, independent of the library's simulation.
double naive_success(std::size_t n, std::size_t k, std::uint64_t t) {
    std::vector<double> a(n, 1.0 / std::sqrt(static_cast<double>(n)));
    for (std::uint64_t step = 0; step < t; ++step) {
        for (std::size_t i = 0; i < k; ++i) {
            a[i] = -a[i];
        }
        const double mean = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(n);
        for (double& x : a) {
            x = 2.0 * mean - x;
        }
    }
    double p = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        p += a[i] * a[i];
    }
    return p;
}

std::vector<std::size_t> first(std::size_t k) {
    std::vector<std::size_t> v(k);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

} // namespace

TEST_CASE("optimal_query_count") {
    CHECK(optimal_query_count(4, 1) == 1);
    CHECK(optimal_query_count(16, 1) == 3);
    CHECK(optimal_query_count(100, 1) == 8);
    CHECK(optimal_query_count(37, 37) == 0);
    CHECK_THROWS_AS(optimal_query_count(10, 0), ParameterError);
    CHECK_THROWS_AS(optimal_query_count(10, 11), ParameterError);

    for (std::size_t n = 1; n <= 300; ++n) {
        std::uint64_t previous = optimal_query_count(n, 1);
        for (std::size_t k = 1; k <= n; ++k) {
            const std::uint64_t q = optimal_query_count(n, k);
            CHECK(q <= previous);
            previous = q;
            // the count is pi/(4 theta) - 1/2 rounded up, so it stays within 1/2 of pi/(4 theta)
            const double x = M_PI / (4.0 * std::asin(std::sqrt(static_cast<double>(k) / n)));
            CHECK(static_cast<double>(q) <= x + 0.5 + 1e-12);
        }
    }
}

TEST_CASE("success_prob_analytic") {
    CHECK(success_prob_analytic(100, 7, 0) == doctest::Approx(0.07).epsilon(1e-12));
    CHECK(success_prob_analytic(4, 1, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(success_prob_analytic(100, 1, 8) == doctest::Approx(0.9827).epsilon(1e-4));
    CHECK(std::abs(success_prob_analytic(100, 1, 8) - std::pow(std::sin(17.0 * std::asin(0.1)), 2)) < 1e-12);
    CHECK(std::abs(success_prob_analytic(100, 1, 8) - naive_success(100, 1, 8)) < 1e-12);
    for (std::size_t t = 0; t < 20; ++t) {
        CHECK(std::abs(success_prob_analytic(50, 3, t) - naive_success(50, 3, t)) < 1e-10);
    }
}

TEST_CASE("grover_state charges t queries") {
    const auto marked = first(2);
    BitOracle bits = BitOracle::with_marked(32, marked);
    PredicateOracle view = bits.as_predicate();
    const StateVector s = grover_state(view, marked, 3);
    CHECK(bits.queries() == 3);
    CHECK(std::abs(s.probability_of(marked) - naive_success(32, 2, 3)) < 1e-12);
}

TEST_CASE("grover_search") {
    SUBCASE("N=4, k=1 always succeeds") {
        for (std::uint64_t seed = 0; seed < 1000; ++seed) {
            SeededRng rng(1, seed);
            const std::size_t m[] = {seed % 4};
            BitOracle o = BitOracle::with_marked(4, m);
            const SearchOutcome r = grover_search(o, GroverParams{4, 1, std::nullopt}, rng);
            REQUIRE(r.index);
            CHECK(*r.index == seed % 4);
            CHECK(o.queries() == 1);
        }
    }
    SUBCASE("N=k needs no queries") {
        SeededRng rng(1, 1);
        BitOracle o(std::vector<bool>(6, true));
        const SearchOutcome r = grover_search(o, GroverParams{6, 6, std::nullopt}, rng);
        CHECK(r.index);
        CHECK(o.queries() == 0);
    }
    SUBCASE("N=64 frequency matches the closed form") {
        int hits = 0;
        const int trials = 4000;
        for (int seed = 0; seed < trials; ++seed) {
            SeededRng rng(2, seed);
            const std::size_t m[] = {17};
            BitOracle o = BitOracle::with_marked(64, m);
            const SearchOutcome r = grover_search(o, GroverParams{64, 1, std::nullopt}, rng);
            hits += r.index == 17u ? 1 : 0;
            CHECK(o.queries() == optimal_query_count(64, 1));
        }
        CHECK(std::abs(hits / static_cast<double>(trials) - success_prob_analytic(64, 1, 6)) < 0.02);
    }
    SUBCASE("explicit iteration count") {
        SeededRng rng(3, 0);
        const std::size_t m[] = {0};
        BitOracle o = BitOracle::with_marked(64, m);
        const SearchOutcome r = grover_search(o, GroverParams{64, 1, 2}, rng);
        CHECK(o.queries() == 2);
        CHECK(r.marked_probability == doctest::Approx(success_prob_analytic(64, 1, 2)).epsilon(1e-12));
    }
}

TEST_CASE("grover_search_exact") {
    SeededRng rng(4, 0);
    for (auto [n, k] : std::vector<std::pair<std::size_t, std::size_t>>{{4, 1}, {16, 1}, {100, 4}, {7, 7}, {300, 11}}) {
        const auto marked = first(k);
        BitOracle o = BitOracle::with_marked(n, marked);
        const SearchOutcome r = grover_search_exact(o, GroverParams{n, k, std::nullopt}, rng);
        CHECK(r.marked_probability >= 1.0 - 1e-9);
        CHECK(o.queries() == optimal_query_count(n, k));
        REQUIRE(r.index);
        CHECK(o.peek(*r.index));
    }
    BitOracle o(std::vector<bool>(8, false));
    CHECK_THROWS_AS(grover_search_exact(o, GroverParams{8, std::nullopt, std::nullopt}, rng), UnsupportedMode);
}

TEST_CASE("solve_exact_phases gives a unit-modulus rotation onto the marked set") {
    for (auto [n, k] : std::vector<std::pair<std::size_t, std::size_t>>{{16, 1}, {64, 3}, {1000, 1}}) {
        const std::uint64_t t = optimal_query_count(n, k);
        const ExactPhases p = solve_exact_phases(n, k, t);
        CHECK(p.phi >= 0.0);
        CHECK(p.phi <= M_PI + 1e-12);
        CHECK(std::isfinite(p.psi));
    }
    CHECK_THROWS_AS(solve_exact_phases(16, 1, 0), ParameterError);
}

TEST_CASE("grover_search_unknown") {
    SUBCASE("nothing marked") {
        SeededRng rng(5, 0);
        BitOracle o(std::vector<bool>(64, false));
        const SearchOutcome r = grover_search_unknown(o, rng);
        CHECK_FALSE(r.index);
        CHECK(o.queries() <= static_cast<std::uint64_t>(std::ceil(kUnknownSearchCap * 8.0)));
    }
    SUBCASE("everything marked") {
        double total = 0.0;
        for (int seed = 0; seed < 200; ++seed) {
            SeededRng rng(5, seed);
            BitOracle o(std::vector<bool>(64, true));
            CHECK(grover_search_unknown(o, rng).index);
            total += static_cast<double>(o.queries());
        }
        CHECK(total / 200.0 <= 2.0);
    }
    SUBCASE("N=1024, k=4") {
        int hits = 0;
        double total = 0.0;
        for (int seed = 0; seed < 1000; ++seed) {
            SeededRng rng(6, seed);
            const std::size_t m[] = {3, 100, 555, 1000};
            BitOracle o = BitOracle::with_marked(1024, m);
            const SearchOutcome r = grover_search_unknown(o, rng);
            hits += r.index && o.peek(*r.index) ? 1 : 0;
            total += static_cast<double>(o.queries());
        }
        CHECK(hits >= 667);
        CHECK(total / 1000.0 <= 5.0 * 16.0);
    }
    SUBCASE("max_queries is a hard limit") {
        SeededRng rng(7, 0);
        BitOracle o(std::vector<bool>(4096, false));
        UnknownSearchOptions opt;
        opt.max_queries = 10;
        const SearchOutcome r = grover_search_unknown(o, rng, opt);
        CHECK(o.queries() <= 10);
        CHECK(r.budget_exhausted);
    }
}

TEST_CASE("sample_after_iterations matches the statevector distribution") {
    const std::size_t n = 40;
    const std::vector<std::size_t> marked = {2, 9, 30};
    BitOracle bits = BitOracle::with_marked(n, marked);
    const PredicateOracle view = bits.as_predicate();
    SeededRng rng(8, 0);
    for (std::uint64_t j : {0, 1, 2, 3}) {
        std::vector<int> counts(n, 0);
        const int draws = 60000;
        for (int i = 0; i < draws; ++i) {
            ++counts[sample_after_iterations(view, marked, j, rng)];
        }
        const double pm = naive_success(n, 3, j) / 3.0;
        const double pu = (1.0 - naive_success(n, 3, j)) / 37.0;
        for (std::size_t i = 0; i < n; ++i) {
            const bool is_marked = std::find(marked.begin(), marked.end(), i) != marked.end();
            CHECK(std::abs(counts[i] / static_cast<double>(draws) - (is_marked ? pm : pu)) < 0.008);
        }
    }
    CHECK(bits.queries() == 0);
}

TEST_CASE("find_all") {
    SUBCASE("all zeros") {
        SeededRng rng(9, 0);
        BitOracle o(std::vector<bool>(128, false));
        CHECK(find_all(o, rng).indices.empty());
    }
    SUBCASE("N=256, k=16 planted") {
        int exact = 0;
        for (int seed = 0; seed < 500; ++seed) {
            SeededRng rng(10, seed);
            std::vector<std::size_t> planted;
            for (std::size_t i = 0; i < 16; ++i) {
                planted.push_back((seed * 7 + i * 16 + i % 3) % 256);
            }
            std::sort(planted.begin(), planted.end());
            planted.erase(std::unique(planted.begin(), planted.end()), planted.end());
            BitOracle o = BitOracle::with_marked(256, planted);
            exact += find_all(o, rng).indices == planted ? 1 : 0;
        }
        CHECK(exact >= 334);
    }
}
