#include <qsearch/optimize.hpp>

#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <set>

using namespace qsearch;

namespace {

std::vector<std::int64_t> popcount_values(int n, int sign) {
    std::vector<std::int64_t> v(std::size_t{1} << n);
    for (std::size_t x = 0; x < v.size(); ++x) {
        v[x] = sign * std::popcount(x);
    }
    return v;
}

std::vector<std::int64_t> shuffled(std::size_t n, SeededRng& rng) {
    std::vector<std::int64_t> v(n);
    std::iota(v.begin(), v.end(), 0);
    std::shuffle(v.begin(), v.end(), rng);
    return v;
}

bool brute_local_min(const std::vector<std::int64_t>& f, int n, std::uint32_t x) {
    for (int j = 0; j < n; ++j) {
        if (f[x ^ (1U << j)] < f[x]) {
            return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("find_minimum") {
    SUBCASE("constant f") {
        SeededRng rng(1, 0);
        ValueOracle f(std::vector<std::int64_t>(32, 4));
        const MinimumOutcome r = find_minimum(f, rng);
        CHECK(r.value == 4);
        CHECK(r.verified);
        CHECK(r.updates == 0);
    }
    SUBCASE("f(i) = i, N = 8") {
        int hits = 0;
        for (int seed = 0; seed < 1000; ++seed) {
            SeededRng rng(2, seed);
            ValueOracle f({0, 1, 2, 3, 4, 5, 6, 7});
            hits += find_minimum(f, rng).index == 0 ? 1 : 0;
        }
        CHECK(hits >= 900);
    }
    SUBCASE("budget respected and flagged") {
        SeededRng rng(3, 0);
        ValueOracle f(shuffled(4096, rng));
        const MinimumOutcome r = find_minimum(f, rng, 5);
        CHECK(f.queries() <= 5);
        CHECK_FALSE(r.verified);
        CHECK(r.value == f.peek(r.index));
    }
    SUBCASE("queries reported match the counter") {
        SeededRng rng(4, 0);
        ValueOracle f(shuffled(1000, rng));
        const MinimumOutcome r = find_minimum(f, rng);
        CHECK(r.queries == f.queries());
        CHECK(r.queries <= default_minimum_budget(1000));
    }
    CHECK(default_minimum_budget(100) == 300);
}

TEST_CASE("local minimum parameters") {
    CHECK(local_min_sample_size(10) == static_cast<std::size_t>(std::llround(std::exp2(20.0 / 3.0) * std::cbrt(10.0))));
    for (int n = 1; n <= 16; ++n) {
        const std::size_t m = local_min_sample_size(n);
        CHECK(m >= 1);
        CHECK(m <= (std::size_t{1} << n));
        CHECK(local_min_descent_budget(n, m) ==
              static_cast<std::uint64_t>(std::ceil(std::exp2(n + 1) / static_cast<double>(m))));
    }
}

TEST_CASE("sample_distinct") {
    SeededRng rng(5, 0);
    const auto s = sample_distinct(100, 40, rng);
    CHECK(s.size() == 40);
    CHECK(std::set<std::uint32_t>(s.begin(), s.end()).size() == 40);
    CHECK(*std::max_element(s.begin(), s.end()) < 100);
    CHECK(sample_distinct(5, 5, rng).size() == 5);
    CHECK_THROWS_AS(sample_distinct(5, 6, rng), ParameterError);

    // each element equally likely
    std::vector<int> counts(10, 0);
    for (int i = 0; i < 20000; ++i) {
        for (auto x : sample_distinct(10, 3, rng)) {
            ++counts[x];
        }
    }
    for (int c : counts) {
        CHECK(std::abs(c / 20000.0 - 0.3) < 0.015);
    }
}

TEST_CASE("find_local_minimum") {
    SeededRng rng(6, 0);
    SUBCASE("sum of bits") {
        HypercubeOracle f(4, popcount_values(4, 1));
        const LocalMinOutcome r = find_local_minimum(f, rng);
        CHECK(r.claimed);
        CHECK(r.x == 0);
    }
    SUBCASE("negated sum of bits") {
        HypercubeOracle f(4, popcount_values(4, -1));
        const LocalMinOutcome r = find_local_minimum(f, rng);
        CHECK(r.claimed);
        CHECK(r.x == 15);
    }
    SUBCASE("random f, n = 8") {
        int ok = 0;
        for (int seed = 0; seed < 200; ++seed) {
            SeededRng r(7, seed);
            const auto values = shuffled(256, r);
            HypercubeOracle f(8, values);
            const LocalMinOutcome out = find_local_minimum(f, r);
            CHECK(out.queries == f.queries());
            ok += out.claimed && brute_local_min(values, 8, out.x) ? 1 : 0;
        }
        CHECK(ok >= 134);
    }
    CHECK_THROWS_AS(HypercubeOracle(17, std::vector<std::int64_t>(std::size_t{1} << 17)), SizeError);
    CHECK_THROWS_AS(HypercubeOracle(3, std::vector<std::int64_t>(7)), InvalidDimension);
}

TEST_CASE("verify_local_min") {
    HypercubeOracle f(5, popcount_values(5, 1));
    CHECK(verify_local_min(f, 0));
    CHECK(f.queries() == 6);
    CHECK_FALSE(verify_local_min(f, 31));

    SeededRng rng(8, 0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::int64_t> values(64);
        for (auto& v : values) {
            v = static_cast<std::int64_t>(rng.below(10));
        }
        HypercubeOracle g(6, values);
        for (std::uint32_t x = 0; x < 64; ++x) {
            CHECK(verify_local_min(g, x) == brute_local_min(values, 6, x));
        }
    }
}

TEST_CASE("classical_local_descent ends at a local minimum") {
    for (int seed = 0; seed < 50; ++seed) {
        SeededRng rng(9, seed);
        const auto values = shuffled(512, rng);
        HypercubeOracle f(9, values);
        const LocalMinOutcome r = classical_local_descent(f, rng);
        CHECK(r.claimed);
        CHECK(brute_local_min(values, 9, r.x));
    }
}
