#include <qsearch/sim_core.hpp>

#include <doctest.h>

#include <array>
#include <cmath>
#include <set>

using namespace qsearch;

namespace {

void check_state(const StateVector& s, std::initializer_list<double> expected, double tol = 1e-12) {
    REQUIRE(s.dimension() == expected.size());
    std::size_t i = 0;
    for (double e : expected) {
        CHECK(std::abs(s[i] - Amplitude{e, 0.0}) <= tol);
        ++i;
    }
}

} // namespace

TEST_CASE("uniform_state") {
    check_state(uniform_state(1), {1.0});
    check_state(uniform_state(4), {0.5, 0.5, 0.5, 0.5});
    for (std::size_t n = 1; n <= (std::size_t{1} << 16); n = n * 3 + 1) {
        CHECK(std::abs(uniform_state(n).norm_squared() - 1.0) < 1e-12);
    }
    CHECK(std::abs(uniform_state(std::size_t{1} << 16).norm_squared() - 1.0) < 1e-12);
    CHECK_THROWS_AS(uniform_state(0), InvalidDimension);
}

TEST_CASE("StateVector validates its norm") {
    CHECK_THROWS_AS(StateVector(std::vector<Amplitude>{}), InvalidDimension);
    CHECK_THROWS_AS(StateVector({Amplitude{1.0, 0.0}, Amplitude{1.0, 0.0}}), NormalizationError);
    CHECK_NOTHROW(StateVector({Amplitude{0.6, 0.0}, Amplitude{0.0, 0.8}}));
    CHECK_THROWS_AS(StateVector::basis(3, 3), IndexError);
}

TEST_CASE("renormalize only past the drift tolerance") {
    StateVector s = uniform_state(4);
    s[0] *= 1.0 + 1e-12;
    CHECK_FALSE(s.renormalize_if_drifted());
    s[0] *= 1.0 + 1e-6;
    CHECK(s.renormalize_if_drifted());
    CHECK(std::abs(s.norm_squared() - 1.0) < 1e-14);
}

TEST_CASE("phase flip") {
    BitOracle oracle(std::vector<bool>(4, false));
    StateVector s = uniform_state(4);

    SUBCASE("empty marked set leaves the state and charges one query") {
        apply_phase_flip(s, {}, oracle);
        check_state(s, {0.5, 0.5, 0.5, 0.5});
        CHECK(oracle.queries() == 1);
    }
    SUBCASE("negates the marked amplitude") {
        const std::size_t marked[] = {2};
        apply_phase_flip(s, marked, oracle);
        check_state(s, {0.5, 0.5, -0.5, 0.5});
    }
    SUBCASE("involution") {
        const std::size_t marked[] = {2};
        apply_phase_flip(s, marked, oracle);
        apply_phase_flip(s, marked, oracle);
        check_state(s, {0.5, 0.5, 0.5, 0.5});
        CHECK(oracle.queries() == 2);
    }
    SUBCASE("out-of-range index") {
        const std::size_t marked[] = {4};
        CHECK_THROWS_AS(apply_phase_flip(s, marked, oracle), IndexError);
    }
}

TEST_CASE("diffusion") {
    SUBCASE("uniform is fixed") {
        StateVector s = uniform_state(4);
        apply_diffusion(s);
        check_state(s, {0.5, 0.5, 0.5, 0.5});
    }
    SUBCASE("vector orthogonal to uniform is negated") {
        const double r = 1.0 / std::sqrt(2.0);
        StateVector s({Amplitude{r, 0}, Amplitude{-r, 0}});
        apply_diffusion(s);
        check_state(s, {-r, r});
    }
    SUBCASE("matches the explicit 4x4 matrix 2|u><u| - I") {
        const std::array<double, 4> in = {0.5, 0.5, -0.5, 0.5};
        std::array<double, 4> expected{};
        for (int i = 0; i < 4; ++i) {
            for (int j = 0; j < 4; ++j) {
                expected[i] += ((i == j ? -1.0 : 0.0) + 2.0 / 4.0) * in[j];
            }
        }
        StateVector s({in[0], in[1], in[2], in[3]});
        apply_diffusion(s);
        check_state(s, {expected[0], expected[1], expected[2], expected[3]});
        check_state(s, {0.0, 0.0, 1.0, 0.0});
    }
    SUBCASE("generalized diffusion at psi = pi is the diffusion") {
        StateVector a({Amplitude{0.6, 0.0}, Amplitude{0.0, 0.8}, Amplitude{0.0, 0.0}});
        StateVector b = a;
        apply_diffusion(a);
        apply_generalized_diffusion(b, M_PI);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(std::abs(a[i] - b[i]) < 1e-12);
        }
    }
}

TEST_CASE("measure") {
    SeededRng rng(5, 1);
    SUBCASE("basis state") {
        const StateVector s = StateVector::basis(4, 0);
        for (int i = 0; i < 1000; ++i) {
            CHECK(measure(s, rng) == 0);
        }
    }
    SUBCASE("uniform frequencies") {
        const StateVector s = uniform_state(4);
        std::array<int, 4> counts{};
        for (int i = 0; i < 100000; ++i) {
            ++counts[measure(s, rng)];
        }
        for (int c : counts) {
            CHECK(std::abs(c / 100000.0 - 0.25) < 0.01);
        }
    }
    SUBCASE("(0.6, 0.8)") {
        const StateVector s({Amplitude{0.6, 0.0}, Amplitude{0.8, 0.0}});
        int ones = 0;
        for (int i = 0; i < 100000; ++i) {
            ones += measure(s, rng) == 1 ? 1 : 0;
        }
        CHECK(std::abs(ones / 100000.0 - 0.64) < 0.01);
    }
    SUBCASE("drifted state") {
        StateVector s = uniform_state(4);
        s[0] *= 1.01;
        CHECK_THROWS_AS(measure(s, rng), NormalizationError);
    }
}

TEST_CASE("SeededRng streams") {
    SeededRng a(42, 7);
    SeededRng b(42, 7);
    SeededRng c(42, 8);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a();
        CHECK(x == b());
        differs = differs || x != c();
    }
    CHECK(differs);
    CHECK(a.split(3)() == b.split(3)());
    for (int i = 0; i < 1000; ++i) {
        const double u = a.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        CHECK(a.below(7) < 7);
    }
    CHECK_THROWS_AS(a.below(0), ParameterError);
}

TEST_CASE("oracles count queries and never peek-charge") {
    const std::size_t marked[] = {1, 3};
    BitOracle bits = BitOracle::with_marked(5, marked);
    CHECK(bits.peek(1));
    CHECK_FALSE(bits.peek(0));
    CHECK(bits.queries() == 0);
    CHECK(bits.query(3));
    CHECK(bits.queries() == 1);
    CHECK(bits.marked() == std::vector<std::size_t>{1, 3});
    CHECK_THROWS_AS(bits.query(5), IndexError);

    PredicateOracle view = bits.as_predicate();
    view.query(0);
    CHECK(bits.queries() == 2);
    PredicateOracle narrowed = view.restricted([](std::size_t i) { return i != 1; });
    CHECK(narrowed.marked() == std::vector<std::size_t>{3});
    narrowed.query(1);
    CHECK(bits.queries() == 3);

    ValueOracle f({5, 2, 9, 2});
    PredicateOracle below = f.below(5);
    CHECK(below.marked() == std::vector<std::size_t>{1, 3});
    CHECK(f.query(2) == 9);
    below.query(0);
    CHECK(f.queries() == 2);
}

TEST_CASE("sample_weighted follows the weights") {
    SeededRng rng(9, 0);
    const double w[] = {1.0, 0.0, 3.0};
    std::array<int, 3> counts{};
    for (int i = 0; i < 40000; ++i) {
        ++counts[sample_weighted(w, 4.0, rng)];
    }
    CHECK(counts[1] == 0);
    CHECK(std::abs(counts[2] / 40000.0 - 0.75) < 0.01);
}
