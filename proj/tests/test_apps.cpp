#include <qsearch/amplify.hpp>
#include <qsearch/apps.hpp>
#include <qsearch/grover.hpp>

#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

using namespace qsearch;

namespace {

std::vector<std::int64_t> iota_values(std::size_t n) {
    std::vector<std::int64_t> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

} // namespace

TEST_CASE("DIMACS round trip") {
    std::istringstream in("c example\np cnf 4 3\n1 -2 3 0\n-1 4 0\n2\n-3 -4 0\n");
    const Cnf3Formula f = parse_dimacs(in);
    CHECK(f.variables() == 4);
    REQUIRE(f.clauses().size() == 3);
    CHECK(f.clauses()[1].size == 2);
    CHECK(f.clauses()[2].literals[0] == 2);

    std::ostringstream out;
    write_dimacs(out, f);
    std::istringstream back(out.str());
    const Cnf3Formula g = parse_dimacs(back);
    REQUIRE(g.clauses().size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(g.clauses()[i].size == f.clauses()[i].size);
        CHECK(g.clauses()[i].literals == f.clauses()[i].literals);
    }

    std::istringstream wide("p cnf 4 1\n1 2 3 4 0\n");
    CHECK_THROWS_AS(parse_dimacs(wide), ParseError);
    std::istringstream range("p cnf 2 1\n1 3 0\n");
    CHECK_THROWS(parse_dimacs(range));
    CHECK_THROWS_AS(Cnf3Formula(2, {Clause{}}), ParameterError);
}

TEST_CASE("clause evaluation") {
    const Cnf3Formula f(3, {make_clause({1, -2}), make_clause({3})});
    CHECK(f.satisfied_by(Assignment{1, 1, 1}));
    CHECK_FALSE(f.satisfied_by(Assignment{0, 1, 1}));
    CHECK(f.first_unsatisfied(Assignment{1, 0, 0}) == std::optional<std::size_t>{1});
}

TEST_CASE("schoening_run") {
    SUBCASE("single clause succeeds at least half the time") {
        const Cnf3Formula f(1, {make_clause({1})});
        int ok = 0;
        for (int seed = 0; seed < 1000; ++seed) {
            SeededRng rng(1, seed);
            const SchoeningResult r = schoening_run(f, rng);
            if (r.assignment) {
                CHECK((*r.assignment)[0] == 1);
                ++ok;
            }
        }
        CHECK(ok >= 500);
    }
    SUBCASE("unsatisfiable formula never yields an assignment") {
        const Cnf3Formula f(3, {make_clause({1}), make_clause({-1}), make_clause({2, 3})});
        for (int seed = 0; seed < 200; ++seed) {
            SeededRng rng(2, seed);
            const SchoeningResult r = schoening_run(f, rng);
            CHECK_FALSE(r.assignment);
            CHECK(r.flips <= 9);
        }
    }
    SUBCASE("planted n=12") {
        SeededRng rng(3, 0);
        const PlantedInstance inst = planted_3sat(12, 4.26, rng);
        CHECK(inst.formula.satisfied_by(inst.solution));
        for (const Clause& c : inst.formula.clauses()) {
            CHECK(c.size == 3);
            CHECK(std::abs(c.literals[0]) != std::abs(c.literals[1]));
            CHECK(std::abs(c.literals[1]) != std::abs(c.literals[2]));
            CHECK(std::abs(c.literals[0]) != std::abs(c.literals[2]));
        }
        const SatRunStats s = estimate_success(inst.formula, 2000, rng);
        CHECK(s.trials == 2000);
        CHECK(s.eps_hat >= 0.5 * std::pow(0.75, 12));
        CHECK(s.lower <= s.eps_hat);
        CHECK(s.upper >= s.eps_hat);
    }
}

TEST_CASE("wilson_interval") {
    // z = 1.96, 10 of 100: independent evaluation
    const double z = 1.959963984540054;
    const double p = 0.1;
    const double n = 100.0;
    const double centre = (p + z * z / (2 * n)) / (1 + z * z / n);
    const double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / (1 + z * z / n);
    const WilsonInterval w = wilson_interval(10, 100);
    CHECK(w.lower == doctest::Approx(centre - half).epsilon(1e-12));
    CHECK(w.upper == doctest::Approx(centre + half).epsilon(1e-12));
    CHECK(wilson_interval(0, 50).lower == doctest::Approx(0.0));
    CHECK(wilson_interval(50, 50).upper == doctest::Approx(1.0));

    const SatRunStats e = SatRunStats::exact(0.3);
    CHECK(e.lower == 0.3);
    CHECK(e.upper == 0.3);
    CHECK(e.eps_hat == 0.3);
}

TEST_CASE("quantum_speedup_report") {
    const SpeedupReport one = quantum_speedup_report(SatRunStats::exact(1.0));
    CHECK(one.predicted_quantum_reps == 0);
    CHECK(one.classical_reps == 1);
    CHECK(one.quantum_not_worse);

    const double eps = std::pow(0.75, 12);
    const SpeedupReport small = quantum_speedup_report(SatRunStats::exact(eps));
    CHECK(small.classical_reps == 32);
    CHECK(small.predicted_quantum_reps == static_cast<std::uint64_t>(std::ceil(M_PI / (4 * std::asin(std::sqrt(eps))) - 0.5)));
    CHECK(small.quantum_not_worse);

    SatRunStats none;
    none.trials = 100;
    none.lower = 0.0;
    CHECK(quantum_speedup_report(none).inconclusive);
}

TEST_CASE("element distinctness hybrid") {
    SUBCASE("constant function, N=4") {
        SeededRng rng(4, 0);
        ValueOracle f(std::vector<std::int64_t>(4, 9));
        const EdHybridOutcome r = element_distinctness_hybrid(f, rng);
        REQUIRE(r.pair);
        CHECK(r.pair->i != r.pair->j);
        CHECK(r.queries == f.queries());
    }
    SUBCASE("injective, N=16") {
        for (int seed = 0; seed < 50; ++seed) {
            SeededRng rng(5, seed);
            ValueOracle f(iota_values(16));
            CHECK_FALSE(element_distinctness_hybrid(f, rng).pair);
        }
    }
    SUBCASE("planted pair is reported correctly") {
        int found = 0;
        for (int seed = 0; seed < 100; ++seed) {
            SeededRng rng(6, seed);
            auto v = iota_values(256);
            v[200] = v[17];
            ValueOracle f(v);
            const EdHybridOutcome r = element_distinctness_hybrid(f, rng);
            if (r.pair) {
                CHECK(r.pair->i == 17);
                CHECK(r.pair->j == 200);
                ++found;
            }
        }
        CHECK(found >= 67);
    }
    CHECK_THROWS_AS(
        [] {
            SeededRng rng(7, 0);
            ValueOracle f(iota_values(3));
            element_distinctness_hybrid(f, rng);
        }(),
        ParameterError);
}

TEST_CASE("ed_hybrid_base_run") {
    SeededRng rng(8, 0);
    double hits = 0.0;
    const int runs = 2000;
    for (int i = 0; i < runs; ++i) {
        auto v = iota_values(1024);
        v[1000] = v[3];
        ValueOracle f(v);
        const EdBaseRun r = ed_hybrid_base_run(f, rng);
        CHECK(r.queries == f.queries());
        CHECK(r.sample_size == 32);
        hits += r.pair ? 1.0 : 0.0;
    }
    // success needs one of the pair in the sample: about 2 sqrt(N) / N
    const double eps_sqrt_n = hits / runs * 32.0;
    CHECK(eps_sqrt_n > 1.0);
    CHECK(eps_sqrt_n < 2.5);
}

TEST_CASE("ed_hybrid_query_model") {
    const double cap_64 = std::ceil(kUnknownSearchCap * std::sqrt(56.0));
    CHECK(ed_hybrid_query_model(64, 1.0) == doctest::Approx(8.0 + cap_64));
    CHECK(ed_hybrid_query_model(64, 0.125) ==
          doctest::Approx(static_cast<double>(predicted_repetitions(0.125)) * (8.0 + cap_64)));
    CHECK_THROWS_AS(ed_hybrid_query_model(64, 0.0), ParameterError);
}
