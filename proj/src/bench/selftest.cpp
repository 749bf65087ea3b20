#include <qsearch/amplify.hpp>
#include <qsearch/apps.hpp>
#include <qsearch/bench.hpp>
#include <qsearch/grover.hpp>
#include <qsearch/optimize.hpp>
#include <qsearch/walks.hpp>

#include <cmath>
#include <numeric>
#include <sstream>

namespace qsearch {

namespace {

constexpr double kTol = 1e-12;

bool near(double a, double b, double tol = kTol) { return std::abs(a - b) <= tol; }

bool state_near(const StateVector& s, std::initializer_list<double> expected, double tol = 1e-12) {
    std::size_t i = 0;
    for (double e : expected) {
        if (std::abs(s[i] - Amplitude{e, 0.0}) > tol) {
            return false;
        }
        ++i;
    }
    return i == s.dimension();
}

class Suite {
public:
    template <class F>
    void add(const std::string& name, F&& body) {
        SelftestCase c;
        c.name = name;
        try {
            c.passed = body();
            if (!c.passed) {
                c.detail = "check failed";
            }
        } catch (const std::exception& e) {
            c.detail = std::string("exception: ") + e.what();
        }
        cases_.push_back(std::move(c));
    }

    std::vector<SelftestCase> take() { return std::move(cases_); }

private:
    std::vector<SelftestCase> cases_;
};

std::vector<bool> all_bits(std::size_t n, bool v) { return std::vector<bool>(n, v); }

} // namespace

std::vector<SelftestCase> run_selftest() {
    Suite s;
    SeededRng rng(2024, 0);

    // sim-core
    s.add("uniform_state(1) is [1]", [] { return state_near(uniform_state(1), {1.0}); });
    s.add("uniform_state(4) is all 0.5", [] { return state_near(uniform_state(4), {0.5, 0.5, 0.5, 0.5}); });
    s.add("uniform_state(0) throws", [] {
        try {
            uniform_state(0);
        } catch (const InvalidDimension&) {
            return true;
        }
        return false;
    });
    s.add("phase flip on empty set charges one query", [] {
        BitOracle o(all_bits(4, false));
        StateVector st = uniform_state(4);
        apply_phase_flip(st, {}, o);
        return state_near(st, {0.5, 0.5, 0.5, 0.5}) && o.queries() == 1;
    });
    s.add("phase flip negates the marked amplitude", [] {
        BitOracle o(all_bits(4, false));
        StateVector st = uniform_state(4);
        const std::size_t m[] = {2};
        apply_phase_flip(st, m, o);
        return state_near(st, {0.5, 0.5, -0.5, 0.5});
    });
    s.add("phase flip is an involution", [] {
        BitOracle o(all_bits(4, false));
        StateVector st = uniform_state(4);
        const std::size_t m[] = {2};
        apply_phase_flip(st, m, o);
        apply_phase_flip(st, m, o);
        return state_near(st, {0.5, 0.5, 0.5, 0.5}) && o.queries() == 2;
    });
    s.add("diffusion fixes the uniform state", [] {
        StateVector st = uniform_state(4);
        apply_diffusion(st);
        return state_near(st, {0.5, 0.5, 0.5, 0.5});
    });
    s.add("diffusion negates a vector orthogonal to uniform", [] {
        const double r = 1.0 / std::sqrt(2.0);
        StateVector st({Amplitude{r, 0}, Amplitude{-r, 0}});
        apply_diffusion(st);
        return state_near(st, {-r, r});
    });
    s.add("measure on a basis state", [&rng] {
        const StateVector st = StateVector::basis(4, 0);
        for (int i = 0; i < 100; ++i) {
            if (measure(st, rng) != 0) {
                return false;
            }
        }
        return true;
    });

    // grover
    s.add("optimal_query_count(4,1) = 1", [] { return optimal_query_count(4, 1) == 1; });
    s.add("optimal_query_count(N,N) = 0", [] { return optimal_query_count(37, 37) == 0; });
    s.add("success_prob_analytic at t=0 is k/N", [] { return near(success_prob_analytic(100, 7, 0), 0.07); });
    s.add("grover_search with N=k uses no queries", [&rng] {
        BitOracle o(all_bits(8, true));
        const SearchOutcome r = grover_search(o, GroverParams{8, 8, std::nullopt}, rng);
        return r.index && o.peek(*r.index) && o.queries() == 0;
    });
    s.add("grover_search_exact with N=k uses no queries", [&rng] {
        BitOracle o(all_bits(8, true));
        const SearchOutcome r = grover_search_exact(o, GroverParams{8, 8, std::nullopt}, rng);
        return r.index && o.peek(*r.index) && o.queries() == 0;
    });
    s.add("grover_search_exact(4,1) certain with one query", [&rng] {
        const std::size_t m[] = {3};
        BitOracle o = BitOracle::with_marked(4, m);
        const SearchOutcome r = grover_search_exact(o, GroverParams{4, 1, std::nullopt}, rng);
        return r.index == 3u && o.queries() == 1 && r.marked_probability >= 1.0 - 1e-9;
    });
    s.add("grover_search_exact without k is unsupported", [&rng] {
        BitOracle o(all_bits(4, false));
        try {
            grover_search_exact(o, GroverParams{4, std::nullopt, std::nullopt}, rng);
        } catch (const UnsupportedMode&) {
            return true;
        }
        return false;
    });
    s.add("unknown-k search on all zeros returns absent", [&rng] {
        BitOracle o(all_bits(64, false));
        return !grover_search_unknown(o, rng).index.has_value();
    });
    s.add("unknown-k search on all ones succeeds", [&rng] {
        BitOracle o(all_bits(64, true));
        const SearchOutcome r = grover_search_unknown(o, rng);
        return r.index.has_value() && r.queries <= 2;
    });
    s.add("find_all on all zeros is empty", [&rng] {
        BitOracle o(all_bits(32, false));
        return find_all(o, rng).indices.empty();
    });

    // amplify
    s.add("predicted_repetitions(1) = 0", [] { return predicted_repetitions(1.0) == 0; });
    s.add("classical_repetitions(1) = 1 and (0.01) = 100",
          [] { return classical_repetitions(1.0) == 1 && classical_repetitions(0.01) == 100; });
    s.add("uniform preparation reduces to Grover", [] {
        const std::size_t n = 16;
        const std::vector<std::size_t> marked = {5};
        BitOracle bits = BitOracle::with_marked(n, marked);
        PredicateOracle g1 = bits.as_predicate();
        PredicateOracle g2 = bits.as_predicate();
        const StateVector a = amplify_state(uniform_preparation(n), g1, marked, 2);
        const StateVector b = grover_state(g2, marked, 2);
        for (std::size_t i = 0; i < n; ++i) {
            if (std::abs(a[i] - b[i]) > 1e-12) {
                return false;
            }
        }
        return true;
    });

    // optimize
    s.add("find_minimum on constant f", [&rng] {
        ValueOracle f(std::vector<std::int64_t>(16, 3));
        const MinimumOutcome r = find_minimum(f, rng);
        return r.value == 3 && r.verified;
    });
    auto popcount_values = [](int n, int sign) {
        std::vector<std::int64_t> v(std::size_t{1} << n);
        for (std::size_t x = 0; x < v.size(); ++x) {
            v[x] = sign * static_cast<std::int64_t>(std::popcount(x));
        }
        return v;
    };
    s.add("local minimum of sum x_i is all zeros", [&] {
        HypercubeOracle f(4, popcount_values(4, 1));
        const LocalMinOutcome r = find_local_minimum(f, rng);
        return r.claimed && r.x == 0;
    });
    s.add("local minimum of -sum x_i is all ones", [&] {
        HypercubeOracle f(4, popcount_values(4, -1));
        const LocalMinOutcome r = find_local_minimum(f, rng);
        return r.claimed && r.x == 15;
    });
    s.add("verify_local_min on sum x_i", [&] {
        HypercubeOracle f(4, popcount_values(4, 1));
        const bool zero_ok = verify_local_min(f, 0);
        const bool ones_bad = !verify_local_min(f, 15);
        return zero_ok && ones_bad && f.queries() == 10;
    });

    // walks
    s.add("grid walk with every cell marked finds in one step", [&rng] {
        const TorusGrid grid(2, 4);
        BitOracle o(all_bits(grid.cells(), true));
        const WalkSearchOutcome r = grid_walk_search(grid, o, rng, 100);
        return r.found.has_value() && r.steps == 1;
    });
    s.add("grid walk with nothing marked returns absent", [&rng] {
        const TorusGrid grid(2, 4);
        BitOracle o(all_bits(grid.cells(), false));
        const WalkSearchOutcome r = grid_walk_search(grid, o, rng, 50);
        return !r.found && r.steps <= 50;
    });
    s.add("classical scan finds the first cell in one step", [] {
        const TorusGrid grid(2, 8);
        const std::size_t first = boustrophedon_order(grid).front();
        const std::size_t m[] = {first};
        BitOracle o = BitOracle::with_marked(grid.cells(), m);
        const WalkSearchOutcome r = grid_classical_search(grid, o);
        return r.found == first && r.steps == 1;
    });
    s.add("classical scan of an empty grid costs N queries", [] {
        const TorusGrid grid(2, 8);
        BitOracle o(all_bits(grid.cells(), false));
        const WalkSearchOutcome r = grid_classical_search(grid, o);
        return !r.found && o.queries() == grid.cells();
    });
    s.add("stationary edge state is fixed without marks", [] {
        const MarkovChain chain = MarkovChain::cycle(12, 0.5, {});
        const SzegedyWalk walk(chain);
        StateVector st = walk.stationary_state();
        const StateVector before = st;
        walk.step(st);
        for (std::size_t i = 0; i < st.dimension(); ++i) {
            if (std::abs(st[i] - before[i]) > 1e-9) {
                return false;
            }
        }
        return true;
    });
    s.add("Szegedy search with all states marked costs gamma0", [&rng] {
        std::vector<std::size_t> all(8);
        std::iota(all.begin(), all.end(), 0);
        const MarkovChain chain = MarkovChain::complete(8, all);
        const SzegedyOutcome r = szegedy_find_marked(chain, SzegedyCosts{}, rng);
        return r.found.has_value() && r.steps == 0 && near(r.cost, 1.0);
    });
    s.add("classical hitting with all marked is 0", [&rng] {
        const MarkovChain chain = MarkovChain::complete(4, {0, 1, 2, 3});
        return near(classical_hitting(chain, rng, 100), 0.0);
    });
    s.add("Johnson chain N=4 M=2 has 10 states", [] {
        const ValueOracle f(std::vector<std::int64_t>{0, 1, 2, 3});
        const JohnsonChain j = johnson_chain(4, 2, f);
        if (j.chain.states() != 10) {
            return false;
        }
        for (std::size_t x = 0; x < 6; ++x) {
            std::size_t up = 0;
            for (const auto& e : j.chain.row(x)) {
                up += e.col >= 6 ? 1 : 0;
            }
            if (up != 2) {
                return false;
            }
        }
        return j.chain.marked().empty();
    });
    s.add("collision_vertex_probability(N,N) = 1", [] { return near(collision_vertex_probability(9, 9), 1.0); });
    s.add("ed_walk on injective f returns absent", [&rng] {
        ValueOracle f(std::vector<std::int64_t>{0, 1, 2, 3, 4, 5});
        return !ed_walk(f, 2, rng).pair.has_value();
    });

    // apps
    s.add("unsatisfiable formula never yields an assignment", [&rng] {
        const Cnf3Formula f(1, {make_clause({1}), make_clause({-1})});
        for (int i = 0; i < 200; ++i) {
            if (schoening_run(f, rng).assignment) {
                return false;
            }
        }
        return true;
    });
    s.add("tautology-like formula has eps_hat 1", [&rng] {
        const Cnf3Formula f(2, {make_clause({1, -1}), make_clause({2, -2})});
        return near(estimate_success(f, 100, rng).eps_hat, 1.0);
    });
    s.add("unsatisfiable formula has zero successes", [&rng] {
        const Cnf3Formula f(1, {make_clause({1}), make_clause({-1})});
        return estimate_success(f, 100, rng).successes == 0;
    });
    s.add("speedup report at eps 1", [] {
        const SpeedupReport r = quantum_speedup_report(SatRunStats::exact(1.0));
        return r.predicted_quantum_reps == 0 && r.classical_reps == 1;
    });
    s.add("ED hybrid on constant f, N=4", [&rng] {
        ValueOracle f(std::vector<std::int64_t>(4, 9));
        const EdHybridOutcome r = element_distinctness_hybrid(f, rng);
        return r.pair && r.pair->i != r.pair->j;
    });
    s.add("ED hybrid on injective f, N=16", [&rng] {
        std::vector<std::int64_t> v(16);
        std::iota(v.begin(), v.end(), 0);
        ValueOracle f(v);
        return !element_distinctness_hybrid(f, rng).pair.has_value();
    });
    s.add("ED query model at eps 1 is one repetition", [] {
        return near(ed_hybrid_query_model(64, 1.0), 8.0 + std::ceil(5.0 * std::sqrt(56.0)));
    });

    // bench-cli
    s.add("grover-scaling run is deterministic", [] {
        ExperimentConfig c;
        c.experiment = "grover-scaling";
        c.sizes = {4, 16};
        c.trials = 2;
        c.seed = 7;
        auto a = run_experiment(c);
        auto b = run_experiment(c);
        if (a.size() != 4) {
            return false;
        }
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i].ms = b[i].ms = 0.0;
        }
        return a == b;
    });
    s.add("fit of y = x^0.5 has slope 0.5", [] {
        std::vector<std::pair<double, double>> pts;
        for (double x : {4.0, 16.0, 64.0, 256.0}) {
            pts.emplace_back(x, std::sqrt(x));
        }
        const ScalingFit f = fit_exponent(pts);
        return near(f.slope, 0.5, 1e-12) && f.rms_residual < 1e-12;
    });
    s.add("fit of y = 3 x^0.75 has slope 0.75", [] {
        std::vector<std::pair<double, double>> pts;
        for (double x : {2.0, 8.0, 32.0}) {
            pts.emplace_back(x, 3.0 * std::pow(x, 0.75));
        }
        return near(fit_exponent(pts).slope, 0.75, 1e-12);
    });
    s.add("empty record list is header-only CSV", [] {
        std::ostringstream out;
        RecordWriter w(out, OutputFormat::csv);
        return out.str() == std::string(kCsvHeader) + "\n";
    });
    s.add("one record round-trips through CSV", [] {
        ExperimentRecord r{"grover-scaling", 16, 1, 99, 3, 3, true, 1.5};
        std::stringstream io;
        RecordWriter w(io, OutputFormat::csv);
        w.write(r);
        const auto back = parse_csv_records(io);
        return back.size() == 1 && back[0] == r;
    });

    return s.take();
}

} // namespace qsearch
