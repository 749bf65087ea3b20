#include <qsearch/amplify.hpp>
#include <qsearch/apps.hpp>
#include <qsearch/bench.hpp>
#include <qsearch/grover.hpp>
#include <qsearch/optimize.hpp>
#include <qsearch/walks.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

namespace qsearch {

namespace {

std::vector<std::int64_t> random_permutation(std::size_t n, SeededRng& rng) {
    std::vector<std::int64_t> v(n);
    std::iota(v.begin(), v.end(), 0);
    for (std::size_t i = n; i > 1; --i) {
        std::swap(v[i - 1], v[rng.below(i)]);
    }
    return v;
}

/// Distinct values except for one planted colliding pair.
std::vector<std::int64_t> planted_collision(std::size_t n, SeededRng& rng) {
    auto v = random_permutation(n, rng);
    const auto pair = sample_distinct(n, 2, rng);
    v[pair[1]] = v[pair[0]];
    return v;
}

void require_range(const ExperimentConfig& c, std::size_t lo, std::size_t hi, const std::string& what) {
    for (std::size_t s : c.sizes) {
        if (s < lo || s > hi) {
            throw SizeError(c.experiment + ": size " + std::to_string(s) + " outside the cap [" +
                            std::to_string(lo) + ", " + std::to_string(hi) + "] on " + what);
        }
    }
}

std::size_t param_k(const ExperimentConfig& c, std::size_t n, double fallback) {
    const double k = c.param("k", fallback);
    return std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(k)), 1, n);
}

bool planted_pair_ok(const ValueOracle& f, const std::optional<CollisionPair>& p) {
    return p && p->i != p->j && f.peek(p->i) == f.peek(p->j);
}

MarkovChain szegedy_chain(const ExperimentConfig& c, std::size_t size, std::vector<std::size_t> marked) {
    const std::string kind = c.param("chain", std::string("cycle"));
    const double holding = c.param("holding", 0.75);
    if (kind == "cycle") {
        return MarkovChain::cycle(size, holding, std::move(marked));
    }
    if (kind == "torus") {
        return MarkovChain::torus(size, holding, std::move(marked));
    }
    if (kind == "complete") {
        return MarkovChain::complete(size, std::move(marked));
    }
    throw UsageError("unknown chain '" + kind + "' (expected cycle, torus or complete)");
}

std::size_t chain_states(const ExperimentConfig& c, std::size_t size) {
    return c.param("chain", std::string("cycle")) == "torus" ? size * size : size;
}

double inverse_delta_gap(const ExperimentConfig& c, std::size_t size) {
    const MarkovChain chain = szegedy_chain(c, size, {0});
    return 1.0 / (chain.delta() * chain.gap());
}

std::size_t ed_walk_m(const ExperimentConfig& c, std::size_t n) {
    const double m = c.param("M", std::ceil(std::pow(static_cast<double>(n), 2.0 / 3.0) - 1e-9));
    return static_cast<std::size_t>(std::llround(m));
}

std::vector<ExperimentSpec> build_experiments() {
    std::vector<ExperimentSpec> out;

    {
        ExperimentSpec e;
        e.name = "grover-scaling";
        e.description = "Grover search with known k (param k, default 1)";
        e.expected_exponent = 0.5;
        e.check_sizes = [](const ExperimentConfig& c) { require_range(c, 1, std::size_t{1} << 20, "N"); };
        e.run = [](const ExperimentConfig& c, std::size_t n, SeededRng& rng) {
            const std::size_t k = param_k(c, n, 1);
            const auto marked = sample_distinct(n, k, rng);
            BitOracle oracle = BitOracle::with_marked(n, std::vector<std::size_t>(marked.begin(), marked.end()));
            const SearchOutcome r = grover_search(oracle, GroverParams{n, k, std::nullopt}, rng);
            return TrialResult{r.queries, r.iterations, r.index && oracle.peek(*r.index)};
        };
        out.push_back(std::move(e));
    }
    {
        ExperimentSpec e;
        e.name = "grover-unknown";
        e.description = "exponential search with unknown k (param k, default 1)";
        e.expected_exponent = 0.5;
        e.check_sizes = [](const ExperimentConfig& c) { require_range(c, 1, std::size_t{1} << 24, "N"); };
        e.run = [](const ExperimentConfig& c, std::size_t n, SeededRng& rng) {
            const std::size_t k = param_k(c, n, 1);
            const auto marked = sample_distinct(n, k, rng);
            BitOracle oracle = BitOracle::with_marked(n, std::vector<std::size_t>(marked.begin(), marked.end()));
            const SearchOutcome r = grover_search_unknown(oracle, rng);
            return TrialResult{r.queries, r.iterations, r.index.has_value()};
        };
        out.push_back(std::move(e));
    }
    {
        ExperimentSpec e;
        e.name = "find-all";
        e.description = "find every marked item, k = round(sqrt(N)) unless param k is set";
        e.expected_exponent = 0.75;
        e.check_sizes = [](const ExperimentConfig& c) { require_range(c, 1, std::size_t{1} << 20, "N"); };
        e.run = [](const ExperimentConfig& c, std::size_t n, SeededRng& rng) {
            const std::size_t k = param_k(c, n, std::round(std::sqrt(static_cast<double>(n))));
            auto marked = sample_distinct(n, k, rng);
            std::vector<std::size_t> expected(marked.begin(), marked.end());
            std::sort(expected.begin(), expected.end());
            BitOracle oracle = BitOracle::with_marked(n, expected);
            const FindAllOutcome r = find_all(oracle, rng);
            return TrialResult{r.queries, r.indices.size(), r.indices == expected};
        };
        out.push_back(std::move(e));
    }
    {
        ExperimentSpec e;
        e.name = "min-scaling";
        e.description = "global minimum of a random permutation";
        e.expected_exponent = 0.5;
        e.check_sizes = [](const ExperimentConfig& c) { require_range(c, 1, std::size_t{1} << 22, "N"); };
        e.run = [](const ExperimentConfig&, std::size_t n, SeededRng& rng) {
            ValueOracle f(random_permutation(n, rng));
            const MinimumOutcome r = find_minimum(f, rng);
            return TrialResult{r.queries, r.updates, r.value == 0};
        };
        out.push_back(std::move(e));
    }
    {
        ExperimentSpec e;
        e.name = "localmin-scaling";
        e.description = "hypercube local minimum, size = n variables, random distinct f";
        e.expected_exponent = 1.0 / 3.0;
        e.fit_x = [](const ExperimentConfig&, std::size_t n) { return std::exp2(static_cast<double>(n)); };
        e.fit_x_label = "2^n";
        e.check_sizes = [](const ExperimentConfig& c) {
            require_range(c, 1, HypercubeOracle::kMaxVariables, "variables");
        };
        e.run = [](const ExperimentConfig&, std::size_t n, SeededRng& rng) {
            auto values = random_permutation(std::size_t{1} << n, rng);
            HypercubeOracle f(static_cast<int>(n), values);
            const LocalMinOutcome r = find_local_minimum(f, rng);
            HypercubeOracle check(static_cast<int>(n), std::move(values));
            const bool ok = r.claimed && verify_local_min(check, r.x);
            return TrialResult{r.queries, r.descent_steps, ok};
        };
        out.push_back(std::move(e));
    }
    {
        ExperimentSpec e;
        e.name = "ed-hybrid";
        e.description = "element distinctness, sqrt(N) sample plus Grover, amplified; one planted collision";
        e.expected_exponent = 0.75;
        e.check_sizes = [](const ExperimentConfig& c) { require_range(c, 4, std::size_t{1} << 16, "N"); };
        e.run = [](const ExperimentConfig&, std::size_t n, SeededRng& rng) {
            ValueOracle f(planted_collision(n, rng));
            const EdHybridOutcome r = element_distinctness_hybrid(f, rng);
            return TrialResult{r.queries, r.rounds, planted_pair_ok(f, r.pair)};
        };
        out.push_back(std::move(e));
    }
    {
        ExperimentSpec e;
        e.name = "sat-schoening";
        e.description = "one Schoening run on a planted 3-CNF (param ratio, default 4.26); size = n";
        e.expected_exponent = 0.5;
        e.cost_column = "steps";
        e.check_sizes = [](const ExperimentConfig& c) { require_range(c, 3, 64, "variables"); };
        e.run = [](const ExperimentConfig& c, std::size_t n, SeededRng& rng) {
            const PlantedInstance inst = planted_3sat(static_cast<int>(n), c.param("ratio", 4.26), rng);
            const SchoeningResult r = schoening_run(inst.formula, rng);
            return TrialResult{1, r.flips, r.assignment.has_value()};
        };
        e.finish = [](const ExperimentConfig&, ExperimentSummary& s) {
            std::vector<std::pair<double, double>> quantum;
            std::vector<std::pair<double, double>> classical;
            for (const auto& z : s.sizes) {
                if (z.success_rate <= 0.0) {
                    continue;
                }
                quantum.emplace_back(static_cast<double>(z.size),
                                     static_cast<double>(std::max<std::uint64_t>(1, predicted_repetitions(z.success_rate))));
                classical.emplace_back(static_cast<double>(z.size),
                                       static_cast<double>(classical_repetitions(z.success_rate)));
            }
            s.fit.reset();
            if (quantum.size() < 3) {
                s.notes.push_back("fewer than 3 sizes with successes; no repetition fit");
                return;
            }
            const ScalingFit q = fit_log_linear(quantum);
            const ScalingFit k = fit_log_linear(classical);
            char buf[256];
            std::snprintf(buf, sizeof buf,
                          "repetition growth per variable: quantum %.4f, classical %.4f, ratio %.3f (expected 0.5)",
                          q.slope, k.slope, k.slope != 0.0 ? q.slope / k.slope : 0.0);
            s.notes.push_back(buf);
            s.notes.push_back("base rate from uniform initialization, not the improved start distribution");
        };
        out.push_back(std::move(e));
    }
    {
        ExperimentSpec e;
        e.name = "sat-grover";
        e.description = "unknown-k Grover over all 2^n assignments of a planted 3-CNF";
        e.expected_exponent = 0.5;
        e.fit_x = [](const ExperimentConfig&, std::size_t n) { return std::exp2(static_cast<double>(n)); };
        e.fit_x_label = "2^n";
        e.check_sizes = [](const ExperimentConfig& c) { require_range(c, 3, 16, "variables"); };
        e.run = [](const ExperimentConfig& c, std::size_t n, SeededRng& rng) {
            const PlantedInstance inst = planted_3sat(static_cast<int>(n), c.param("ratio", 4.26), rng);
            const Cnf3Formula* formula = &inst.formula;
            PredicateOracle sat(std::size_t{1} << n, [formula, n](std::size_t x) {
                Assignment a(n);
                for (std::size_t v = 0; v < n; ++v) {
                    a[v] = static_cast<std::uint8_t>((x >> v) & 1U);
                }
                return formula->satisfied_by(a);
            });
            const SearchOutcome r = grover_search_unknown(sat, rng);
            return TrialResult{r.queries, r.iterations, r.index.has_value()};
        };
        out.push_back(std::move(e));
    }
    {
        ExperimentSpec e;
        e.name = "grid-walk";
        e.description = "coined walk search on a torus, size = side L (param d, default 2; param budget)";
        e.expected_exponent = 0.5;
        e.cost_column = "steps";
        e.fit_x = [](const ExperimentConfig& c, std::size_t side) {
            return std::pow(static_cast<double>(side), c.param("d", 2.0));
        };
        e.fit_x_label = "N";
        e.check_sizes = [](const ExperimentConfig& c) {
            const int d = static_cast<int>(c.param("d", 2.0));
            require_range(c, 2, d == 2 ? 256 : 40, "side");
        };
        e.run = [](const ExperimentConfig& c, std::size_t side, SeededRng& rng) {
            const TorusGrid grid(static_cast<int>(c.param("d", 2.0)), side);
            const double n = static_cast<double>(grid.cells());
            const auto budget = static_cast<std::uint64_t>(
                c.param("budget", std::ceil(8.0 * std::sqrt(n) * std::log2(n))));
            const std::size_t target = static_cast<std::size_t>(rng.below(grid.cells()));
            BitOracle oracle = BitOracle::with_marked(grid.cells(), std::vector<std::size_t>{target});
            const WalkSearchOutcome r = grid_walk_search(grid, oracle, rng, budget);
            return TrialResult{oracle.queries(), r.steps, r.found.has_value()};
        };
        out.push_back(std::move(e));
    }
    {
        ExperimentSpec e;
        e.name = "grid-classical";
        e.description = "boustrophedon scan of a torus, size = side L (param d, default 2)";
        e.expected_exponent = 1.0;
        e.cost_column = "steps";
        e.fit_x = [](const ExperimentConfig& c, std::size_t side) {
            return std::pow(static_cast<double>(side), c.param("d", 2.0));
        };
        e.fit_x_label = "N";
        e.check_sizes = [](const ExperimentConfig& c) { require_range(c, 2, 4096, "side"); };
        e.run = [](const ExperimentConfig& c, std::size_t side, SeededRng& rng) {
            const TorusGrid grid(static_cast<int>(c.param("d", 2.0)), side);
            const std::size_t target = static_cast<std::size_t>(rng.below(grid.cells()));
            BitOracle oracle = BitOracle::with_marked(grid.cells(), std::vector<std::size_t>{target});
            const WalkSearchOutcome r = grid_classical_search(grid, oracle);
            return TrialResult{oracle.queries(), r.steps, r.found.has_value()};
        };
        out.push_back(std::move(e));
    }
    {
        ExperimentSpec e;
        e.name = "szegedy";
        e.description = "Szegedy walk search, one marked state (param chain = cycle|torus|complete, holding)";
        e.expected_exponent = 0.5;
        e.cost_column = "steps";
        e.fit_x = inverse_delta_gap;
        e.fit_x_label = "1/(delta*gap)";
        e.check_sizes = [](const ExperimentConfig& c) {
            for (std::size_t s : c.sizes) {
                if (chain_states(c, s) < 2 || chain_states(c, s) > 4096) {
                    throw SizeError("szegedy: chain with " + std::to_string(chain_states(c, s)) +
                                    " states outside the cap [2, 4096]");
                }
            }
        };
        e.run = [](const ExperimentConfig& c, std::size_t size, SeededRng& rng) {
            const std::size_t target = static_cast<std::size_t>(rng.below(chain_states(c, size)));
            const MarkovChain chain = szegedy_chain(c, size, {target});
            const SzegedyOutcome r = szegedy_find_marked(chain, SzegedyCosts{}, rng);
            return TrialResult{r.attempts + r.steps, r.steps, r.found.has_value()};
        };
        out.push_back(std::move(e));
    }
    {
        ExperimentSpec e;
        e.name = "szegedy-classical";
        e.description = "classical random-walk hitting time on the szegedy experiment's chains";
        e.expected_exponent = 1.0;
        e.cost_column = "steps";
        e.fit_x = inverse_delta_gap;
        e.fit_x_label = "1/(delta*gap)";
        e.check_sizes = [](const ExperimentConfig& c) {
            for (std::size_t s : c.sizes) {
                if (chain_states(c, s) < 2 || chain_states(c, s) > 4096) {
                    throw SizeError("szegedy-classical: chain with " + std::to_string(chain_states(c, s)) +
                                    " states outside the cap [2, 4096]");
                }
            }
        };
        e.run = [](const ExperimentConfig& c, std::size_t size, SeededRng& rng) {
            const std::size_t target = static_cast<std::size_t>(rng.below(chain_states(c, size)));
            const MarkovChain chain = szegedy_chain(c, size, {target});
            const auto steps = static_cast<std::uint64_t>(classical_hitting(chain, rng, 1));
            return TrialResult{steps, steps, true};
        };
        out.push_back(std::move(e));
    }
    {
        ExperimentSpec e;
        e.name = "ed-walk";
        e.description = "element distinctness by Johnson-graph walk, M = ceil(N^(2/3)) unless param M is set";
        e.expected_exponent = 2.0 / 3.0;
        e.check_sizes = [](const ExperimentConfig& c) {
            for (std::size_t n : c.sizes) {
                const std::size_t m = ed_walk_m(c, n);
                if (n < 3 || m < 1 || m >= n || binomial(n, m) + binomial(n, m + 1) > kJohnsonStateCap) {
                    throw SizeError("ed-walk: N=" + std::to_string(n) + ", M=" + std::to_string(m) +
                                    " violates 1 <= M < N or the cap C(N,M)+C(N,M+1) <= " +
                                    std::to_string(kJohnsonStateCap));
                }
            }
        };
        e.run = [](const ExperimentConfig& c, std::size_t n, SeededRng& rng) {
            ValueOracle f(planted_collision(n, rng));
            const EdWalkOutcome r = ed_walk(f, ed_walk_m(c, n), rng);
            return TrialResult{r.queries, r.steps, planted_pair_ok(f, r.pair)};
        };
        out.push_back(std::move(e));
    }
    return out;
}

} // namespace

const std::vector<ExperimentSpec>& experiments() {
    static const std::vector<ExperimentSpec> all = build_experiments();
    return all;
}

const ExperimentSpec& find_experiment(const std::string& name) {
    for (const auto& e : experiments()) {
        if (e.name == name) {
            return e;
        }
    }
    std::string names;
    for (const auto& e : experiments()) {
        names += (names.empty() ? "" : ", ") + e.name;
    }
    throw UsageError("unknown experiment '" + name + "'; valid names: " + names);
}

std::uint64_t trial_stream(std::size_t size, std::size_t trial) {
    return mix64((static_cast<std::uint64_t>(size) << 24) ^ mix64(static_cast<std::uint64_t>(trial)));
}

std::vector<ExperimentRecord> run_experiment(const ExperimentConfig& config,
                                             const std::function<void(const ExperimentRecord&)>& on_record) {
    config.validate();
    const ExperimentSpec& spec = find_experiment(config.experiment);
    if (spec.check_sizes) {
        spec.check_sizes(config);
    }
    const std::size_t total = config.sizes.size() * config.trials;

    auto run_one = [&](std::size_t task) {
        ExperimentRecord rec;
        rec.experiment = spec.name;
        rec.size = config.sizes[task / config.trials];
        rec.trial = task % config.trials;
        rec.seed = trial_stream(rec.size, rec.trial);
        SeededRng rng(config.seed, rec.seed);
        const auto start = std::chrono::steady_clock::now();
        const TrialResult r = spec.run(config, rec.size, rng);
        rec.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        rec.queries = r.queries;
        rec.steps = r.steps;
        rec.success = r.success;
        return rec;
    };

    std::vector<ExperimentRecord> records;
    records.reserve(total);
    const std::size_t workers = std::min(config.jobs, total);
    if (workers <= 1) {
        for (std::size_t t = 0; t < total; ++t) {
            records.push_back(run_one(t));
            if (on_record) {
                on_record(records.back());
            }
        }
        return records;
    }

    std::vector<std::optional<ExperimentRecord>> slots(total);
    std::mutex mu;
    std::condition_variable cv;
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t t = next.fetch_add(1);
                if (t >= total || failed.load()) {
                    return;
                }
                try {
                    ExperimentRecord rec = run_one(t);
                    std::lock_guard lock(mu);
                    slots[t] = std::move(rec);
                } catch (...) {
                    std::lock_guard lock(mu);
                    if (!error) {
                        error = std::current_exception();
                    }
                    failed.store(true);
                }
                cv.notify_all();
            }
        });
    }
    for (std::size_t t = 0; t < total; ++t) {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return slots[t].has_value() || failed.load(); });
        if (failed.load()) {
            break;
        }
        records.push_back(*slots[t]);
        lock.unlock();
        if (on_record) {
            on_record(records.back());
        }
    }
    pool.clear();
    if (error) {
        std::rethrow_exception(error);
    }
    return records;
}

ExperimentSummary summarize(const ExperimentConfig& config, const std::vector<ExperimentRecord>& records) {
    const ExperimentSpec& spec = find_experiment(config.experiment);
    ExperimentSummary s;
    s.experiment = spec.name;
    s.expected_exponent = spec.expected_exponent;
    s.cost_label = "mean " + spec.cost_column;
    s.x_label = spec.fit_x_label;

    std::map<std::size_t, std::vector<const ExperimentRecord*>> by_size;
    for (const auto& r : records) {
        by_size[r.size].push_back(&r);
    }
    std::vector<std::pair<double, double>> points;
    for (const auto& [size, rs] : by_size) {
        SizeSummary z;
        z.size = size;
        for (const auto* r : rs) {
            z.mean_queries += static_cast<double>(r->queries);
            z.mean_steps += static_cast<double>(r->steps);
            z.success_rate += r->success ? 1.0 : 0.0;
        }
        const auto n = static_cast<double>(rs.size());
        z.mean_queries /= n;
        z.mean_steps /= n;
        z.success_rate /= n;
        s.sizes.push_back(z);
        const double cost = spec.cost_column == "steps" ? z.mean_steps : z.mean_queries;
        const double x = spec.fit_x ? spec.fit_x(config, size) : static_cast<double>(size);
        if (cost > 0.0 && x > 0.0) {
            points.emplace_back(x, cost);
        }
    }
    if (points.size() >= 3) {
        s.fit = fit_exponent(points);
    } else {
        s.notes.push_back("fewer than 3 sizes with positive cost; no exponent fit");
    }
    if (spec.finish) {
        spec.finish(config, s);
    }
    return s;
}

void print_summary(std::ostream& out, const ExperimentSummary& s) {
    char buf[256];
    out << "# experiment: " << s.experiment << '\n';
    out << "# size  mean_queries  mean_steps  success_rate\n";
    for (const auto& z : s.sizes) {
        std::snprintf(buf, sizeof buf, "# %zu  %.2f  %.2f  %.3f\n", z.size, z.mean_queries, z.mean_steps,
                      z.success_rate);
        out << buf;
    }
    if (s.fit) {
        std::snprintf(buf, sizeof buf,
                      "# fit: %s ~ (%s)^%.3f, expected exponent %.3f, rms residual %.3f, range [%g, %g]\n",
                      s.cost_label.c_str(), s.x_label.c_str(), s.fit->slope, s.expected_exponent,
                      s.fit->rms_residual, s.fit->min_size, s.fit->max_size);
        out << buf;
    }
    for (const auto& note : s.notes) {
        out << "# " << note << '\n';
    }
}

} // namespace qsearch
