#include <qsearch/optimize.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

namespace qsearch {

std::uint64_t default_minimum_budget(std::size_t n) {
    return static_cast<std::uint64_t>(std::ceil(30.0 * std::sqrt(static_cast<double>(n))));
}

MinimumOutcome find_minimum(ValueOracle& oracle, SeededRng& rng, std::optional<std::uint64_t> budget) {
    const std::size_t n = oracle.size();
    if (n == 0) {
        throw InvalidDimension("find_minimum: empty domain");
    }
    const std::uint64_t limit = budget.value_or(default_minimum_budget(n));
    if (limit == 0) {
        throw ParameterError("find_minimum: budget must be at least 1");
    }
    const std::uint64_t before = oracle.queries();
    MinimumOutcome out;
    out.index = static_cast<std::size_t>(rng.below(n));
    out.value = oracle.query(out.index);
    for (;;) {
        const std::uint64_t spent = oracle.queries() - before;
        if (spent >= limit) {
            break;
        }
        PredicateOracle better = oracle.below(out.value);
        UnknownSearchOptions opts;
        opts.max_queries = limit - spent;
        const SearchOutcome r = grover_search_unknown(better, rng, opts);
        if (r.index) {
            out.index = *r.index;
            out.value = oracle.peek(out.index);
            ++out.updates;
            continue;
        }
        out.verified = !r.budget_exhausted;
        break;
    }
    out.queries = oracle.queries() - before;
    return out;
}

HypercubeOracle::HypercubeOracle(int n, std::vector<std::int64_t> values)
    : n_(n), values_(std::move(values)) {
    if (n < 1 || n > kMaxVariables) {
        throw SizeError("HypercubeOracle: n must lie in [1, " + std::to_string(kMaxVariables) + "]");
    }
    if (values_.size() != (std::size_t{1} << n)) {
        throw InvalidDimension("HypercubeOracle: expected 2^n values");
    }
}

std::size_t local_min_sample_size(int n) {
    const double nn = static_cast<double>(n);
    const double m = std::round(std::exp2(2.0 * nn / 3.0) * std::cbrt(nn));
    return static_cast<std::size_t>(std::clamp(m, 1.0, std::exp2(nn)));
}

std::uint64_t local_min_descent_budget(int n, std::size_t m) {
    const std::uint64_t num = std::uint64_t{1} << (n + 1);
    return (num + m - 1) / m;
}

std::vector<std::uint32_t> sample_distinct(std::size_t universe, std::size_t m, SeededRng& rng) {
    if (m > universe) {
        throw ParameterError("sample_distinct: sample larger than universe");
    }
    // Floyd's algorithm keeps memory proportional to m.
    std::vector<std::uint32_t> out;
    out.reserve(m);
    std::unordered_set<std::uint32_t> chosen;
    for (std::size_t j = universe - m; j < universe; ++j) {
        const auto t = static_cast<std::uint32_t>(rng.below(j + 1));
        if (chosen.insert(t).second) {
            out.push_back(t);
        } else {
            chosen.insert(static_cast<std::uint32_t>(j));
            out.push_back(static_cast<std::uint32_t>(j));
        }
    }
    return out;
}

LocalMinOutcome find_local_minimum(HypercubeOracle& oracle, SeededRng& rng) {
    const int n = oracle.variables();
    const std::uint64_t before = oracle.queries();
    LocalMinOutcome out;
    out.m = local_min_sample_size(n);

    const auto sample = sample_distinct(oracle.size(), out.m, rng);
    std::vector<std::int64_t> sampled_values(sample.size());
    for (std::size_t i = 0; i < sample.size(); ++i) {
        sampled_values[i] = oracle.peek(sample[i]);
    }
    ValueOracle over_sample(std::move(sampled_values), oracle.counter());
    const MinimumOutcome best = find_minimum(over_sample, rng);
    out.x = sample[best.index];
    out.value = best.value;

    const std::uint64_t descent_budget = local_min_descent_budget(n, out.m);
    for (;;) {
        const std::uint32_t x = out.x;
        const std::int64_t fx = out.value;
        const HypercubeOracle* cube = &oracle;
        PredicateOracle improving(
            static_cast<std::size_t>(n),
            [cube, x, fx](std::size_t j) { return cube->peek(x ^ (std::uint32_t{1} << j)) < fx; },
            oracle.counter());
        const SearchOutcome r = grover_search_unknown(improving, rng);
        if (!r.index) {
            out.claimed = true;
            break;
        }
        if (out.descent_steps == descent_budget) {
            out.budget_exhausted = true;
            break;
        }
        out.x = x ^ (std::uint32_t{1} << *r.index);
        out.value = oracle.peek(out.x);
        ++out.descent_steps;
    }
    out.queries = oracle.queries() - before;
    return out;
}

bool verify_local_min(HypercubeOracle& oracle, std::uint32_t x) {
    const std::int64_t fx = oracle.query(x);
    bool ok = true;
    for (int j = 0; j < oracle.variables(); ++j) {
        if (oracle.query(x ^ (std::uint32_t{1} << j)) < fx) {
            ok = false;
        }
    }
    return ok;
}

LocalMinOutcome classical_local_descent(HypercubeOracle& oracle, SeededRng& rng) {
    const int n = oracle.variables();
    const std::uint64_t before = oracle.queries();
    LocalMinOutcome out;
    out.m = 1;
    out.x = static_cast<std::uint32_t>(rng.below(oracle.size()));
    out.value = oracle.query(out.x);
    for (;;) {
        bool moved = false;
        for (int j = 0; j < n; ++j) {
            const std::uint32_t y = out.x ^ (std::uint32_t{1} << j);
            const std::int64_t fy = oracle.query(y);
            if (fy < out.value) {
                out.x = y;
                out.value = fy;
                ++out.descent_steps;
                moved = true;
                break;
            }
        }
        if (!moved) {
            out.claimed = true;
            break;
        }
    }
    out.queries = oracle.queries() - before;
    return out;
}

} // namespace qsearch
