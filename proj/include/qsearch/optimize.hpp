#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <qsearch/grover.hpp>

namespace qsearch {

struct MinimumOutcome {
    std::size_t index = 0;
    std::int64_t value = 0;
    /// False when the budget ran out before a search came back empty.
    bool verified = false;
    std::uint64_t queries = 0;
    std::uint64_t updates = 0;
};

/// ceil(30 sqrt(n)).
std::uint64_t default_minimum_budget(std::size_t n);

/// Champion improvement loop: unknown-k search for y with f(y) < f(champion)
/// until a search fails. The check query of a successful search is read as a
/// value query, so the new champion's value costs nothing extra.
MinimumOutcome find_minimum(ValueOracle& oracle, SeededRng& rng,
                            std::optional<std::uint64_t> budget = std::nullopt);

/// f: {0,1}^n -> integers, assignments encoded as bitmasks (bit j = x_{j+1}).
class HypercubeOracle {
public:
    static constexpr int kMaxVariables = 16;

    HypercubeOracle(int n, std::vector<std::int64_t> values);

    int variables() const { return n_; }
    std::size_t size() const { return values_.size(); }
    std::int64_t query(std::uint32_t x) { return values_.query(x); }
    std::int64_t peek(std::uint32_t x) const { return values_.peek(x); }
    std::uint64_t queries() const { return values_.queries(); }
    void charge(std::uint64_t q) { values_.charge(q); }
    const std::shared_ptr<QueryCounter>& counter() const { return values_.counter(); }

private:
    int n_;
    ValueOracle values_;
};

/// round(2^{2n/3} n^{1/3}), clamped to [1, 2^n].
std::size_t local_min_sample_size(int n);

/// ceil(2^{n+1} / m).
std::uint64_t local_min_descent_budget(int n, std::size_t m);

/// m distinct values from {0..universe-1}, uniformly.
std::vector<std::uint32_t> sample_distinct(std::size_t universe, std::size_t m, SeededRng& rng);

struct LocalMinOutcome {
    std::uint32_t x = 0;
    std::int64_t value = 0;
    /// The final neighbor search came back empty.
    bool claimed = false;
    bool budget_exhausted = false;
    std::uint64_t queries = 0;
    std::uint64_t descent_steps = 0;
    std::size_t m = 0;
};

/// Sample m points, minimize over the sample with find_minimum, then descend
/// by unknown-k search over the n single-bit neighbors.
LocalMinOutcome find_local_minimum(HypercubeOracle& oracle, SeededRng& rng);

/// True iff no single-bit neighbor has a smaller value. Charges n + 1 queries.
bool verify_local_min(HypercubeOracle& oracle, std::uint32_t x);

/// Classical baseline: random start, scan neighbors in order, move to the
/// first improving one.
LocalMinOutcome classical_local_descent(HypercubeOracle& oracle, SeededRng& rng);

} // namespace qsearch
