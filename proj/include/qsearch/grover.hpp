#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <qsearch/sim_core.hpp>

namespace qsearch {

struct GroverParams {
    std::size_t n = 0;
    std::optional<std::size_t> k;
    /// Iteration count; defaults to optimal_query_count(n, k).
    std::optional<std::uint64_t> t;
};

/// ceil(pi / (4 asin(sqrt(k/n))) - 1/2). Throws ParameterError unless 1 <= k <= n.
std::uint64_t optimal_query_count(std::size_t n, std::size_t k);

/// sin^2((2t+1) asin(sqrt(k/n))).
double success_prob_analytic(std::size_t n, std::size_t k, std::uint64_t t);

struct SearchOutcome {
    std::optional<std::size_t> index;
    std::uint64_t queries = 0;
    /// Squared norm of the marked subspace just before the final measurement.
    double marked_probability = 0.0;
    std::uint64_t iterations = 0;
    bool budget_exhausted = false;
};

/// State after t standard iterations from the uniform state, full statevector.
/// The oracle is charged t queries.
StateVector grover_state(PredicateOracle& oracle, std::span<const std::size_t> marked, std::uint64_t t);

/// Standard Grover search with known k. Always returns an index; the caller
/// checks it classically. Charges exactly t queries.
SearchOutcome grover_search(PredicateOracle& oracle, const GroverParams& params, SeededRng& rng);
SearchOutcome grover_search(BitOracle& oracle, const GroverParams& params, SeededRng& rng);

struct ExactPhases {
    double phi = 0.0; ///< phase applied to the marked amplitudes
    double psi = 0.0; ///< phase of the generalized reflection about uniform
};

/// Phases for the final iteration that rotate all amplitude onto the marked
/// subspace after t - 1 standard iterations. Requires t >= 1.
ExactPhases solve_exact_phases(std::size_t n, std::size_t k, std::uint64_t t);

/// Certainty variant: marked with probability >= 1 - 1e-9 using exactly
/// optimal_query_count(n, k) queries. Throws UnsupportedMode when k is absent.
SearchOutcome grover_search_exact(PredicateOracle& oracle, const GroverParams& params, SeededRng& rng);
SearchOutcome grover_search_exact(BitOracle& oracle, const GroverParams& params, SeededRng& rng);

/// Measurement outcome of j standard iterations from the uniform state.
/// Sampled from the exact two-dimensional reduction (marked-uniform and
/// unmarked-uniform components), which reproduces the statevector
/// distribution without materializing it. Charges nothing.
std::size_t sample_after_iterations(const PredicateOracle& oracle, std::span<const std::size_t> marked,
                                    std::uint64_t j, SeededRng& rng);

struct UnknownSearchOptions {
    /// Promised lower bound on the number of marked items.
    std::size_t k_floor = 1;
    /// Hard limit on queries for this call.
    std::optional<std::uint64_t> max_queries;
};

/// Schedule constant: the search gives up once it would spend more than
/// ceil(kUnknownSearchCap * sqrt(n / k_floor)) queries.
inline constexpr double kUnknownSearchCap = 5.0;

/// Exponential search with random iteration counts; each round ends with one
/// classical check query. Returns absent when the schedule or max_queries
/// runs out.
SearchOutcome grover_search_unknown(PredicateOracle& oracle, SeededRng& rng,
                                    const UnknownSearchOptions& options = {});
SearchOutcome grover_search_unknown(BitOracle& oracle, SeededRng& rng,
                                    const UnknownSearchOptions& options = {});

struct FindAllOutcome {
    std::vector<std::size_t> indices; ///< ascending
    std::uint64_t queries = 0;
};

/// Repeated unknown-k search; found items are removed by restricting the predicate.
FindAllOutcome find_all(PredicateOracle& oracle, SeededRng& rng);
FindAllOutcome find_all(BitOracle& oracle, SeededRng& rng);

} // namespace qsearch
