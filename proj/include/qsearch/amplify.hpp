#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include <qsearch/sim_core.hpp>

namespace qsearch {

/// A state-preparation procedure A acting in place on a statevector.
struct StatePreparation {
    std::size_t dimension = 0;
    std::function<void(StateVector&)> forward;
    std::function<void(StateVector&)> inverse;
    /// Queries charged per forward or inverse application.
    std::uint64_t cost = 0;
};

struct AmplifyParams {
    double eps = 1.0;
    PredicateOracle good;
    /// When set, eps is only a lower bound and the randomized schedule is used
    /// instead of the fixed round count.
    bool eps_is_lower_bound = false;
};

/// ceil(pi / (4 asin(sqrt(eps))) - 1/2). Throws ParameterError unless 0 < eps <= 1.
std::uint64_t predicted_repetitions(double eps);

/// ceil(1 / eps).
std::uint64_t classical_repetitions(double eps);

/// sin^2((2r+1) asin(sqrt(p))) for true initial success probability p.
double amplified_success_probability(double p, std::uint64_t rounds);

/// Householder reflection mapping the zero basis state to target. Self-inverse
/// up to the global phase that makes target's first amplitude real.
StatePreparation householder_preparation(const StateVector& target, std::uint64_t cost = 0);

/// Householder preparation of the uniform state.
StatePreparation uniform_preparation(std::size_t n, std::uint64_t cost = 0);

/// A|0>, then `rounds` rounds of (phase flip on good, A^-1, 2|0><0| - I, A).
/// Charges (2 rounds + 1) prep.cost + rounds queries to the good oracle.
StateVector amplify_state(const StatePreparation& prep, PredicateOracle& good,
                          std::span<const std::size_t> good_indices, std::uint64_t rounds);

struct AmplifyOutcome {
    std::size_t index = 0;
    bool good = false;
    std::uint64_t rounds = 0;
    std::uint64_t queries = 0;
    double good_probability = 0.0;
};

/// Amplitude amplification. With an exact eps, runs predicted_repetitions(eps)
/// rounds and measures once. If the caller's promise on eps is violated there
/// is no error, only a void success guarantee.
AmplifyOutcome amplitude_amplify(const StatePreparation& prep, AmplifyParams& params, SeededRng& rng);

} // namespace qsearch
