#pragma once

// Dense statevector simulation over an N-dimensional search space, together
// with the black-box oracles whose query counters are the complexity measure.
//
// Accounting convention: the simulator may inspect an oracle's full contents
// (peek(), marked()) to build an operator, but every application of that
// operator is charged as exactly one query.

#include <complex>
#include <concepts>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <vector>

#include <qsearch/errors.hpp>

namespace qsearch {

using Amplitude = std::complex<double>;

/// Deterministic random stream identified by (master_seed, stream_id).
/// Distinct stream ids give statistically independent sequences.
class SeededRng {
public:
    using result_type = std::uint64_t;

    SeededRng(std::uint64_t master_seed, std::uint64_t stream_id);

    std::uint64_t master_seed() const { return master_; }
    std::uint64_t stream_id() const { return stream_; }

    /// Child stream derived from this stream's identity (not its position).
    SeededRng split(std::uint64_t child) const;

    result_type operator()() { return engine_(); }
    static constexpr result_type min() { return std::mt19937_64::min(); }
    static constexpr result_type max() { return std::mt19937_64::max(); }

    /// Uniform double in [0, 1).
    double uniform();
    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound);
    bool bernoulli(double p) { return uniform() < p; }

private:
    std::uint64_t master_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
};

/// SplitMix64 finalizer; used for seed derivation.
std::uint64_t mix64(std::uint64_t x);

/// Monotone query counter. Oracles and their derived views share one.
class QueryCounter {
public:
    void charge(std::uint64_t n = 1) { count_ += n; }
    std::uint64_t count() const { return count_; }

private:
    std::uint64_t count_ = 0;
};

template <class O>
concept ChargeableOracle = requires(O& o, std::uint64_t n) {
    { o.charge(n) };
    { o.queries() } -> std::convertible_to<std::uint64_t>;
};

/// Black box over a predicate on {0..size-1}. The general search oracle:
/// bit oracles, threshold tests on value oracles and composed predicates all
/// reduce to this.
class PredicateOracle {
public:
    PredicateOracle(std::size_t size, std::function<bool(std::size_t)> predicate,
                    std::shared_ptr<QueryCounter> counter = nullptr);

    std::size_t size() const { return size_; }

    /// Classical query; charged.
    bool query(std::size_t i);
    /// Simulator-side inspection; never charged.
    bool peek(std::size_t i) const;
    /// All indices satisfying the predicate (simulator side).
    std::vector<std::size_t> marked() const;

    void charge(std::uint64_t n = 1) { counter_->charge(n); }
    std::uint64_t queries() const { return counter_->count(); }
    const std::shared_ptr<QueryCounter>& counter() const { return counter_; }

    /// Same counter, predicate restricted by an extra condition.
    PredicateOracle restricted(std::function<bool(std::size_t)> also) const;

private:
    std::size_t size_;
    std::function<bool(std::size_t)> predicate_;
    std::shared_ptr<QueryCounter> counter_;
};

/// x_1..x_N in {0,1} behind a black box.
class BitOracle {
public:
    explicit BitOracle(std::vector<bool> bits);
    static BitOracle with_marked(std::size_t size, std::span<const std::size_t> marked);

    std::size_t size() const { return bits_.size(); }
    bool query(std::size_t i);
    bool peek(std::size_t i) const;
    std::vector<std::size_t> marked() const;

    void charge(std::uint64_t n = 1) { counter_->charge(n); }
    std::uint64_t queries() const { return counter_->count(); }

    /// Predicate view sharing this oracle's counter.
    PredicateOracle as_predicate() const;

private:
    std::vector<bool> bits_;
    std::shared_ptr<QueryCounter> counter_;
};

/// f: {0..N-1} -> integers behind a black box.
class ValueOracle {
public:
    explicit ValueOracle(std::vector<std::int64_t> values,
                         std::shared_ptr<QueryCounter> counter = nullptr);

    std::size_t size() const { return values_->size(); }
    std::int64_t query(std::size_t i);
    std::int64_t peek(std::size_t i) const;
    std::span<const std::int64_t> values() const { return *values_; }

    void charge(std::uint64_t n = 1) { counter_->charge(n); }
    std::uint64_t queries() const { return counter_->count(); }
    const std::shared_ptr<QueryCounter>& counter() const { return counter_; }

    /// Predicate view "f(i) < threshold", charged to this oracle.
    PredicateOracle below(std::int64_t threshold) const;

private:
    std::shared_ptr<const std::vector<std::int64_t>> values_;
    std::shared_ptr<QueryCounter> counter_;
};

/// Normalized vector of complex amplitudes with a fixed dimension.
class StateVector {
public:
    /// Throws InvalidDimension when empty, NormalizationError when the norm is
    /// off by more than 1e-9.
    explicit StateVector(std::vector<Amplitude> amps);
    static StateVector basis(std::size_t dimension, std::size_t index);

    std::size_t dimension() const { return amps_.size(); }
    std::span<const Amplitude> amplitudes() const { return amps_; }
    std::span<Amplitude> amplitudes() { return amps_; }
    const Amplitude& operator[](std::size_t i) const { return amps_[i]; }
    Amplitude& operator[](std::size_t i) { return amps_[i]; }

    double norm_squared() const;
    double probability(std::size_t i) const { return std::norm(amps_[i]); }
    double probability_of(std::span<const std::size_t> subset) const;

    /// Rescales to unit norm when drift exceeds tol; returns whether it did.
    bool renormalize_if_drifted(double tol = 1e-9);

private:
    std::vector<Amplitude> amps_;
};

/// Every amplitude 1/sqrt(n). Throws InvalidDimension for n = 0.
StateVector uniform_state(std::size_t n);

namespace detail {
void multiply_phase(StateVector& s, std::span<const std::size_t> marked, Amplitude phase);
}

/// Negates the marked amplitudes; one query.
template <ChargeableOracle O>
void apply_phase_flip(StateVector& s, std::span<const std::size_t> marked, O& oracle) {
    detail::multiply_phase(s, marked, Amplitude{-1.0, 0.0});
    oracle.charge(1);
}

/// Multiplies the marked amplitudes by e^{i phi}; one query.
template <ChargeableOracle O>
void apply_phase(StateVector& s, std::span<const std::size_t> marked, double phi, O& oracle) {
    detail::multiply_phase(s, marked, std::polar(1.0, phi));
    oracle.charge(1);
}

/// a_i -> 2 mean(a) - a_i, the reflection 2|u><u| - I about the uniform vector.
void apply_diffusion(StateVector& s);

/// (1 - e^{i psi}) |u><u| - I. psi = pi gives apply_diffusion.
void apply_generalized_diffusion(StateVector& s, double psi);

/// Samples index i with probability |a_i|^2. Throws NormalizationError when
/// the norm is off by more than 1e-6.
std::size_t measure(const StateVector& s, SeededRng& rng);

/// Samples from unnormalized non-negative weights summing to total.
std::size_t sample_weighted(std::span<const double> weights, double total, SeededRng& rng);

} // namespace qsearch
