#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <qsearch/sim_core.hpp>
#include <qsearch/walks.hpp>

namespace qsearch {

// ---------------------------------------------------------------------------
// 3-SAT

/// Up to three DIMACS-style literals: +v is y_v, -v is not y_v, v in [1, n].
struct Clause {
    std::array<int, 3> literals{};
    int size = 0;
};

/// Assignment with value[v - 1] for variable v.
using Assignment = std::vector<std::uint8_t>;

class Cnf3Formula {
public:
    /// Throws ParameterError on empty clauses or literals outside [1, n].
    Cnf3Formula(int n, std::vector<Clause> clauses);

    int variables() const { return n_; }
    const std::vector<Clause>& clauses() const { return clauses_; }

    bool satisfied_by(const Clause& c, const Assignment& a) const;
    bool satisfied_by(const Assignment& a) const;
    /// Index of the first falsified clause.
    std::optional<std::size_t> first_unsatisfied(const Assignment& a) const;

private:
    int n_;
    std::vector<Clause> clauses_;
};

Clause make_clause(std::initializer_list<int> literals);

/// DIMACS CNF ("p cnf n m" header, clauses terminated by 0). Rejects clauses
/// longer than three literals, empty clauses, and out-of-range literals.
Cnf3Formula parse_dimacs(std::istream& in);
Cnf3Formula load_dimacs(const std::string& path);
void write_dimacs(std::ostream& out, const Cnf3Formula& formula);

struct PlantedInstance {
    Cnf3Formula formula;
    Assignment solution;
};

/// Random 3-CNF over three distinct variables per clause; clauses falsified by
/// a hidden uniform assignment are rejected and redrawn.
PlantedInstance planted_3sat(int n, double clause_ratio, SeededRng& rng);

struct SchoeningResult {
    std::optional<Assignment> assignment;
    std::uint64_t flips = 0;
};

/// Uniform random start, then at most 3n flips of a random variable in the
/// first falsified clause.
SchoeningResult schoening_run(const Cnf3Formula& formula, SeededRng& rng);

struct SatRunStats {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double eps_hat = 0.0;
    /// Wilson 95% interval for the per-run success probability.
    double lower = 0.0;
    double upper = 1.0;

    /// Known probability with a degenerate interval.
    static SatRunStats exact(double p);
};

struct WilsonInterval {
    double lower;
    double upper;
};

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = 1.959963984540054);

SatRunStats estimate_success(const Cnf3Formula& formula, std::uint64_t trials, SeededRng& rng);

struct SpeedupReport {
    /// Probability the repetition counts are based on (the interval's lower end).
    double eps_basis = 0.0;
    std::uint64_t predicted_quantum_reps = 0;
    std::uint64_t classical_reps = 0;
    /// The interval reaches 0, so no repetition count is meaningful.
    bool inconclusive = false;
    /// predicted_quantum_reps <= classical_reps.
    bool quantum_not_worse = false;
};

SpeedupReport quantum_speedup_report(const SatRunStats& stats);

// ---------------------------------------------------------------------------
// Element distinctness, sampling plus Grover

struct EdBaseRun {
    std::optional<CollisionPair> pair;
    std::uint64_t queries = 0;
    std::size_t sample_size = 0;
};

/// Queries ceil(sqrt(N)) distinct random indices; returns an internal
/// collision if present, else searches the remaining indices for a value
/// among the sampled ones with unknown-k Grover search.
EdBaseRun ed_hybrid_base_run(ValueOracle& f, SeededRng& rng);

struct EdHybridOutcome {
    std::optional<CollisionPair> pair;
    std::uint64_t queries = 0;
    /// Amplification rounds per attempt.
    std::uint64_t rounds = 0;
    std::uint64_t attempts = 0;
    double eps = 0.0;
};

/// Number of silent base runs used to estimate eps when none is supplied.
inline constexpr std::size_t kEdEpsSamples = 256;

/// Amplified hybrid. The base run is simulated in full; the amplification
/// layer is accounted with the round-count calculus over eps (supplied or
/// estimated on a silent copy of the oracle), since embedding the base run's
/// classical randomness in a statevector is infeasible.
EdHybridOutcome element_distinctness_hybrid(ValueOracle& f, SeededRng& rng,
                                            std::optional<double> base_eps = std::nullopt);

/// max(1, predicted_repetitions(eps)) * (ceil(sqrt(N)) + unknown-search cap).
double ed_hybrid_query_model(std::size_t n, double eps_hat);

} // namespace qsearch
