#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <qsearch/sim_core.hpp>

namespace qsearch {

// ---------------------------------------------------------------------------
// Coined walk on a torus

/// d-dimensional periodic grid with side L. Direction 2a is +1 along axis a,
/// direction 2a+1 is -1 along axis a.
class TorusGrid {
public:
    TorusGrid(int d, std::size_t side);

    int dimensions() const { return d_; }
    std::size_t side() const { return side_; }
    std::size_t cells() const { return cells_; }
    int directions() const { return 2 * d_; }

    std::size_t neighbor(std::size_t cell, int dir) const;
    static int reverse(int dir) { return dir ^ 1; }
    /// Graph distance on the torus.
    std::size_t distance(std::size_t a, std::size_t b) const;
    std::vector<std::size_t> coordinates(std::size_t cell) const;
    std::size_t cell_at(const std::vector<std::size_t>& coords) const;

private:
    int d_;
    std::size_t side_;
    std::size_t cells_;
};

/// Flip-flop coined walk, move then coin. Grover coin on unmarked cells, -I on
/// marked cells. Amplitude index = cell * directions + dir.
class CoinedWalk {
public:
    CoinedWalk(const TorusGrid& grid, std::vector<bool> marked);

    const TorusGrid& grid() const { return grid_; }
    const StateVector& state() const { return state_; }

    void reset_uniform();
    /// Uniform over the directions of a single cell.
    void reset_at(std::size_t cell);
    void step();

    double cell_probability(std::size_t cell) const;
    double marked_probability() const;
    std::vector<double> cell_probabilities() const;

private:
    TorusGrid grid_;
    std::vector<bool> marked_;
    StateVector state_;
    std::vector<Amplitude> scratch_;
    /// Destination amplitude index of the flip-flop shift.
    std::vector<std::size_t> shift_;
};

struct WalkSearchOutcome {
    std::optional<std::size_t> found;
    std::uint64_t steps = 0;
    std::uint64_t attempts = 0;
    double cost = 0.0;
};

/// Marked-cell probability after t = 0..t_max steps from the uniform state.
std::vector<double> grid_walk_marked_probabilities(const TorusGrid& grid, std::span<const std::size_t> marked,
                                                   std::uint64_t t_max);

/// Repeated attempts: walk t steps with t uniform in [1, ceil(T)], measure the
/// cell, T grows by 6/5 up to ceil(sqrt(N log2 N)). One step = one query plus
/// one move; the final measurement shares the last step's query.
WalkSearchOutcome grid_walk_search(const TorusGrid& grid, BitOracle& marked, SeededRng& rng,
                                   std::uint64_t step_budget);

/// Boustrophedon visiting order; consecutive cells are adjacent.
std::vector<std::size_t> boustrophedon_order(const TorusGrid& grid);

/// Classical scan: each step moves to the next cell and queries it.
WalkSearchOutcome grid_classical_search(const TorusGrid& grid, BitOracle& marked);

// ---------------------------------------------------------------------------
// Markov chains and Szegedy walks

/// Symmetric row-stochastic chain in CSR form, with a marked subset.
class MarkovChain {
public:
    struct Entry {
        std::size_t col;
        double p;
    };

    /// Validates symmetry and row sums within tol.
    static MarkovChain from_dense(const std::vector<std::vector<double>>& p, std::vector<std::size_t> marked,
                                  double tol = 1e-12);
    /// Builds from per-row entries; rows must be sorted by column.
    static MarkovChain from_rows(std::vector<std::vector<Entry>> rows, std::vector<std::size_t> marked,
                                 double tol = 1e-12, std::optional<double> known_gap = std::nullopt);

    /// Text format: S, then S rows of S numbers, then one line of marked
    /// indices (possibly empty). Input within 1e-9 of symmetric and stochastic
    /// is accepted and cleaned up.
    static MarkovChain parse(std::istream& in);
    static MarkovChain load(const std::string& path);

    /// Cycle with the given holding probability; remaining mass split between
    /// the two neighbors.
    static MarkovChain cycle(std::size_t s, double holding, std::vector<std::size_t> marked);
    static MarkovChain torus(std::size_t side, double holding, std::vector<std::size_t> marked);
    static MarkovChain complete(std::size_t s, std::vector<std::size_t> marked);

    std::size_t states() const { return row_ptr_.size() - 1; }
    std::size_t nonzeros() const { return entries_.size(); }
    std::span<const Entry> row(std::size_t x) const {
        return {entries_.data() + row_ptr_[x], row_ptr_[x + 1] - row_ptr_[x]};
    }
    std::span<const std::size_t> row_ptr() const { return row_ptr_; }
    std::span<const Entry> entries() const { return entries_; }
    double probability(std::size_t x, std::size_t y) const;

    bool is_marked(std::size_t x) const { return marked_flags_[x]; }
    const std::vector<std::size_t>& marked() const { return marked_; }
    double delta() const;
    /// 1 - lambda_2, by Lanczos on the complement of the uniform vector.
    double gap() const;

    std::vector<std::vector<double>> dense() const;

private:
    MarkovChain() = default;

    std::vector<std::size_t> row_ptr_;
    std::vector<Entry> entries_;
    std::vector<std::size_t> marked_;
    std::vector<bool> marked_flags_;
    struct GapCache {
        std::once_flag once;
        double value = 0.0;
    };
    std::shared_ptr<GapCache> gap_ = std::make_shared<GapCache>();
};

/// Second-largest eigenvalue of a symmetric doubly stochastic matrix, by
/// Lanczos with full reorthogonalization.
double second_eigenvalue(const MarkovChain& chain, std::size_t max_iterations = 300);

struct SzegedyCosts {
    double gamma0 = 1.0; ///< prepare the stationary superposition
    double gamma1 = 1.0; ///< one transition
    double gamma2 = 1.0; ///< one marked check
};

/// Szegedy walk W = R_B R_A on the span of directed edges (x, y) with
/// P_xy > 0. R_A reflects each row x about sqrt(P_x.) and acts as -I on rows
/// of marked x; R_B is the same reflection on the second register.
class SzegedyWalk {
public:
    explicit SzegedyWalk(const MarkovChain& chain);

    const MarkovChain& chain() const { return *chain_; }
    std::size_t edges() const { return chain_->nonzeros(); }
    std::size_t source(std::size_t e) const { return source_[e]; }
    std::size_t target(std::size_t e) const { return chain_->entries()[e].col; }

    /// Sum over x of sqrt(1/S) |x>|p_x>.
    StateVector stationary_state() const;
    void step(StateVector& edge_state) const;

    /// Probability that the first register is marked.
    double marked_probability(const StateVector& edge_state) const;
    /// Probability that either endpoint is marked.
    double edge_marked_probability(const StateVector& edge_state) const;
    /// Distribution of the first register.
    std::vector<double> first_register(const StateVector& edge_state) const;

private:
    void reflect_rows(std::span<Amplitude> a) const;

    std::shared_ptr<const MarkovChain> chain_;
    std::vector<std::size_t> source_;
    std::vector<std::size_t> swap_;
    std::vector<double> sqrt_p_;
};

/// Free-function form; builds the edge maps on every call.
void szegedy_step(const MarkovChain& chain, StateVector& edge_state);

/// ceil(1 / sqrt(delta * gap)); the measurement window of the walk search.
std::uint64_t szegedy_window(const MarkovChain& chain);

/// Default budget is ceil(kSzegedyBudgetFactor * window) walk steps.
inline constexpr double kSzegedyBudgetFactor = 4.0;

struct SzegedyOutcome {
    std::optional<std::size_t> found;
    std::uint64_t steps = 0;
    std::uint64_t attempts = 0;
    /// attempts * gamma0 + steps * (gamma1 + gamma2)
    double cost = 0.0;
};

/// Repeated attempts: prepare the stationary state, walk t steps with t
/// uniform in [0, ceil(T)), measure the first register. T grows by 6/5 up to
/// the window. Stops once the walk-step budget would be exceeded.
SzegedyOutcome szegedy_find_marked(const SzegedyWalk& walk, const SzegedyCosts& costs, SeededRng& rng,
                                   std::optional<std::uint64_t> budget = std::nullopt);
SzegedyOutcome szegedy_find_marked(const MarkovChain& chain, const SzegedyCosts& costs, SeededRng& rng,
                                   std::optional<std::uint64_t> budget = std::nullopt);

/// Monte Carlo mean first-hitting time of the marked set from the uniform
/// (stationary) start. Throws ParameterError when nothing is marked.
double classical_hitting(const MarkovChain& chain, SeededRng& rng, std::size_t trials);

// ---------------------------------------------------------------------------
// Johnson-graph chain for element distinctness

struct JohnsonChain {
    std::size_t n = 0;
    std::size_t m = 0;
    /// Vertex subsets as bitmasks; the first C(n, m) are the m-subsets.
    std::vector<std::uint64_t> subsets;
    MarkovChain chain;
};

inline constexpr std::size_t kJohnsonStateCap = 5000;

std::uint64_t binomial(std::size_t n, std::size_t k);

/// Bipartite chain on m- and (m+1)-subsets of {0..n-1}; moving adds or removes
/// one element with probability 1 / max(n - m, m + 1) per neighbor, the rest
/// stays put. A vertex is marked iff its subset contains i != j with
/// f(i) = f(j). Throws SizeError past kJohnsonStateCap states.
JohnsonChain johnson_chain(std::size_t n, std::size_t m, const ValueOracle& f);

/// (M/N)((M-1)/(N-1)); 0 when M < 2.
double collision_vertex_probability(std::size_t n, std::size_t m);

struct CollisionPair {
    std::size_t i = 0;
    std::size_t j = 0;
};

struct EdWalkOutcome {
    std::optional<CollisionPair> pair;
    std::uint64_t queries = 0;
    std::uint64_t steps = 0;
    std::uint64_t attempts = 0;
};

/// Element distinctness by Szegedy walk on the Johnson chain. Each attempt
/// charges m queries to load the start set and one per walk step.
EdWalkOutcome ed_walk(ValueOracle& f, std::size_t m, SeededRng& rng,
                      std::optional<std::uint64_t> budget = std::nullopt);

} // namespace qsearch
