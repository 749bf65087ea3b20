#include <qsearch/walks.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace qsearch {

TorusGrid::TorusGrid(int d, std::size_t side) : d_(d), side_(side), cells_(1) {
    if (d < 2 || d > 3) {
        throw ParameterError("TorusGrid: dimension must be 2 or 3");
    }
    if (side < 2) {
        throw ParameterError("TorusGrid: side must be at least 2");
    }
    for (int a = 0; a < d; ++a) {
        cells_ *= side;
    }
}

std::size_t TorusGrid::neighbor(std::size_t cell, int dir) const {
    if (cell >= cells_ || dir < 0 || dir >= directions()) {
        throw IndexError("TorusGrid::neighbor: cell or direction out of range");
    }
    std::size_t stride = 1;
    for (int a = 0; a < dir / 2; ++a) {
        stride *= side_;
    }
    const std::size_t c = (cell / stride) % side_;
    const std::size_t moved = (dir % 2 == 0) ? (c + 1) % side_ : (c + side_ - 1) % side_;
    return cell + (moved - c) * stride;
}

std::vector<std::size_t> TorusGrid::coordinates(std::size_t cell) const {
    std::vector<std::size_t> out(static_cast<std::size_t>(d_));
    for (auto& c : out) {
        c = cell % side_;
        cell /= side_;
    }
    return out;
}

std::size_t TorusGrid::cell_at(const std::vector<std::size_t>& coords) const {
    std::size_t cell = 0;
    for (std::size_t a = coords.size(); a-- > 0;) {
        cell = cell * side_ + coords[a];
    }
    return cell;
}

std::size_t TorusGrid::distance(std::size_t a, std::size_t b) const {
    const auto ca = coordinates(a);
    const auto cb = coordinates(b);
    std::size_t total = 0;
    for (std::size_t i = 0; i < ca.size(); ++i) {
        const std::size_t diff = ca[i] > cb[i] ? ca[i] - cb[i] : cb[i] - ca[i];
        total += std::min(diff, side_ - diff);
    }
    return total;
}

CoinedWalk::CoinedWalk(const TorusGrid& grid, std::vector<bool> marked)
    : grid_(grid), marked_(std::move(marked)), state_(uniform_state(grid.cells() * grid.directions())),
      scratch_(state_.dimension()), shift_(state_.dimension()) {
    if (marked_.size() != grid_.cells()) {
        throw InvalidDimension("CoinedWalk: marked flags must cover every cell");
    }
    const int dirs = grid_.directions();
    for (std::size_t x = 0; x < grid_.cells(); ++x) {
        for (int k = 0; k < dirs; ++k) {
            shift_[x * dirs + k] = grid_.neighbor(x, k) * dirs + TorusGrid::reverse(k);
        }
    }
}

void CoinedWalk::reset_uniform() {
    state_ = uniform_state(state_.dimension());
}

void CoinedWalk::reset_at(std::size_t cell) {
    if (cell >= grid_.cells()) {
        throw IndexError("CoinedWalk::reset_at: cell out of range");
    }
    const int dirs = grid_.directions();
    std::vector<Amplitude> amps(state_.dimension());
    for (int k = 0; k < dirs; ++k) {
        amps[cell * dirs + k] = 1.0 / std::sqrt(static_cast<double>(dirs));
    }
    state_ = StateVector(std::move(amps));
}

void CoinedWalk::step() {
    const int dirs = grid_.directions();
    const std::size_t cells = grid_.cells();
    auto a = state_.amplitudes();
    // Flip-flop shift: (x, k) -> (neighbor(x, k), reverse(k)).
    for (std::size_t i = 0; i < a.size(); ++i) {
        scratch_[shift_[i]] = a[i];
    }
    for (std::size_t x = 0; x < cells; ++x) {
        Amplitude* c = scratch_.data() + x * dirs;
        if (marked_[x]) {
            for (int k = 0; k < dirs; ++k) {
                a[x * dirs + k] = -c[k];
            }
            continue;
        }
        Amplitude sum{};
        for (int k = 0; k < dirs; ++k) {
            sum += c[k];
        }
        const Amplitude twice_mean = 2.0 * sum / static_cast<double>(dirs);
        for (int k = 0; k < dirs; ++k) {
            a[x * dirs + k] = twice_mean - c[k];
        }
    }
    state_.renormalize_if_drifted();
}

double CoinedWalk::cell_probability(std::size_t cell) const {
    const int dirs = grid_.directions();
    double p = 0.0;
    for (int k = 0; k < dirs; ++k) {
        p += state_.probability(cell * dirs + k);
    }
    return p;
}

double CoinedWalk::marked_probability() const {
    double p = 0.0;
    for (std::size_t x = 0; x < grid_.cells(); ++x) {
        if (marked_[x]) {
            p += cell_probability(x);
        }
    }
    return p;
}

std::vector<double> CoinedWalk::cell_probabilities() const {
    std::vector<double> out(grid_.cells());
    for (std::size_t x = 0; x < out.size(); ++x) {
        out[x] = cell_probability(x);
    }
    return out;
}

namespace {

std::vector<bool> marked_flags(std::size_t cells, std::span<const std::size_t> marked) {
    std::vector<bool> flags(cells, false);
    for (std::size_t m : marked) {
        if (m >= cells) {
            throw IndexError("marked cell out of range");
        }
        flags[m] = true;
    }
    return flags;
}

} // namespace

std::vector<double> grid_walk_marked_probabilities(const TorusGrid& grid, std::span<const std::size_t> marked,
                                                   std::uint64_t t_max) {
    CoinedWalk walk(grid, marked_flags(grid.cells(), marked));
    std::vector<double> out;
    out.reserve(t_max + 1);
    out.push_back(walk.marked_probability());
    for (std::uint64_t t = 1; t <= t_max; ++t) {
        walk.step();
        out.push_back(walk.marked_probability());
    }
    return out;
}

WalkSearchOutcome grid_walk_search(const TorusGrid& grid, BitOracle& marked, SeededRng& rng,
                                   std::uint64_t step_budget) {
    if (step_budget == 0) {
        throw ParameterError("grid_walk_search: step budget must be at least 1");
    }
    if (marked.size() != grid.cells()) {
        throw InvalidDimension("grid_walk_search: oracle size does not match the grid");
    }
    const auto marked_cells = marked.marked();
    CoinedWalk walk(grid, marked_flags(grid.cells(), marked_cells));
    const double n = static_cast<double>(grid.cells());
    const double window = std::ceil(std::sqrt(n * std::log2(n)));

    WalkSearchOutcome out;
    double T = 1.0;
    for (;;) {
        const std::uint64_t t = 1 + static_cast<std::uint64_t>(rng.uniform() * std::ceil(T));
        if (out.steps + t > step_budget) {
            break;
        }
        walk.reset_uniform();
        for (std::uint64_t i = 0; i < t; ++i) {
            walk.step();
        }
        marked.charge(t);
        out.steps += t;
        ++out.attempts;
        const auto probs = walk.cell_probabilities();
        const std::size_t cell = sample_weighted(probs, 1.0, rng);
        if (marked.peek(cell)) {
            out.found = cell;
            break;
        }
        T = std::min(T * 6.0 / 5.0, window);
    }
    out.cost = static_cast<double>(out.steps);
    return out;
}

std::vector<std::size_t> boustrophedon_order(const TorusGrid& grid) {
    const std::size_t L = grid.side();
    const auto d = static_cast<std::size_t>(grid.dimensions());
    std::vector<std::size_t> order;
    order.reserve(grid.cells());
    std::vector<std::size_t> digits(d);
    std::vector<std::size_t> coords(d);
    for (std::size_t i = 0; i < grid.cells(); ++i) {
        std::size_t rest = i;
        for (std::size_t a = 0; a < d; ++a) {
            digits[a] = rest % L;
            rest /= L;
        }
        // Reflect a digit whenever the digits above it sum to an odd number.
        std::size_t above = 0;
        for (std::size_t a = d; a-- > 0;) {
            coords[a] = (above % 2 == 1) ? L - 1 - digits[a] : digits[a];
            above += coords[a];
        }
        order.push_back(grid.cell_at(coords));
    }
    return order;
}

WalkSearchOutcome grid_classical_search(const TorusGrid& grid, BitOracle& marked) {
    if (marked.size() != grid.cells()) {
        throw InvalidDimension("grid_classical_search: oracle size does not match the grid");
    }
    WalkSearchOutcome out;
    out.attempts = 1;
    for (std::size_t cell : boustrophedon_order(grid)) {
        ++out.steps;
        if (marked.query(cell)) {
            out.found = cell;
            break;
        }
    }
    out.cost = static_cast<double>(out.steps);
    return out;
}

} // namespace qsearch
