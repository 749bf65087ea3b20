#include <qsearch/walks.hpp>

#include <algorithm>
#include <cmath>

namespace qsearch {

SzegedyWalk::SzegedyWalk(const MarkovChain& chain)
    : chain_(std::make_shared<const MarkovChain>(chain)), source_(chain.nonzeros()), swap_(chain.nonzeros()),
      sqrt_p_(chain.nonzeros()) {
    const auto rp = chain_->row_ptr();
    const auto entries = chain_->entries();
    for (std::size_t x = 0; x < chain_->states(); ++x) {
        for (std::size_t e = rp[x]; e < rp[x + 1]; ++e) {
            source_[e] = x;
            sqrt_p_[e] = std::sqrt(entries[e].p);
            const std::size_t y = entries[e].col;
            const auto begin = entries.begin() + static_cast<std::ptrdiff_t>(rp[y]);
            const auto end = entries.begin() + static_cast<std::ptrdiff_t>(rp[y + 1]);
            const auto it = std::lower_bound(begin, end, x, [](const MarkovChain::Entry& a, std::size_t c) {
                return a.col < c;
            });
            if (it == end || it->col != x) {
                throw ParameterError("SzegedyWalk: chain support is not symmetric");
            }
            swap_[e] = static_cast<std::size_t>(it - entries.begin());
        }
    }
}

StateVector SzegedyWalk::stationary_state() const {
    const double s = static_cast<double>(chain_->states());
    std::vector<Amplitude> amps(edges());
    const auto entries = chain_->entries();
    for (std::size_t e = 0; e < amps.size(); ++e) {
        amps[e] = std::sqrt(entries[e].p / s);
    }
    StateVector out(std::move(amps));
    return out;
}

void SzegedyWalk::reflect_rows(std::span<Amplitude> a) const {
    const auto rp = chain_->row_ptr();
    for (std::size_t x = 0; x < chain_->states(); ++x) {
        if (chain_->is_marked(x)) {
            for (std::size_t e = rp[x]; e < rp[x + 1]; ++e) {
                a[e] = -a[e];
            }
            continue;
        }
        Amplitude overlap{};
        for (std::size_t e = rp[x]; e < rp[x + 1]; ++e) {
            overlap += sqrt_p_[e] * a[e];
        }
        for (std::size_t e = rp[x]; e < rp[x + 1]; ++e) {
            a[e] = 2.0 * overlap * sqrt_p_[e] - a[e];
        }
    }
}

void SzegedyWalk::step(StateVector& edge_state) const {
    if (edge_state.dimension() != edges()) {
        throw InvalidDimension("SzegedyWalk::step: state does not live on this chain's edge space");
    }
    auto a = edge_state.amplitudes();
    reflect_rows(a);
    std::vector<Amplitude> swapped(a.size());
    for (std::size_t e = 0; e < a.size(); ++e) {
        swapped[e] = a[swap_[e]];
    }
    reflect_rows(swapped);
    for (std::size_t e = 0; e < a.size(); ++e) {
        a[e] = swapped[swap_[e]];
    }
    edge_state.renormalize_if_drifted();
}

double SzegedyWalk::marked_probability(const StateVector& edge_state) const {
    double p = 0.0;
    for (std::size_t e = 0; e < edges(); ++e) {
        if (chain_->is_marked(source_[e])) {
            p += edge_state.probability(e);
        }
    }
    return p;
}

double SzegedyWalk::edge_marked_probability(const StateVector& edge_state) const {
    double p = 0.0;
    for (std::size_t e = 0; e < edges(); ++e) {
        if (chain_->is_marked(source_[e]) || chain_->is_marked(target(e))) {
            p += edge_state.probability(e);
        }
    }
    return p;
}

std::vector<double> SzegedyWalk::first_register(const StateVector& edge_state) const {
    std::vector<double> out(chain_->states());
    for (std::size_t e = 0; e < edges(); ++e) {
        out[source_[e]] += edge_state.probability(e);
    }
    return out;
}

void szegedy_step(const MarkovChain& chain, StateVector& edge_state) {
    SzegedyWalk(chain).step(edge_state);
}

std::uint64_t szegedy_window(const MarkovChain& chain) {
    const double gap = chain.gap();
    if (!(gap > 1e-15)) {
        throw ParameterError("szegedy_window: chain has no spectral gap");
    }
    // With nothing marked, size the window as if one state were.
    const double delta = chain.marked().empty() ? 1.0 / static_cast<double>(chain.states()) : chain.delta();
    return static_cast<std::uint64_t>(std::ceil(1.0 / std::sqrt(delta * gap) - 1e-9));
}

SzegedyOutcome szegedy_find_marked(const SzegedyWalk& walk, const SzegedyCosts& costs, SeededRng& rng,
                                   std::optional<std::uint64_t> budget) {
    if (costs.gamma0 < 0.0 || costs.gamma1 < 0.0 || costs.gamma2 < 0.0) {
        throw ParameterError("szegedy_find_marked: costs must be non-negative");
    }
    const MarkovChain& chain = walk.chain();
    const auto window = static_cast<double>(szegedy_window(chain));
    const std::uint64_t limit =
        budget.value_or(static_cast<std::uint64_t>(std::ceil(kSzegedyBudgetFactor * window)));
    // Zero-step attempts cost no walk steps, so attempts get their own cap.
    const std::uint64_t attempt_cap = 4 * limit + 16;

    SzegedyOutcome out;
    double T = 1.0;
    while (out.attempts < attempt_cap) {
        const auto t = static_cast<std::uint64_t>(rng.uniform() * std::ceil(T));
        if (out.steps + t > limit) {
            break;
        }
        ++out.attempts;
        out.steps += t;
        StateVector s = walk.stationary_state();
        for (std::uint64_t i = 0; i < t; ++i) {
            walk.step(s);
        }
        const auto probs = walk.first_register(s);
        const std::size_t x = sample_weighted(probs, 1.0, rng);
        if (chain.is_marked(x)) {
            out.found = x;
            break;
        }
        T = std::min(T * 6.0 / 5.0, window);
    }
    out.cost = static_cast<double>(out.attempts) * costs.gamma0 +
               static_cast<double>(out.steps) * (costs.gamma1 + costs.gamma2);
    return out;
}

SzegedyOutcome szegedy_find_marked(const MarkovChain& chain, const SzegedyCosts& costs, SeededRng& rng,
                                   std::optional<std::uint64_t> budget) {
    return szegedy_find_marked(SzegedyWalk(chain), costs, rng, budget);
}

double classical_hitting(const MarkovChain& chain, SeededRng& rng, std::size_t trials) {
    if (chain.marked().empty()) {
        throw ParameterError("classical_hitting: no marked states");
    }
    if (trials == 0) {
        throw ParameterError("classical_hitting: trials must be at least 1");
    }
    constexpr std::uint64_t kStepCap = 1'000'000'000;
    std::uint64_t total = 0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        auto x = static_cast<std::size_t>(rng.below(chain.states()));
        std::uint64_t steps = 0;
        while (!chain.is_marked(x)) {
            const auto r = chain.row(x);
            const double u = rng.uniform();
            double acc = 0.0;
            std::size_t next = r.back().col;
            for (const auto& e : r) {
                acc += e.p;
                if (u < acc) {
                    next = e.col;
                    break;
                }
            }
            x = next;
            if (++steps > kStepCap) {
                throw ParameterError("classical_hitting: marked set unreachable");
            }
        }
        total += steps;
    }
    return static_cast<double>(total) / static_cast<double>(trials);
}

} // namespace qsearch
