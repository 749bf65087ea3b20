#include <qsearch/walks.hpp>

#include <algorithm>
#include <bit>
#include <map>
#include <mutex>
#include <string>
#include <unordered_map>

namespace qsearch {

std::uint64_t binomial(std::size_t n, std::size_t k) {
    if (k > n) {
        return 0;
    }
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        r = r * (n - k + i) / i;
    }
    return r;
}

namespace {

/// All k-subsets of {0..n-1} as bitmasks, ascending. n <= 63.
std::vector<std::uint64_t> subsets_of_size(std::size_t n, std::size_t k) {
    std::vector<std::uint64_t> out;
    if (k == 0) {
        out.push_back(0);
        return out;
    }
    const std::uint64_t limit = std::uint64_t{1} << n;
    std::uint64_t s = (std::uint64_t{1} << k) - 1;
    while (s < limit) {
        out.push_back(s);
        // Gosper's hack: next larger integer with the same popcount.
        const std::uint64_t c = s & (~s + 1);
        const std::uint64_t r = s + c;
        s = (((r ^ s) >> 2) / c) | r;
    }
    return out;
}

bool has_collision(std::uint64_t subset, const ValueOracle& f) {
    std::vector<std::int64_t> vals;
    for (std::uint64_t rest = subset; rest != 0; rest &= rest - 1) {
        vals.push_back(f.peek(static_cast<std::size_t>(std::countr_zero(rest))));
    }
    std::sort(vals.begin(), vals.end());
    return std::adjacent_find(vals.begin(), vals.end()) != vals.end();
}

/// The chain's gap depends only on (n, m), not on f.
class GapMemo {
public:
    std::optional<double> find(std::size_t n, std::size_t m) {
        std::lock_guard lock(mu_);
        const auto it = gaps_.find({n, m});
        return it == gaps_.end() ? std::nullopt : std::optional<double>(it->second);
    }
    void store(std::size_t n, std::size_t m, double gap) {
        std::lock_guard lock(mu_);
        gaps_.emplace(std::make_pair(n, m), gap);
    }

private:
    std::mutex mu_;
    std::map<std::pair<std::size_t, std::size_t>, double> gaps_;
};

GapMemo& gap_memo() {
    static GapMemo memo;
    return memo;
}

} // namespace

JohnsonChain johnson_chain(std::size_t n, std::size_t m, const ValueOracle& f) {
    if (m < 1 || m >= n) {
        throw ParameterError("johnson_chain: need 1 <= M < N");
    }
    if (f.size() != n) {
        throw InvalidDimension("johnson_chain: oracle size must equal N");
    }
    if (n > 63) {
        throw SizeError("johnson_chain: N above 63 is not supported");
    }
    const std::uint64_t states = binomial(n, m) + binomial(n, m + 1);
    if (states > kJohnsonStateCap) {
        throw SizeError("johnson_chain: C(N,M) + C(N,M+1) = " + std::to_string(states) + " exceeds the cap of " +
                        std::to_string(kJohnsonStateCap));
    }

    std::vector<std::uint64_t> subsets = subsets_of_size(n, m);
    const std::size_t lower = subsets.size();
    const auto upper = subsets_of_size(n, m + 1);
    subsets.insert(subsets.end(), upper.begin(), upper.end());

    std::unordered_map<std::uint64_t, std::size_t> index;
    index.reserve(subsets.size());
    for (std::size_t v = 0; v < subsets.size(); ++v) {
        index.emplace(subsets[v], v);
    }

    // Uniform neighbor probability 1/d with d the larger of the two layer
    // degrees keeps P symmetric; leftover mass is a self-loop.
    const double p = 1.0 / static_cast<double>(std::max(n - m, m + 1));
    std::vector<std::vector<MarkovChain::Entry>> rows(subsets.size());
    std::vector<std::size_t> marked;
    for (std::size_t v = 0; v < subsets.size(); ++v) {
        const std::uint64_t s = subsets[v];
        auto& row = rows[v];
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint64_t bit = std::uint64_t{1} << i;
            const bool inside = (s & bit) != 0;
            if (v < lower && !inside) {
                row.push_back({index.at(s | bit), p});
            } else if (v >= lower && inside) {
                row.push_back({index.at(s & ~bit), p});
            }
        }
        const double hold = 1.0 - p * static_cast<double>(row.size());
        if (hold > 1e-15) {
            row.push_back({v, hold});
        }
        std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.col < b.col; });
        if (has_collision(s, f)) {
            marked.push_back(v);
        }
    }

    const std::optional<double> known = gap_memo().find(n, m);
    JohnsonChain out{n, m, std::move(subsets),
                     MarkovChain::from_rows(std::move(rows), std::move(marked), 1e-12, known)};
    if (!known) {
        gap_memo().store(n, m, out.chain.gap());
    }
    return out;
}

double collision_vertex_probability(std::size_t n, std::size_t m) {
    if (m > n) {
        throw ParameterError("collision_vertex_probability: need M <= N");
    }
    if (m < 2) {
        return 0.0;
    }
    return (static_cast<double>(m) / static_cast<double>(n)) *
           (static_cast<double>(m - 1) / static_cast<double>(n - 1));
}

EdWalkOutcome ed_walk(ValueOracle& f, std::size_t m, SeededRng& rng, std::optional<std::uint64_t> budget) {
    const JohnsonChain jc = johnson_chain(f.size(), m, f);
    const SzegedyWalk walk(jc.chain);
    // Loading the start set costs m queries; a step queries the added element.
    const SzegedyCosts costs{static_cast<double>(m), 1.0, 0.0};
    const SzegedyOutcome r = szegedy_find_marked(walk, costs, rng, budget);

    EdWalkOutcome out;
    out.steps = r.steps;
    out.attempts = r.attempts;
    out.queries = r.attempts * m + r.steps;
    f.charge(out.queries);
    if (r.found) {
        std::vector<std::size_t> members;
        for (std::uint64_t rest = jc.subsets[*r.found]; rest != 0; rest &= rest - 1) {
            members.push_back(static_cast<std::size_t>(std::countr_zero(rest)));
        }
        for (std::size_t a = 0; a < members.size() && !out.pair; ++a) {
            for (std::size_t b = a + 1; b < members.size(); ++b) {
                if (f.peek(members[a]) == f.peek(members[b])) {
                    out.pair = CollisionPair{members[a], members[b]};
                    break;
                }
            }
        }
    }
    return out;
}

} // namespace qsearch
