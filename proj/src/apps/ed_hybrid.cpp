#include <qsearch/amplify.hpp>
#include <qsearch/apps.hpp>
#include <qsearch/grover.hpp>
#include <qsearch/optimize.hpp>

#include <algorithm>
#include <cmath>

namespace qsearch {

namespace {

std::size_t ceil_sqrt(std::size_t n) {
    auto s = static_cast<std::size_t>(std::sqrt(static_cast<double>(n)));
    while (s * s > n) {
        --s;
    }
    while (s * s < n) {
        ++s;
    }
    return s;
}

std::uint64_t unknown_search_cap(std::size_t domain) {
    return static_cast<std::uint64_t>(std::ceil(kUnknownSearchCap * std::sqrt(static_cast<double>(domain))));
}

bool injective(std::span<const std::int64_t> values) {
    std::vector<std::int64_t> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) == v.end();
}

} // namespace

EdBaseRun ed_hybrid_base_run(ValueOracle& f, SeededRng& rng) {
    const std::size_t n = f.size();
    if (n < 4) {
        throw ParameterError("ed_hybrid_base_run: need N >= 4");
    }
    const std::uint64_t before = f.queries();
    EdBaseRun out;
    out.sample_size = ceil_sqrt(n);

    const auto sample = sample_distinct(n, out.sample_size, rng);
    std::vector<std::pair<std::int64_t, std::size_t>> seen;
    seen.reserve(sample.size());
    std::vector<bool> in_sample(n, false);
    for (std::uint32_t i : sample) {
        seen.emplace_back(f.query(i), i);
        in_sample[i] = true;
    }
    std::sort(seen.begin(), seen.end());
    for (std::size_t a = 0; a + 1 < seen.size(); ++a) {
        if (seen[a].first == seen[a + 1].first) {
            out.pair = CollisionPair{std::min(seen[a].second, seen[a + 1].second),
                                     std::max(seen[a].second, seen[a + 1].second)};
            out.queries = f.queries() - before;
            return out;
        }
    }

    std::vector<std::size_t> remaining;
    remaining.reserve(n - sample.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (!in_sample[i]) {
            remaining.push_back(i);
        }
    }
    // Membership in the sampled multiset needs no further queries of the sample.
    auto lookup = [&seen](std::int64_t v) {
        return std::lower_bound(seen.begin(), seen.end(), std::make_pair(v, std::size_t{0}));
    };
    PredicateOracle hits(
        remaining.size(),
        [&](std::size_t k) {
            const std::int64_t v = f.peek(remaining[k]);
            const auto it = lookup(v);
            return it != seen.end() && it->first == v;
        },
        f.counter());
    const SearchOutcome r = grover_search_unknown(hits, rng);
    if (r.index) {
        const std::size_t j = remaining[*r.index];
        const std::size_t i = lookup(f.peek(j))->second;
        out.pair = CollisionPair{std::min(i, j), std::max(i, j)};
    }
    out.queries = f.queries() - before;
    return out;
}

EdHybridOutcome element_distinctness_hybrid(ValueOracle& f, SeededRng& rng, std::optional<double> base_eps) {
    const std::size_t n = f.size();
    if (n < 4) {
        throw ParameterError("element_distinctness_hybrid: need N >= 4");
    }
    if (base_eps && !(*base_eps > 0.0 && *base_eps <= 1.0)) {
        throw ParameterError("element_distinctness_hybrid: eps must lie in (0, 1]");
    }
    const std::vector<std::int64_t> values(f.values().begin(), f.values().end());
    ValueOracle silent(values);
    const std::uint64_t before = f.queries();
    EdHybridOutcome out;

    double eps = 0.0;
    if (base_eps) {
        eps = *base_eps;
    } else {
        std::size_t hits = 0;
        for (std::size_t i = 0; i < kEdEpsSamples; ++i) {
            hits += ed_hybrid_base_run(silent, rng).pair ? 1 : 0;
        }
        eps = static_cast<double>(hits) / static_cast<double>(kEdEpsSamples);
        if (eps == 0.0) {
            eps = 1.0 / static_cast<double>(n);
        }
    }
    out.eps = eps;

    // Best round count within the predicted budget; its success probability
    // is at least 1/2, so two attempts reach 3/4.
    const std::uint64_t r_max = predicted_repetitions(eps);
    double best = -1.0;
    for (std::uint64_t r = 0; r <= r_max; ++r) {
        const double p = amplified_success_probability(eps, r);
        if (p > best) {
            best = p;
            out.rounds = r;
        }
    }
    const std::size_t s = ceil_sqrt(n);
    const std::uint64_t per_run = s + unknown_search_cap(n - s);
    const std::uint64_t per_attempt = (2 * out.rounds + 1) * per_run;
    const bool has_collision = !injective(values);

    for (int attempt = 0; attempt < 2; ++attempt) {
        ++out.attempts;
        f.charge(per_attempt);
        if (!has_collision || rng.uniform() >= best) {
            continue;
        }
        // Measuring the amplified state yields a successful base-run branch.
        for (int tries = 0; tries < 1'000'000 && !out.pair; ++tries) {
            out.pair = ed_hybrid_base_run(silent, rng).pair;
        }
        if (out.pair) {
            break;
        }
    }
    out.queries = f.queries() - before;
    return out;
}

double ed_hybrid_query_model(std::size_t n, double eps_hat) {
    if (!(eps_hat > 0.0 && eps_hat <= 1.0)) {
        throw ParameterError("ed_hybrid_query_model: eps must lie in (0, 1]");
    }
    if (n < 4) {
        throw ParameterError("ed_hybrid_query_model: need N >= 4");
    }
    const std::size_t s = ceil_sqrt(n);
    const auto reps = std::max<std::uint64_t>(1, predicted_repetitions(eps_hat));
    return static_cast<double>(reps) * static_cast<double>(s + unknown_search_cap(n - s));
}

} // namespace qsearch
