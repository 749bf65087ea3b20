#include <qsearch/grover.hpp>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <string>
#include <unordered_set>

namespace qsearch {

namespace {

void check_nk(std::size_t n, std::size_t k, const char* who) {
    if (k == 0 || k > n) {
        throw ParameterError(std::string(who) + ": need 1 <= k <= n, got n=" + std::to_string(n) +
                             " k=" + std::to_string(k));
    }
}

void check_dimension(const PredicateOracle& oracle, std::size_t n, const char* who) {
    if (n == 0) {
        throw InvalidDimension(std::string(who) + ": n must be at least 1");
    }
    if (oracle.size() != n) {
        throw InvalidDimension(std::string(who) + ": params.n does not match the oracle size");
    }
}

StateVector measure_ready(StateVector s) {
    s.renormalize_if_drifted();
    return s;
}

} // namespace

std::uint64_t optimal_query_count(std::size_t n, std::size_t k) {
    check_nk(n, k, "optimal_query_count");
    const long double p = static_cast<long double>(k) / static_cast<long double>(n);
    const long double x = std::numbers::pi_v<long double> / (4.0L * std::asin(std::sqrt(p))) - 0.5L;
    // Exact cases such as k/n = 1/4 land on an integer; do not let rounding
    // noise push them up by one.
    const long double nearest = std::round(x);
    if (std::fabs(x - nearest) < 1e-12L * std::max(1.0L, std::fabs(x))) {
        return static_cast<std::uint64_t>(std::max(0.0L, nearest));
    }
    return static_cast<std::uint64_t>(std::max(0.0L, std::ceil(x)));
}

double success_prob_analytic(std::size_t n, std::size_t k, std::uint64_t t) {
    check_nk(n, k, "success_prob_analytic");
    const long double theta = std::asin(std::sqrt(static_cast<long double>(k) / static_cast<long double>(n)));
    const long double s = std::sin((2.0L * static_cast<long double>(t) + 1.0L) * theta);
    return static_cast<double>(std::clamp(s * s, 0.0L, 1.0L));
}

StateVector grover_state(PredicateOracle& oracle, std::span<const std::size_t> marked, std::uint64_t t) {
    StateVector s = uniform_state(oracle.size());
    for (std::uint64_t i = 0; i < t; ++i) {
        apply_phase_flip(s, marked, oracle);
        apply_diffusion(s);
        s.renormalize_if_drifted();
    }
    return s;
}

SearchOutcome grover_search(PredicateOracle& oracle, const GroverParams& params, SeededRng& rng) {
    check_dimension(oracle, params.n, "grover_search");
    std::uint64_t t = 0;
    if (params.t) {
        t = *params.t;
    } else if (params.k) {
        t = optimal_query_count(params.n, *params.k);
    } else {
        throw UnsupportedMode("grover_search: needs k or an explicit iteration count");
    }
    const auto marked = oracle.marked();
    const std::uint64_t before = oracle.queries();
    StateVector s = measure_ready(grover_state(oracle, marked, t));
    SearchOutcome out;
    out.marked_probability = s.probability_of(marked);
    out.index = measure(s, rng);
    out.iterations = t;
    out.queries = oracle.queries() - before;
    return out;
}

SearchOutcome grover_search(BitOracle& oracle, const GroverParams& params, SeededRng& rng) {
    auto view = oracle.as_predicate();
    return grover_search(view, params, rng);
}

ExactPhases solve_exact_phases(std::size_t n, std::size_t k, std::uint64_t t) {
    check_nk(n, k, "solve_exact_phases");
    if (t == 0) {
        throw ParameterError("solve_exact_phases: t must be at least 1");
    }
    const double theta = std::asin(std::sqrt(static_cast<double>(k) / static_cast<double>(n)));
    const double alpha = static_cast<double>(2 * t - 1) * theta;
    const double s = std::sin(alpha);
    const double c = std::cos(alpha);
    const double st = std::sin(theta);
    const double ct = std::cos(theta);

    // After the phase on the marked part, the unmarked component vanishes iff
    // 1 - e^{i psi} = R(phi) with R = c / (<u|x> cos theta), which is solvable
    // iff |R - 1| = 1.
    auto ratio = [&](double phi) {
        const Amplitude w = std::polar(s * st, phi) + Amplitude{c * ct, 0.0};
        return Amplitude{c, 0.0} / (w * ct);
    };
    auto h = [&](double phi) { return std::abs(ratio(phi) - 1.0) - 1.0; };

    double lo = 0.0;
    double hi = std::numbers::pi;
    const double hlo = h(lo);
    const double hhi = h(hi);
    if (hlo > 0.0 || hhi < 0.0) {
        throw std::logic_error("solve_exact_phases: phase equation has no bracketed root");
    }
    if (hhi == 0.0) {
        lo = hi;
    }
    for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (h(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double phi = 0.5 * (lo + hi);
    const Amplitude r = ratio(phi);
    return ExactPhases{phi, std::arg(Amplitude{1.0, 0.0} - r)};
}

SearchOutcome grover_search_exact(PredicateOracle& oracle, const GroverParams& params, SeededRng& rng) {
    if (!params.k) {
        throw UnsupportedMode("grover_search_exact: requires the number of marked items");
    }
    check_dimension(oracle, params.n, "grover_search_exact");
    const std::size_t n = params.n;
    const std::size_t k = *params.k;
    const std::uint64_t t = optimal_query_count(n, k);
    const auto marked = oracle.marked();
    const std::uint64_t before = oracle.queries();

    StateVector s = uniform_state(n);
    if (t > 0) {
        s = grover_state(oracle, marked, t - 1);
        const ExactPhases ph = solve_exact_phases(n, k, t);
        apply_phase(s, marked, ph.phi, oracle);
        apply_generalized_diffusion(s, ph.psi);
        s.renormalize_if_drifted();
    }
    SearchOutcome out;
    out.marked_probability = s.probability_of(marked);
    out.index = measure(s, rng);
    out.iterations = t;
    out.queries = oracle.queries() - before;
    return out;
}

SearchOutcome grover_search_exact(BitOracle& oracle, const GroverParams& params, SeededRng& rng) {
    auto view = oracle.as_predicate();
    return grover_search_exact(view, params, rng);
}

std::size_t sample_after_iterations(const PredicateOracle& oracle, std::span<const std::size_t> marked,
                                    std::uint64_t j, SeededRng& rng) {
    const std::size_t n = oracle.size();
    const std::size_t k = marked.size();
    if (k == 0) {
        return static_cast<std::size_t>(rng.below(n));
    }
    const double p = success_prob_analytic(n, k, j);
    if (k == n || rng.uniform() < p) {
        return marked[rng.below(k)];
    }
    // Uniform over the unmarked indices; rejection is cheap unless k ~ n.
    if (2 * k <= n) {
        for (;;) {
            const auto i = static_cast<std::size_t>(rng.below(n));
            if (!std::binary_search(marked.begin(), marked.end(), i)) {
                return i;
            }
        }
    }
    std::uint64_t r = rng.below(n - k);
    std::size_t m = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (m < k && marked[m] == i) {
            ++m;
            continue;
        }
        if (r-- == 0) {
            return i;
        }
    }
    return n - 1;
}

SearchOutcome grover_search_unknown(PredicateOracle& oracle, SeededRng& rng,
                                    const UnknownSearchOptions& options) {
    const std::size_t n = oracle.size();
    if (n == 0) {
        throw InvalidDimension("grover_search_unknown: empty search space");
    }
    const std::size_t k_floor = std::clamp<std::size_t>(options.k_floor, 1, n);
    std::uint64_t cap = static_cast<std::uint64_t>(
        std::ceil(kUnknownSearchCap * std::sqrt(static_cast<double>(n) / static_cast<double>(k_floor))));
    if (options.max_queries) {
        cap = std::min(cap, *options.max_queries);
    }
    const double m_max = std::sqrt(static_cast<double>(n));
    const auto marked = oracle.marked();

    SearchOutcome out;
    const std::uint64_t before = oracle.queries();
    double m = 1.0;
    std::uint64_t spent = 0;
    for (;;) {
        const auto j = static_cast<std::uint64_t>(rng.uniform() * m);
        if (spent + j + 1 > cap) {
            out.budget_exhausted = options.max_queries && cap == *options.max_queries;
            break;
        }
        // j iterations, each one phase query, then one classical check.
        oracle.charge(j);
        const std::size_t y = sample_after_iterations(oracle, marked, j, rng);
        spent += j + 1;
        out.iterations += j;
        if (oracle.query(y)) {
            out.index = y;
            out.marked_probability = marked.empty() ? 0.0 : success_prob_analytic(n, marked.size(), j);
            break;
        }
        m = std::min(m * 6.0 / 5.0, m_max);
    }
    out.queries = oracle.queries() - before;
    return out;
}

SearchOutcome grover_search_unknown(BitOracle& oracle, SeededRng& rng, const UnknownSearchOptions& options) {
    auto view = oracle.as_predicate();
    return grover_search_unknown(view, rng, options);
}

FindAllOutcome find_all(PredicateOracle& oracle, SeededRng& rng) {
    auto found = std::make_shared<std::unordered_set<std::size_t>>();
    PredicateOracle remaining = oracle.restricted([found](std::size_t i) { return !found->contains(i); });
    FindAllOutcome out;
    const std::uint64_t before = oracle.queries();
    for (;;) {
        const SearchOutcome r = grover_search_unknown(remaining, rng);
        if (!r.index) {
            break;
        }
        found->insert(*r.index);
        out.indices.push_back(*r.index);
    }
    std::sort(out.indices.begin(), out.indices.end());
    out.queries = oracle.queries() - before;
    return out;
}

FindAllOutcome find_all(BitOracle& oracle, SeededRng& rng) {
    auto view = oracle.as_predicate();
    return find_all(view, rng);
}

} // namespace qsearch
