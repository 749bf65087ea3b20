#include <qsearch/amplify.hpp>
#include <qsearch/apps.hpp>

#include <cmath>

namespace qsearch {

SchoeningResult schoening_run(const Cnf3Formula& formula, SeededRng& rng) {
    const int n = formula.variables();
    Assignment a(static_cast<std::size_t>(n));
    for (auto& v : a) {
        v = static_cast<std::uint8_t>(rng.below(2));
    }
    SchoeningResult out;
    const std::uint64_t max_flips = 3 * static_cast<std::uint64_t>(n);
    for (;;) {
        const auto bad = formula.first_unsatisfied(a);
        if (!bad) {
            out.assignment = std::move(a);
            return out;
        }
        if (out.flips == max_flips) {
            return out;
        }
        const Clause& c = formula.clauses()[*bad];
        const int lit = c.literals[rng.below(static_cast<std::uint64_t>(c.size))];
        auto& v = a[static_cast<std::size_t>(std::abs(lit) - 1)];
        v ^= 1;
        ++out.flips;
    }
}

WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
    if (trials == 0) {
        throw ParameterError("wilson_interval: trials must be at least 1");
    }
    if (successes > trials) {
        throw ParameterError("wilson_interval: more successes than trials");
    }
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    WilsonInterval w{std::max(0.0, centre - half), std::min(1.0, centre + half)};
    if (successes == 0) {
        w.lower = 0.0;
    }
    if (successes == trials) {
        w.upper = 1.0;
    }
    return w;
}

SatRunStats SatRunStats::exact(double p) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ParameterError("SatRunStats::exact: p must lie in [0, 1]");
    }
    SatRunStats s;
    s.eps_hat = p;
    s.lower = p;
    s.upper = p;
    return s;
}

SatRunStats estimate_success(const Cnf3Formula& formula, std::uint64_t trials, SeededRng& rng) {
    if (trials == 0) {
        throw ParameterError("estimate_success: trials must be at least 1");
    }
    SatRunStats s;
    s.trials = trials;
    for (std::uint64_t i = 0; i < trials; ++i) {
        if (schoening_run(formula, rng).assignment) {
            ++s.successes;
        }
    }
    s.eps_hat = static_cast<double>(s.successes) / static_cast<double>(trials);
    const WilsonInterval w = wilson_interval(s.successes, trials);
    s.lower = w.lower;
    s.upper = w.upper;
    return s;
}

SpeedupReport quantum_speedup_report(const SatRunStats& stats) {
    SpeedupReport r;
    r.eps_basis = stats.lower;
    if (!(stats.lower > 0.0)) {
        r.inconclusive = true;
        return r;
    }
    r.predicted_quantum_reps = predicted_repetitions(stats.lower);
    r.classical_reps = classical_repetitions(stats.lower);
    r.quantum_not_worse = r.predicted_quantum_reps <= r.classical_reps;
    return r;
}

} // namespace qsearch
