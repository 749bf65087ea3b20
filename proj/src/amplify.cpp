#include <qsearch/amplify.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace qsearch {

namespace {

void check_eps(double eps, const char* who) {
    if (!(eps > 0.0 && eps <= 1.0)) {
        throw ParameterError(std::string(who) + ": eps must lie in (0, 1]");
    }
}

std::uint64_t snapped_ceil(long double x) {
    const long double nearest = std::round(x);
    if (std::fabs(x - nearest) < 1e-12L * std::max(1.0L, std::fabs(x))) {
        return static_cast<std::uint64_t>(std::max(0.0L, nearest));
    }
    return static_cast<std::uint64_t>(std::max(0.0L, std::ceil(x)));
}

void reflect_about_zero(StateVector& s) {
    // 2|0><0| - I
    auto a = s.amplitudes();
    for (std::size_t i = 1; i < a.size(); ++i) {
        a[i] = -a[i];
    }
}

} // namespace

std::uint64_t predicted_repetitions(double eps) {
    check_eps(eps, "predicted_repetitions");
    const long double p = eps;
    return snapped_ceil(std::numbers::pi_v<long double> / (4.0L * std::asin(std::sqrt(p))) - 0.5L);
}

std::uint64_t classical_repetitions(double eps) {
    check_eps(eps, "classical_repetitions");
    return snapped_ceil(1.0L / static_cast<long double>(eps));
}

double amplified_success_probability(double p, std::uint64_t rounds) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ParameterError("amplified_success_probability: p must lie in [0, 1]");
    }
    const double s = std::sin((2.0 * static_cast<double>(rounds) + 1.0) * std::asin(std::sqrt(p)));
    return std::clamp(s * s, 0.0, 1.0);
}

StatePreparation householder_preparation(const StateVector& target, std::uint64_t cost) {
    const std::size_t n = target.dimension();
    const auto t = target.amplitudes();
    // target = e^{i beta} v with v_0 real and non-negative.
    const Amplitude phase = std::abs(t[0]) > 0.0 ? t[0] / std::abs(t[0]) : Amplitude{1.0, 0.0};
    auto w = std::make_shared<std::vector<Amplitude>>(n);
    double wnorm2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        (*w)[i] = (i == 0 ? Amplitude{1.0, 0.0} : Amplitude{}) - t[i] / phase;
        wnorm2 += std::norm((*w)[i]);
    }
    auto reflect = [w, wnorm2](StateVector& s) {
        if (wnorm2 < 1e-30) {
            return;
        }
        auto a = s.amplitudes();
        Amplitude dot{};
        for (std::size_t i = 0; i < a.size(); ++i) {
            dot += std::conj((*w)[i]) * a[i];
        }
        const Amplitude f = 2.0 * dot / wnorm2;
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] -= f * (*w)[i];
        }
    };
    StatePreparation prep;
    prep.dimension = n;
    prep.cost = cost;
    prep.forward = [reflect, phase](StateVector& s) {
        reflect(s);
        for (auto& a : s.amplitudes()) {
            a *= phase;
        }
    };
    prep.inverse = [reflect, phase](StateVector& s) {
        for (auto& a : s.amplitudes()) {
            a /= phase;
        }
        reflect(s);
    };
    return prep;
}

StatePreparation uniform_preparation(std::size_t n, std::uint64_t cost) {
    return householder_preparation(uniform_state(n), cost);
}

StateVector amplify_state(const StatePreparation& prep, PredicateOracle& good,
                          std::span<const std::size_t> good_indices, std::uint64_t rounds) {
    if (good.size() != prep.dimension) {
        throw InvalidDimension("amplify_state: predicate and preparation dimensions differ");
    }
    StateVector s = StateVector::basis(prep.dimension, 0);
    prep.forward(s);
    good.charge(prep.cost);
    for (std::uint64_t r = 0; r < rounds; ++r) {
        apply_phase_flip(s, good_indices, good);
        prep.inverse(s);
        reflect_about_zero(s);
        prep.forward(s);
        good.charge(2 * prep.cost);
        s.renormalize_if_drifted();
    }
    return s;
}

AmplifyOutcome amplitude_amplify(const StatePreparation& prep, AmplifyParams& params, SeededRng& rng) {
    check_eps(params.eps, "amplitude_amplify");
    PredicateOracle& good = params.good;
    const auto good_indices = good.marked();
    const std::uint64_t before = good.queries();
    AmplifyOutcome out;

    if (!params.eps_is_lower_bound) {
        out.rounds = predicted_repetitions(params.eps);
        const StateVector s = amplify_state(prep, good, good_indices, out.rounds);
        out.good_probability = s.probability_of(good_indices);
        out.index = measure(s, rng);
        out.good = good.peek(out.index);
        out.queries = good.queries() - before;
        return out;
    }

    // Randomized round counts with a classical check per attempt, as in the
    // unknown-k search.
    const double m_max = 1.0 / std::sqrt(params.eps);
    const auto cap = static_cast<std::uint64_t>(std::ceil(5.0 * m_max));
    double m = 1.0;
    std::uint64_t spent = 0;
    for (;;) {
        const auto r = static_cast<std::uint64_t>(rng.uniform() * m);
        if (spent > 0 && spent + r + 1 > cap) {
            break;
        }
        const StateVector s = amplify_state(prep, good, good_indices, r);
        out.rounds += r;
        spent += r + 1;
        out.good_probability = s.probability_of(good_indices);
        out.index = measure(s, rng);
        if (good.query(out.index)) {
            out.good = true;
            break;
        }
        m = std::min(m * 6.0 / 5.0, m_max);
    }
    out.queries = good.queries() - before;
    return out;
}

} // namespace qsearch
