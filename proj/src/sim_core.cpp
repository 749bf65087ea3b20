#include <qsearch/sim_core.hpp>

#include <cmath>
#include <numeric>
#include <string>

namespace qsearch {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

namespace {

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream) {
    return mix64(master ^ mix64(stream ^ 0x5851f42d4c957f2dULL));
}

} // namespace

SeededRng::SeededRng(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_(master_seed), stream_(stream_id), engine_(stream_seed(master_seed, stream_id)) {}

SeededRng SeededRng::split(std::uint64_t child) const {
    return SeededRng(stream_seed(master_, stream_), child);
}

double SeededRng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t SeededRng::below(std::uint64_t bound) {
    if (bound == 0) {
        throw ParameterError("SeededRng::below: bound must be positive");
    }
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t r;
    do {
        r = engine_();
    } while (r >= limit);
    return r % bound;
}

PredicateOracle::PredicateOracle(std::size_t size, std::function<bool(std::size_t)> predicate,
                                 std::shared_ptr<QueryCounter> counter)
    : size_(size), predicate_(std::move(predicate)),
      counter_(counter ? std::move(counter) : std::make_shared<QueryCounter>()) {}

bool PredicateOracle::query(std::size_t i) {
    if (i >= size_) {
        throw IndexError("PredicateOracle::query: index " + std::to_string(i) + " out of range");
    }
    counter_->charge(1);
    return predicate_(i);
}

bool PredicateOracle::peek(std::size_t i) const {
    if (i >= size_) {
        throw IndexError("PredicateOracle::peek: index " + std::to_string(i) + " out of range");
    }
    return predicate_(i);
}

std::vector<std::size_t> PredicateOracle::marked() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size_; ++i) {
        if (predicate_(i)) {
            out.push_back(i);
        }
    }
    return out;
}

PredicateOracle PredicateOracle::restricted(std::function<bool(std::size_t)> also) const {
    auto base = predicate_;
    return PredicateOracle(
        size_, [base, also = std::move(also)](std::size_t i) { return base(i) && also(i); },
        counter_);
}

BitOracle::BitOracle(std::vector<bool> bits)
    : bits_(std::move(bits)), counter_(std::make_shared<QueryCounter>()) {}

BitOracle BitOracle::with_marked(std::size_t size, std::span<const std::size_t> marked) {
    std::vector<bool> bits(size, false);
    for (std::size_t i : marked) {
        if (i >= size) {
            throw IndexError("BitOracle::with_marked: index " + std::to_string(i) + " out of range");
        }
        bits[i] = true;
    }
    return BitOracle(std::move(bits));
}

bool BitOracle::query(std::size_t i) {
    const bool b = peek(i);
    counter_->charge(1);
    return b;
}

bool BitOracle::peek(std::size_t i) const {
    if (i >= bits_.size()) {
        throw IndexError("BitOracle: index " + std::to_string(i) + " out of range");
    }
    return bits_[i];
}

std::vector<std::size_t> BitOracle::marked() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i]) {
            out.push_back(i);
        }
    }
    return out;
}

PredicateOracle BitOracle::as_predicate() const {
    // The bits are immutable, so a copy inside the closure is equivalent.
    return PredicateOracle(
        bits_.size(), [bits = bits_](std::size_t i) { return static_cast<bool>(bits[i]); },
        counter_);
}

ValueOracle::ValueOracle(std::vector<std::int64_t> values, std::shared_ptr<QueryCounter> counter)
    : values_(std::make_shared<const std::vector<std::int64_t>>(std::move(values))),
      counter_(counter ? std::move(counter) : std::make_shared<QueryCounter>()) {}

std::int64_t ValueOracle::query(std::size_t i) {
    const std::int64_t v = peek(i);
    counter_->charge(1);
    return v;
}

std::int64_t ValueOracle::peek(std::size_t i) const {
    if (i >= values_->size()) {
        throw IndexError("ValueOracle: index " + std::to_string(i) + " out of range");
    }
    return (*values_)[i];
}

PredicateOracle ValueOracle::below(std::int64_t threshold) const {
    return PredicateOracle(
        values_->size(),
        [values = values_, threshold](std::size_t i) { return (*values)[i] < threshold; },
        counter_);
}

StateVector::StateVector(std::vector<Amplitude> amps) : amps_(std::move(amps)) {
    if (amps_.empty()) {
        throw InvalidDimension("StateVector: dimension must be at least 1");
    }
    if (std::abs(norm_squared() - 1.0) > 1e-9) {
        throw NormalizationError("StateVector: amplitudes are not normalized");
    }
}

StateVector StateVector::basis(std::size_t dimension, std::size_t index) {
    if (dimension == 0) {
        throw InvalidDimension("StateVector::basis: dimension must be at least 1");
    }
    if (index >= dimension) {
        throw IndexError("StateVector::basis: index out of range");
    }
    std::vector<Amplitude> amps(dimension);
    amps[index] = 1.0;
    return StateVector(std::move(amps));
}

double StateVector::norm_squared() const {
    double total = 0.0;
    for (const auto& a : amps_) {
        total += std::norm(a);
    }
    return total;
}

double StateVector::probability_of(std::span<const std::size_t> subset) const {
    double total = 0.0;
    for (std::size_t i : subset) {
        if (i >= amps_.size()) {
            throw IndexError("StateVector::probability_of: index out of range");
        }
        total += std::norm(amps_[i]);
    }
    return total;
}

bool StateVector::renormalize_if_drifted(double tol) {
    const double n2 = norm_squared();
    if (std::abs(n2 - 1.0) <= tol) {
        return false;
    }
    const double scale = 1.0 / std::sqrt(n2);
    for (auto& a : amps_) {
        a *= scale;
    }
    return true;
}

StateVector uniform_state(std::size_t n) {
    if (n == 0) {
        throw InvalidDimension("uniform_state: basis size must be at least 1");
    }
    return StateVector(std::vector<Amplitude>(n, Amplitude{1.0 / std::sqrt(static_cast<double>(n)), 0.0}));
}

namespace detail {

void multiply_phase(StateVector& s, std::span<const std::size_t> marked, Amplitude phase) {
    const std::size_t dim = s.dimension();
    for (std::size_t i : marked) {
        if (i >= dim) {
            throw IndexError("phase oracle: marked index " + std::to_string(i) +
                             " out of range for dimension " + std::to_string(dim));
        }
    }
    for (std::size_t i : marked) {
        s[i] *= phase;
    }
}

} // namespace detail

void apply_diffusion(StateVector& s) {
    auto amps = s.amplitudes();
    const Amplitude sum = std::accumulate(amps.begin(), amps.end(), Amplitude{});
    const Amplitude twice_mean = 2.0 * sum / static_cast<double>(amps.size());
    for (auto& a : amps) {
        a = twice_mean - a;
    }
}

void apply_generalized_diffusion(StateVector& s, double psi) {
    auto amps = s.amplitudes();
    const double n = static_cast<double>(amps.size());
    // <u|a> u_i = sum(a) / n
    const Amplitude projection = std::accumulate(amps.begin(), amps.end(), Amplitude{}) / n;
    const Amplitude factor = Amplitude{1.0, 0.0} - std::polar(1.0, psi);
    const Amplitude shift = factor * projection;
    for (auto& a : amps) {
        a = shift - a;
    }
}

std::size_t measure(const StateVector& s, SeededRng& rng) {
    const double n2 = s.norm_squared();
    if (std::abs(n2 - 1.0) > 1e-6) {
        throw NormalizationError("measure: state norm deviates from 1 by more than 1e-6");
    }
    const auto amps = s.amplitudes();
    const double target = rng.uniform() * n2;
    double acc = 0.0;
    std::size_t last_nonzero = 0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        if (p > 0.0) {
            last_nonzero = i;
        }
        acc += p;
        if (target < acc) {
            return i;
        }
    }
    return last_nonzero;
}

std::size_t sample_weighted(std::span<const double> weights, double total, SeededRng& rng) {
    const double target = rng.uniform() * total;
    double acc = 0.0;
    std::size_t last_nonzero = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] > 0.0) {
            last_nonzero = i;
        }
        acc += weights[i];
        if (target < acc) {
            return i;
        }
    }
    return last_nonzero;
}

} // namespace qsearch
