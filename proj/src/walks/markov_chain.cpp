#include <qsearch/walks.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>

namespace qsearch {

namespace {

using Rows = std::vector<std::vector<MarkovChain::Entry>>;

Rows rows_from_maps(const std::vector<std::map<std::size_t, double>>& maps) {
    Rows rows(maps.size());
    for (std::size_t x = 0; x < maps.size(); ++x) {
        for (const auto& [y, p] : maps[x]) {
            rows[x].push_back({y, p});
        }
    }
    return rows;
}

} // namespace

MarkovChain MarkovChain::from_rows(Rows rows, std::vector<std::size_t> marked, double tol,
                                   std::optional<double> known_gap) {
    const std::size_t s = rows.size();
    if (s == 0) {
        throw InvalidDimension("MarkovChain: at least one state required");
    }
    MarkovChain chain;
    chain.row_ptr_.assign(1, 0);
    for (std::size_t x = 0; x < s; ++x) {
        double sum = 0.0;
        std::size_t prev = 0;
        bool first = true;
        for (const Entry& e : rows[x]) {
            if (e.col >= s) {
                throw IndexError("MarkovChain: column index out of range");
            }
            if (!first && e.col <= prev) {
                throw ParameterError("MarkovChain: row entries must be sorted by column");
            }
            if (e.p < 0.0 || !std::isfinite(e.p)) {
                throw ParameterError("MarkovChain: negative or non-finite transition probability");
            }
            first = false;
            prev = e.col;
            sum += e.p;
            if (e.p > 0.0) {
                chain.entries_.push_back(e);
            }
        }
        if (std::abs(sum - 1.0) > tol) {
            throw ParameterError("MarkovChain: row " + std::to_string(x) + " sums to " + std::to_string(sum));
        }
        chain.row_ptr_.push_back(chain.entries_.size());
    }
    for (std::size_t x = 0; x < s; ++x) {
        for (const Entry& e : chain.row(x)) {
            if (std::abs(chain.probability(e.col, x) - e.p) > tol) {
                throw ParameterError("MarkovChain: transition matrix is not symmetric at (" + std::to_string(x) +
                                     ", " + std::to_string(e.col) + ")");
            }
        }
    }
    std::sort(marked.begin(), marked.end());
    marked.erase(std::unique(marked.begin(), marked.end()), marked.end());
    chain.marked_flags_.assign(s, false);
    for (std::size_t m : marked) {
        if (m >= s) {
            throw IndexError("MarkovChain: marked state out of range");
        }
        chain.marked_flags_[m] = true;
    }
    chain.marked_ = std::move(marked);
    if (known_gap) {
        std::call_once(chain.gap_->once, [&] { chain.gap_->value = *known_gap; });
    }
    return chain;
}

MarkovChain MarkovChain::from_dense(const std::vector<std::vector<double>>& p, std::vector<std::size_t> marked,
                                    double tol) {
    Rows rows(p.size());
    for (std::size_t x = 0; x < p.size(); ++x) {
        if (p[x].size() != p.size()) {
            throw InvalidDimension("MarkovChain::from_dense: matrix must be square");
        }
        for (std::size_t y = 0; y < p.size(); ++y) {
            if (p[x][y] != 0.0) {
                rows[x].push_back({y, p[x][y]});
            }
        }
    }
    return from_rows(std::move(rows), std::move(marked), tol);
}

MarkovChain MarkovChain::parse(std::istream& in) {
    std::size_t s = 0;
    if (!(in >> s) || s == 0) {
        throw ParseError("chain file: expected a positive state count on the first line");
    }
    std::vector<std::vector<double>> p(s, std::vector<double>(s));
    for (std::size_t x = 0; x < s; ++x) {
        for (std::size_t y = 0; y < s; ++y) {
            if (!(in >> p[x][y])) {
                throw ParseError("chain file: row " + std::to_string(x) + " is short or malformed");
            }
        }
    }
    std::vector<std::size_t> marked;
    std::string token;
    while (in >> token) {
        try {
            std::size_t used = 0;
            const long long v = std::stoll(token, &used);
            if (used != token.size() || v < 0) {
                throw std::invalid_argument(token);
            }
            marked.push_back(static_cast<std::size_t>(v));
        } catch (const std::exception&) {
            throw ParseError("chain file: bad marked index '" + token + "'");
        }
    }

    constexpr double kInputTol = 1e-9;
    for (std::size_t x = 0; x < s; ++x) {
        double sum = 0.0;
        for (std::size_t y = 0; y < s; ++y) {
            if (p[x][y] < -kInputTol) {
                throw ParameterError("chain file: negative entry in row " + std::to_string(x));
            }
            if (std::abs(p[x][y] - p[y][x]) > kInputTol) {
                throw ParameterError("chain file: matrix is not symmetric");
            }
            sum += p[x][y];
        }
        if (std::abs(sum - 1.0) > kInputTol) {
            throw ParameterError("chain file: row " + std::to_string(x) + " is not stochastic");
        }
    }
    // Clean up within-tolerance noise: symmetrize, then fix row sums on the diagonal.
    for (std::size_t x = 0; x < s; ++x) {
        for (std::size_t y = x + 1; y < s; ++y) {
            const double avg = std::max(0.0, 0.5 * (p[x][y] + p[y][x]));
            p[x][y] = p[y][x] = avg;
        }
    }
    for (std::size_t x = 0; x < s; ++x) {
        double off = 0.0;
        for (std::size_t y = 0; y < s; ++y) {
            if (y != x) {
                off += p[x][y];
            }
        }
        p[x][x] = std::max(0.0, 1.0 - off);
    }
    return from_dense(p, std::move(marked));
}

MarkovChain MarkovChain::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open chain file " + path);
    }
    return parse(in);
}

MarkovChain MarkovChain::cycle(std::size_t s, double holding, std::vector<std::size_t> marked) {
    if (s < 2) {
        throw ParameterError("MarkovChain::cycle: need at least 2 states");
    }
    if (holding < 0.0 || holding >= 1.0) {
        throw ParameterError("MarkovChain::cycle: holding probability must lie in [0, 1)");
    }
    std::vector<std::map<std::size_t, double>> maps(s);
    for (std::size_t x = 0; x < s; ++x) {
        if (holding > 0.0) {
            maps[x][x] += holding;
        }
        maps[x][(x + 1) % s] += 0.5 * (1.0 - holding);
        maps[x][(x + s - 1) % s] += 0.5 * (1.0 - holding);
    }
    return from_rows(rows_from_maps(maps), std::move(marked));
}

MarkovChain MarkovChain::torus(std::size_t side, double holding, std::vector<std::size_t> marked) {
    if (side < 2) {
        throw ParameterError("MarkovChain::torus: side must be at least 2");
    }
    if (holding < 0.0 || holding >= 1.0) {
        throw ParameterError("MarkovChain::torus: holding probability must lie in [0, 1)");
    }
    const std::size_t s = side * side;
    const double move = 0.25 * (1.0 - holding);
    std::vector<std::map<std::size_t, double>> maps(s);
    for (std::size_t i = 0; i < side; ++i) {
        for (std::size_t j = 0; j < side; ++j) {
            const std::size_t x = i * side + j;
            if (holding > 0.0) {
                maps[x][x] += holding;
            }
            maps[x][((i + 1) % side) * side + j] += move;
            maps[x][((i + side - 1) % side) * side + j] += move;
            maps[x][i * side + (j + 1) % side] += move;
            maps[x][i * side + (j + side - 1) % side] += move;
        }
    }
    return from_rows(rows_from_maps(maps), std::move(marked));
}

MarkovChain MarkovChain::complete(std::size_t s, std::vector<std::size_t> marked) {
    if (s < 2) {
        throw ParameterError("MarkovChain::complete: need at least 2 states");
    }
    Rows rows(s);
    const double p = 1.0 / static_cast<double>(s - 1);
    for (std::size_t x = 0; x < s; ++x) {
        for (std::size_t y = 0; y < s; ++y) {
            if (y != x) {
                rows[x].push_back({y, p});
            }
        }
    }
    // The gap is 1 + 1/(S-1): the second eigenvalue is -1/(S-1).
    return from_rows(std::move(rows), std::move(marked), 1e-12, 1.0 + p);
}

double MarkovChain::probability(std::size_t x, std::size_t y) const {
    if (x >= states() || y >= states()) {
        throw IndexError("MarkovChain::probability: state out of range");
    }
    const auto r = row(x);
    const auto it = std::lower_bound(r.begin(), r.end(), y, [](const Entry& e, std::size_t c) { return e.col < c; });
    return (it != r.end() && it->col == y) ? it->p : 0.0;
}

double MarkovChain::delta() const {
    return static_cast<double>(marked_.size()) / static_cast<double>(states());
}

double MarkovChain::gap() const {
    std::call_once(gap_->once, [this] { gap_->value = 1.0 - second_eigenvalue(*this); });
    return gap_->value;
}

std::vector<std::vector<double>> MarkovChain::dense() const {
    std::vector<std::vector<double>> p(states(), std::vector<double>(states()));
    for (std::size_t x = 0; x < states(); ++x) {
        for (const Entry& e : row(x)) {
            p[x][e.col] = e.p;
        }
    }
    return p;
}

namespace {

/// Number of eigenvalues of the symmetric tridiagonal (a, b) below x.
std::size_t sturm_count(const std::vector<double>& a, const std::vector<double>& b, double x) {
    std::size_t count = 0;
    double q = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double off = i == 0 ? 0.0 : b[i - 1] * b[i - 1];
        q = a[i] - x - (i == 0 ? 0.0 : off / q);
        if (q == 0.0) {
            q = -1e-300;
        }
        if (q < 0.0) {
            ++count;
        }
    }
    return count;
}

double largest_tridiagonal_eigenvalue(const std::vector<double>& a, const std::vector<double>& b) {
    double lo = a[0];
    double hi = a[0];
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double r = (i > 0 ? std::abs(b[i - 1]) : 0.0) + (i < b.size() ? std::abs(b[i]) : 0.0);
        lo = std::min(lo, a[i] - r);
        hi = std::max(hi, a[i] + r);
    }
    hi += 1e-12;
    lo -= 1e-12;
    const std::size_t m = a.size();
    for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (sturm_count(a, b, mid) == m) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

void multiply(const MarkovChain& chain, const std::vector<double>& v, std::vector<double>& out) {
    for (std::size_t x = 0; x < chain.states(); ++x) {
        double acc = 0.0;
        for (const auto& e : chain.row(x)) {
            acc += e.p * v[e.col];
        }
        out[x] = acc;
    }
}

void remove_mean(std::vector<double>& v) {
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    for (double& x : v) {
        x -= mean;
    }
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

} // namespace

double second_eigenvalue(const MarkovChain& chain, std::size_t max_iterations) {
    const std::size_t s = chain.states();
    if (s == 1) {
        return 0.0;
    }
    const std::size_t m = std::min(s - 1, std::max<std::size_t>(max_iterations, 1));

    SeededRng rng(0x6c616e637a6f73ULL, s);
    std::vector<std::vector<double>> basis;
    basis.reserve(m);
    std::vector<double> v(s);
    for (double& x : v) {
        x = rng.uniform() - 0.5;
    }
    remove_mean(v);
    double norm = std::sqrt(dot(v, v));
    for (double& x : v) {
        x /= norm;
    }

    std::vector<double> alpha;
    std::vector<double> beta;
    std::vector<double> w(s);
    for (std::size_t j = 0; j < m; ++j) {
        basis.push_back(v);
        multiply(chain, basis[j], w);
        remove_mean(w);
        alpha.push_back(dot(basis[j], w));
        // Full reorthogonalization, twice, against every Lanczos vector.
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& q : basis) {
                const double c = dot(q, w);
                for (std::size_t i = 0; i < s; ++i) {
                    w[i] -= c * q[i];
                }
            }
        }
        norm = std::sqrt(dot(w, w));
        if (j + 1 == m || norm < 1e-12) {
            break;
        }
        beta.push_back(norm);
        for (std::size_t i = 0; i < s; ++i) {
            v[i] = w[i] / norm;
        }
    }
    beta.resize(alpha.size() - 1);
    return largest_tridiagonal_eigenvalue(alpha, beta);
}

} // namespace qsearch
