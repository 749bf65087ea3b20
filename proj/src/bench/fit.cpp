#include <qsearch/bench.hpp>

#include <algorithm>
#include <cmath>

namespace qsearch {

namespace {

ScalingFit least_squares(const std::vector<std::pair<double, double>>& xy, double min_size, double max_size) {
    const double n = static_cast<double>(xy.size());
    double sx = 0.0;
    double sy = 0.0;
    for (const auto& [x, y] : xy) {
        sx += x;
        sy += y;
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (const auto& [x, y] : xy) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if (sxx == 0.0) {
        throw FitError("fit: sizes must not all be equal");
    }
    ScalingFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss = 0.0;
    for (const auto& [x, y] : xy) {
        const double r = y - (fit.intercept + fit.slope * x);
        ss += r * r;
    }
    fit.rms_residual = std::sqrt(ss / n);
    fit.min_size = min_size;
    fit.max_size = max_size;
    return fit;
}

void check_points(const std::vector<std::pair<double, double>>& points, bool size_positive) {
    if (points.size() < 3) {
        throw FitError("fit: need at least 3 points");
    }
    for (const auto& [x, y] : points) {
        if (!(y > 0.0) || (size_positive && !(x > 0.0)) || !std::isfinite(x) || !std::isfinite(y)) {
            throw FitError("fit: sizes and costs must be positive and finite");
        }
    }
}

} // namespace

ScalingFit fit_exponent(const std::vector<std::pair<double, double>>& points) {
    check_points(points, true);
    std::vector<std::pair<double, double>> logs;
    double lo = points.front().first;
    double hi = lo;
    for (const auto& [x, y] : points) {
        logs.emplace_back(std::log(x), std::log(y));
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    return least_squares(logs, lo, hi);
}

ScalingFit fit_log_linear(const std::vector<std::pair<double, double>>& points) {
    check_points(points, false);
    std::vector<std::pair<double, double>> xy;
    double lo = points.front().first;
    double hi = lo;
    for (const auto& [x, y] : points) {
        xy.emplace_back(x, std::log(y));
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    return least_squares(xy, lo, hi);
}

} // namespace qsearch
