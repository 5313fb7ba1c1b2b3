#include <algorithm>
#include <cmath>
#include <limits>

#include "isofield/error.hpp"
#include "isofield/simulate.hpp"

namespace isofield {

namespace {

double sorted_sum(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    long double s = 0.0L;
    for (double x : v) s += x;
    return static_cast<double>(s);
}

}  // namespace

MomentEstimate sample_covariance(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    require(n == y.size(), "sample_covariance: size mismatch");
    require(n >= 2, "sample_covariance: need at least two realizations");
    const double mx = sorted_sum(x) / static_cast<double>(n);
    const double my = sorted_sum(y) / static_cast<double>(n);
    std::vector<double> dx(n), dy(n), dxy(n);
    for (std::size_t i = 0; i < n; ++i) {
        dx[i] = x[i] - mx;
        dy[i] = y[i] - my;
        dxy[i] = dx[i] * dy[i];
    }
    const double sx = sorted_sum(dx), sy = sorted_sum(dy), sxy = sorted_sum(dxy);
    const double nd = static_cast<double>(n);
    MomentEstimate e;
    e.value = (sxy - sx * sy / nd) / (nd - 1.0);
    if (n < 3) {
        e.std_error = std::numeric_limits<double>::quiet_NaN();
        return e;
    }
    // Leave-one-out covariances.
    std::vector<double> theta(n);
    const double m = nd - 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = sx - dx[i], b = sy - dy[i], c = sxy - dxy[i];
        theta[i] = (c - a * b / m) / (m - 1.0);
    }
    const double mean = sorted_sum(theta) / nd;
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) sq[i] = (theta[i] - mean) * (theta[i] - mean);
    e.std_error = std::sqrt((nd - 1.0) / nd * sorted_sum(sq));
    return e;
}

std::vector<CorrelationEstimate> estimate_correlation(const FieldRealization& real,
                                                      const std::vector<std::pair<int, int>>& pairs) {
    require(real.realizations >= 2, "estimate_correlation: need at least two realizations");
    const int C = real.components;
    std::vector<CorrelationEstimate> out;
    std::vector<double> x(real.realizations), y(real.realizations);
    for (const auto& [p, q] : pairs) {
        require(p >= 0 && p < real.points && q >= 0 && q < real.points, "estimate_correlation: point index out of range");
        CorrelationEstimate e;
        e.p = p;
        e.q = q;
        e.value.resize(C, C);
        e.std_error.resize(C, C);
        for (int a = 0; a < C; ++a)
            for (int b = 0; b < C; ++b) {
                for (int r = 0; r < real.realizations; ++r) {
                    x[r] = real.at(r, p, a);
                    y[r] = real.at(r, q, b);
                }
                const MomentEstimate m = sample_covariance(x, y);
                e.value(a, b) = m.value;
                e.std_error(a, b) = m.std_error;
            }
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace isofield
