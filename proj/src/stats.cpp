#include "sspkit/stats.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sspkit {

namespace {

double upper_tail(double stat, int dof) {
    if (dof <= 0) return 1.0;
    boost::math::chi_squared dist(dof);
    return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace

ChiSquareResult chi_square_gof(const std::vector<double>& observed, const std::vector<double>& expected_prob,
                               double min_expected) {
    if (observed.size() != expected_prob.size()) throw std::invalid_argument("size mismatch");
    double n = std::accumulate(observed.begin(), observed.end(), 0.0);
    double psum = std::accumulate(expected_prob.begin(), expected_prob.end(), 0.0);
    std::vector<std::pair<double, double>> cells;
    double pool_o = 0;
    double pool_e = n * std::max(0.0, 1.0 - psum);
    for (std::size_t i = 0; i < observed.size(); ++i) {
        double e = n * expected_prob[i];
        if (e < min_expected) {
            pool_o += observed[i];
            pool_e += e;
        } else {
            cells.push_back({observed[i], e});
        }
    }
    if (pool_e > 0 || pool_o > 0) cells.push_back({pool_o, pool_e});
    ChiSquareResult r;
    for (auto [o, e] : cells) {
        if (e <= 0) {
            if (o > 0) r.statistic = INFINITY;
            continue;
        }
        r.statistic += (o - e) * (o - e) / e;
    }
    r.dof = static_cast<int>(cells.size()) - 1;
    r.p_value = std::isinf(r.statistic) ? 0.0 : upper_tail(r.statistic, r.dof);
    return r;
}

ChiSquareResult chi_square_two_sample(const std::vector<double>& a, const std::vector<double>& b,
                                      double min_expected) {
    if (a.size() != b.size()) throw std::invalid_argument("size mismatch");
    double na = std::accumulate(a.begin(), a.end(), 0.0), nb = std::accumulate(b.begin(), b.end(), 0.0);
    double n = na + nb;
    std::vector<std::pair<double, double>> cells;
    double pa = 0, pb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double tot = a[i] + b[i];
        if (tot * std::min(na, nb) / n < min_expected) {
            pa += a[i];
            pb += b[i];
        } else {
            cells.push_back({a[i], b[i]});
        }
    }
    if (pa + pb > 0) cells.push_back({pa, pb});
    ChiSquareResult r;
    for (auto [x, y] : cells) {
        double tot = x + y;
        double ea = tot * na / n, eb = tot * nb / n;
        r.statistic += (x - ea) * (x - ea) / ea + (y - eb) * (y - eb) / eb;
    }
    r.dof = static_cast<int>(cells.size()) - 1;
    r.p_value = upper_tail(r.statistic, r.dof);
    return r;
}

MeanEstimate mean_estimate(const std::vector<double>& xs) {
    MeanEstimate m;
    if (xs.empty()) return m;
    double n = static_cast<double>(xs.size());
    m.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
    double ss = 0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.se = xs.size() > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0;
    return m;
}

}  // namespace sspkit
