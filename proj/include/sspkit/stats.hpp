#pragma once

#include <map>
#include <vector>

namespace sspkit {

struct ChiSquareResult {
    double statistic = 0;
    int dof = 0;
    double p_value = 1;
};

// goodness of fit; cells with expected count below min_expected are pooled into one cell
ChiSquareResult chi_square_gof(const std::vector<double>& observed, const std::vector<double>& expected_prob,
                               double min_expected = 5.0);

// homogeneity of two count vectors over the same cells, sparse cells pooled
ChiSquareResult chi_square_two_sample(const std::vector<double>& a, const std::vector<double>& b,
                                      double min_expected = 5.0);

template <class Key>
std::pair<std::vector<double>, std::vector<double>> align_counts(const std::map<Key, double>& a,
                                                                 const std::map<Key, double>& b) {
    std::map<Key, std::pair<double, double>> all;
    for (const auto& [k, v] : a) all[k].first += v;
    for (const auto& [k, v] : b) all[k].second += v;
    std::vector<double> x, y;
    for (const auto& [k, v] : all) {
        x.push_back(v.first);
        y.push_back(v.second);
    }
    return {x, y};
}

struct MeanEstimate {
    double mean = 0;
    double se = 0;
};

MeanEstimate mean_estimate(const std::vector<double>& xs);

}  // namespace sspkit
