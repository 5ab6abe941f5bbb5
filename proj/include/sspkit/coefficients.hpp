#pragma once

#include <map>
#include <utility>
#include <vector>

#include "sspkit/partitions.hpp"
#include "sspkit/schur.hpp"

namespace sspkit {

long long lr_coefficient(const Partition& lam, const Partition& mu, const Partition& nu);
// s_mu * s_nu expanded in the Schur basis, canonical order
std::vector<std::pair<Partition, long long>> schur_product(const Partition& mu, const Partition& nu);
long long nl_coefficient(const Partition& lam, const Partition& mu, const Partition& nu);

// admissible lengths |l(lam) - l(mu)| .. l(lam) + l(mu)
std::pair<int, int> nl_length_range(const Partition& lam, const Partition& mu);
// nu with nonzero-possible d^lam_{mu,nu}: size parity, size triangle, length triangle, |nu| <= max_size
std::vector<Partition> nl_triangle_filter(const Partition& lam, const Partition& mu, int max_size);

GradedSeries down_up(SchurEvaluator& ev, const Partition& lam, const Partition& mu);
GradedSeries down_up_d_route(SchurEvaluator& ev, const Partition& lam, const Partition& mu);
GradedSeries down_up_eval(const Partition& lam, const Partition& mu, const Specialization& s, int D);

// Schur evaluator plus memoized T values for one specialization. Not thread-safe.
class DownUpCache {
public:
    DownUpCache(const Specialization& s, int D, bool dual = false) : ev(s, D, dual) {}
    const GradedSeries& T(const Partition& a, const Partition& b);
    SchurEvaluator ev;

private:
    std::map<std::pair<Partition, Partition>, GradedSeries> cache_;
};

}  // namespace sspkit
