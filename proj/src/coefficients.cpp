#include "sspkit/coefficients.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <unordered_map>

namespace sspkit {

namespace {

using Combination = std::unordered_map<Partition, long long>;

struct PieriKey {
    Partition start;
    std::vector<int> strips;
    bool operator<(const PieriKey& o) const {
        if (start != o.start) return start < o.start;
        return strips < o.strips;
    }
};

std::mutex pieri_mutex;
std::map<PieriKey, Combination> pieri_memo;
std::mutex product_mutex;
std::map<std::pair<Partition, Partition>, std::vector<std::pair<Partition, long long>>> product_memo;
std::mutex nl_mutex;
std::map<std::vector<Partition>, long long> nl_memo;

// s_start * h_{strips[0]} * h_{strips[1]} * ...
Combination pieri_chain(const Partition& start, const std::vector<int>& strips) {
    if (strips.empty()) return {{start, 1}};
    PieriKey key{start, strips};
    {
        std::lock_guard lock(pieri_mutex);
        auto it = pieri_memo.find(key);
        if (it != pieri_memo.end()) return it->second;
    }
    Combination out;
    std::vector<int> rest(strips.begin() + 1, strips.end());
    for (const auto& k : add_horizontal_strip(start, strips[0]))
        for (const auto& [p, c] : pieri_chain(k, rest)) out[p] += c;
    std::lock_guard lock(pieri_mutex);
    pieri_memo.emplace(key, out);
    return out;
}

}  // namespace

std::vector<std::pair<Partition, long long>> schur_product(const Partition& mu, const Partition& nu) {
    const Partition& a = std::max(mu, nu);
    const Partition& b = std::min(mu, nu);
    auto key = std::make_pair(a, b);
    {
        std::lock_guard lock(product_mutex);
        auto it = product_memo.find(key);
        if (it != product_memo.end()) return it->second;
    }
    // Jacobi-Trudi expansion of s_b into h-monomials, each applied to s_a by Pieri
    int n = b.length();
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    Combination total;
    do {
        int inversions = 0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (perm[i] > perm[j]) ++inversions;
        std::vector<int> strips;
        bool ok = true;
        for (int i = 0; i < n && ok; ++i) {
            int m = b[i] - i + perm[i];
            if (m < 0) ok = false;
            else if (m > 0) strips.push_back(m);
        }
        if (!ok) continue;
        std::sort(strips.rbegin(), strips.rend());
        long long sign = inversions % 2 ? -1 : 1;
        for (const auto& [p, c] : pieri_chain(a, strips)) total[p] += sign * c;
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::vector<std::pair<Partition, long long>> out;
    for (const auto& [p, c] : total)
        if (c != 0) out.emplace_back(p, c);
    std::sort(out.begin(), out.end());
    std::lock_guard lock(product_mutex);
    product_memo.emplace(key, out);
    return out;
}

long long lr_coefficient(const Partition& lam, const Partition& mu, const Partition& nu) {
    if (lam.size() != mu.size() + nu.size() || !contains(lam, mu) || !contains(lam, nu)) return 0;
    for (const auto& [p, c] : schur_product(mu, nu))
        if (p == lam) return c;
    return 0;
}

long long nl_coefficient(const Partition& lam, const Partition& mu, const Partition& nu) {
    int s = lam.size() + mu.size() + nu.size();
    if (s % 2) return 0;
    int b = s / 2 - nu.size(), a = s / 2 - mu.size(), g = s / 2 - lam.size();
    if (a < 0 || b < 0 || g < 0) return 0;
    std::vector<Partition> key{lam, mu, nu};
    std::sort(key.begin(), key.end());
    {
        std::lock_guard lock(nl_mutex);
        auto it = nl_memo.find(key);
        if (it != nl_memo.end()) return it->second;
    }
    long long total = 0;
    auto sized = [](const std::vector<Partition>& v, int n) {
        std::vector<Partition> out;
        for (const auto& p : v)
            if (p.size() == n) out.push_back(p);
        return out;
    };
    auto alphas = sized(subpartitions(intersect(lam, nu)), a);
    auto betas = sized(subpartitions(intersect(lam, mu)), b);
    auto gammas = sized(subpartitions(intersect(mu, nu)), g);
    for (const auto& be : betas)
        for (const auto& al : alphas) {
            long long c1 = lr_coefficient(lam, al, be);
            if (!c1) continue;
            for (const auto& ga : gammas) {
                long long c2 = lr_coefficient(mu, ga, be);
                if (!c2) continue;
                total += c1 * c2 * lr_coefficient(nu, al, ga);
            }
        }
    std::lock_guard lock(nl_mutex);
    nl_memo.emplace(key, total);
    return total;
}

std::pair<int, int> nl_length_range(const Partition& lam, const Partition& mu) {
    return {std::abs(lam.length() - mu.length()), lam.length() + mu.length()};
}

std::vector<Partition> nl_triangle_filter(const Partition& lam, const Partition& mu, int max_size) {
    auto [lo, hi] = nl_length_range(lam, mu);
    int cap = std::min(max_size, lam.size() + mu.size());
    std::vector<Partition> out;
    for (const auto& nu : enumerate_partitions(cap, hi)) {
        if (nu.length() < lo) continue;
        if ((lam.size() + mu.size() + nu.size()) % 2) continue;
        if (nu.size() < std::abs(lam.size() - mu.size())) continue;
        out.push_back(nu);
    }
    return out;
}

GradedSeries down_up(SchurEvaluator& ev, const Partition& lam, const Partition& mu) {
    GradedSeries sum(ev.trunc());
    for (const auto& alpha : subpartitions(intersect(lam, mu))) {
        const auto& a = ev.skew(lam, alpha);
        if (a.is_zero()) continue;
        sum += a * ev.skew(mu, alpha);
    }
    return sum;
}

GradedSeries down_up_d_route(SchurEvaluator& ev, const Partition& lam, const Partition& mu) {
    GradedSeries sum(ev.trunc());
    for (const auto& nu : nl_triangle_filter(lam, mu, lam.size() + mu.size())) {
        long long d = nl_coefficient(lam, mu, nu);
        if (d) sum += ev.schur(nu) * Rational(static_cast<long>(d));
    }
    return sum;
}

const GradedSeries& DownUpCache::T(const Partition& a, const Partition& b) {
    auto key = std::make_pair(a, b);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    return cache_.emplace(key, down_up(ev, a, b)).first->second;
}

GradedSeries down_up_eval(const Partition& lam, const Partition& mu, const Specialization& s, int D) {
    SchurEvaluator ev(s, D);
    return down_up(ev, lam, mu);
}

}  // namespace sspkit
