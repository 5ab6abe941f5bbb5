#include "sspkit/schur.hpp"

#include <bit>
#include <cstdint>

namespace sspkit {

GradedSeries determinant(const std::vector<std::vector<GradedSeries>>& m, int D) {
    int n = static_cast<int>(m.size());
    if (n == 0) return GradedSeries(D, 1);
    if (n == 1) return m[0][0].truncated(D);
    if (n > 20) throw std::invalid_argument("determinant too large");
    // Laplace expansion along rows, memoized on the set of used columns
    std::vector<GradedSeries> dp(std::size_t(1) << n);
    std::vector<char> live(dp.size(), 0);
    dp[0] = GradedSeries(D, 1);
    live[0] = 1;
    for (std::uint32_t S = 0; S < dp.size(); ++S) {
        if (!live[S]) continue;
        int r = std::popcount(S);
        if (r == n) continue;
        for (int c = 0; c < n; ++c) {
            if (S & (1u << c)) continue;
            const GradedSeries& e = m[r][c];
            if (e.is_zero()) continue;
            int above = std::popcount(S >> (c + 1));
            GradedSeries term = dp[S] * e;
            if (term.is_zero()) continue;
            std::uint32_t T = S | (1u << c);
            if (!live[T]) {
                dp[T] = GradedSeries(D);
                live[T] = 1;
            }
            if (above % 2) dp[T] -= term;
            else dp[T] += term;
        }
        if (r > 0) dp[S] = GradedSeries();
    }
    std::uint32_t full = (1u << n) - 1;
    return live[full] ? dp[full] : GradedSeries(D);
}

Rational determinant(std::vector<std::vector<Rational>> m) {
    int n = static_cast<int>(m.size());
    Rational det = 1;
    for (int c = 0; c < n; ++c) {
        int p = c;
        while (p < n && m[p][c] == 0) ++p;
        if (p == n) return 0;
        if (p != c) {
            std::swap(m[p], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (int r = c + 1; r < n; ++r) {
            if (m[r][c] == 0) continue;
            Rational f = m[r][c] / m[c][c];
            for (int k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return det;
}

SchurEvaluator::SchurEvaluator(Specialization s, int D, bool dual) : spec_(std::move(s)), D_(D), dual_(dual), zero_(D) {
    grow(8);
}

void SchurEvaluator::grow(int m) {
    int M = std::max(m, 2 * static_cast<int>(htable_.size()));
    std::vector<GradedSeries> h(M + 1, GradedSeries(D_));
    h[0][0] = 1;
    // multiply the generating function by 1/(1 - x t^g z), or by (1 + x t^g z) when dual, one variable at a time
    for (const auto& [x, g] : spec_.expanded()) {
        if (x == 0 || g > D_) continue;
        GradedSeries xt = GradedSeries::monomial(D_, x, g);
        if (dual_)
            for (int k = M; k >= 1; --k) h[k] += h[k - 1] * xt;
        else
            for (int k = 1; k <= M; ++k) h[k] += h[k - 1] * xt;
    }
    htable_ = std::move(h);
}

GradedSeries SchurEvaluator::h(int m) {
    if (m < 0) return zero_;
    if (m >= static_cast<int>(htable_.size())) grow(m);
    return htable_[m];
}

GradedSeries SchurEvaluator::schur(const Partition& lam) { return skew(lam, Partition{}); }

const GradedSeries& SchurEvaluator::skew(const Partition& lam, const Partition& mu) {
    auto& inner = skew_cache_[lam];
    auto it = inner.find(mu);
    if (it != inner.end()) return it->second;
    GradedSeries val(D_);
    if (contains(lam, mu)) {
        int n = lam.length();
        std::vector<std::vector<GradedSeries>> m(n, std::vector<GradedSeries>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m[i][j] = h(lam[i] - mu[j] - i + j);
        val = determinant(m, D_);
    }
    return inner.emplace(mu, std::move(val)).first->second;
}

GradedSeries SchurEvaluator::SP(const Partition& lam) {
    int n = lam.length();
    std::vector<std::vector<GradedSeries>> m(n, std::vector<GradedSeries>(n));
    for (int i = 0; i < n; ++i) {
        int r = i + 1;
        m[i][0] = h(lam[i] - r + 1);
        for (int j = 2; j <= n; ++j) m[i][j - 1] = h(lam[i] - r + j) + h(lam[i] - r - j + 2);
    }
    return determinant(m, D_);
}

GradedSeries SchurEvaluator::SP_frobenius(const Partition& lam) {
    GradedSeries sum(D_);
    for (const auto& alpha : enumerate_frobenius_staircase(lam.size())) {
        if (!contains(lam, alpha)) continue;
        if ((alpha.size() / 2) % 2) sum -= skew(lam, alpha);
        else sum += skew(lam, alpha);
    }
    return sum;
}

GradedSeries complete_homogeneous(const Specialization& s, int m, int D) { return SchurEvaluator(s, D).h(m); }

GradedSeries schur_eval(const Partition& lam, const Specialization& s, int D) { return SchurEvaluator(s, D).schur(lam); }

GradedSeries skew_schur_eval(const Partition& lam, const Partition& mu, const Specialization& s, int D) {
    return SchurEvaluator(s, D).skew(lam, mu);
}

GradedSeries SP_eval(const Partition& lam, const Specialization& s, int D) { return SchurEvaluator(s, D).SP(lam); }

GradedSeries SP_eval_frobenius(const Partition& lam, const Specialization& s, int D) {
    return SchurEvaluator(s, D).SP_frobenius(lam);
}

namespace {

void fill_tableaux(const Partition& lam, int n, int row, int col, TableauRows& cur, std::vector<TableauRows>& out) {
    if (row == lam.length()) {
        out.push_back(cur);
        return;
    }
    if (col == lam[row]) {
        fill_tableaux(lam, n, row + 1, 0, cur, out);
        return;
    }
    int lo = 2 * row;
    if (col > 0) lo = std::max(lo, cur[row][col - 1]);
    if (row > 0) lo = std::max(lo, cur[row - 1][col] + 1);
    for (int v = lo; v < 2 * n; ++v) {
        cur[row][col] = v;
        fill_tableaux(lam, n, row, col + 1, cur, out);
    }
}

Rational rpow(const Rational& x, int e) {
    Rational r = 1;
    Rational b = e >= 0 ? x : Rational(1 / x);
    for (int i = 0; i < std::abs(e); ++i) r *= b;
    return r;
}

}  // namespace

std::vector<TableauRows> enumerate_symplectic_tableaux(const Partition& lam, int n) {
    std::vector<TableauRows> out;
    if (lam.length() > n) return out;
    TableauRows cur(lam.length());
    for (int r = 0; r < lam.length(); ++r) cur[r].assign(lam[r], 0);
    fill_tableaux(lam, n, 0, 0, cur, out);
    return out;
}

Rational sp_weyl(const Partition& lam, std::vector<Rational> x) {
    for (auto& q : x) q.canonicalize();
    int n = static_cast<int>(x.size());
    if (lam.length() > n) return 0;
    std::vector<std::vector<Rational>> num(n, std::vector<Rational>(n)), den(n, std::vector<Rational>(n));
    for (int i = 0; i < n; ++i) {
        if (x[i] == 0) throw std::invalid_argument("symplectic variables must be nonzero");
        for (int j = 0; j < n; ++j) {
            int e = lam[j] + n - j;
            num[i][j] = rpow(x[i], e) - rpow(x[i], -e);
            den[i][j] = rpow(x[i], n - j) - rpow(x[i], -(n - j));
        }
    }
    Rational d = determinant(den);
    if (d == 0) throw DegenerateDenominator("Weyl denominator vanishes");
    return determinant(num) / d;
}

Rational sp_tableaux(const Partition& lam, std::vector<Rational> x) {
    for (auto& q : x) q.canonicalize();
    int n = static_cast<int>(x.size());
    Rational total = 0;
    for (const auto& T : enumerate_symplectic_tableaux(lam, n)) {
        std::vector<int> wt(n, 0);
        for (const auto& row : T)
            for (int c : row) wt[c / 2] += (c % 2) ? -1 : 1;
        Rational term = 1;
        for (int i = 0; i < n; ++i) term *= rpow(x[i], wt[i]);
        total += term;
    }
    return total;
}

Rational sp_poly_eval(const Partition& lam, const std::vector<Rational>& x) {
    try {
        return sp_weyl(lam, x);
    } catch (const DegenerateDenominator&) {
        return sp_tableaux(lam, x);
    }
}

bool SP_laurent_consistency(const Partition& lam, const std::vector<Rational>& x) {
    auto v = SP_eval(lam, Specialization::laurent(x, 0), 0);
    return v[0] == sp_poly_eval(lam, x);
}

}  // namespace sspkit
