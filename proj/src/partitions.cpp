#include "sspkit/partitions.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace sspkit {

Partition::Partition(std::initializer_list<int> parts) : Partition(std::vector<int>(parts)) {}

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
    while (!parts_.empty() && parts_.back() == 0) parts_.pop_back();
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (parts_[i] <= 0) throw std::invalid_argument("partition parts must be positive");
        if (i > 0 && parts_[i] > parts_[i - 1]) throw std::invalid_argument("partition parts must be weakly decreasing");
        size_ += parts_[i];
    }
}

std::strong_ordering Partition::operator<=>(const Partition& o) const {
    if (size_ != o.size_) return size_ <=> o.size_;
    // larger parts first within a size
    return o.parts_ <=> parts_;
}

Partition conjugate(const Partition& lam) {
    if (lam.empty()) return {};
    std::vector<int> c(lam[0], 0);
    for (int p : lam.parts())
        for (int j = 0; j < p; ++j) ++c[j];
    return Partition(std::move(c));
}

FrobeniusCoords frobenius(const Partition& lam) {
    Partition c = conjugate(lam);
    FrobeniusCoords f;
    for (int i = 0; i < lam.length() && lam[i] > i; ++i) {
        f.a.push_back(lam[i] - i - 1);
        f.b.push_back(c[i] - i - 1);
    }
    return f;
}

Partition from_frobenius(const FrobeniusCoords& f) {
    if (f.a.size() != f.b.size()) throw std::invalid_argument("frobenius coordinates of unequal length");
    int d = static_cast<int>(f.a.size());
    if (d == 0) return {};
    std::vector<int> parts(d + f.b[0], 0);
    for (int i = 0; i < d; ++i) parts[i] = f.a[i] + i + 1;
    for (int j = 0; j < d; ++j)
        for (int r = d; r <= j + f.b[j]; ++r) parts[r] += 1;
    return Partition(std::move(parts));
}

bool contains(const Partition& lam, const Partition& mu) {
    if (mu.length() > lam.length()) return false;
    for (int i = 0; i < mu.length(); ++i)
        if (mu[i] > lam[i]) return false;
    return true;
}

bool is_horizontal_strip(const Partition& lam, const Partition& kappa) {
    if (!contains(lam, kappa)) return false;
    for (int i = 0; i + 1 < lam.length(); ++i)
        if (lam[i + 1] > kappa[i]) return false;
    return true;
}

bool is_vertical_strip(const Partition& lam, const Partition& kappa) {
    if (!contains(lam, kappa)) return false;
    for (int i = 0; i < lam.length(); ++i)
        if (lam[i] - kappa[i] > 1) return false;
    return true;
}

Partition intersect(const Partition& a, const Partition& b) {
    std::vector<int> p;
    for (int i = 0; i < std::min(a.length(), b.length()); ++i) p.push_back(std::min(a[i], b[i]));
    return Partition(std::move(p));
}

static void gen_parts(int n, int maxpart, int maxlen, std::vector<int>& cur, std::vector<Partition>& out) {
    if (n == 0) {
        out.emplace_back(cur);
        return;
    }
    if (maxlen == 0) return;
    for (int p = std::min(n, maxpart); p >= 1; --p) {
        cur.push_back(p);
        gen_parts(n - p, p, maxlen - 1, cur, out);
        cur.pop_back();
    }
}

std::vector<Partition> partitions_of(int n, int max_length) {
    std::vector<Partition> out;
    std::vector<int> cur;
    gen_parts(n, n, max_length < 0 ? n + 1 : max_length, cur, out);
    return out;  // parts descending lexicographically already
}

std::vector<Partition> enumerate_partitions(int max_size, int max_length) {
    std::vector<Partition> out;
    for (int n = 0; n <= max_size; ++n) {
        auto v = partitions_of(n, max_length);
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

std::vector<Partition> enumerate_frobenius_staircase(int max_size) {
    std::vector<Partition> out;
    for (const auto& p : enumerate_partitions(max_size)) {
        auto f = frobenius(p);
        bool ok = true;
        for (std::size_t i = 0; i < f.a.size(); ++i)
            if (f.b[i] != f.a[i] + 1) ok = false;
        if (ok) out.push_back(p);
    }
    return out;
}

static void gen_sub(const Partition& lam, int row, int bound, std::vector<int>& cur, std::vector<Partition>& out) {
    if (row == lam.length() || bound == 0) {
        out.emplace_back(cur);
        return;
    }
    for (int p = 0; p <= std::min(bound, lam[row]); ++p) {
        if (p == 0) {
            out.emplace_back(cur);
            continue;
        }
        cur.push_back(p);
        gen_sub(lam, row + 1, p, cur, out);
        cur.pop_back();
    }
}

std::vector<Partition> subpartitions(const Partition& lam) {
    std::vector<Partition> out;
    std::vector<int> cur;
    gen_sub(lam, 0, lam.empty() ? 0 : lam[0], cur, out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Partition> superpartitions(const Partition& mu, int max_size, int max_length) {
    std::vector<Partition> out;
    int budget = max_size - mu.size();
    if (budget < 0) return out;
    if (max_length >= 0 && mu.length() > max_length) return out;
    int maxlen = max_length < 0 ? mu.length() + budget : max_length;
    // rows of mu must all be present; generate row by row
    std::function<void(int, int, int, std::vector<int>&)> rec = [&](int row, int bound, int left, std::vector<int>& cur) {
        if (row >= mu.length()) {
            out.emplace_back(cur);
            if (row == maxlen) return;
            for (int p = 1; p <= std::min(bound, left); ++p) {
                cur.push_back(p);
                rec(row + 1, p, left - p, cur);
                cur.pop_back();
            }
            return;
        }
        for (int p = mu[row]; p <= bound && p - mu[row] <= left; ++p) {
            cur.push_back(p);
            rec(row + 1, p, left - (p - mu[row]), cur);
            cur.pop_back();
        }
    };
    std::vector<int> cur;
    rec(0, max_size, budget, cur);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Partition> add_horizontal_strip(const Partition& mu, int cells, int max_length) {
    std::vector<Partition> out;
    int rows = mu.length() + 1;
    if (max_length >= 0) rows = std::min(rows, max_length);
    if (rows < mu.length()) return out;
    std::vector<int> cur(rows, 0);
    std::function<void(int, int)> rec = [&](int row, int left) {
        if (row == rows) {
            if (left == 0) out.emplace_back(cur);
            return;
        }
        int cap = row == 0 ? left : std::min(left, mu[row - 1] - mu[row]);
        for (int a = 0; a <= cap; ++a) {
            cur[row] = mu[row] + a;
            rec(row + 1, left - a);
        }
    };
    if (rows == 0) {
        if (cells == 0) out.emplace_back();
        return out;
    }
    rec(0, cells);
    std::sort(out.begin(), out.end());
    return out;
}

std::string to_string(const Partition& lam) {
    std::string s = "(";
    for (int i = 0; i < lam.length(); ++i) {
        if (i) s += ",";
        s += std::to_string(lam[i]);
    }
    return s + ")";
}

}  // namespace sspkit
