#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <string>
#include <vector>

namespace sspkit {

// Weakly decreasing positive parts; parts past the length read as 0.
class Partition {
public:
    Partition() = default;
    Partition(std::initializer_list<int> parts);
    explicit Partition(std::vector<int> parts);

    const std::vector<int>& parts() const { return parts_; }
    int length() const { return static_cast<int>(parts_.size()); }
    int size() const { return size_; }
    bool empty() const { return parts_.empty(); }
    // 0-based row index; 0 beyond the length
    int operator[](int i) const { return i < length() && i >= 0 ? parts_[i] : 0; }

    bool operator==(const Partition& o) const { return parts_ == o.parts_; }
    // canonical order: size, then parts lexicographically descending
    std::strong_ordering operator<=>(const Partition& o) const;

private:
    std::vector<int> parts_;
    int size_ = 0;
};

struct FrobeniusCoords {
    std::vector<int> a;
    std::vector<int> b;
    bool operator==(const FrobeniusCoords&) const = default;
};

Partition conjugate(const Partition& lam);
FrobeniusCoords frobenius(const Partition& lam);
Partition from_frobenius(const FrobeniusCoords& f);

// mu ⊆ lam
bool contains(const Partition& lam, const Partition& mu);
bool is_horizontal_strip(const Partition& lam, const Partition& kappa);
bool is_vertical_strip(const Partition& lam, const Partition& kappa);
Partition intersect(const Partition& a, const Partition& b);

std::vector<Partition> enumerate_partitions(int max_size, int max_length = -1);
std::vector<Partition> partitions_of(int n, int max_length = -1);
std::vector<Partition> enumerate_frobenius_staircase(int max_size);
// all mu ⊆ lam, canonical order
std::vector<Partition> subpartitions(const Partition& lam);
// all nu ⊇ mu with |nu| ≤ max_size and ℓ(nu) ≤ max_length
std::vector<Partition> superpartitions(const Partition& mu, int max_size, int max_length = -1);
// lam ⊇ mu with lam/mu a horizontal strip of the given size
std::vector<Partition> add_horizontal_strip(const Partition& mu, int cells, int max_length = -1);

std::string to_string(const Partition& lam);

}  // namespace sspkit

template <>
struct std::hash<sspkit::Partition> {
    std::size_t operator()(const sspkit::Partition& p) const noexcept {
        std::size_t h = 0x9e3779b97f4a7c15ULL;
        for (int v : p.parts()) h = (h ^ static_cast<std::size_t>(v)) * 0x100000001b3ULL + (h >> 7);
        return h;
    }
};
