#pragma once

#include <map>
#include <unordered_map>
#include <vector>

#include "sspkit/partitions.hpp"
#include "sspkit/series.hpp"

namespace sspkit {

GradedSeries determinant(const std::vector<std::vector<GradedSeries>>& m, int D);
Rational determinant(std::vector<std::vector<Rational>> m);

// Caches h_m for one specialization and truncation degree. Not thread-safe; use one per worker.
// With dual set, h_m is replaced by e_m, which evaluates the image under the Hall involution.
class SchurEvaluator {
public:
    SchurEvaluator(Specialization s, int D, bool dual = false);

    const Specialization& spec() const { return spec_; }
    int trunc() const { return D_; }

    GradedSeries h(int m);
    GradedSeries schur(const Partition& lam);
    const GradedSeries& skew(const Partition& lam, const Partition& mu);
    GradedSeries SP(const Partition& lam);
    GradedSeries SP_frobenius(const Partition& lam);

private:
    void grow(int m);

    Specialization spec_;
    int D_;
    bool dual_;
    std::vector<GradedSeries> htable_;
    GradedSeries zero_;
    std::unordered_map<Partition, std::unordered_map<Partition, GradedSeries>> skew_cache_;
};

GradedSeries complete_homogeneous(const Specialization& s, int m, int D);
GradedSeries schur_eval(const Partition& lam, const Specialization& s, int D);
GradedSeries skew_schur_eval(const Partition& lam, const Partition& mu, const Specialization& s, int D);
GradedSeries SP_eval(const Partition& lam, const Specialization& s, int D);
GradedSeries SP_eval_frobenius(const Partition& lam, const Specialization& s, int D);

// Letter codes: 2(i-1) for i, 2(i-1)+1 for i-bar.
using TableauRows = std::vector<std::vector<int>>;
std::vector<TableauRows> enumerate_symplectic_tableaux(const Partition& lam, int n);

class DegenerateDenominator : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

Rational sp_weyl(const Partition& lam, std::vector<Rational> x);
Rational sp_tableaux(const Partition& lam, std::vector<Rational> x);
// Weyl determinant, falling back to tableau enumeration when the denominator vanishes
Rational sp_poly_eval(const Partition& lam, const std::vector<Rational>& x);
bool SP_laurent_consistency(const Partition& lam, const std::vector<Rational>& x);

}  // namespace sspkit
