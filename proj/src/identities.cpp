#include "sspkit/identities.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <memory>

#include "sspkit/coefficients.hpp"
#include "sspkit/schur.hpp"

namespace sspkit {

namespace {

struct Entry {
    IdentityId id;
    const char* name;
    int arity;
};

const Entry kEntries[] = {
    {IdentityId::SchurBranch, "SCHUR-BRANCH", 2},
    {IdentityId::SchurSkewCauchy, "SCHUR-SKEW-CAUCHY", 2},
    {IdentityId::CauchyLittlewoodSp, "CL-SP", 0},
    {IdentityId::CauchyLittlewoodUniversal, "CL-UNIV", 0},
    {IdentityId::BranchSP, "BRANCH-SP", 1},
    {IdentityId::BranchT, "BRANCH-T", 2},
    {IdentityId::SkewDownUpCauchy, "SKEW-DU-CAUCHY", 2},
    {IdentityId::TSimple, "T-SIMPLE", 1},
    {IdentityId::GeneralizedCauchyLittlewood, "GEN-CL", 1},
    {IdentityId::GeneralizedCauchyLittlewoodFinite, "GEN-CL-FIN", 1},
    {IdentityId::DualCauchyLittlewood, "DUAL-CL", 1},
    {IdentityId::PartitionFunction, "PARTFN", 0},
};

const Entry& entry(IdentityId id) {
    for (const auto& e : kEntries)
        if (e.id == id) return e;
    throw std::invalid_argument("unknown identity");
}

// degree contributed per unit of size by a factor evaluated at s; an Empty factor forbids any size change
int unit_degree(const Specialization& s, int D) { return s.is_empty() ? D + 1 : s.min_grade(); }

int ordinary_count(const Specialization& s) { return static_cast<int>(s.expanded().size()); }

struct Plan {
    std::function<int(int)> lower_bound;  // degree lower bound for a summation index of size n
    std::function<GradedSeries(int)> lhs;  // lhs with summation sizes <= cap
    std::function<GradedSeries()> rhs;
    std::string justification;
    bool finite = false;
};

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

std::vector<Rational> laurent_values(const Specialization& x) {
    std::vector<Rational> v;
    for (const auto& var : x.vars()) {
        require(var.laurent && var.grade == 0, "finite symplectic identities need grade-0 Laurent x variables");
        v.push_back(var.value);
    }
    return v;
}

Partition union_shape(const Partition& a, const Partition& b) {
    std::vector<int> p;
    for (int i = 0; i < std::max(a.length(), b.length()); ++i) p.push_back(std::max(a[i], b[i]));
    return Partition(p);
}

Plan make_plan(IdentityId id, const std::vector<Partition>& P, const std::vector<Specialization>& S, int D) {
    Plan plan;
    auto spec_count = [&](std::size_t n) { require(S.size() == n, identity_name(id) + ": wrong number of specializations"); };
    require(static_cast<int>(P.size()) == identity_partition_arity(id), identity_name(id) + ": wrong number of partitions");
    switch (id) {
        case IdentityId::SchurBranch: {
            spec_count(2);
            auto x = std::make_shared<SchurEvaluator>(S[0], D), y = std::make_shared<SchurEvaluator>(S[1], D);
            Partition lam = P[0], mu = P[1];
            plan.finite = true;
            plan.lower_bound = [lam](int n) { return n <= lam.size() ? 0 : 1 << 20; };
            plan.lhs = [=](int) {
                GradedSeries sum(D);
                for (const auto& nu : subpartitions(lam))
                    if (contains(nu, mu)) sum += x->skew(lam, nu) * y->skew(nu, mu);
                return sum;
            };
            plan.rhs = [=] { return skew_schur_eval(lam, mu, S[0] + S[1], D); };
            plan.justification = "finite sum over mu ⊆ nu ⊆ lambda";
            break;
        }
        case IdentityId::SchurSkewCauchy: {
            spec_count(2);
            auto x = std::make_shared<SchurEvaluator>(S[0], D), y = std::make_shared<SchurEvaluator>(S[1], D);
            Partition rho = P[0], eta = P[1];
            int gx = unit_degree(S[0], D), gy = unit_degree(S[1], D);
            plan.lower_bound = [=](int n) { return std::max(0, n - rho.size()) * gx + std::max(0, n - eta.size()) * gy; };
            plan.lhs = [=](int cap) {
                GradedSeries sum(D);
                for (const auto& lam : superpartitions(union_shape(rho, eta), cap)) {
                    const auto& a = x->skew(lam, rho);
                    if (a.is_zero()) continue;
                    sum += a * y->skew(lam, eta);
                }
                return sum;
            };
            plan.rhs = [=] {
                GradedSeries sum(D);
                for (const auto& k : subpartitions(intersect(rho, eta))) sum += y->skew(rho, k) * x->skew(eta, k);
                return H(S[0], S[1], D) * sum;
            };
            plan.justification = "term degree >= (|lambda|-|rho|)*grade(x) + (|lambda|-|eta|)*grade(y)";
            break;
        }
        case IdentityId::CauchyLittlewoodSp: {
            spec_count(2);
            auto xs = laurent_values(S[0]);
            int k = ordinary_count(S[1]);
            require(!S[1].has_laurent(), "CL-SP: y must be ordinary variables");
            require(static_cast<int>(xs.size()) >= k, "CL-SP needs n >= k");
            auto y = std::make_shared<SchurEvaluator>(S[1], D);
            int gy = unit_degree(S[1], D);
            plan.lower_bound = [=](int n) { return n * gy; };
            plan.lhs = [=](int cap) {
                GradedSeries sum(D);
                for (const auto& mu : enumerate_partitions(cap, k)) sum += y->schur(mu) * sp_poly_eval(mu, xs);
                return sum;
            };
            plan.rhs = [=] { return G(S[1], D) * H(S[0], S[1], D); };
            plan.justification = "term degree >= |mu|*grade(y)";
            break;
        }
        case IdentityId::CauchyLittlewoodUniversal: {
            spec_count(2);
            auto x = std::make_shared<SchurEvaluator>(S[0], D), y = std::make_shared<SchurEvaluator>(S[1], D);
            int gy = unit_degree(S[1], D);
            int ylen = ordinary_count(S[1]);
            plan.lower_bound = [=](int n) { return n * gy; };
            plan.lhs = [=](int cap) {
                GradedSeries sum(D);
                for (const auto& mu : enumerate_partitions(cap, ylen)) sum += x->SP(mu) * y->schur(mu);
                return sum;
            };
            plan.rhs = [=] { return G(S[1], D) * H(S[0], S[1], D); };
            plan.justification = "term degree >= |mu|*grade(y); s_mu(y) = 0 beyond the variable count";
            break;
        }
        case IdentityId::BranchSP: {
            spec_count(2);
            auto y = std::make_shared<SchurEvaluator>(S[0], D), z = std::make_shared<SchurEvaluator>(S[1], D);
            Partition lam = P[0];
            plan.finite = true;
            plan.lower_bound = [lam](int n) { return n <= lam.size() ? 0 : 1 << 20; };
            plan.lhs = [=](int) {
                GradedSeries sum(D);
                for (const auto& mu : subpartitions(lam)) sum += y->skew(lam, mu) * z->SP(mu);
                return sum;
            };
            plan.rhs = [=] { return SP_eval(lam, S[0] + S[1], D); };
            plan.justification = "finite sum over mu ⊆ lambda";
            break;
        }
        case IdentityId::BranchT: {
            spec_count(2);
            auto y = std::make_shared<DownUpCache>(S[0], D), z = std::make_shared<DownUpCache>(S[1], D);
            Partition rho = P[0], mu = P[1];
            int gy = unit_degree(S[0], D), gz = unit_degree(S[1], D);
            plan.lower_bound = [=](int n) { return std::abs(n - rho.size()) * gy + std::abs(n - mu.size()) * gz; };
            plan.lhs = [=](int cap) {
                GradedSeries sum(D);
                for (const auto& lam : enumerate_partitions(cap)) {
                    const auto& a = y->T(rho, lam);
                    if (a.is_zero()) continue;
                    sum += a * z->T(lam, mu);
                }
                return sum;
            };
            plan.rhs = [=] { return H(S[0], S[1], D) * down_up_eval(rho, mu, S[0] + S[1], D); };
            plan.justification = "deg T_{a,b} >= ||a|-|b||*grade";
            break;
        }
        case IdentityId::SkewDownUpCauchy: {
            spec_count(2);
            auto y = std::make_shared<SchurEvaluator>(S[0], D);
            auto z = std::make_shared<DownUpCache>(S[1], D);
            Partition mu = P[0], lam = P[1];
            int gy = unit_degree(S[0], D), gz = unit_degree(S[1], D);
            plan.lower_bound = [=](int n) { return std::max(0, n - mu.size()) * gy + std::abs(n - lam.size()) * gz; };
            plan.lhs = [=](int cap) {
                GradedSeries sum(D);
                for (const auto& rho : superpartitions(mu, cap)) {
                    const auto& a = y->skew(rho, mu);
                    if (a.is_zero()) continue;
                    sum += a * z->T(rho, lam);
                }
                return sum;
            };
            plan.rhs = [=] {
                GradedSeries sum(D);
                for (const auto& eta : subpartitions(lam)) sum += y->skew(lam, eta) * z->T(mu, eta);
                return H(S[0], S[1], D) * sum;
            };
            plan.justification = "term degree >= (|rho|-|mu|)*grade(y) + ||rho|-|lambda||*grade(z)";
            break;
        }
        case IdentityId::TSimple: {
            spec_count(2);
            auto y = std::make_shared<SchurEvaluator>(S[0], D);
            auto z = std::make_shared<DownUpCache>(S[1], D);
            Partition lam = P[0];
            int gy = unit_degree(S[0], D), gz = unit_degree(S[1], D);
            int ylen = ordinary_count(S[0]);
            plan.lower_bound = [=](int n) { return n * gy + std::abs(n - lam.size()) * gz; };
            plan.lhs = [=](int cap) {
                GradedSeries sum(D);
                for (const auto& rho : enumerate_partitions(cap, ylen)) {
                    auto a = y->schur(rho);
                    if (a.is_zero()) continue;
                    sum += a * z->T(rho, lam);
                }
                return sum;
            };
            plan.rhs = [=] { return H(S[0], S[1], D) * schur_eval(lam, S[0] + S[1], D); };
            plan.justification = "term degree >= |rho|*grade(y) + ||rho|-|lambda||*grade(z)";
            break;
        }
        case IdentityId::GeneralizedCauchyLittlewood:
        case IdentityId::DualCauchyLittlewood: {
            spec_count(2);
            bool dual = id == IdentityId::DualCauchyLittlewood;
            auto x = std::make_shared<SchurEvaluator>(S[0], D);
            auto y = std::make_shared<DownUpCache>(S[1], D);
            Partition lam = P[0];
            int gy = unit_degree(S[1], D);
            plan.lower_bound = [=](int n) { return std::abs(n - lam.size()) * gy; };
            plan.lhs = [=](int cap) {
                GradedSeries sum(D);
                Partition lc = conjugate(lam);
                for (const auto& mu : enumerate_partitions(cap)) {
                    const auto& t = dual ? y->T(lc, conjugate(mu)) : y->T(lam, mu);
                    if (t.is_zero()) continue;
                    sum += x->SP(mu) * t;
                }
                return sum;
            };
            plan.rhs = [=] {
                if (dual) return Gbar(S[1], D) * E(S[0], S[1], D) * x->SP(lam);
                return G(S[1], D) * H(S[0], S[1], D) * x->SP(lam);
            };
            plan.justification = "term degree >= ||mu|-|lambda||*grade(y)";
            break;
        }
        case IdentityId::GeneralizedCauchyLittlewoodFinite: {
            spec_count(2);
            auto xs = laurent_values(S[0]);
            require(!S[1].has_laurent(), "GEN-CL-FIN: y must be ordinary variables");
            int k = ordinary_count(S[1]);
            Partition lam = P[0];
            require(lam.length() + k <= static_cast<int>(xs.size()), "GEN-CL-FIN needs l(lambda) + k <= n");
            auto y = std::make_shared<DownUpCache>(S[1], D);
            int gy = unit_degree(S[1], D);
            plan.lower_bound = [=](int n) { return std::abs(n - lam.size()) * gy; };
            plan.lhs = [=](int cap) {
                GradedSeries sum(D);
                for (const auto& mu : enumerate_partitions(cap, lam.length() + k)) {
                    const auto& t = y->T(lam, mu);
                    if (t.is_zero()) continue;
                    sum += t * sp_poly_eval(mu, xs);
                }
                return sum;
            };
            plan.rhs = [=] { return G(S[1], D) * H(S[0], S[1], D) * sp_poly_eval(lam, xs); };
            plan.justification = "term degree >= ||mu|-|lambda||*grade(y); l(mu) <= l(lambda)+k";
            break;
        }
        case IdentityId::PartitionFunction: {
            require(!S.empty() && S.size() % 2 == 0, "PARTFN needs 2k specializations");
            int k = static_cast<int>(S.size()) / 2;
            auto alphas = std::make_shared<std::vector<std::unique_ptr<SchurEvaluator>>>();
            auto betas = std::make_shared<std::vector<std::unique_ptr<DownUpCache>>>();
            int gmin = 1 << 20;
            for (int j = 0; j < k; ++j) {
                alphas->push_back(std::make_unique<SchurEvaluator>(S[j], D));
                betas->push_back(std::make_unique<DownUpCache>(S[k + j], D));
                gmin = std::min(gmin, unit_degree(S[k + j], D));
            }
            plan.lower_bound = [=](int n) { return n * gmin; };
            plan.lhs = [=](int cap) {
                GradedSeries sum(D);
                auto parts = enumerate_partitions(cap);
                std::function<void(int, const Partition&, const GradedSeries&)> rec =
                    [&](int j, const Partition& lam, const GradedSeries& w) {
                        if (j == k - 1) {
                            sum += w * (*alphas)[j]->SP(lam);
                            return;
                        }
                        for (const auto& mu : subpartitions(lam)) {
                            const auto& a = (*alphas)[j]->skew(lam, mu);
                            if (a.is_zero()) continue;
                            GradedSeries wa = w * a;
                            if (wa.is_zero()) continue;
                            for (const auto& next : parts) {
                                const auto& t = (*betas)[j + 1]->T(mu, next);
                                if (t.is_zero()) continue;
                                GradedSeries wt = wa * t;
                                if (!wt.is_zero()) rec(j + 1, next, wt);
                            }
                        }
                    };
                for (const auto& l1 : parts) {
                    auto w = (*betas)[0]->ev.schur(l1);
                    if (!w.is_zero()) rec(0, l1, w);
                }
                return sum;
            };
            plan.rhs = [=] {
                GradedSeries z(D, 1);
                for (int p = 0; p < k; ++p)
                    for (int q = p; q < k; ++q) z *= H(S[q], S[k + p], D);
                for (int r = 0; r < k; ++r) z *= G(S[k + r], D);
                return z;
            };
            plan.justification = "each nonzero weight has degree >= |lambda^(j)|, |mu^(j)| times the minimal beta grade";
            break;
        }
    }
    return plan;
}

int bound_from(const Plan& plan, int D, int safety_cap) {
    if (plan.finite) return 0;
    int B = -1;
    for (int n = 0; n <= safety_cap; ++n)
        if (plan.lower_bound(n) <= D) B = n;
    if (plan.lower_bound(safety_cap) <= D || plan.lower_bound(safety_cap + 1) <= D)
        throw BoundOverflow("enumeration bound exceeds the safety cap");
    return std::max(B, 0);
}

}  // namespace

const std::vector<IdentityId>& all_identities() {
    static const std::vector<IdentityId> ids = [] {
        std::vector<IdentityId> v;
        for (const auto& e : kEntries) v.push_back(e.id);
        return v;
    }();
    return ids;
}

std::string identity_name(IdentityId id) { return entry(id).name; }

IdentityId identity_from_name(const std::string& name) {
    for (const auto& e : kEntries)
        if (name == e.name) return e.id;
    throw std::invalid_argument("unknown identity: " + name);
}

int identity_partition_arity(IdentityId id) { return entry(id).arity; }

int enumeration_bound(IdentityId id, const std::vector<Partition>& fixed, const std::vector<Specialization>& specs,
                      int D, int safety_cap) {
    auto plan = make_plan(id, fixed, specs, D);
    if (plan.finite) {
        int s = 0;
        for (const auto& p : fixed) s = std::max(s, p.size());
        return s;
    }
    return bound_from(plan, D, safety_cap);
}

VerificationReport verify(IdentityId id, const std::vector<Partition>& fixed, const std::vector<Specialization>& specs,
                          int D, const VerifyOptions& opts) {
    auto plan = make_plan(id, fixed, specs, D);
    VerificationReport r;
    r.identity = id;
    r.partitions = fixed;
    r.specs = specs;
    r.trunc = D;
    r.bound_justification = plan.justification;
    int B = plan.finite ? 0 : bound_from(plan, D, opts.safety_cap);
    if (plan.finite)
        for (const auto& p : fixed) B = std::max(B, p.size());
    r.enumeration_bound_used = B;
    r.lhs = plan.lhs(B);
    r.rhs = plan.rhs();
    r.bound_stable = !opts.bound_self_test || plan.finite || plan.lhs(B + 2) == r.lhs;
    r.pass = r.lhs == r.rhs && r.bound_stable;
    return r;
}

nlohmann::json VerificationReport::to_json() const {
    nlohmann::json parts = nlohmann::json::array(), sp = nlohmann::json::array();
    for (const auto& p : partitions) parts.push_back(p.parts());
    for (const auto& s : specs) sp.push_back(s.to_json());
    return {{"identity", identity_name(identity)},
            {"partitions", parts},
            {"specs", sp},
            {"D", trunc},
            {"lhs", lhs.to_json()},
            {"rhs", rhs.to_json()},
            {"pass", pass},
            {"enumeration_bound_used", enumeration_bound_used},
            {"bound_stable", bound_stable},
            {"bound_justification", bound_justification}};
}

NumericCheck verify_gen_cl_fin_numeric(const Partition& lam, const std::vector<Rational>& x,
                                       const std::vector<Rational>& y, double tol) {
    int n = static_cast<int>(x.size()), k = static_cast<int>(y.size());
    require(lam.length() + k <= n, "GEN-CL-FIN needs l(lambda) + k <= n");
    double r = 0;
    for (const auto& xi : x)
        for (const auto& yj : y) {
            double a = std::abs(Rational(xi * yj).get_d()), b = std::abs(Rational(yj / xi).get_d());
            r = std::max({r, a, b});
        }
    require(r < 1, "GEN-CL-FIN numeric mode needs |x_i y_j|, |y_j/x_i| < 1");
    NumericCheck out;
    auto yspec = Specialization::ordinary(y, 0);
    DownUpCache table(yspec, 0);
    // shell sums dominated by binom(m+M-1, M-1) r^m with M = 2nk
    int M = 2 * n * k;
    auto shell_bound = [&](int m) {
        double c = 1;
        for (int i = 1; i < M; ++i) c *= static_cast<double>(m + i) / i;
        return c * std::pow(r, m);
    };
    int N = lam.size();
    double tail = 0;
    while (true) {
        tail = 0;
        for (int m = N + 1 - lam.size(); m < N + 400; ++m) tail += shell_bound(std::max(m, 0));
        if (tail * std::max(1.0, std::abs(sp_poly_eval(lam, x).get_d())) < tol / 10 || N > 200) break;
        N += 4;
    }
    Rational sum = 0;
    for (const auto& mu : enumerate_partitions(N, lam.length() + k)) {
        const auto& t = table.T(lam, mu);
        if (t[0] == 0) continue;
        sum += t[0] * sp_poly_eval(mu, x);
    }
    Rational rhs = G(yspec, 0)[0] * H(Specialization::laurent(x, 0), yspec, 0)[0] * sp_poly_eval(lam, x);
    out.lhs = sum.get_d();
    out.rhs = rhs.get_d();
    out.residual = std::abs(out.lhs - out.rhs);
    out.tail_estimate = tail;
    out.max_size = N;
    out.pass = out.residual <= tol;
    return out;
}

}  // namespace sspkit
