#include "sspkit/process.hpp"

#include <map>

#include "sspkit/schur.hpp"

namespace sspkit {

SpecTuple SpecTuple::numeric() const {
    SpecTuple out;
    for (const auto& a : alphas) out.alphas.push_back(a.with_grade(0));
    for (const auto& b : betas) out.betas.push_back(b.with_grade(0));
    return out;
}

nlohmann::json SpecTuple::to_json() const {
    nlohmann::json a = nlohmann::json::array(), b = nlohmann::json::array();
    for (const auto& s : alphas) a.push_back(s.to_json());
    for (const auto& s : betas) b.push_back(s.to_json());
    return {{"alphas", a}, {"betas", b}};
}

SpecTuple SpecTuple::from_json(const nlohmann::json& j) {
    SpecTuple s;
    for (const auto& a : j.at("alphas")) s.alphas.push_back(Specialization::from_json(a));
    for (const auto& b : j.at("betas")) s.betas.push_back(Specialization::from_json(b));
    if (s.alphas.size() != s.betas.size() || s.alphas.empty())
        throw std::invalid_argument("spec tuple needs k >= 1 alphas and betas");
    return s;
}

SpecTuple SpecTuple::oscillating(const std::vector<Rational>& x, const std::vector<Rational>& y) {
    SpecTuple s;
    int k = static_cast<int>(y.size());
    for (int j = 0; j < k; ++j) {
        s.alphas.push_back(j + 1 == k ? Specialization::laurent(x, 0) : Specialization::empty());
        s.betas.push_back(Specialization::ordinary({y[j]}, 1));
    }
    return s;
}

nlohmann::json PartitionTuple::to_json() const {
    nlohmann::json l = nlohmann::json::array(), m = nlohmann::json::array();
    for (const auto& p : lambdas) l.push_back(p.parts());
    for (const auto& p : mus) m.push_back(p.parts());
    return {{"lambdas", l}, {"mus", m}};
}

ProcessEvaluator::ProcessEvaluator(SpecTuple s, int D) : spec_(std::move(s)), D_(D) {
    if (spec_.alphas.size() != spec_.betas.size() || spec_.alphas.empty())
        throw std::invalid_argument("spec tuple needs k >= 1 alphas and betas");
    for (int j = 0; j < spec_.k(); ++j) {
        alphas_.push_back(std::make_unique<DownUpCache>(spec_.alphas[j], D));
        betas_.push_back(std::make_unique<DownUpCache>(spec_.betas[j], D));
    }
}

GradedSeries ProcessEvaluator::weight(const PartitionTuple& t) {
    int k = spec_.k();
    if (static_cast<int>(t.lambdas.size()) != k || static_cast<int>(t.mus.size()) != k - 1)
        throw std::invalid_argument("tuple shape does not match k");
    GradedSeries w = betas_[0]->ev.schur(t.lambdas[0]);
    for (int j = 0; j + 1 < k && !w.is_zero(); ++j) {
        w *= alphas_[j]->ev.skew(t.lambdas[j], t.mus[j]);
        w *= betas_[j + 1]->T(t.mus[j], t.lambdas[j + 1]);
    }
    if (!w.is_zero()) w *= alphas_[k - 1]->ev.SP(t.lambdas[k - 1]);
    return w;
}

void ProcessEvaluator::enumerate(int cap, const std::function<void(const PartitionTuple&, const GradedSeries&)>& visit) {
    int k = spec_.k();
    auto parts = enumerate_partitions(cap);
    std::map<Partition, GradedSeries> sp_cache;
    PartitionTuple cur;
    cur.lambdas.resize(k);
    cur.mus.resize(k - 1);
    std::function<void(int, const GradedSeries&)> rec = [&](int j, const GradedSeries& w) {
        const Partition& lam = cur.lambdas[j];
        if (j == k - 1) {
            auto it = sp_cache.find(lam);
            if (it == sp_cache.end()) it = sp_cache.emplace(lam, alphas_[j]->ev.SP(lam)).first;
            GradedSeries full = w * it->second;
            if (!full.is_zero()) visit(cur, full);
            return;
        }
        for (const auto& mu : subpartitions(lam)) {
            const auto& a = alphas_[j]->ev.skew(lam, mu);
            if (a.is_zero()) continue;
            GradedSeries wa = w * a;
            if (wa.is_zero()) continue;
            cur.mus[j] = mu;
            for (const auto& next : parts) {
                const auto& t = betas_[j + 1]->T(mu, next);
                if (t.is_zero()) continue;
                GradedSeries wt = wa * t;
                if (wt.is_zero()) continue;
                cur.lambdas[j + 1] = next;
                rec(j + 1, wt);
            }
        }
    };
    for (const auto& l1 : parts) {
        auto w = betas_[0]->ev.schur(l1);
        if (w.is_zero()) continue;
        cur.lambdas[0] = l1;
        rec(0, w);
    }
}

GradedSeries weight(const PartitionTuple& t, const SpecTuple& s, int D) { return ProcessEvaluator(s, D).weight(t); }

GradedSeries partition_function(const SpecTuple& s, int D) {
    int k = s.k();
    GradedSeries z(D, 1);
    for (int p = 0; p < k; ++p)
        for (int q = p; q < k; ++q) z *= H(s.alphas[q], s.betas[p], D);
    for (int r = 0; r < k; ++r) z *= G(s.betas[r], D);
    return z;
}

bool probability_regime(const SpecTuple& s, std::string* reason) {
    auto fail = [&](const std::string& why) {
        if (reason) *reason = why;
        return false;
    };
    int k = s.k();
    int total_b = 0;
    for (const auto& b : s.betas) {
        for (const auto& v : b.vars()) {
            if (v.laurent) return fail("beta specializations must be ordinary variables");
            if (v.value <= 0) return fail("beta variables must be positive");
        }
        total_b += b.num_variables();
        auto e = b.vars();
        for (std::size_t i = 0; i < e.size(); ++i)
            for (std::size_t j = i + 1; j < e.size(); ++j)
                if (e[i].value * e[j].value >= 1) return fail("beta variables need y_i y_j < 1");
    }
    for (const auto& a : s.alphas)
        for (const auto& x : a.vars()) {
            if (!x.laurent) return fail("alpha specializations must be Laurent variables");
            if (x.value <= 0) return fail("alpha variables must be positive");
            for (const auto& b : s.betas)
                for (const auto& y : b.vars())
                    if (y.value >= x.value || y.value * x.value >= 1) return fail("need y < min(x, 1/x)");
        }
    if (s.alphas[k - 1].num_variables() < total_b) return fail("need A_k >= B_1 + ... + B_k");
    return true;
}

Rational ssp_probability(const PartitionTuple& t, const SpecTuple& s) {
    std::string why;
    if (!probability_regime(s, &why)) throw NotProbabilityRegime(why);
    auto n = s.numeric();
    return weight(t, n, 0)[0] / partition_function(n, 0)[0];
}

Rational ss_measure(const Partition& lam, const Specialization& alpha, const Specialization& beta) {
    SpecTuple s{{alpha}, {beta}};
    return ssp_probability(PartitionTuple{{lam}, {}}, s);
}

Rational ss_measure_size_tail(const Specialization& alpha, const Specialization& beta, int cap) {
    auto a0 = alpha.with_grade(0), b0 = beta.with_grade(0), b1 = beta.with_grade(1);
    Rational norm = (H(a0, b0, 0) * G(b0, 0))[0];
    GradedSeries gen = H(a0, b1, cap) * G(b1, cap);
    Rational head = 0;
    for (int m = 0; m <= cap; ++m) head += gen[m];
    return 1 - head / norm;
}

SupportEnumeration enumerate_support(const SpecTuple& s, int size_cap) {
    std::string why;
    if (!probability_regime(s, &why)) throw NotProbabilityRegime(why);
    auto n = s.numeric();
    Rational Z = partition_function(n, 0)[0];
    ProcessEvaluator ev(n, 0);
    SupportEnumeration out;
    out.mass = 0;
    ev.enumerate(size_cap, [&](const PartitionTuple& t, const GradedSeries& w) {
        Rational p = w[0] / Z;
        out.mass += p;
        out.entries.push_back({t, p});
    });
    int k = s.k();
    out.tail_bound = 0;
    for (int j = 0; j < k; ++j) {
        auto a = union_of(s.alphas, j, k - 1), b = union_of(s.betas, 0, j);
        out.tail_bound += ss_measure_size_tail(a, b, size_cap);
        if (j + 1 < k) out.tail_bound += ss_measure_size_tail(union_of(s.alphas, j + 1, k - 1), b, size_cap);
    }
    return out;
}

namespace {

int min_beta_grade(const SpecTuple& s, int D) {
    int g = D + 1;
    for (const auto& b : s.betas)
        if (!b.is_empty()) g = std::min(g, b.min_grade());
    return g;
}

}  // namespace

MarginalReport marginal_check(const SpecTuple& s, int D) {
    int k = s.k();
    if (k < 2) throw std::invalid_argument("marginal check needs k >= 2");
    int g = min_beta_grade(s, D);
    if (g == 0) throw std::invalid_argument("marginal check needs positive beta grades");
    int cap = D / g;
    MarginalReport rep;
    auto shapes = enumerate_partitions(3);

    // trace (mu^(k-1), lambda^(k)) for fixed lambda^(k-1)
    {
        DownUpCache a_prev(s.alphas[k - 2], D), a_last(s.alphas[k - 1], D), b_last(s.betas[k - 1], D);
        SchurEvaluator merged(s.alphas[k - 2] + s.alphas[k - 1], D);
        GradedSeries pref = H(s.alphas[k - 1], s.betas[k - 1], D) * G(s.betas[k - 1], D);
        int gb = s.betas[k - 1].is_empty() ? D + 1 : std::max(1, s.betas[k - 1].min_grade());
        bool ok = true;
        for (const auto& lam : shapes) {
            GradedSeries lhs(D);
            for (const auto& mu : subpartitions(lam)) {
                const auto& sk = a_prev.ev.skew(lam, mu);
                if (sk.is_zero()) continue;
                for (const auto& nxt : enumerate_partitions(mu.size() + D / gb)) {
                    const auto& t = b_last.T(mu, nxt);
                    if (t.is_zero()) continue;
                    lhs += sk * t * a_last.ev.SP(nxt);
                }
            }
            ok = ok && lhs == pref * merged.SP(lam);
            ++rep.cases_checked;
        }
        rep.trace_last_pair = ok;
    }
    // trace (lambda^(1), mu^(1)) for fixed lambda^(2)
    {
        SchurEvaluator b1(s.betas[0], D), a1(s.alphas[0], D), merged(s.betas[0] + s.betas[1], D);
        DownUpCache b2(s.betas[1], D);
        GradedSeries pref = H(s.alphas[0], s.betas[0], D) * H(s.betas[0], s.betas[1], D);
        int gb = s.betas[0].is_empty() ? D + 1 : std::max(1, s.betas[0].min_grade());
        bool ok = true;
        for (const auto& lam2 : shapes) {
            GradedSeries lhs(D);
            for (const auto& l1 : enumerate_partitions(D / gb)) {
                auto w = b1.schur(l1);
                if (w.is_zero()) continue;
                for (const auto& m1 : subpartitions(l1)) {
                    const auto& sk = a1.skew(l1, m1);
                    if (sk.is_zero()) continue;
                    lhs += w * sk * b2.T(m1, lam2);
                }
            }
            ok = ok && lhs == pref * merged.schur(lam2);
            ++rep.cases_checked;
        }
        rep.trace_first_pair = ok;
    }
    // one-dimensional marginals by full enumeration
    {
        ProcessEvaluator ev(s, D);
        std::vector<std::map<Partition, GradedSeries>> lam_sums(k), mu_sums(k - 1);
        ev.enumerate(cap, [&](const PartitionTuple& t, const GradedSeries& w) {
            for (int j = 0; j < k; ++j) {
                auto [it, fresh] = lam_sums[j].try_emplace(t.lambdas[j], D);
                it->second += w;
            }
            for (int j = 0; j + 1 < k; ++j) {
                auto [it, fresh] = mu_sums[j].try_emplace(t.mus[j], D);
                it->second += w;
            }
        });
        GradedSeries Z = partition_function(s, D);
        auto law = [&](const Specialization& a, const Specialization& b) {
            return std::make_pair(Z * (H(a, b, D) * G(b, D)).reciprocal(), std::make_pair(a, b));
        };
        bool lam_ok = true, mu_ok = true;
        for (int j = 0; j < k; ++j) {
            auto [c, ab] = law(union_of(s.alphas, j, k - 1), union_of(s.betas, 0, j));
            SchurEvaluator ea(ab.first, D), eb(ab.second, D);
            for (const auto& eta : enumerate_partitions(cap + 1)) {
                auto it = lam_sums[j].find(eta);
                GradedSeries got = it == lam_sums[j].end() ? GradedSeries(D) : it->second;
                lam_ok = lam_ok && got == c * eb.schur(eta) * ea.SP(eta);
                ++rep.cases_checked;
            }
            if (j + 1 == k) continue;
            auto [c2, ab2] = law(union_of(s.alphas, j + 1, k - 1), union_of(s.betas, 0, j));
            SchurEvaluator ea2(ab2.first, D), eb2(ab2.second, D);
            for (const auto& eta : enumerate_partitions(cap + 1)) {
                auto it = mu_sums[j].find(eta);
                GradedSeries got = it == mu_sums[j].end() ? GradedSeries(D) : it->second;
                mu_ok = mu_ok && got == c2 * eb2.schur(eta) * ea2.SP(eta);
                ++rep.cases_checked;
            }
        }
        rep.lambda_marginals = lam_ok;
        rep.mu_marginals = mu_ok;
    }
    return rep;
}

nlohmann::json MarginalReport::to_json() const {
    return {{"trace_last_pair", trace_last_pair}, {"trace_first_pair", trace_first_pair},
            {"lambda_marginals", lambda_marginals}, {"mu_marginals", mu_marginals},
            {"cases_checked", cases_checked}, {"pass", pass()}};
}

PositivityReport positivity_scan(const SpecTuple& s, int size_cap) {
    for (const auto& a : s.alphas)
        for (const auto& v : a.vars())
            if (!v.laurent) throw std::invalid_argument("positivity scan expects Laurent alphas");
    std::vector<int> prefix;
    int acc = 0;
    for (const auto& b : s.betas) prefix.push_back(acc += b.num_variables());
    PositivityReport rep;
    ProcessEvaluator ev(s.numeric(), 0);
    ev.enumerate(size_cap, [&](const PartitionTuple& t, const GradedSeries& w) {
        ++rep.tuples_scanned;
        for (int i = 0; i < s.k(); ++i)
            if (t.lambdas[i].length() > prefix[i]) rep.length_claim_holds = false;
        if (w[0] < 0) {
            if (rep.all_nonnegative || w[0] < rep.witness_weight) {
                rep.negative_witness = t;
                rep.witness_weight = w[0];
            }
            rep.all_nonnegative = false;
        }
    });
    return rep;
}

nlohmann::json PositivityReport::to_json() const {
    nlohmann::json j{{"all_nonnegative", all_nonnegative},
                     {"length_claim_holds", length_claim_holds},
                     {"tuples_scanned", tuples_scanned}};
    if (negative_witness) {
        j["negative_witness"] = negative_witness->to_json();
        j["witness_weight"] = rational_to_string(witness_weight);
    }
    return j;
}

}  // namespace sspkit
