#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sspkit/coefficients.hpp"
#include "sspkit/partitions.hpp"
#include "sspkit/series.hpp"

namespace sspkit {

struct SpecTuple {
    std::vector<Specialization> alphas;
    std::vector<Specialization> betas;

    int k() const { return static_cast<int>(alphas.size()); }
    // every variable moved to grade 0, so truncation degree 0 yields exact values
    SpecTuple numeric() const;
    nlohmann::json to_json() const;
    static SpecTuple from_json(const nlohmann::json& j);
    // alphas empty below level k, alpha^k = Laurent x, beta^j = {y_j}
    static SpecTuple oscillating(const std::vector<Rational>& x, const std::vector<Rational>& y);
};

struct PartitionTuple {
    std::vector<Partition> lambdas;
    std::vector<Partition> mus;
    bool operator==(const PartitionTuple&) const = default;
    bool operator<(const PartitionTuple& o) const {
        if (lambdas != o.lambdas) return lambdas < o.lambdas;
        return mus < o.mus;
    }
    nlohmann::json to_json() const;
};

class NotProbabilityRegime : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Evaluation caches for the factors of the weight. Not thread-safe.
class ProcessEvaluator {
public:
    ProcessEvaluator(SpecTuple s, int D);
    const SpecTuple& spec() const { return spec_; }
    int trunc() const { return D_; }

    GradedSeries weight(const PartitionTuple& t);
    // calls visit for every tuple with all coordinates of size <= cap and nonzero weight mod t^(D+1)
    void enumerate(int cap, const std::function<void(const PartitionTuple&, const GradedSeries&)>& visit);

    SchurEvaluator& alpha(int j) { return alphas_[j]->ev; }
    DownUpCache& beta(int j) { return *betas_[j]; }

private:
    SpecTuple spec_;
    int D_;
    std::vector<std::unique_ptr<DownUpCache>> alphas_, betas_;
};

GradedSeries weight(const PartitionTuple& t, const SpecTuple& s, int D);
GradedSeries partition_function(const SpecTuple& s, int D);

bool probability_regime(const SpecTuple& s, std::string* reason = nullptr);
Rational ssp_probability(const PartitionTuple& t, const SpecTuple& s);
Rational ss_measure(const Partition& lam, const Specialization& alpha, const Specialization& beta);
// exact P(|lambda| > cap) under the symplectic Schur measure with Laurent alpha and ordinary beta
Rational ss_measure_size_tail(const Specialization& alpha, const Specialization& beta, int cap);

struct SupportEntry {
    PartitionTuple tuple;
    Rational probability;
};

struct SupportEnumeration {
    std::vector<SupportEntry> entries;
    Rational mass;
    // union bound over the coordinates of exact symplectic Schur measure tails
    Rational tail_bound;
};

SupportEnumeration enumerate_support(const SpecTuple& s, int size_cap);

struct MarginalReport {
    bool trace_last_pair = false;
    bool trace_first_pair = false;
    bool lambda_marginals = false;
    bool mu_marginals = false;
    int cases_checked = 0;
    bool pass() const { return trace_last_pair && trace_first_pair && lambda_marginals && mu_marginals; }
    nlohmann::json to_json() const;
};

MarginalReport marginal_check(const SpecTuple& s, int D);

struct PositivityReport {
    bool all_nonnegative = true;
    bool length_claim_holds = true;
    std::optional<PartitionTuple> negative_witness;
    Rational witness_weight;
    long long tuples_scanned = 0;
    nlohmann::json to_json() const;
};

PositivityReport positivity_scan(const SpecTuple& s, int size_cap);

}  // namespace sspkit
