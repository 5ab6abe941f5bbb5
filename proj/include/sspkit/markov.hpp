#pragma once

#include <map>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "sspkit/coefficients.hpp"
#include "sspkit/process.hpp"

namespace sspkit {

class OutOfSupport : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class TruncationTooCoarse : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// exact values of s, skew s and T at a specialization with every grade set to 0. Not thread-safe.
class NumericEvaluator {
public:
    explicit NumericEvaluator(const Specialization& s);
    Rational schur(const Partition& lam);
    Rational skew(const Partition& lam, const Partition& mu);
    Rational T(const Partition& a, const Partition& b);
    Rational SP(const Partition& lam);
    const Specialization& spec() const { return spec_; }

private:
    Specialization spec_;
    DownUpCache cache_;
};

// H(a; b) with every grade set to 0
Rational cauchy_value(const Specialization& a, const Specialization& b);

Rational q_up(const Partition& mu, const Partition& lam, const Specialization& y, const Specialization& z);
Rational q_curve(const Partition& mu, const Partition& lam, const Specialization& y, const Specialization& t);

struct TransitionRow {
    Partition from;
    std::vector<Partition> to;
    std::vector<Rational> prob;
    // upper bound on the probability of targets outside the row
    Rational tail_bound;
    Rational mass() const;
};

// targets lambda ⊇ mu with |lambda/mu| <= cap; the tail is exact
TransitionRow q_up_row(const Partition& mu, const Specialization& y, const Specialization& z, int cap);
// targets with |lambda| <= |mu| + cap; the tail is an upper bound
TransitionRow q_curve_row(const Partition& mu, const Specialization& y, const Specialization& t, int cap);

struct CommutationReport {
    std::string relation;
    int rows = 0;
    int entries = 0;
    bool exact_agreement = true;
    double max_error = 0;
    double max_tolerance = 0;
    bool pass = true;
    nlohmann::json to_json() const;
};

// the three commutation relations on rows of size <= row_cap, intermediate states truncated at increment cap
std::vector<CommutationReport> check_commutation(const Specialization& y, const Specialization& z1,
                                                 const Specialization& z2, const Specialization& t, int cap,
                                                 int row_cap = 2);

struct IntertwiningReport {
    bool up_exact = false;
    double curve_max_error = 0;
    double curve_tolerance = 0;
    bool curve_pass = false;
    int states = 0;
    bool pass() const { return up_exact && curve_pass; }
    nlohmann::json to_json() const;
};

// M(x;y) q_up(y;z) = M(x,z;y) and M(x;y,t) q_curve(y;t) = M(x;y) on states of size <= cap
IntertwiningReport check_intertwining(const Specialization& x, const Specialization& y, const Specialization& z,
                                      const Specialization& t, int cap);

// sequential update kernels on tuples; curve updates use sigma = beta^1. Not thread-safe.
class TupleDynamics {
public:
    TupleDynamics(SpecTuple s, Specialization pi, double mass_tol = 1e-9, int max_increment = 40);

    // law after an up step: alpha^k joined with pi
    SpecTuple up_target() const;
    // law after a curve step: beta^1 removed
    SpecTuple curve_target() const;

    PartitionTuple step_up(const PartitionTuple& t, std::mt19937_64& rng);
    PartitionTuple step_curve(const PartitionTuple& t, std::mt19937_64& rng);
    Rational up_probability(const PartitionTuple& from, const PartitionTuple& to);
    Rational curve_probability(const PartitionTuple& from, const PartitionTuple& to);
    // largest probability mass left outside a truncated candidate list so far
    double truncation_error() const { return trunc_err_; }

private:
    struct Dist {
        std::vector<Partition> to;
        std::vector<Rational> prob;
        std::vector<double> cdf;
    };
    const Dist& dist(int kind, int level, const Partition& a, const Partition& b);
    Dist build(int kind, int level, const Partition& a, const Partition& b);
    Partition draw(const Dist& d, std::mt19937_64& rng);
    Rational lookup(const Dist& d, const Partition& p);

    SpecTuple spec_;
    Specialization pi_;
    double mass_tol_;
    int max_increment_;
    double trunc_err_ = 0;
    std::vector<std::unique_ptr<NumericEvaluator>> alpha_, beta_;
    std::unique_ptr<NumericEvaluator> pi_ev_, empty_ev_;
    std::map<std::tuple<int, int, Partition, Partition>, Dist> cache_;
};

PartitionTuple tuple_step_up(const PartitionTuple& t, const SpecTuple& s, const Specialization& pi,
                             std::mt19937_64& rng);

// draws from the truncated support, renormalized by its mass
PartitionTuple sample_support(const SupportEnumeration& sup, std::mt19937_64& rng);

struct StationarityReport {
    long long samples = 0;
    double chi2 = 0;
    int dof = 0;
    double p_value = 0;
    double truncation_error = 0;
    nlohmann::json to_json() const;
};

// one up step from exact samples of the process, compared with the target law
StationarityReport stationarity_test(const SpecTuple& s, const Specialization& pi, long long samples, int size_cap,
                                     std::uint64_t seed);

}  // namespace sspkit
