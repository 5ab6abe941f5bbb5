#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sspkit/partitions.hpp"
#include "sspkit/series.hpp"

namespace sspkit {

enum class IdentityId {
    SchurBranch,
    SchurSkewCauchy,
    CauchyLittlewoodSp,
    CauchyLittlewoodUniversal,
    BranchSP,
    BranchT,
    SkewDownUpCauchy,
    TSimple,
    GeneralizedCauchyLittlewood,
    GeneralizedCauchyLittlewoodFinite,
    DualCauchyLittlewood,
    PartitionFunction,
};

const std::vector<IdentityId>& all_identities();
std::string identity_name(IdentityId id);
IdentityId identity_from_name(const std::string& name);
// number of fixed partitions expected
int identity_partition_arity(IdentityId id);

class BoundOverflow : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct VerificationReport {
    IdentityId identity{};
    std::vector<Partition> partitions;
    std::vector<Specialization> specs;
    int trunc = 0;
    GradedSeries lhs, rhs;
    bool pass = false;
    int enumeration_bound_used = 0;
    // lhs recomputed with bound + 2 equals lhs
    bool bound_stable = false;
    std::string bound_justification;

    nlohmann::json to_json() const;
};

struct VerifyOptions {
    int safety_cap = 40;
    bool bound_self_test = true;
};

int enumeration_bound(IdentityId id, const std::vector<Partition>& fixed, const std::vector<Specialization>& specs,
                      int D, int safety_cap = 40);
VerificationReport verify(IdentityId id, const std::vector<Partition>& fixed, const std::vector<Specialization>& specs,
                          int D, const VerifyOptions& opts = {});

struct NumericCheck {
    double lhs = 0, rhs = 0, residual = 0, tail_estimate = 0;
    int max_size = 0;
    bool pass = false;
};

// finite-variable generalized Cauchy-Littlewood at actual values: x Laurent, y ordinary
NumericCheck verify_gen_cl_fin_numeric(const Partition& lam, const std::vector<Rational>& x,
                                       const std::vector<Rational>& y, double tol = 1e-10);

}  // namespace sspkit
