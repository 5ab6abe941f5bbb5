#include <random>

#include "doctest.h"
#include "sspkit/identities.hpp"

using namespace sspkit;

namespace {

Rational draw(std::mt19937_64& rng, int lo, int hi, int dlo, int dhi) {
    std::uniform_int_distribution<int> num(lo, hi), den(dlo, dhi);
    int p = 0;
    while (p == 0) p = num(rng);
    Rational q(p, den(rng));
    q.canonicalize();
    return q;
}

Specialization laurent_x(std::mt19937_64& rng, int n) {
    std::vector<Rational> v;
    while (static_cast<int>(v.size()) < n) {
        Rational q = draw(rng, 2, 9, 1, 5);
        bool ok = q != 1;
        for (const auto& w : v) ok = ok && q != w && q * w != 1;
        if (ok) v.push_back(q);
    }
    return Specialization::laurent(v, 0);
}

Specialization ordinary_y(std::mt19937_64& rng, int n, int grade = 1) {
    std::vector<Rational> v;
    for (int i = 0; i < n; ++i) v.push_back(draw(rng, -4, 4, 2, 9));
    return Specialization::ordinary(v, grade);
}

// x is Laurent at grade 0 or ordinary at grade 1; y always has positive grade
Specialization mixed_x(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> coin(0, 2);
    switch (coin(rng)) {
        case 0: return laurent_x(rng, 1 + coin(rng) % 2);
        case 1: return ordinary_y(rng, 2);
        default: return laurent_x(rng, 1) + ordinary_y(rng, 1);
    }
}

std::vector<Partition> small_partitions() { return enumerate_partitions(3); }

void check_pass(const VerificationReport& r) {
    INFO(r.to_json().dump());
    CHECK(r.pass);
    CHECK(r.bound_stable);
}

}  // namespace

TEST_CASE("identity registry") {
    CHECK(all_identities().size() == 12);
    for (auto id : all_identities()) CHECK(identity_from_name(identity_name(id)) == id);
    CHECK_THROWS(identity_from_name("NOPE"));
}

TEST_CASE("CL-UNIV example and bound") {
    auto x = Specialization::laurent({Rational(2)}), y = Specialization::ordinary({Rational(1, 3)});
    auto r = verify(IdentityId::CauchyLittlewoodUniversal, {}, {x, y}, 4);
    check_pass(r);
    CHECK(r.lhs[0] == 1);
    CHECK(r.rhs[0] == 1);
    CHECK(r.enumeration_bound_used == 4);
    auto g = verify(IdentityId::GeneralizedCauchyLittlewood, {Partition{}}, {x, y}, 4);
    CHECK(g.lhs == r.lhs);
    CHECK(g.rhs == r.rhs);
}

TEST_CASE("skew down-up Cauchy bound") {
    auto y = Specialization::ordinary({Rational(1, 3)}), z = Specialization::ordinary({Rational(2, 7)});
    Partition mu{2}, lam{1, 1};
    CHECK(enumeration_bound(IdentityId::SkewDownUpCauchy, {mu, lam}, {y, z}, 6) == (6 + 2 + 2) / 2);
}

TEST_CASE("Schur identities") {
    std::mt19937_64 rng(101);
    for (int D : {3, 6})
        for (const auto& a : small_partitions())
            for (const auto& b : small_partitions()) {
                auto x = mixed_x(rng), y = ordinary_y(rng, 2);
                check_pass(verify(IdentityId::SchurBranch, {a, b}, {x, y}, D));
                check_pass(verify(IdentityId::SchurSkewCauchy, {a, b}, {x, y}, D));
            }
}

TEST_CASE("Cauchy-Littlewood identities") {
    std::mt19937_64 rng(202);
    for (int D = 3; D <= 6; ++D)
        for (int trial = 0; trial < 3; ++trial) {
            auto x = laurent_x(rng, 2), y = ordinary_y(rng, 1 + trial % 2);
            check_pass(verify(IdentityId::CauchyLittlewoodSp, {}, {x, y}, D));
            check_pass(verify(IdentityId::CauchyLittlewoodUniversal, {}, {mixed_x(rng), y}, D));
        }
}

TEST_CASE("branching rules") {
    std::mt19937_64 rng(303);
    for (const auto& a : small_partitions()) {
        auto y = mixed_x(rng), z = mixed_x(rng);
        check_pass(verify(IdentityId::BranchSP, {a}, {y, z}, 5));
    }
    for (int D : {4, 6})
        for (const auto& a : small_partitions())
            for (const auto& b : {Partition{}, Partition{1}, Partition{2, 1}}) {
                auto y = ordinary_y(rng, 2), z = ordinary_y(rng, 1 + D % 2);
                check_pass(verify(IdentityId::BranchT, {a, b}, {y, z}, D));
            }
}

TEST_CASE("down-up Cauchy identities") {
    std::mt19937_64 rng(404);
    for (int D : {3, 5, 6})
        for (const auto& a : small_partitions()) {
            auto y = mixed_x(rng), z = ordinary_y(rng, 2);
            for (const auto& b : {Partition{}, Partition{1}, Partition{1, 1}})
                check_pass(verify(IdentityId::SkewDownUpCauchy, {b, a}, {y, z}, D));
            check_pass(verify(IdentityId::TSimple, {a}, {ordinary_y(rng, 2), z}, D));
        }
}

TEST_CASE("generalized Cauchy-Littlewood identities") {
    std::mt19937_64 rng(505);
    for (int D : {3, 4, 6})
        for (const auto& a : small_partitions()) {
            auto x = mixed_x(rng), y = ordinary_y(rng, 2);
            check_pass(verify(IdentityId::GeneralizedCauchyLittlewood, {a}, {x, y}, D));
            check_pass(verify(IdentityId::DualCauchyLittlewood, {a}, {x, y}, D));
        }
    for (int D : {3, 6})
        for (const auto& a : {Partition{}, Partition{1}, Partition{2}, Partition{3}}) {
            auto x = laurent_x(rng, 2), y = ordinary_y(rng, a.empty() ? 2 : 1);
            check_pass(verify(IdentityId::GeneralizedCauchyLittlewoodFinite, {a}, {x, y}, D));
        }
    CHECK_THROWS(verify(IdentityId::GeneralizedCauchyLittlewoodFinite, {Partition{1, 1}},
                        {laurent_x(rng, 2), ordinary_y(rng, 1)}, 3));
}

TEST_CASE("finite generalized Cauchy-Littlewood in numeric mode") {
    auto r = verify_gen_cl_fin_numeric(Partition{1}, {Rational(2), Rational(3, 2)}, {Rational(1, 5)});
    INFO(r.residual);
    CHECK(r.pass);
    auto r2 = verify_gen_cl_fin_numeric(Partition{}, {Rational(5, 4), Rational(3)}, {Rational(1, 7), Rational(1, 6)});
    INFO(r2.residual);
    CHECK(r2.pass);
}

TEST_CASE("partition function identity") {
    std::mt19937_64 rng(606);
    for (int trial = 0; trial < 2; ++trial) {
        std::vector<Specialization> s{laurent_x(rng, 1), laurent_x(rng, 2), ordinary_y(rng, 1), ordinary_y(rng, 2)};
        auto r = verify(IdentityId::PartitionFunction, {}, s, 4);
        check_pass(r);
        CHECK(r.enumeration_bound_used == 4);
    }
    std::vector<Specialization> k3{laurent_x(rng, 1), ordinary_y(rng, 1), laurent_x(rng, 1),
                                   ordinary_y(rng, 1), ordinary_y(rng, 1), ordinary_y(rng, 1)};
    check_pass(verify(IdentityId::PartitionFunction, {}, k3, 3));
}

TEST_CASE("dual identity is the Hall-involution image of the generalized one") {
    auto x = Specialization::laurent({Rational(3, 2)}) + Specialization::ordinary({Rational(1, 4)});
    auto y = Specialization::ordinary({Rational(1, 3), Rational(-1, 2)});
    for (const auto& lam : small_partitions()) {
        auto dual = verify(IdentityId::DualCauchyLittlewood, {lam}, {x, y}, 5);
        auto gen = verify(IdentityId::GeneralizedCauchyLittlewood, {conjugate(lam)}, {x, y}, 5);
        CHECK(dual.pass);
        CHECK(gen.pass);
    }
}

TEST_CASE("bound overflow") {
    auto x = Specialization::laurent({Rational(2)});
    CHECK_THROWS_AS(verify(IdentityId::CauchyLittlewoodUniversal, {}, {x, x}, 3), BoundOverflow);
}
