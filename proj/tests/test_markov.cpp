#include "doctest.h"
#include "sspkit/markov.hpp"
#include "sspkit/stats.hpp"

using namespace sspkit;

namespace {

Rational q(long a, long b) {
    Rational r(a, b);
    r.canonicalize();
    return r;
}

Specialization ord(std::vector<Rational> v) { return Specialization::ordinary(v); }

SpecTuple two_level() {
    return SpecTuple{{Specialization::laurent({q(3, 2)}), Specialization::laurent({q(5, 4), q(6, 5)})},
                     {ord({q(1, 6)}), ord({q(1, 7)})}};
}

}  // namespace

TEST_CASE("single-partition kernels") {
    auto y = ord({q(1, 2)});
    for (const auto& mu : enumerate_partitions(3, 1))
        for (const auto& lam : enumerate_partitions(4, 1))
            CHECK(q_up(mu, lam, y, Specialization::empty()) == (mu == lam ? 1 : 0));
    for (int m = 0; m <= 5; ++m) {
        Rational expect = q(3, 4);
        for (int i = 0; i < m; ++i) expect *= q(1, 4);
        CHECK(q_up(Partition{}, m ? Partition{m} : Partition{}, y, y) == expect);
    }
    CHECK_THROWS_AS(q_up(Partition{1, 1}, Partition{2, 1}, y, y), OutOfSupport);
    auto yy = ord({q(1, 2), q(1, 3)});
    for (const auto& mu : enumerate_partitions(2))
        for (const auto& lam : enumerate_partitions(3, 2))
            CHECK(q_curve(mu, lam, yy, Specialization::empty()) == (mu == lam ? 1 : 0));
}

TEST_CASE("row sums with tails") {
    auto y = ord({q(1, 3)}), z = ord({q(1, 6)});
    auto y2 = ord({q(1, 3), q(1, 4)});
    for (const auto& mu : enumerate_partitions(2, 1)) {
        auto r = q_up_row(mu, y, z, 6);
        CHECK(r.mass() + r.tail_bound == 1);
        CHECK(r.tail_bound >= 0);
        CHECK(r.tail_bound < Rational(1, 100000000));
    }
    for (const auto& mu : enumerate_partitions(2, 2)) {
        auto r = q_up_row(mu, y2, z, 6);
        CHECK(r.mass() + r.tail_bound == 1);
        auto c = q_curve_row(mu, y, ord({q(1, 9)}), 6);
        CHECK(c.mass() <= 1);
        CHECK(c.mass() + c.tail_bound >= 1);
        CHECK(c.tail_bound < Rational(1, 100000000));
    }
}

TEST_CASE("commutation relations") {
    auto reps = check_commutation(ord({q(1, 2)}), ord({q(1, 5)}), ord({q(1, 7)}), ord({q(1, 3)}), 4);
    REQUIRE(reps.size() == 3);
    for (const auto& r : reps) {
        CHECK(r.pass);
        CHECK(r.entries > 0);
        CHECK(r.max_tolerance < 5e-3);
    }
    auto e = Specialization::empty();
    for (const auto& r : check_commutation(ord({q(1, 2)}), e, e, e, 3)) {
        CHECK(r.pass);
        CHECK(r.exact_agreement);
    }
}

TEST_CASE("intertwining with the symplectic Schur measure") {
    auto rep = check_intertwining(Specialization::laurent({2, q(3, 2)}), ord({q(1, 8)}), Specialization::laurent({q(3, 2)}),
                                  ord({q(1, 9)}), 6);
    CHECK(rep.up_exact);
    CHECK(rep.curve_pass);
    CHECK(rep.curve_tolerance < 5e-3);
}

TEST_CASE("tuple dynamics with empty pi is the identity") {
    TupleDynamics dyn(two_level(), Specialization::empty());
    std::mt19937_64 rng(1);
    auto sup = enumerate_support(two_level(), 4);
    for (int i = 0; i < 50; ++i) {
        auto t = sample_support(sup, rng);
        CHECK(dyn.step_up(t, rng) == t);
    }
}

TEST_CASE("single level up step is q_up") {
    SpecTuple s{{Specialization::laurent({2})}, {ord({q(1, 4)})}};
    auto pi = Specialization::laurent({q(3, 2)});
    TupleDynamics dyn(s, pi);
    for (int a = 0; a <= 3; ++a)
        for (int b = a; b <= 5; ++b) {
            PartitionTuple from{{a ? Partition{a} : Partition{}}, {}}, to{{b ? Partition{b} : Partition{}}, {}};
            CHECK(dyn.up_probability(from, to) == q_up(from.lambdas[0], to.lambdas[0], s.betas[0], pi));
        }
}

TEST_CASE("up and curve steps preserve the process") {
    auto s = two_level();
    TupleDynamics dyn(s, Specialization::laurent({q(3, 2)}));
    auto start = enumerate_support(s, 7);
    auto up_target = dyn.up_target(), curve_target = dyn.curve_target();
    REQUIRE(probability_regime(up_target));
    double tol = start.tail_bound.get_d() + 1e-8;
    for (const auto& e : enumerate_support(up_target, 2).entries) {
        Rational pushed = 0;
        for (const auto& f : start.entries) pushed += f.probability * dyn.up_probability(f.tuple, e.tuple);
        CHECK(std::abs(Rational(pushed - e.probability).get_d()) <= tol);
    }
    for (const auto& e : enumerate_support(curve_target, 2).entries) {
        CHECK(e.tuple.lambdas[0].empty());
        Rational pushed = 0;
        for (const auto& f : start.entries) pushed += f.probability * dyn.curve_probability(f.tuple, e.tuple);
        CHECK(std::abs(Rational(pushed - e.probability).get_d()) <= tol);
    }
}

TEST_CASE("stationarity chi-square") {
    SpecTuple one{{Specialization::laurent({2})}, {ord({q(1, 4)})}};
    auto r1 = stationarity_test(one, Specialization::laurent({q(3, 2)}), 20000, 14, 42);
    CHECK(r1.p_value > 0.001);
    CHECK(r1.dof > 2);
    auto r2 = stationarity_test(two_level(), Specialization::laurent({q(3, 2)}), 20000, 12, 43);
    CHECK(r2.p_value > 0.001);
    CHECK(r2.truncation_error < 1e-3);
    CHECK(r2.dof > 2);
}

TEST_CASE("chi-square helpers") {
    auto r = chi_square_gof({50, 30, 20}, {0.5, 0.3, 0.2});
    CHECK(r.statistic == doctest::Approx(0.0));
    CHECK(r.p_value == doctest::Approx(1.0));
    auto bad = chi_square_gof({90, 5, 5}, {0.5, 0.3, 0.2});
    CHECK(bad.p_value < 1e-6);
    auto two = chi_square_two_sample({100, 200, 300}, {100, 200, 300});
    CHECK(two.p_value == doctest::Approx(1.0));
}
