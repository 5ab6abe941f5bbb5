#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/airy.hpp>

#include "sspkit/asymptotics.hpp"

using namespace sspkit;

namespace {

constexpr double kPi = std::numbers::pi;

cplx cubic_at(double x, double y, cplx z) {
    auto c = critical_cubic(x, y);
    return ((c[0] * z + c[1]) * z + c[2]) * z + c[3];
}

std::vector<std::pair<double, double>> liquid_grid() {
    std::vector<std::pair<double, double>> pts;
    for (int a = 1; a <= 10; ++a) {
        double x = 0.09 * a;
        auto ls = limit_shape(x);
        for (int b = 1; b <= 10; ++b) pts.push_back({x, ls.y_minus + (ls.y_plus - ls.y_minus) * b / 11.0});
    }
    return pts;
}

}  // namespace

TEST_CASE("h derivatives at the cusp") {
    auto d = h_derivatives(9.0 / 8, -1, -1.0);
    CHECK(std::abs(d.d1) < 1e-14);
    CHECK(std::abs(d.d2) < 1e-14);
    CHECK(std::abs(d.d3) < 1e-13);
    CHECK(d.d4.real() == doctest::Approx(1.0 / 12).epsilon(1e-13));
    for (double x : {0.2, 0.7, 1.0}) CHECK(h_derivatives(x, -1, -1.0).d2.real() == doctest::Approx(-0.5 + 4 * x / 9));
    CHECK_THROWS_AS(h_derivatives(0.5, 0, 0.5), std::domain_error);
}

TEST_CASE("h derivatives agree with finite differences") {
    double x = 0.6, y = 0.3;
    cplx z(0.3, 0.4);
    double e = 1e-4;
    auto at = [&](cplx w) { return h_derivatives(x, y, w); };
    auto d = at(z);
    CHECK(std::abs((at(z + e).h - at(z - e).h) / (2 * e) - d.d1) < 1e-6);
    CHECK(std::abs((at(z + e).d1 - at(z - e).d1) / (2 * e) - d.d2) < 1e-6);
    CHECK(std::abs((at(z + e).d2 - at(z - e).d2) / (2 * e) - d.d3) < 1e-5);
    CHECK(std::abs((at(z + e).d3 - at(z - e).d3) / (2 * e) - d.d4) < 1e-4);
    cplx cleared = d.d1 * (z - 2.0) * (z - 1.0) * z * (2.0 * z - 1.0);
    CHECK(std::abs(cleared - cubic_at(x, y, z)) < 1e-12);
}

TEST_CASE("critical points on the liquid grid") {
    for (auto [x, y] : liquid_grid()) {
        auto cp = critical_points(x, y);
        CHECK(cp.topology == 2);
        CHECK(cp.z0 > 2);
        CHECK(cp.z_plus.imag() > 0);
        CHECK(std::abs(h_derivatives(x, y, cp.z_plus).d1) < 1e-10);
        CHECK(std::abs(h_derivatives(x, y, cp.z_minus).d1) < 1e-10);
        CHECK(std::abs(h_derivatives(x, y, cp.z0).d1) < 1e-10);
        auto ze = z_plus_explicit(x, y);
        REQUIRE(ze.has_value());
        CHECK(std::abs(*ze - cp.z_plus) < 1e-9);
    }
}

TEST_CASE("root topology off the liquid region") {
    CHECK(critical_points(0.5, 6).topology == 1);
    CHECK(critical_points(0.5, -0.45).topology == 3);
    CHECK(critical_points(0.5, -0.7).topology == 4);
    auto cusp = critical_points(9.0 / 8, -1);
    CHECK((std::abs(cusp.z_plus + 1.0) < 1e-4 || std::abs(cusp.z_minus + 1.0) < 1e-4));
    auto tangent = critical_points(0.8, -0.8);
    CHECK(std::abs(tangent.z_plus - tangent.z_minus) < 1e-6);
    CHECK_THROWS_AS(critical_points(1, -1), DegenerateCubic);
}

TEST_CASE("explicit root is conjugated when the leading coefficient is negative") {
    double x = 9.0 / 8, y = -0.99;
    REQUIRE(4 - 2 * x + 2 * y < 0);
    auto ze = z_plus_explicit(x, y);
    REQUIRE(ze.has_value());
    CHECK(ze->imag() > 0);
    CHECK(std::abs(*ze - critical_points(x, y).z_plus) < 1e-9);
}

TEST_CASE("limit shape") {
    auto t = limit_shape(0.8);
    CHECK(t.y_minus == doctest::Approx(-0.8).epsilon(1e-12));
    CHECK(std::abs(t.z_down) < 1e-9);
    CHECK(limit_shape(9.0 / 8).y_minus == doctest::Approx(-1).epsilon(1e-9));
    CHECK(limit_shape(0.5).y_plus == doctest::Approx(5.0977).epsilon(1e-4));
    CHECK(limit_shape(1.0).y_minus == doctest::Approx(-0.955544).epsilon(1e-5));
    for (int a = 1; a <= 100; ++a) {
        double x = 1.12 * a / 100;
        auto ls = limit_shape(x);
        for (auto [y, z] : {std::pair{ls.y_plus, ls.z_up}, std::pair{ls.y_minus, ls.z_down}}) {
            if (std::abs(z) < 1e-6) continue;
            auto d = h_derivatives(x, y, z);
            CHECK(std::abs(d.d1) < 1e-9);
            CHECK(std::abs(d.d2) < 1e-9);
        }
        CHECK(ls.y_plus > ls.y_minus);
        if (x < 0.8) CHECK(ls.y_minus > -x);
    }
    CHECK_THROWS_AS(limit_shape(1.2), std::domain_error);
}

TEST_CASE("displayed closed forms carry swapped labels") {
    for (double x : {0.3, 0.5, 0.7, 0.9, 1.0, 1.1}) {
        auto ls = limit_shape(x);
        auto [printed_up, printed_down] = printed_branch_roots(x);
        CHECK(printed_up == doctest::Approx(ls.z_down).epsilon(1e-9));
        if (x > 0.8)
            CHECK(printed_down == doctest::Approx(ls.z_up).epsilon(1e-9));
        else
            CHECK(std::abs(printed_down - ls.z_up) > 0.5);
    }
}

TEST_CASE("density") {
    for (auto [x, y] : liquid_grid()) {
        double r = density(x, y);
        CHECK(r > 0);
        CHECK(r < 1);
    }
    for (double x : {0.3, 0.6, 0.95}) {
        auto ls = limit_shape(x);
        CHECK(density(x, ls.y_plus - 1e-6) < 0.01);
        if (x < 0.8) CHECK(density(x, ls.y_minus + 1e-6) < 0.01);
    }
    CHECK_THROWS_AS(density(0.5, 7), std::domain_error);
    CHECK(limit_density(0.5, -0.7) == 1.0);
    CHECK(limit_density(0.5, 6) == 0.0);
    CHECK(limit_density(0.5, 0) == doctest::Approx(density(0.5, 0)));
}

TEST_CASE("density near the cusp vanishes like a cube root") {
    std::vector<double> lx, ly;
    for (double e = 1e-6; e <= 1.001e-3; e *= std::sqrt(10.0)) {
        lx.push_back(std::log(e));
        ly.push_back(std::log(1 - density(9.0 / 8, -1 + e)));
    }
    int m = static_cast<int>(lx.size());
    double mx = 0, my = 0;
    for (int k = 0; k < m; ++k) {
        mx += lx[k] / m;
        my += ly[k] / m;
    }
    double sxy = 0, sxx = 0;
    for (int k = 0; k < m; ++k) {
        sxy += (lx[k] - mx) * (ly[k] - my);
        sxx += (lx[k] - mx) * (lx[k] - mx);
    }
    double slope = sxy / sxx;
    CHECK(slope == doctest::Approx(1.0 / 3).epsilon(0.05));
    double e = 1e-6;
    CHECK(1 - density(9.0 / 8, -1 + e) == doctest::Approx(std::pow(3.0, 7.0 / 6) / kPi * std::cbrt(e)).epsilon(0.02));
}

TEST_CASE("edge scaling sign pattern") {
    for (double x : {0.2, 0.5, 0.9}) {
        auto a = airy_scaling(x, true);
        CHECK(a.d1 > 0);
        CHECK(a.c1 > 0);
        CHECK(a.c2 > 0);
        CHECK_FALSE(a.holes);
    }
    for (double x : {0.2, 0.5, 0.75}) {
        auto a = airy_scaling(x, false);
        CHECK(a.c1 > 0);
        CHECK(a.d1 < 0);
        CHECK(a.c2 < 0);
    }
    for (double x : {0.85, 0.95}) {
        auto a = airy_scaling(x, false);
        CHECK(a.c2 > 0);
        CHECK(a.d1 < 0);
        CHECK(a.c1 < 0);
        CHECK(a.holes);
    }
}

TEST_CASE("sine kernel") {
    for (auto [x, y] : {std::pair{0.5, 0.0}, std::pair{0.3, 2.0}, std::pair{0.9, -0.5}}) {
        auto z = critical_points(x, y).z_plus;
        CHECK(sine_kernel(z, 0, 0, 0, 0) == doctest::Approx(density(x, y)).epsilon(1e-12));
        CHECK(sine_kernel(z, 2, 3, 2, 3) == doctest::Approx(density(x, y)).epsilon(1e-12));
        CHECK(std::abs(sine_kernel(z, 0, 60, 0, 0)) < 0.01);
    }
    auto z = critical_points(0.5, 0).z_plus;
    CHECK(sine_kernel(z, 0, 0, 1, 0) != doctest::Approx(sine_kernel(z, 1, 0, 0, 0)));
}

TEST_CASE("airy kernel") {
    for (double a : {-2.0, -0.5, 0.0, 1.0, 2.5}) {
        double ai = boost::math::airy_ai(a), aip = boost::math::airy_ai_prime(a);
        CHECK(airy_kernel(0, a, 0, a) == doctest::Approx(aip * aip - a * ai * ai).epsilon(1e-10));
    }
    CHECK(airy_kernel(0, 6, 0, 6) < 1e-6);
    CHECK(airy_kernel(0, -6, 0, -6) > airy_kernel(0, -3, 0, -3));
    LimitQuadrature longer;
    longer.ray_length = 2 * 8.0;
    longer.panels = 24;
    CHECK(airy_kernel(0.5, 0.3, -0.2, 1.0, longer) == doctest::Approx(airy_kernel(0.5, 0.3, -0.2, 1.0)).epsilon(1e-10));
    LimitQuadrature short_rays;
    short_rays.ray_length = 0.5;
    CHECK_THROWS_AS(airy_kernel(0, 0, 0, 0, short_rays), ContourTruncationInsufficient);
}

TEST_CASE("gue corners kernel") {
    for (double a : {-2.0, -0.3, 0.0, 1.1}) {
        CHECK(gue_corners_kernel(1, a, 1, a) == doctest::Approx(std::exp(-a * a / 2) / std::sqrt(2 * kPi)).epsilon(1e-12));
        double k2 = gue_corners_kernel(2, a, 2, a);
        CHECK(k2 > 0);
    }
    double total = 0, h = 0.01;
    for (double a = -10; a <= 10; a += h) total += gue_corners_kernel(3, a, 3, a) * h;
    CHECK(total == doctest::Approx(3).epsilon(1e-6));
}

TEST_CASE("pearcey variant kernel") {
    CHECK_THROWS_AS(pearcey_variant_kernel(0, -1, 0, 1), std::domain_error);
    double d = pearcey_variant_kernel(0, 1, 0, 1);
    CHECK(d > 0);
    LimitQuadrature finer;
    finer.panels = 24;
    CHECK(pearcey_variant_kernel(0, 1, 0.5, 1.5, finer) == doctest::Approx(pearcey_variant_kernel(0, 1, 0.5, 1.5)).epsilon(1e-10));
    double g = std::exp(-0.25 / 1.0) / std::sqrt(2 * kPi * 0.5);
    CHECK(pearcey_variant_kernel(0, 1, 0.5, 1.5, {}, PearceySign::as_printed) -
              pearcey_variant_kernel(0, 1, 0.5, 1.5) ==
          doctest::Approx(2 * g).epsilon(1e-12));
}

TEST_CASE("principal minor distance is gauge invariant") {
    std::vector<std::vector<double>> a{{0.5, 0.2, 0.1}, {0.3, 0.4, -0.2}, {0.0, 0.1, 0.6}}, b = a;
    std::vector<double> g{2.0, -0.5, 3.0};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) b[r][c] = a[r][c] * g[r] / g[c];
    CHECK(principal_minor_distance(a, b) < 1e-15);
    b[0][0] += 0.01;
    CHECK(principal_minor_distance(a, b) == doctest::Approx(0.01).epsilon(1e-9));
}

TEST_CASE("finite kernels approach the sine and gue corners limits") {
    auto sine = sine_convergence(0.5, 0, {{0, 0}, {0, 1}, {1, 0}}, {100, 200, 400});
    CHECK(sine.monotone);
    CHECK(sine.pass);
    auto gue = gue_corners_convergence({{1, 0.0}, {2, 0.5}, {2, -0.5}}, {100, 200, 400});
    CHECK(gue.monotone);
    CHECK(gue.steps.back().distance < 0.05);
    CHECK(LimitKind::airy == limit_kind_from_string(to_string(LimitKind::airy)));
}

TEST_CASE("finite kernels approach the airy limit on the lower edge") {
    auto airy = airy_convergence(0.5, false, {{0, 0}, {0, 1}, {0.5, 0.5}}, {100, 200, 400});
    CHECK(airy.monotone);
    CHECK(airy.pass);
}

TEST_CASE("sampled occupation follows the limit density") {
    std::vector<DensityWindow> w{{0.5, -0.75, 4}, {0.5, 0.6, 4}, {0.5, 6.0, 4}};
    auto est = limit_shape_probe(100, w, 40, 7);
    CHECK(est[0].empirical == 1.0);
    CHECK(est[0].predicted == 1.0);
    CHECK(est[1].empirical == doctest::Approx(est[1].predicted).epsilon(0.1));
    CHECK(est[2].empirical < 0.02);
    auto serial = limit_shape_probe(100, w, 40, 7, false);
    for (std::size_t k = 0; k < w.size(); ++k) CHECK(serial[k].empirical == est[k].empirical);
}
