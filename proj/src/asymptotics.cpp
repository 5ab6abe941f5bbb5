#include "sspkit/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <random>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/hermite.hpp>

#include "sspkit/berele.hpp"
#include "sspkit/kernel.hpp"

namespace sspkit {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx I(0, 1);

cplx poly_eval(const std::vector<double>& c, cplx z) {
    cplx r = 0;
    for (double a : c) r = r * z + a;
    return r;
}

cplx poly_deriv(const std::vector<double>& c, cplx z) {
    cplx r = 0;
    int deg = static_cast<int>(c.size()) - 1;
    for (int k = 0; k < deg; ++k) r = r * z + c[k] * static_cast<double>(deg - k);
    return r;
}

// roots of a real polynomial given highest degree first, polished by Newton steps
std::vector<cplx> poly_roots(std::vector<double> c) {
    while (!c.empty() && std::abs(c.front()) < 1e-14 * (1 + std::abs(c.back()))) c.erase(c.begin());
    int deg = static_cast<int>(c.size()) - 1;
    if (deg < 1) return {};
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
    for (int k = 0; k < deg; ++k) comp(0, k) = -c[k + 1] / c[0];
    for (int k = 1; k < deg; ++k) comp(k, k - 1) = 1;
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    std::vector<cplx> roots;
    for (int k = 0; k < deg; ++k) {
        cplx z = es.eigenvalues()(k);
        for (int it = 0; it < 4; ++it) {
            cplx d = poly_deriv(c, z);
            if (std::abs(d) < 1e-300) break;
            cplx step = poly_eval(c, z) / d;
            if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
            z -= step;
        }
        roots.push_back(z);
    }
    return roots;
}

bool is_real(cplx z) { return std::abs(z.imag()) <= 1e-9 * (1 + std::abs(z.real())); }

double gaussian(double d, double t) { return std::exp(-d * d / (2 * t)) / std::sqrt(2 * kPi * t); }

struct Node {
    cplx z;
    cplx weight;
};

// Gauss-Legendre nodes on [0, L] split into equal panels
std::vector<std::pair<double, double>> legendre_panels(double L, const LimitQuadrature& q) {
    int m = q.nodes_per_panel;
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
    for (int k = 1; k < m; ++k) J(k, k - 1) = J(k - 1, k) = k / std::sqrt(4.0 * k * k - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    std::vector<std::pair<double, double>> out;
    double h = L / q.panels;
    for (int p = 0; p < q.panels; ++p)
        for (int k = 0; k < m; ++k) {
            double x = es.eigenvalues()(k);
            double w = 2 * es.eigenvectors()(0, k) * es.eigenvectors()(0, k);
            out.push_back({p * h + (x + 1) * h / 2, w * h / 2});
        }
    return out;
}

// two rays from the vertex at angles -angle (traversed inward) and +angle (outward)
std::vector<Node> v_contour(cplx vertex, double angle, double L, const LimitQuadrature& q) {
    std::vector<Node> out;
    cplx up = std::polar(1.0, angle), down = std::polar(1.0, -angle);
    for (auto [t, w] : legendre_panels(L, q)) {
        out.push_back({vertex + t * up, w * up});
        out.push_back({vertex + t * down, -w * down});
    }
    return out;
}

// smallest ray length at which both log-magnitudes have dropped by -log(tol) below their maximum
template <class F>
double ray_length(F logmag, const LimitQuadrature& q) {
    if (q.ray_length > 0) return q.ray_length;
    double drop = -std::log(q.tol) + 5;
    double peak = -std::numeric_limits<double>::infinity();
    for (double t = 0; t <= 60; t += 0.05) {
        double v = logmag(t);
        peak = std::max(peak, v);
        if (t > 1 && v < peak - drop) return t;
    }
    throw ContourTruncationInsufficient("integrand does not decay within ray length 60");
}

void check_tail(double log_end, double log_peak, const LimitQuadrature& q) {
    if (log_end > log_peak + std::log(q.tol) + 2)
        throw ContourTruncationInsufficient("contour tail estimate exceeds tolerance");
}

}  // namespace

HDerivatives h_derivatives(double x, double y, cplx z) {
    if (std::abs(z) < 1e-300 || std::abs(z - 0.5) < 1e-300 || std::abs(z - 1.0) < 1e-300 || std::abs(z - 2.0) < 1e-300)
        throw std::domain_error("h is singular at 0, 1/2, 1 and 2");
    double s = x + y;
    cplx a = 1.0 - z, b = 2.0 - z, c = 2.0 * z - 1.0;
    HDerivatives d;
    d.h = -2.0 * std::log(a) + x * std::log(1.0 - z / 2.0) + x * std::log(1.0 - 2.0 * z) - s * std::log(z);
    d.d1 = -s / z + 2.0 * x / c - x / b + 2.0 / a;
    d.d2 = s / (z * z) - 4.0 * x / (c * c) - x / (b * b) + 2.0 / (a * a);
    d.d3 = -2.0 * s / (z * z * z) + 16.0 * x / (c * c * c) - 2.0 * x / (b * b * b) + 4.0 / (a * a * a);
    d.d4 = 6.0 * s / std::pow(z, 4) - 96.0 * x / std::pow(c, 4) - 6.0 * x / std::pow(b, 4) + 12.0 / std::pow(a, 4);
    return d;
}

std::vector<double> critical_cubic(double x, double y) {
    return {2 * x - 2 * y - 4, -(2 * x - 7 * y - 10), -(2 * x + 7 * y + 4), 2 * (x + y)};
}

CriticalPoints critical_points(double x, double y) {
    auto c = critical_cubic(x, y);
    if (std::abs(c[0]) < 1e-12) throw DegenerateCubic("leading coefficient 2x - 2y - 4 vanishes");
    auto roots = poly_roots(c);
    CriticalPoints cp;
    int far = -1;
    for (int k = 0; k < 3; ++k)
        if (is_real(roots[k]) && (far < 0 || roots[k].real() > roots[far].real())) far = k;
    std::vector<cplx> rest;
    if (far >= 0 && roots[far].real() > 2) {
        cp.z0 = roots[far].real();
        for (int k = 0; k < 3; ++k)
            if (k != far) rest.push_back(roots[k]);
    } else {
        cp.z0 = std::numeric_limits<double>::quiet_NaN();
        std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) { return std::abs(a.imag()) > std::abs(b.imag()); });
        rest = {roots[0], roots[1]};
    }
    if (!is_real(rest[0]) || !is_real(rest[1])) {
        cplx z = std::abs(rest[0].imag()) > std::abs(rest[1].imag()) ? rest[0] : rest[1];
        if (z.imag() < 0) z = std::conj(z);
        cp.z_plus = z;
        cp.z_minus = std::conj(z);
        cp.topology = 2;
        return cp;
    }
    double a = rest[0].real(), b = rest[1].real();
    cp.z_plus = std::max(a, b);
    cp.z_minus = std::min(a, b);
    double lo = cp.z_minus.real(), hi = cp.z_plus.real();
    if (lo >= 0.5 && hi < 1)
        cp.topology = 1;
    else if (lo > 0 && hi < 0.5)
        cp.topology = 3;
    else if (lo < 0 && hi > 0 && hi < 0.5)
        cp.topology = 4;
    return cp;
}

std::optional<cplx> z_plus_explicit(double x, double y) {
    double a = 4 - 2 * x + 2 * y;
    double b = 10 - 2 * x + 7 * y;
    double d0 = 16 * x * x + 2 * x * y - 40 * x + 7 * y * y + 32 * y + 52;
    double d1 = 128 * x * x * x + 24 * x * x * y - 264 * x * x + 78 * x * y * y - 132 * x * y - 48 * x +
                20 * y * y * y + 276 * y * y + 816 * y + 560;
    if (std::abs(a) < 1e-12) return std::nullopt;
    cplx disc = std::sqrt(cplx(d1 * d1 - 4 * d0 * d0 * d0));
    cplx c = std::pow((d1 + disc) / 2.0, 1.0 / 3.0);
    if (std::abs(c) < 1e-300 || std::abs(c.imag()) > 1e-9 * std::abs(c)) return std::nullopt;
    cplx spread = c - d0 / c;
    if (std::abs(spread) < 1e-7 * std::abs(c)) return std::nullopt;
    cplx z = (2.0 * b - c - d0 / c + I * std::sqrt(3.0) * std::abs(spread)) / (6.0 * a);
    if (z.imag() < 0) z = std::conj(z);
    auto poly = critical_cubic(x, y);
    double scale = 0;
    for (double v : poly) scale = std::max(scale, std::abs(v));
    if (std::abs(poly_eval(poly, z)) > 1e-8 * scale) return std::nullopt;
    return z;
}

double edge_ordinate(double x, double z) { return 2 * z / (1 - z) - x * z / (2 - z) + x / (2 * z - 1); }

nlohmann::json LimitShape::to_json() const {
    return {{"x", x}, {"y_minus", y_minus}, {"y_plus", y_plus}, {"z_down", z_down}, {"z_up", z_up}};
}

std::pair<double, double> printed_branch_roots(double x) {
    double r = std::sqrt(x * (x + 9)), r3 = std::sqrt(x * x * x * (x + 9));
    double den = 10 * x - 8;
    double up = std::sqrt(-18 * r3 - x * (18 * x + 11) + 20 * r + 36) / den + (9 * x - r - 10) / den;
    double down = (9 * x + r - 10) / den - std::sqrt(18 * r3 - x * (18 * x + 11) - 20 * r + 36) / den;
    return {up, down};
}

LimitShape limit_shape(double x) {
    if (!(x > 0 && x <= 9.0 / 8)) throw std::domain_error("limit shape needs x in (0, 9/8]");
    // (z-2)^2 (1-2z)^2 - x (1-z)^2 (1-2z)^2 - x (1-z)^2 (z-2)^2, highest degree first
    auto mul = [](const std::vector<double>& p, const std::vector<double>& q) {
        std::vector<double> r(p.size() + q.size() - 1, 0.0);
        for (std::size_t a = 0; a < p.size(); ++a)
            for (std::size_t b = 0; b < q.size(); ++b) r[a + b] += p[a] * q[b];
        return r;
    };
    auto sq = [&](const std::vector<double>& p) { return mul(p, p); };
    auto t1 = mul(sq({1, -2}), sq({-2, 1}));
    auto t2 = mul(sq({-1, 1}), sq({-2, 1}));
    auto t3 = mul(sq({-1, 1}), sq({1, -2}));
    std::vector<double> quartic(5);
    for (int k = 0; k < 5; ++k) quartic[k] = t1[k] - x * (t2[k] + t3[k]);
    auto roots = poly_roots(quartic);
    double up = std::numeric_limits<double>::quiet_NaN(), down = -std::numeric_limits<double>::infinity();
    for (auto z : roots) {
        if (std::abs(z.imag()) > 1e-6 * (1 + std::abs(z.real()))) continue;
        double r = z.real();
        if (r > 0.5 && r < 1) up = r;
        if (r < 0.5 && r > down) down = r;
    }
    if (std::isnan(up) || !std::isfinite(down)) throw std::runtime_error("limit shape roots not found");
    LimitShape ls;
    ls.x = x;
    ls.z_up = up;
    ls.z_down = down;
    ls.y_plus = edge_ordinate(x, up);
    ls.y_minus = edge_ordinate(x, down);
    return ls;
}

bool in_liquid_region(double x, double y) {
    if (!(x > 0 && x <= 9.0 / 8)) return false;
    try {
        return critical_points(x, y).topology == 2;
    } catch (const DegenerateCubic&) {
        return false;
    }
}

double density(double x, double y) {
    if (!in_liquid_region(x, y)) throw std::domain_error("density is defined inside the liquid region");
    auto z = z_plus_explicit(x, y);
    cplx zp = z ? *z : critical_points(x, y).z_plus;
    return std::arg(zp) / kPi;
}

double limit_density(double x, double y) {
    if (x >= 0 && x < 1 && y >= -1 && y <= -x) return 1.0;
    if (x > 0 && x < 1 && in_liquid_region(x, y)) return density(x, y);
    return 0.0;
}

nlohmann::json AiryScaling::to_json() const {
    return {{"z_star", z_star}, {"y", y}, {"d1", d1}, {"c1", c1}, {"c2", c2}, {"holes", holes}};
}

AiryScaling airy_scaling(double x, bool upper_branch) {
    if (!(x > 0 && x < 1)) throw std::domain_error("edge scaling needs x in (0, 1)");
    auto ls = limit_shape(x);
    AiryScaling a;
    a.z_star = upper_branch ? ls.z_up : ls.z_down;
    a.y = upper_branch ? ls.y_plus : ls.y_minus;
    a.holes = !upper_branch && x > 0.8;
    double z = a.z_star;
    double h3 = h_derivatives(x, a.y, z).d3.real();
    a.d1 = std::cbrt(h3 / 2) * z;
    a.c1 = (2 * z - 1) * (2 * z - 1) * (z - 2) * (z - 2) / (2 * z * (5 * z * z - 8 * z + 5)) * a.d1 * a.d1;
    a.c2 = 2 * (z * z - 1) / ((z - 2) * (2 * z - 1)) * a.c1;
    return a;
}

double sine_kernel(cplx z_plus, long tau, long a, long tau2, long a2) {
    double r = std::abs(z_plus), phi = std::arg(z_plus);
    if (!(phi > 0 && phi < kPi)) throw std::domain_error("sine kernel needs Im z_+ > 0");
    long m = tau2 - tau;
    long e = a - a2;
    auto f = [&](double th) {
        cplx w = std::polar(r, th);
        cplx base = 2.5 - w - 1.0 / w;
        cplx v = std::pow(base, static_cast<int>(m)) * std::pow(w, static_cast<int>(e));
        return v.real() / (2 * kPi);
    };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    if (tau <= tau2) return GK::integrate(f, -phi, phi, 15, 1e-14);
    return -GK::integrate(f, phi - 2 * kPi, -phi, 15, 1e-14);
}

double airy_kernel(double tau, double a, double tau2, double a2, const LimitQuadrature& q) {
    auto xi_exp = [&](cplx s) { return s * s * s / 3.0 - s * s * tau2 / 2.0 - s * a2; };
    auto eta_exp = [&](cplx s) { return -s * s * s / 3.0 + s * s * tau / 2.0 + s * a; };
    cplx vx = 1.0, ve = -1.0;
    cplx dx = std::polar(1.0, kPi / 3), de = std::polar(1.0, 2 * kPi / 3);
    double L = std::max(ray_length([&](double t) { return std::max(xi_exp(vx + t * dx).real(), xi_exp(vx + t * std::conj(dx)).real()); }, q),
                        ray_length([&](double t) { return std::max(eta_exp(ve + t * de).real(), eta_exp(ve + t * std::conj(de)).real()); }, q));
    auto xs = v_contour(vx, kPi / 3, L, q);
    auto es = v_contour(ve, 2 * kPi / 3, L, q);
    std::vector<cplx> fx(xs.size()), ge(es.size());
    double peak = -1e300;
    for (std::size_t k = 0; k < xs.size(); ++k) peak = std::max(peak, xi_exp(xs[k].z).real());
    check_tail(xi_exp(vx + L * dx).real(), peak, q);
    for (std::size_t k = 0; k < xs.size(); ++k) fx[k] = xs[k].weight * std::exp(xi_exp(xs[k].z));
    for (std::size_t k = 0; k < es.size(); ++k) ge[k] = es[k].weight * std::exp(eta_exp(es[k].z));
    cplx total = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        cplx row = 0;
        for (std::size_t l = 0; l < es.size(); ++l) row += ge[l] / (xs[k].z - es[l].z);
        total += fx[k] * row;
    }
    double value = (total / ((2.0 * kPi * I) * (2.0 * kPi * I))).real();
    if (tau > tau2) value -= gaussian(a - a2, tau - tau2);
    return value;
}

double gue_corners_kernel(int i, double a, int j, double a2) {
    if (i < 1 || j < 1) throw std::domain_error("GUE corners levels start at 1");
    auto phi = [](double t) { return std::exp(-t * t / 2) / std::sqrt(2 * kPi); };
    // He_m(a) / m!, coefficients of exp(a t - t^2/2)
    std::vector<double> c(i);
    for (int m = 0; m < i; ++m) {
        double he = m == 0 ? 1.0 : (m == 1 ? a : 0.0);
        if (m >= 2) {
            double p0 = 1, p1 = a;
            for (int k = 2; k <= m; ++k) {
                double p2 = a * p1 - (k - 1) * p0;
                p0 = p1;
                p1 = p2;
            }
            he = p1;
        }
        c[m] = he / std::tgamma(m + 1.0);
    }
    auto hermite_prob = [](int p, double t) {
        double p0 = 1, p1 = t;
        if (p == 0) return p0;
        for (int k = 2; k <= p; ++k) {
            double p2 = t * p1 - (k - 1) * p0;
            p0 = p1;
            p1 = p2;
        }
        return p1;
    };
    double value = 0;
    for (int m = 0; m < i; ++m) {
        int p = j - i + m;
        double line;
        if (p >= 0) {
            line = hermite_prob(p, a2) * phi(a2);
        } else {
            // trapezoid on Re xi = 1
            double h = 0.02, T = 14;
            cplx acc = 0;
            for (double t = -T; t <= T + 1e-12; t += h) {
                cplx s(1, t);
                acc += std::pow(s, p) * std::exp(s * s / 2.0 - a2 * s);
            }
            line = (acc * h / (2 * kPi)).real();
        }
        value += c[m] * line;
    }
    if (i > j && a > a2) value -= std::pow(a - a2, i - j - 1) / std::tgamma(i - j + 0.0);
    return value;
}

double pearcey_variant_kernel(double tau, double a, double tau2, double a2, const LimitQuadrature& q,
                              PearceySign sign) {
    if (!(a > 0 && a2 > 0)) throw std::domain_error("Pearcey variant kernel is defined for positive positions");
    auto xi_exp = [&](cplx s) { return s * s * s * s / 24.0 + tau2 * s * s / 2.0 - a2 * s; };
    auto eta_exp = [&](cplx s) { return -s * s * s * s / 24.0 - tau * s * s / 2.0 + a * s; };
    cplx vx = -1.0, ve = 0.0;
    cplx dx = std::polar(1.0, 3 * kPi / 4);
    double L = std::max(ray_length([&](double t) { return std::max(xi_exp(vx + t * dx).real(), xi_exp(vx + t * std::conj(dx)).real()); }, q),
                        ray_length([&](double t) { return std::max(eta_exp(t * I).real(), eta_exp(-t * I).real()); }, q));
    auto xs = v_contour(vx, 3 * kPi / 4, L, q);
    auto es = v_contour(ve, kPi / 2, L, q);
    std::vector<cplx> fx(xs.size()), ge(es.size());
    for (std::size_t k = 0; k < xs.size(); ++k) fx[k] = xs[k].weight * std::exp(xi_exp(xs[k].z));
    for (std::size_t k = 0; k < es.size(); ++k) ge[k] = es[k].weight * std::exp(eta_exp(es[k].z));
    cplx total = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        cplx row = 0;
        cplx x2 = xs[k].z * xs[k].z;
        for (std::size_t l = 0; l < es.size(); ++l) row += ge[l] * 2.0 * es[l].z / (es[l].z * es[l].z - x2);
        total += fx[k] * row;
    }
    double value = (total / ((2.0 * kPi * I) * (2.0 * kPi * I))).real();
    if (tau < tau2) value += (sign == PearceySign::derived ? -1 : 1) * gaussian(a2 - a, tau2 - tau);
    return value;
}

double principal_minor_distance(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
    int m = static_cast<int>(a.size());
    if (static_cast<int>(b.size()) != m || m > 20) throw std::invalid_argument("matrices must match and be small");
    double worst = 0;
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
        std::vector<int> idx;
        for (int k = 0; k < m; ++k)
            if (mask & (1u << k)) idx.push_back(k);
        int s = static_cast<int>(idx.size());
        Eigen::MatrixXd A(s, s), B(s, s);
        for (int r = 0; r < s; ++r)
            for (int c = 0; c < s; ++c) {
                A(r, c) = a[idx[r]][idx[c]];
                B(r, c) = b[idx[r]][idx[c]];
            }
        worst = std::max(worst, std::abs(A.determinant() - B.determinant()));
    }
    return worst;
}

std::string to_string(LimitKind k) {
    switch (k) {
        case LimitKind::sine: return "sine";
        case LimitKind::airy: return "airy";
        case LimitKind::gue_corners: return "gue_corners";
        case LimitKind::pearcey: return "pearcey";
    }
    return "sine";
}

LimitKind limit_kind_from_string(const std::string& s) {
    if (s == "sine") return LimitKind::sine;
    if (s == "airy") return LimitKind::airy;
    if (s == "gue_corners") return LimitKind::gue_corners;
    if (s == "pearcey") return LimitKind::pearcey;
    throw std::invalid_argument("unknown limit kernel " + s);
}

nlohmann::json ConvergenceReport::to_json() const {
    nlohmann::json st = nlohmann::json::array();
    for (const auto& s : steps) st.push_back({{"n", s.n}, {"distance", s.distance}});
    return {{"kernel", to_string(kind)}, {"setup", setup},   {"steps", st}, {"monotone", monotone},
            {"threshold", threshold},    {"pass", pass},     {"note", note}};
}

namespace {

struct Site {
    int level;
    long pos;
};

using Matrix = std::vector<std::vector<double>>;

Matrix finite_matrix(const std::vector<Site>& sites, int n, double scale, bool complement) {
    int m = static_cast<int>(sites.size());
    Matrix out(m, std::vector<double>(m));
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic) collapse(2)
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) {
            try {
                double k = kssp_berele_residues(sites[r].level, sites[r].pos, sites[c].level, sites[c].pos, n);
                if (complement) k = (sites[r].level == sites[c].level && sites[r].pos == sites[c].pos ? 1.0 : 0.0) - k;
                out[r][c] = scale * k;
            } catch (...) {
#pragma omp critical
                err = std::current_exception();
            }
        }
    if (err) std::rethrow_exception(err);
    return out;
}

template <class F>
Matrix limit_matrix(int m, F entry) {
    Matrix out(m, std::vector<double>(m));
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) out[r][c] = entry(r, c);
    return out;
}

void finish(ConvergenceReport& rep) {
    rep.monotone = true;
    for (std::size_t k = 1; k < rep.steps.size(); ++k)
        if (rep.steps[k].distance > rep.steps[k - 1].distance) rep.monotone = false;
    rep.pass = rep.monotone && !rep.steps.empty() && rep.steps.back().distance <= rep.threshold;
}

}  // namespace

ConvergenceReport sine_convergence(double x, double y, const std::vector<std::pair<long, long>>& points,
                                   const std::vector<int>& ns, double threshold) {
    ConvergenceReport rep;
    rep.kind = LimitKind::sine;
    rep.threshold = threshold;
    auto cp = critical_points(x, y);
    if (cp.topology != 2) throw std::domain_error("sine limit needs a point of the liquid region");
    nlohmann::json pts = nlohmann::json::array();
    for (auto [t, a] : points) pts.push_back({t, a});
    rep.setup = {{"x", x}, {"y", y}, {"z_plus", {cp.z_plus.real(), cp.z_plus.imag()}}, {"points", pts}};
    int m = static_cast<int>(points.size());
    auto lim = limit_matrix(m, [&](int r, int c) {
        return sine_kernel(cp.z_plus, points[r].first, points[r].second, points[c].first, points[c].second);
    });
    for (int n : ns) {
        std::vector<Site> sites;
        for (auto [t, a] : points)
            sites.push_back({static_cast<int>(std::floor(n * x)) + static_cast<int>(t), static_cast<long>(std::floor(n * y)) + a});
        rep.steps.push_back({n, principal_minor_distance(finite_matrix(sites, n, 1.0, false), lim)});
    }
    finish(rep);
    return rep;
}

ConvergenceReport airy_convergence(double x, bool upper_branch, const std::vector<std::pair<double, double>>& points,
                                   const std::vector<int>& ns, double threshold) {
    ConvergenceReport rep;
    rep.kind = LimitKind::airy;
    rep.threshold = threshold;
    auto sc = airy_scaling(x, upper_branch);
    nlohmann::json pts = nlohmann::json::array();
    for (auto [t, a] : points) pts.push_back({t, a});
    rep.setup = {{"x", x}, {"branch", upper_branch ? "upper" : "lower"}, {"scaling", sc.to_json()}, {"points", pts}};
    int m = static_cast<int>(points.size());
    auto lim = limit_matrix(m, [&](int r, int c) {
        return airy_kernel(points[r].first, points[r].second, points[c].first, points[c].second);
    });
    for (int n : ns) {
        double n13 = std::cbrt(static_cast<double>(n)), n23 = n13 * n13;
        std::vector<Site> sites;
        for (auto [t, a] : points)
            sites.push_back({static_cast<int>(std::floor(x * n + sc.c1 * t * n23)),
                             static_cast<long>(std::floor(sc.y * n + sc.c2 * t * n23 + sc.d1 * a * n13))});
        rep.steps.push_back({n, principal_minor_distance(finite_matrix(sites, n, n13 * std::abs(sc.d1), sc.holes), lim)});
    }
    finish(rep);
    return rep;
}

ConvergenceReport gue_corners_convergence(const std::vector<std::pair<int, double>>& points, const std::vector<int>& ns,
                                          double threshold) {
    ConvergenceReport rep;
    rep.kind = LimitKind::gue_corners;
    rep.threshold = threshold;
    nlohmann::json pts = nlohmann::json::array();
    for (auto [i, a] : points) pts.push_back({i, a});
    rep.setup = {{"tangency", {0, 2}}, {"points", pts}};
    int m = static_cast<int>(points.size());
    auto lim = limit_matrix(m, [&](int r, int c) {
        return gue_corners_kernel(points[r].first, points[r].second, points[c].first, points[c].second);
    });
    for (int n : ns) {
        double rn = std::sqrt(static_cast<double>(n));
        std::vector<Site> sites;
        for (auto [i, a] : points) sites.push_back({i, 2L * n + static_cast<long>(std::floor(2 * a * rn))});
        rep.steps.push_back({n, principal_minor_distance(finite_matrix(sites, n, 2 * rn, false), lim)});
    }
    finish(rep);
    return rep;
}

ConvergenceReport pearcey_convergence(const std::vector<std::pair<double, double>>& points, const std::vector<int>& ns,
                                      double threshold, PearceySign sign) {
    ConvergenceReport rep;
    rep.kind = LimitKind::pearcey;
    rep.threshold = threshold;
    rep.note = "levels near 9n/8 exceed n: kernel-level check outside the probabilistic region";
    nlohmann::json pts = nlohmann::json::array();
    for (auto [t, a] : points) pts.push_back({t, a});
    rep.setup = {{"x", 9.0 / 8}, {"y", -1}, {"points", pts}, {"gaussian_sign", sign == PearceySign::derived ? "derived" : "printed"}};
    int m = static_cast<int>(points.size());
    auto lim = limit_matrix(m, [&](int r, int c) {
        return pearcey_variant_kernel(points[r].first, points[r].second, points[c].first, points[c].second, {}, sign);
    });
    for (int n : ns) {
        double s = std::pow(n / 12.0, 0.25);
        std::vector<Site> sites;
        for (auto [t, a] : points)
            sites.push_back({static_cast<int>(std::floor(9.0 * n / 8 + std::sqrt(27.0 * n / 64) * t)),
                             -static_cast<long>(n) + static_cast<long>(std::floor(s * a))});
        rep.steps.push_back({n, principal_minor_distance(finite_matrix(sites, n, s, true), lim)});
    }
    finish(rep);
    return rep;
}

nlohmann::json WindowEstimate::to_json() const {
    return {{"x", window.x},      {"y", window.y},           {"half_width", window.half_width},
            {"empirical", empirical}, {"predicted", predicted}, {"cells", cells}};
}

std::vector<WindowEstimate> limit_shape_probe(int n, const std::vector<DensityWindow>& windows, int samples,
                                              std::uint64_t seed, bool parallel) {
    if (n < 1 || samples < 1) throw std::invalid_argument("probe needs n >= 1 and samples >= 1");
    int k = 1;
    for (const auto& w : windows) {
        if (!(w.x > 0 && w.x < 1)) throw std::domain_error("probe windows need x in (0, 1)");
        k = std::max(k, static_cast<int>(std::floor(w.x * n)) + w.half_width);
    }
    k = std::min(k, n);
    std::vector<double> xs(n, 1.0), ys(k, 0.5);
    std::vector<std::vector<long long>> hits(samples, std::vector<long long>(windows.size(), 0));
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int s = 0; s < samples; ++s) {
        try {
            std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                              static_cast<std::uint32_t>(s)};
            std::mt19937_64 rng(seq);
            auto lam = sample_process(n, k, xs, ys, rng);
            for (std::size_t w = 0; w < windows.size(); ++w) {
                const auto& win = windows[w];
                long j0 = static_cast<long>(std::floor(win.x * n)), u0 = static_cast<long>(std::floor(win.y * n));
                for (long j = j0 - win.half_width; j <= j0 + win.half_width; ++j) {
                    if (j < 1 || j > k) continue;
                    for (long u = u0 - win.half_width; u <= u0 + win.half_width; ++u)
                        if (in_configuration(lam[j - 1], u)) ++hits[s][w];
                }
            }
        } catch (...) {
#pragma omp critical
            err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    std::vector<WindowEstimate> out;
    for (std::size_t w = 0; w < windows.size(); ++w) {
        const auto& win = windows[w];
        WindowEstimate e;
        e.window = win;
        long j0 = static_cast<long>(std::floor(win.x * n)), u0 = static_cast<long>(std::floor(win.y * n));
        double pred = 0;
        for (long j = j0 - win.half_width; j <= j0 + win.half_width; ++j) {
            if (j < 1 || j > k) continue;
            for (long u = u0 - win.half_width; u <= u0 + win.half_width; ++u) {
                pred += limit_density(static_cast<double>(j) / n, static_cast<double>(u) / n);
                ++e.cells;
            }
        }
        long long h = 0;
        for (int s = 0; s < samples; ++s) h += hits[s][w];
        e.empirical = e.cells ? static_cast<double>(h) / (static_cast<double>(e.cells) * samples) : 0;
        e.predicted = e.cells ? pred / e.cells : 0;
        out.push_back(e);
    }
    return out;
}

}  // namespace sspkit
