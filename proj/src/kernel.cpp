#include "sspkit/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <exception>
#include <numbers>
#include <random>

#include <gmpxx.h>
#include <omp.h>

#include "sspkit/berele.hpp"

namespace sspkit {

using cplx = std::complex<double>;

std::string KernelPoint::to_string() const {
    return "(" + std::to_string(level) + (primed ? "'" : "") + "," + std::to_string(pos) + ")";
}

nlohmann::json KernelPoint::to_json() const { return {{"level", level}, {"primed", primed}, {"pos", pos}}; }

KernelPoint KernelPoint::parse(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("kernel point must look like 2:-1 or 1':0");
    std::string lvl = text.substr(0, colon);
    KernelPoint p;
    if (!lvl.empty() && lvl.back() == '\'') {
        p.primed = true;
        lvl.pop_back();
    }
    std::size_t used = 0;
    p.level = std::stoi(lvl, &used);
    if (used != lvl.size()) throw std::invalid_argument("bad level in kernel point " + text);
    std::string ps = text.substr(colon + 1);
    p.pos = std::stol(ps, &used);
    if (used != ps.size()) throw std::invalid_argument("bad position in kernel point " + text);
    return p;
}

KernelPoint KernelPoint::from_json(const nlohmann::json& j) {
    if (j.is_string()) return parse(j.get<std::string>());
    KernelPoint p;
    p.level = j.at("level").get<int>();
    p.primed = j.value("primed", false);
    p.pos = j.at("pos").get<long>();
    return p;
}

void check_points(const std::vector<KernelPoint>& points, int k) {
    for (const auto& p : points) {
        int top = p.primed ? k - 1 : k;
        if (p.level < 1 || p.level > top) throw std::invalid_argument("kernel point " + p.to_string() + " out of range");
    }
}

nlohmann::json QuadratureConfig::to_json() const {
    nlohmann::json j = {{"nodes_z", nodes_z},
                        {"nodes_w", nodes_w},
                        {"tol", tol},
                        {"doubling_check", doubling_check},
                        {"berele_delta", berele_delta},
                        {"berele_method", berele_method == BereleMethod::residues ? "residues" : "quadrature"}};
    if (inner_radius) j["inner_radius"] = *inner_radius;
    if (outer_radius) j["outer_radius"] = *outer_radius;
    return j;
}

QuadratureConfig QuadratureConfig::from_json(const nlohmann::json& j) {
    QuadratureConfig c;
    c.nodes_z = j.value("nodes_z", c.nodes_z);
    c.nodes_w = j.value("nodes_w", c.nodes_w);
    c.tol = j.value("tol", c.tol);
    c.doubling_check = j.value("doubling_check", c.doubling_check);
    c.berele_delta = j.value("berele_delta", c.berele_delta);
    if (j.contains("inner_radius")) c.inner_radius = j["inner_radius"].get<double>();
    if (j.contains("outer_radius")) c.outer_radius = j["outer_radius"].get<double>();
    std::string m = j.value("berele_method", std::string("quadrature"));
    if (m == "residues")
        c.berele_method = BereleMethod::residues;
    else if (m == "quadrature")
        c.berele_method = BereleMethod::quadrature;
    else
        throw std::invalid_argument("berele_method must be quadrature or residues");
    if (c.nodes_z < 4 || c.nodes_w < 4) throw std::invalid_argument("quadrature needs at least 4 nodes");
    return c;
}

nlohmann::json KernelValue::to_json() const {
    return {{"value", re},
            {"imag", im},
            {"doubling_delta", doubling_delta},
            {"inner_radius", inner_radius},
            {"outer_radius", outer_radius}};
}

ContourCase contour_case(const KernelPoint& p, const KernelPoint& q, PrimeShift shift) {
    ContourCase c;
    c.w_inside = p.time() <= q.time();
    bool row_shift = shift == PrimeShift::own_level ? p.primed : q.primed;
    bool col_shift = shift == PrimeShift::own_level ? q.primed : p.primed;
    c.row_alpha_first = p.level + (row_shift ? 1 : 0);
    c.col_alpha_first = q.level + (col_shift ? 1 : 0);
    return c;
}

namespace {

std::vector<double> values_of(const Specialization& s) {
    std::vector<double> out;
    for (const auto& [v, g] : s.expanded()) out.push_back(v.get_d());
    return out;
}

std::vector<double> collect(const std::vector<Specialization>& specs, int first, int last) {
    std::vector<double> out;
    for (int i = first; i <= last; ++i)
        for (double v : values_of(specs[i - 1])) out.push_back(v);
    return out;
}

double max_abs(const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

cplx cauchy(const std::vector<double>& vars, cplx z) {
    cplx r = 1;
    for (double a : vars) r /= 1.0 - a * z;
    return r;
}

cplx cpow_int(cplx z, long e) {
    if (e >= 0) return std::pow(z, static_cast<int>(e));
    return 1.0 / std::pow(z, static_cast<int>(-e));
}

std::vector<cplx> circle(double r, int m) {
    std::vector<cplx> pts(m);
    for (int a = 0; a < m; ++a) pts[a] = std::polar(r, 2 * std::numbers::pi * a / m);
    return pts;
}

// (1/(Mz Mw)) sum f(z) g(w) cross(z, w) over circle nodes, with the measure factors already in f and g
template <class F, class G, class C>
cplx trapezoid(double rz, int mz, double rw, int mw, F f, G g, C cross) {
    auto zs = circle(rz, mz);
    auto ws = circle(rw, mw);
    std::vector<cplx> fz(mz), gw(mw);
    for (int a = 0; a < mz; ++a) fz[a] = f(zs[a]);
    for (int b = 0; b < mw; ++b) gw[b] = g(ws[b]);
    cplx total = 0;
    for (int a = 0; a < mz; ++a) {
        cplx row = 0;
        for (int b = 0; b < mw; ++b) row += gw[b] * cross(zs[a], ws[b]);
        total += fz[a] * row;
    }
    return total / (static_cast<double>(mz) * mw);
}

template <class Eval>
KernelValue with_doubling(const QuadratureConfig& cfg, Eval eval) {
    cplx v = eval(cfg.nodes_z, cfg.nodes_w);
    KernelValue kv;
    kv.re = v.real();
    kv.im = v.imag();
    if (cfg.doubling_check) kv.doubling_delta = std::abs(v - eval(cfg.nodes_z / 2, cfg.nodes_w / 2));
    return kv;
}

}  // namespace

std::pair<double, double> default_radii(const SpecTuple& s) {
    double ra = max_abs(collect(s.alphas, 1, s.k()));
    double rb = max_abs(collect(s.betas, 1, s.k()));
    double upper = 1.0;
    if (ra > 0) upper = std::min(upper, 1.0 / ra);
    if (rb > 0) upper = std::min(upper, 1.0 / rb);
    if (rb >= upper)
        throw ContourInfeasible("no admissible contour radii: max |beta| must be below min(1, 1/max|alpha|, 1/max|beta|)");
    double gap = upper - rb;
    return {rb + gap / 3, rb + 2 * gap / 3};
}

KernelValue kssp_eval_detailed(const KernelPoint& p, const KernelPoint& q, const SpecTuple& s,
                               const QuadratureConfig& cfg, PrimeShift shift) {
    int k = s.k();
    check_points({p, q}, k);
    auto [inner, outer] = default_radii(s);
    if (cfg.inner_radius || cfg.outer_radius) {
        double ra = max_abs(collect(s.alphas, 1, k));
        double rb = max_abs(collect(s.betas, 1, k));
        double in = cfg.inner_radius.value_or(inner), out = cfg.outer_radius.value_or(outer);
        double cap = std::min({1.0, ra > 0 ? 1.0 / ra : 1.0, rb > 0 ? 1.0 / rb : 1.0});
        if (!(rb < in && in < out && out < cap))
            throw ContourInfeasible("requested radii violate r_beta < inner < outer < min(1, 1/r_alpha, 1/r_beta)");
        inner = in;
        outer = out;
    }
    ContourCase cc = contour_case(p, q, shift);
    auto a_col = collect(s.alphas, cc.col_alpha_first, k);
    auto a_row = collect(s.alphas, cc.row_alpha_first, k);
    auto b_col = collect(s.betas, 1, q.level);
    auto b_row = collect(s.betas, 1, p.level);
    long u = p.pos, v = q.pos;
    auto f = [&](cplx z) {
        return cauchy(a_col, z) / (cauchy(b_col, z) * cauchy(b_col, 1.0 / z)) * cpow_int(z, -v - 1);
    };
    auto g = [&](cplx w) {
        return cauchy(b_row, w) * cauchy(b_row, 1.0 / w) / cauchy(a_row, w) * cpow_int(w, u + 1);
    };
    auto cross = [](cplx z, cplx w) { return (1.0 - w * w) / ((1.0 - z * w) * (1.0 - w / z)); };
    double rz = cc.w_inside ? outer : inner;
    double rw = cc.w_inside ? inner : outer;
    KernelValue kv = with_doubling(cfg, [&](int mz, int mw) { return trapezoid(rz, mz, rw, mw, f, g, cross); });
    kv.inner_radius = inner;
    kv.outer_radius = outer;
    return kv;
}

double kssp_eval(const KernelPoint& p, const KernelPoint& q, const SpecTuple& s, const QuadratureConfig& cfg) {
    return kssp_eval_detailed(p, q, s, cfg).re;
}

KernelValue kssp_berele_quadrature(int i, long u, int j, long v, int n, const QuadratureConfig& cfg) {
    double d = cfg.berele_delta;
    if (!(d > 0 && d < 0.25)) throw std::invalid_argument("berele delta must lie in (0, 1/4)");
    auto G = [n](int lvl, long pos, cplx z) {
        return std::pow(1.0 - z, -2 * n) * std::pow((1.0 - z / 2.0) * (1.0 - 2.0 * z), lvl) * cpow_int(z, -lvl - pos);
    };
    auto f = [&](cplx z) { return G(j, v, z); };
    auto g = [&](cplx w) { return w / G(i, u, w); };
    auto cross = [](cplx z, cplx w) { return (1.0 - w * w) / ((1.0 - z * w) * (z - w)); };
    double big = 1 - d, small = 0.5 + d;
    double rz = i <= j ? big : small;
    double rw = i <= j ? small : big;
    KernelValue kv = with_doubling(cfg, [&](int mz, int mw) { return trapezoid(rz, mz, rw, mw, f, g, cross); });
    double gauge = std::pow(-2.0, i - j);
    kv.re *= gauge;
    kv.im *= gauge;
    kv.doubling_delta *= std::abs(gauge);
    kv.inner_radius = small;
    kv.outer_radius = big;
    return kv;
}

namespace {

// series coefficients of (1 - c t)^e up to degree deg, c = num/den
std::vector<mpf_class> binomial_series(long e, long num, long den, long deg, mp_bitcnt_t bits) {
    std::vector<mpf_class> out(deg + 1, mpf_class(0, bits));
    if (deg < 0) return out;
    out[0] = 1;
    for (long r = 0; r < deg; ++r) {
        out[r + 1] = out[r];
        long f = e - r;
        if (f == 0) {
            for (long t = r + 1; t <= deg; ++t) out[t] = 0;
            break;
        }
        out[r + 1] *= std::abs(f) * num;
        out[r + 1] /= (r + 1) * den;
        if (f > 0) out[r + 1] = -out[r + 1];
    }
    return out;
}

std::vector<mpf_class> series_mul(const std::vector<mpf_class>& a, const std::vector<mpf_class>& b, long deg,
                                  mp_bitcnt_t bits) {
    std::vector<mpf_class> out(deg + 1, mpf_class(0, bits));
    mpf_class t(0, bits);
    for (long x = 0; x <= deg && x < static_cast<long>(a.size()); ++x)
        for (long y = 0; x + y <= deg && y < static_cast<long>(b.size()); ++y) {
            t = a[x] * b[y];
            out[x + y] += t;
        }
    return out;
}

}  // namespace

double kssp_berele_residues(int i, long u, int j, long v, int n, unsigned extra_bits) {
    if (i < 1 || j < 1 || n < 1) throw std::invalid_argument("berele kernel needs levels and n >= 1");
    long N = j + v;
    long span = 2L * n + 2L * i + 2L * j + std::labs(u) + std::labs(v) + std::max(N, 0L);
    mp_bitcnt_t bits = 128 + 3 * static_cast<mp_bitcnt_t>(span) / 2 + extra_bits;
    mpf_class total(0, bits), term(0, bits), c(0, bits);

    if (i <= j) {
        long target = j + v - i - u;
        long d = j - i;
        if (target >= 0 && target <= 2 * d) {
            auto a = binomial_series(d, 1, 2, target, bits);
            auto b = binomial_series(d, 2, 1, target, bits);
            auto ab = series_mul(a, b, target, bits);
            total += ab[target];
        }
    }

    if (N >= 0) {
        // P(z) = (1-z)^{-2n} (1-z/2)^j (1-2z)^j
        auto p1 = binomial_series(-2L * n, 1, 1, N, bits);
        auto p2 = binomial_series(j, 1, 2, N, bits);
        auto p3 = binomial_series(j, 2, 1, N, bits);
        auto P = series_mul(series_mul(p1, p2, N, bits), p3, N, bits);

        // residue at w = 0 of sum_m p_{N-m} (w^{i+u+m+1} - w^{i+u-m-1}) Q(w)
        long qdeg = std::max(0L, N - i - u);
        auto q1 = binomial_series(2L * n, 1, 1, qdeg, bits);
        auto q2 = binomial_series(-i, 1, 2, qdeg, bits);
        auto q3 = binomial_series(-i, 2, 1, qdeg, bits);
        auto Q = series_mul(series_mul(q1, q2, qdeg, bits), q3, qdeg, bits);
        auto Qat = [&](long d) -> const mpf_class* { return d >= 0 && d <= qdeg ? &Q[d] : nullptr; };
        for (long m = 0; m <= N; ++m) {
            if (auto q = Qat(-(i + u + m + 2))) {
                term = P[N - m] * *q;
                total += term;
            }
            if (auto q = Qat(m - i - u)) {
                term = P[N - m] * *q;
                total -= term;
            }
        }

        // residue at w = 1/2: w = 1/2 + t, (1-2w)^{-i} = (-2t)^{-i}
        // A(t) = (1/2 - t)^{2n} (3/4 - t/2)^{-i}
        long deg = i - 1;
        auto a1 = binomial_series(2L * n, 2, 1, deg, bits);
        auto a2 = binomial_series(-i, 2, 3, deg, bits);
        auto A = series_mul(a1, a2, deg, bits);
        mpf_class scale(1, bits);
        mpf_div_2exp(scale.get_mpf_t(), scale.get_mpf_t(), 2L * n);
        mpf_class three_quarters(3, bits);
        three_quarters /= 4;
        mpf_class tq(1, bits);
        for (int t = 0; t < i; ++t) tq /= three_quarters;
        scale *= tq;
        // E_r = sum_m p_{N-m} [c(e+, r) - c(e-, r)], c(e, r) = binom(e, r) 2^{r-e}
        std::vector<mpf_class> E(deg + 1, mpf_class(0, bits));
        auto accumulate = [&](long e, const mpf_class& weight, int sign) {
            c = weight;
            long shift = -e;
            if (shift >= 0)
                mpf_mul_2exp(c.get_mpf_t(), c.get_mpf_t(), shift);
            else
                mpf_div_2exp(c.get_mpf_t(), c.get_mpf_t(), -shift);
            for (long r = 0; r <= deg; ++r) {
                if (sign > 0)
                    E[r] += c;
                else
                    E[r] -= c;
                long f = e - r;
                if (f == 0) break;
                if (f > 0)
                    c *= static_cast<unsigned long>(f);
                else {
                    c *= static_cast<unsigned long>(-f);
                    c = -c;
                }
                c /= static_cast<unsigned long>(r + 1);
                mpf_mul_2exp(c.get_mpf_t(), c.get_mpf_t(), 1);
            }
        };
        for (long m = 0; m <= N; ++m) {
            accumulate(i + u + m + 1, P[N - m], 1);
            accumulate(i + u - m - 1, P[N - m], -1);
        }
        mpf_class res(0, bits);
        for (long l = 0; l <= deg; ++l) {
            term = A[l] * E[deg - l];
            res += term;
        }
        res *= scale;
        mpf_div_2exp(res.get_mpf_t(), res.get_mpf_t(), i);
        if (i % 2) res = -res;
        total += res;
    }
    double gauge = std::pow(-2.0, i - j);
    return total.get_d() * gauge;
}

double kssp_berele(int i, long u, int j, long v, int n, const QuadratureConfig& cfg) {
    if (cfg.berele_method == BereleMethod::residues) return kssp_berele_residues(i, u, j, v, n);
    return kssp_berele_quadrature(i, u, j, v, n, cfg).re;
}

Eigen::MatrixXd kernel_matrix(const std::vector<KernelPoint>& points, const KernelFn& kernel, bool parallel) {
    const int m = static_cast<int>(points.size());
    Eigen::MatrixXd K(m, m);
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic) collapse(2) if (parallel)
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
            try {
                K(a, b) = kernel(points[a], points[b]);
            } catch (...) {
#pragma omp critical
                err = std::current_exception();
            }
        }
    if (err) std::rethrow_exception(err);
    return K;
}

double correlation(const std::vector<KernelPoint>& points, const KernelFn& kernel, bool parallel) {
    if (points.empty()) return 1.0;
    return kernel_matrix(points, kernel, parallel).determinant();
}

double correlation(const std::vector<KernelPoint>& points, const SpecTuple& s, const QuadratureConfig& cfg) {
    check_points(points, s.k());
    return correlation(points, [&](const KernelPoint& p, const KernelPoint& q) { return kssp_eval(p, q, s, cfg); });
}

double correlation_berele(const std::vector<KernelPoint>& points, int n, const QuadratureConfig& cfg) {
    for (const auto& p : points)
        if (p.primed) throw std::invalid_argument("berele kernel has no primed levels");
    return correlation(points, [&](const KernelPoint& p, const KernelPoint& q) {
        return kssp_berele(p.level, p.pos, q.level, q.pos, n, cfg);
    });
}

bool in_configuration(const Partition& lam, long pos) {
    long len = lam.length();
    if (pos <= -len - 1) return true;
    for (long i = 1; i <= len; ++i)
        if (lam[i - 1] - i == pos) return true;
    return false;
}

bool tuple_contains(const std::vector<Partition>& lambdas, const std::vector<Partition>& mus,
                    const std::vector<KernelPoint>& points) {
    for (const auto& p : points) {
        const Partition& lam = p.primed ? mus.at(p.level - 1) : lambdas.at(p.level - 1);
        if (!in_configuration(lam, p.pos)) return false;
    }
    return true;
}

EnumeratedCorrelation enumerated_correlation(const std::vector<KernelPoint>& points, const SupportEnumeration& sup) {
    Rational acc = 0;
    for (const auto& e : sup.entries)
        if (tuple_contains(e.tuple.lambdas, e.tuple.mus, points)) acc += e.probability;
    return {acc.get_d(), sup.tail_bound.get_d()};
}

nlohmann::json McEstimate::to_json() const { return {{"estimate", estimate}, {"stderr", stderr_}, {"samples", samples}}; }

std::vector<McEstimate> mc_correlations(const std::vector<std::vector<KernelPoint>>& point_sets, int n, int k,
                                        const std::vector<double>& x, const std::vector<double>& y,
                                        const McOptions& opt) {
    for (const auto& ps : point_sets) check_points(ps, k);
    if (opt.chunks < 1 || opt.samples < 1) throw std::invalid_argument("need positive samples and chunks");
    const int chunks = opt.chunks;
    const std::size_t sets = point_sets.size();
    std::vector<std::vector<long long>> hits(chunks, std::vector<long long>(sets, 0));
    std::exception_ptr err;
#pragma omp parallel for schedule(dynamic) if (opt.parallel)
    for (int c = 0; c < chunks; ++c) {
        try {
            std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                              static_cast<std::uint32_t>(c)};
            std::mt19937_64 rng(seq);
            long long count = opt.samples / chunks + (c < opt.samples % chunks ? 1 : 0);
            for (long long t = 0; t < count; ++t) {
                auto lam = sample_process(n, k, x, y, rng);
                for (std::size_t s = 0; s < sets; ++s)
                    if (tuple_contains(lam, lam, point_sets[s])) ++hits[c][s];
            }
        } catch (...) {
#pragma omp critical
            err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
    std::vector<McEstimate> out(sets);
    for (std::size_t s = 0; s < sets; ++s) {
        long long h = 0;
        for (int c = 0; c < chunks; ++c) h += hits[c][s];
        double pr = static_cast<double>(h) / opt.samples;
        out[s] = {pr, std::sqrt(pr * (1 - pr) / opt.samples), opt.samples};
    }
    return out;
}

McEstimate mc_correlation(const std::vector<KernelPoint>& points, int n, int k, const std::vector<double>& x,
                          const std::vector<double>& y, const McOptions& opt) {
    return mc_correlations({points}, n, k, x, y, opt).front();
}

}  // namespace sspkit
