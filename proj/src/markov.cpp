#include "sspkit/markov.hpp"

#include <algorithm>
#include <cmath>

#include "sspkit/stats.hpp"

namespace sspkit {

NumericEvaluator::NumericEvaluator(const Specialization& s) : spec_(s.with_grade(0)), cache_(spec_, 0) {}

Rational NumericEvaluator::schur(const Partition& lam) { return cache_.ev.schur(lam)[0]; }
Rational NumericEvaluator::skew(const Partition& lam, const Partition& mu) {
    if (!contains(lam, mu)) return 0;
    return cache_.ev.skew(lam, mu)[0];
}
Rational NumericEvaluator::T(const Partition& a, const Partition& b) { return cache_.T(a, b)[0]; }
Rational NumericEvaluator::SP(const Partition& lam) { return cache_.ev.SP(lam)[0]; }

Rational cauchy_value(const Specialization& a, const Specialization& b) {
    return H(a.with_grade(0), b.with_grade(0), 0)[0];
}

Rational TransitionRow::mass() const {
    Rational m = 0;
    for (const auto& p : prob) m += p;
    return m;
}

Rational q_up(const Partition& mu, const Partition& lam, const Specialization& y, const Specialization& z) {
    NumericEvaluator ey(y), ez(z);
    Rational smu = ey.schur(mu);
    if (smu == 0) throw OutOfSupport("s_mu(y) vanishes");
    return ey.schur(lam) * ez.skew(lam, mu) / (smu * cauchy_value(y, z));
}

Rational q_curve(const Partition& mu, const Partition& lam, const Specialization& y, const Specialization& t) {
    NumericEvaluator ey(y), et(t), eyt(y + t);
    Rational smu = eyt.schur(mu);
    if (smu == 0) throw OutOfSupport("s_mu(y, t) vanishes");
    return ey.schur(lam) * et.T(lam, mu) / (smu * cauchy_value(y, t));
}

namespace {

// kernels of fixed specializations with cached evaluators
struct UpKernel {
    Specialization y, z;
    NumericEvaluator ey, ez;
    Rational h;
    UpKernel(const Specialization& y_, const Specialization& z_) : y(y_), z(z_), ey(y_), ez(z_), h(cauchy_value(y_, z_)) {}
    Rational operator()(const Partition& mu, const Partition& lam) {
        Rational smu = ey.schur(mu);
        if (smu == 0) throw OutOfSupport("s_mu(y) vanishes");
        Rational sk = ez.skew(lam, mu);
        if (sk == 0) return 0;
        return ey.schur(lam) * sk / (smu * h);
    }
    TransitionRow row(const Partition& mu, int cap) {
        TransitionRow r{mu, {}, {}, 0};
        for (const auto& lam : superpartitions(mu, mu.size() + cap)) {
            Rational p = (*this)(mu, lam);
            if (p == 0) continue;
            r.to.push_back(lam);
            r.prob.push_back(p);
        }
        GradedSeries gen = H(y.with_grade(0), z.with_grade(1), cap);
        Rational head = 0;
        for (int d = 0; d <= cap; ++d) head += gen[d];
        r.tail_bound = 1 - head / h;
        return r;
    }
};

struct CurveKernel {
    Specialization y, t;
    NumericEvaluator ey, et, eyt;
    Rational h;
    CurveKernel(const Specialization& y_, const Specialization& t_)
        : y(y_), t(t_), ey(y_), et(t_), eyt(y_ + t_), h(cauchy_value(y_, t_)) {}
    Rational operator()(const Partition& mu, const Partition& lam) {
        Rational smu = eyt.schur(mu);
        if (smu == 0) throw OutOfSupport("s_mu(y, t) vanishes");
        Rational sl = ey.schur(lam);
        if (sl == 0) return 0;
        return sl * et.T(lam, mu) / (smu * h);
    }
    TransitionRow row(const Partition& mu, int cap) {
        TransitionRow r{mu, {}, {}, 0};
        for (const auto& lam : enumerate_partitions(mu.size() + cap)) {
            Rational p = (*this)(mu, lam);
            if (p == 0) continue;
            r.to.push_back(lam);
            r.prob.push_back(p);
        }
        auto y0 = y.with_grade(0), t1 = t.with_grade(1);
        GradedSeries gen = H(y0, t1, cap) * SchurEvaluator(y0 + t1, cap).schur(mu);
        Rational head = 0;
        for (int d = 0; d <= cap; ++d) head += gen[d];
        r.tail_bound = 1 - head / (h * eyt.schur(mu));
        return r;
    }
};

std::vector<Partition> support_states(NumericEvaluator& ev, int max_size) {
    std::vector<Partition> out;
    for (const auto& p : enumerate_partitions(max_size))
        if (ev.schur(p) != 0) out.push_back(p);
    return out;
}

// (A B)_{mu, lam} truncated through A's row, with the row tail as tolerance
template <class B>
Rational product_entry(const TransitionRow& row, B& b, const Partition& lam) {
    Rational s = 0;
    for (std::size_t i = 0; i < row.to.size(); ++i) s += row.prob[i] * b(row.to[i], lam);
    return s;
}

template <class A1, class B1, class A2, class B2>
CommutationReport compare_products(const std::string& name, A1& a1, B1& b1, A2& a2, B2& b2,
                                   const std::vector<Partition>& rows, const std::vector<Partition>& cols, int cap) {
    CommutationReport rep;
    rep.relation = name;
    for (const auto& mu : rows) {
        auto r1 = a1.row(mu, cap), r2 = a2.row(mu, cap);
        ++rep.rows;
        for (const auto& lam : cols) {
            Rational err = abs(Rational(product_entry(r1, b1, lam) - product_entry(r2, b2, lam)));
            Rational tol = r1.tail_bound + r2.tail_bound;
            ++rep.entries;
            if (err != 0) rep.exact_agreement = false;
            rep.max_error = std::max(rep.max_error, err.get_d());
            rep.max_tolerance = std::max(rep.max_tolerance, tol.get_d());
            if (err > tol) rep.pass = false;
        }
    }
    return rep;
}

}  // namespace

TransitionRow q_up_row(const Partition& mu, const Specialization& y, const Specialization& z, int cap) {
    return UpKernel(y, z).row(mu, cap);
}

TransitionRow q_curve_row(const Partition& mu, const Specialization& y, const Specialization& t, int cap) {
    return CurveKernel(y, t).row(mu, cap);
}

nlohmann::json CommutationReport::to_json() const {
    return {{"relation", relation}, {"rows", rows}, {"entries", entries}, {"exact_agreement", exact_agreement},
            {"max_error", max_error}, {"max_tolerance", max_tolerance}, {"pass", pass}};
}

std::vector<CommutationReport> check_commutation(const Specialization& y, const Specialization& z1,
                                                 const Specialization& z2, const Specialization& t, int cap,
                                                 int row_cap) {
    std::vector<CommutationReport> out;
    NumericEvaluator ey(y), eyt(y + t), eytz(y + t + z1);
    int col_cap = row_cap + cap;
    {
        UpKernel a(y, z1), b(y, z2), c(y, z2), d(y, z1);
        out.push_back(compare_products("q_up(y;z1) q_up(y;z2) = q_up(y;z2) q_up(y;z1)", a, b, c, d,
                                       support_states(ey, row_cap), support_states(ey, col_cap), cap));
    }
    {
        CurveKernel a(y + t, z1), b(y, t), c(y + z1, t), d(y, z1);
        out.push_back(compare_products("q_curve(y,t;z) q_curve(y;t) = q_curve(y,z;t) q_curve(y;z)", a, b, c, d,
                                       support_states(eytz, row_cap), support_states(ey, col_cap), cap));
    }
    {
        UpKernel a(y + t, z1);
        CurveKernel b(y, t), c(y, t);
        UpKernel d(y, z1);
        out.push_back(compare_products("q_up(y,t;z) q_curve(y;t) = q_curve(y;t) q_up(y;z)", a, b, c, d,
                                       support_states(eyt, row_cap), support_states(ey, col_cap), cap));
    }
    return out;
}

nlohmann::json IntertwiningReport::to_json() const {
    return {{"up_exact", up_exact}, {"curve_max_error", curve_max_error}, {"curve_tolerance", curve_tolerance},
            {"curve_pass", curve_pass}, {"states", states}, {"pass", pass()}};
}

IntertwiningReport check_intertwining(const Specialization& x, const Specialization& y, const Specialization& z,
                                      const Specialization& t, int cap) {
    IntertwiningReport rep;
    NumericEvaluator ey(y), eyt(y + t);
    UpKernel up(y, z);
    CurveKernel curve(y, t);
    rep.up_exact = true;
    Rational tail = ss_measure_size_tail(x, y + t, cap);
    Rational worst = 0;
    for (const auto& lam : support_states(ey, cap)) {
        ++rep.states;
        Rational l = 0;
        for (const auto& mu : subpartitions(lam))
            if (ey.schur(mu) != 0) l += ss_measure(mu, x, y) * up(mu, lam);
        if (l != ss_measure(lam, x + z, y)) rep.up_exact = false;
        Rational c = 0;
        for (const auto& mu : enumerate_partitions(cap))
            if (eyt.schur(mu) != 0) c += ss_measure(mu, x, y + t) * curve(mu, lam);
        worst = std::max(worst, Rational(abs(Rational(c - ss_measure(lam, x, y)))));
    }
    rep.curve_max_error = worst.get_d();
    rep.curve_tolerance = tail.get_d();
    rep.curve_pass = worst <= tail;
    return rep;
}

namespace {

enum Kind { kCurveUp = 0, kDownUp = 1, kCurveCurve = 2, kDownCurve = 3 };

}  // namespace

TupleDynamics::TupleDynamics(SpecTuple s, Specialization pi, double mass_tol, int max_increment)
    : spec_(std::move(s)), pi_(std::move(pi)), mass_tol_(mass_tol), max_increment_(max_increment) {
    std::string why;
    if (!probability_regime(spec_, &why)) throw NotProbabilityRegime(why);
    for (const auto& v : pi_.vars())
        if (v.value <= 0) throw std::invalid_argument("pi must have positive variables");
    for (int j = 0; j < spec_.k(); ++j) {
        alpha_.push_back(std::make_unique<NumericEvaluator>(spec_.alphas[j]));
        beta_.push_back(std::make_unique<NumericEvaluator>(spec_.betas[j]));
    }
    pi_ev_ = std::make_unique<NumericEvaluator>(pi_);
    empty_ev_ = std::make_unique<NumericEvaluator>(Specialization::empty());
}

SpecTuple TupleDynamics::up_target() const {
    SpecTuple s = spec_;
    s.alphas.back() = s.alphas.back() + pi_;
    return s;
}

SpecTuple TupleDynamics::curve_target() const {
    SpecTuple s = spec_;
    s.betas.front() = Specialization::empty();
    return s;
}

// kinds: curve-up P(a, b -> lam) ∝ T_{a,lam}(beta^level) s_{lam/b}(pi)
//        down-up P(a, b -> lam) ∝ s_{a/lam}(alpha^level) s_{lam/b}(pi)
//        curve-curve P(a, b -> lam) ∝ T_{a,lam}(x) T_{b,lam}(beta^1), x = beta^level or empty at level 0
//        down-curve P(a, b -> lam) ∝ s_{a/lam}(alpha^level) T_{b,lam}(beta^1)
TupleDynamics::Dist TupleDynamics::build(int kind, int level, const Partition& a, const Partition& b) {
    Dist d;
    auto push = [&](const Partition& lam, const Rational& w) {
        if (w == 0) return;
        d.to.push_back(lam);
        d.prob.push_back(w);
    };
    Rational norm = 0, mass = 0;
    if (kind == kDownUp || kind == kDownCurve) {
        auto& ea = *alpha_[level];
        auto& sigma = *beta_[0];
        for (const auto& lam : subpartitions(a)) {
            Rational w = ea.skew(a, lam);
            if (w == 0) continue;
            w *= kind == kDownUp ? pi_ev_->skew(lam, b) : sigma.T(b, lam);
            push(lam, w);
            norm += w;
        }
        if (norm == 0) throw std::domain_error("empty transition support");
        mass = norm;
    } else {
        NumericEvaluator& x = kind == kCurveUp ? *beta_[level] : (level == 0 ? *empty_ev_ : *beta_[level]);
        const Specialization& xs = x.spec();
        if (kind == kCurveUp) {
            Rational inner = 0;
            for (const auto& eta : subpartitions(a)) inner += pi_ev_->skew(a, eta) * x.T(b, eta);
            norm = cauchy_value(xs, pi_) * inner;
        } else {
            norm = cauchy_value(xs, spec_.betas[0]) * NumericEvaluator(xs + spec_.betas[0]).T(a, b);
        }
        if (norm == 0) throw std::domain_error("empty transition support");
        int base = kind == kCurveUp ? b.size() : std::max(a.size(), b.size());
        int start = kind == kCurveUp ? b.size() : 0;
        Rational target = 1 - Rational(mass_tol_);
        // s_{lam/b} and T_{b,lam} at m variables vanish once l(lam) > l(b) + m
        int max_len = b.length() + static_cast<int>((kind == kCurveUp ? pi_ : spec_.betas[0]).expanded().size());
        int size = start;
        for (; size <= base + max_increment_; ++size) {
            for (const auto& lam : partitions_of(size, max_len)) {
                Rational w;
                if (kind == kCurveUp) {
                    Rational s = pi_ev_->skew(lam, b);
                    if (s == 0) continue;
                    w = x.T(a, lam) * s;
                } else {
                    Rational s = beta_[0]->T(b, lam);
                    if (s == 0) continue;
                    w = x.T(a, lam) * s;
                }
                push(lam, w);
                mass += w;
            }
            if (size >= base && mass >= target * norm) break;
        }
        if (mass < target * norm) throw TruncationTooCoarse("candidate mass below 1 - tolerance");
    }
    double acc = 0;
    for (auto& p : d.prob) {
        p /= norm;
        acc += p.get_d();
        d.cdf.push_back(acc);
    }
    trunc_err_ = std::max(trunc_err_, 1.0 - Rational(mass / norm).get_d());
    return d;
}

const TupleDynamics::Dist& TupleDynamics::dist(int kind, int level, const Partition& a, const Partition& b) {
    auto key = std::make_tuple(kind, level, a, b);
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, build(kind, level, a, b)).first;
    return it->second;
}

Partition TupleDynamics::draw(const Dist& d, std::mt19937_64& rng) {
    double u = std::generate_canonical<double, 53>(rng) * d.cdf.back();
    auto it = std::upper_bound(d.cdf.begin(), d.cdf.end(), u);
    if (it == d.cdf.end()) --it;
    return d.to[it - d.cdf.begin()];
}

Rational TupleDynamics::lookup(const Dist& d, const Partition& p) {
    for (std::size_t i = 0; i < d.to.size(); ++i)
        if (d.to[i] == p) return d.prob[i];
    return 0;
}

PartitionTuple TupleDynamics::step_up(const PartitionTuple& t, std::mt19937_64& rng) {
    int k = spec_.k();
    PartitionTuple out = t;
    out.lambdas[0] = draw(dist(kCurveUp, 0, Partition{}, t.lambdas[0]), rng);
    for (int j = 0; j + 1 < k; ++j) {
        out.mus[j] = draw(dist(kDownUp, j, out.lambdas[j], t.mus[j]), rng);
        out.lambdas[j + 1] = draw(dist(kCurveUp, j + 1, out.mus[j], t.lambdas[j + 1]), rng);
    }
    return out;
}

PartitionTuple TupleDynamics::step_curve(const PartitionTuple& t, std::mt19937_64& rng) {
    int k = spec_.k();
    PartitionTuple out = t;
    out.lambdas[0] = draw(dist(kCurveCurve, 0, Partition{}, t.lambdas[0]), rng);
    for (int j = 0; j + 1 < k; ++j) {
        out.mus[j] = draw(dist(kDownCurve, j, out.lambdas[j], t.mus[j]), rng);
        out.lambdas[j + 1] = draw(dist(kCurveCurve, j + 1, out.mus[j], t.lambdas[j + 1]), rng);
    }
    return out;
}

Rational TupleDynamics::up_probability(const PartitionTuple& from, const PartitionTuple& to) {
    Rational p = lookup(dist(kCurveUp, 0, Partition{}, from.lambdas[0]), to.lambdas[0]);
    for (int j = 0; j + 1 < spec_.k() && p != 0; ++j) {
        p *= lookup(dist(kDownUp, j, to.lambdas[j], from.mus[j]), to.mus[j]);
        if (p == 0) break;
        p *= lookup(dist(kCurveUp, j + 1, to.mus[j], from.lambdas[j + 1]), to.lambdas[j + 1]);
    }
    return p;
}

Rational TupleDynamics::curve_probability(const PartitionTuple& from, const PartitionTuple& to) {
    Rational p = lookup(dist(kCurveCurve, 0, Partition{}, from.lambdas[0]), to.lambdas[0]);
    for (int j = 0; j + 1 < spec_.k() && p != 0; ++j) {
        p *= lookup(dist(kDownCurve, j, to.lambdas[j], from.mus[j]), to.mus[j]);
        if (p == 0) break;
        p *= lookup(dist(kCurveCurve, j + 1, to.mus[j], from.lambdas[j + 1]), to.lambdas[j + 1]);
    }
    return p;
}

PartitionTuple tuple_step_up(const PartitionTuple& t, const SpecTuple& s, const Specialization& pi,
                             std::mt19937_64& rng) {
    return TupleDynamics(s, pi).step_up(t, rng);
}

PartitionTuple sample_support(const SupportEnumeration& sup, std::mt19937_64& rng) {
    if (sup.entries.empty()) throw std::invalid_argument("empty support");
    double u = std::generate_canonical<double, 53>(rng) * sup.mass.get_d(), acc = 0;
    for (const auto& e : sup.entries) {
        acc += e.probability.get_d();
        if (u < acc) return e.tuple;
    }
    return sup.entries.back().tuple;
}

nlohmann::json StationarityReport::to_json() const {
    return {{"samples", samples}, {"chi2", chi2}, {"dof", dof}, {"p_value", p_value},
            {"truncation_error", truncation_error}};
}

StationarityReport stationarity_test(const SpecTuple& s, const Specialization& pi, long long samples, int size_cap,
                                     std::uint64_t seed) {
    TupleDynamics dyn(s, pi);
    auto start = enumerate_support(s, size_cap);
    auto target = enumerate_support(dyn.up_target(), size_cap);
    std::map<PartitionTuple, std::size_t> index;
    for (std::size_t i = 0; i < target.entries.size(); ++i) index[target.entries[i].tuple] = i;
    std::vector<double> observed(target.entries.size() + 1, 0.0), expected;
    std::mt19937_64 rng(seed);
    for (long long n = 0; n < samples; ++n) {
        auto next = dyn.step_up(sample_support(start, rng), rng);
        auto it = index.find(next);
        observed[it == index.end() ? target.entries.size() : it->second] += 1;
    }
    for (const auto& e : target.entries) expected.push_back(e.probability.get_d());
    expected.push_back(std::max(0.0, 1.0 - target.mass.get_d()));
    auto chi = chi_square_gof(observed, expected);
    StationarityReport rep;
    rep.samples = samples;
    rep.chi2 = chi.statistic;
    rep.dof = chi.dof;
    rep.p_value = chi.p_value;
    rep.truncation_error = dyn.truncation_error() + start.tail_bound.get_d();
    return rep;
}

}  // namespace sspkit
