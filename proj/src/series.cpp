#include "sspkit/series.hpp"

#include <algorithm>
#include <sstream>

namespace sspkit {

Rational parse_rational(const std::string& s) {
    auto dot = s.find('.');
    if (dot != std::string::npos) {
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        mpz_class den = 1;
        for (std::size_t i = dot + 1; i < s.size(); ++i) den *= 10;
        Rational q(mpz_class(digits, 10), den);
        q.canonicalize();
        return q;
    }
    Rational q;
    if (q.set_str(s, 10) != 0 || q.get_den() == 0) throw std::invalid_argument("not a rational: " + s);
    q.canonicalize();
    return q;
}

std::string rational_to_string(const Rational& q) { return q.get_str(); }

GradedSeries::GradedSeries(int trunc) : coeffs_(static_cast<std::size_t>(std::max(trunc, 0)) + 1, Rational(0)) {
    if (trunc < 0) throw std::invalid_argument("negative truncation degree");
}

GradedSeries::GradedSeries(int trunc, const Rational& constant) : GradedSeries(trunc) { coeffs_[0] = constant; }

GradedSeries GradedSeries::monomial(int trunc, const Rational& c, int degree) {
    GradedSeries s(trunc);
    if (degree >= 0 && degree <= trunc) s.coeffs_[degree] = c;
    return s;
}

bool GradedSeries::is_zero() const {
    return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Rational& q) { return q == 0; });
}

int GradedSeries::valuation() const {
    for (int d = 0; d <= trunc(); ++d)
        if (coeffs_[d] != 0) return d;
    return trunc() + 1;
}

GradedSeries GradedSeries::truncated(int d) const {
    GradedSeries s(d);
    for (int i = 0; i <= std::min(d, trunc()); ++i) s.coeffs_[i] = coeffs_[i];
    return s;
}

GradedSeries& GradedSeries::operator+=(const GradedSeries& o) {
    if (o.trunc() < trunc()) coeffs_.resize(o.coeffs_.size());
    for (int d = 0; d <= trunc(); ++d) coeffs_[d] += o.coeffs_[d];
    return *this;
}

GradedSeries& GradedSeries::operator-=(const GradedSeries& o) {
    if (o.trunc() < trunc()) coeffs_.resize(o.coeffs_.size());
    for (int d = 0; d <= trunc(); ++d) coeffs_[d] -= o.coeffs_[d];
    return *this;
}

GradedSeries operator*(const GradedSeries& a, const GradedSeries& b) {
    int D = std::min(a.trunc(), b.trunc());
    GradedSeries r(D);
    int va = a.valuation(), vb = b.valuation();
    Rational tmp;
    for (int i = va; i <= D; ++i) {
        if (a.coeffs_[i] == 0) continue;
        for (int j = vb; i + j <= D; ++j) {
            if (b.coeffs_[j] == 0) continue;
            mpq_mul(tmp.get_mpq_t(), a.coeffs_[i].get_mpq_t(), b.coeffs_[j].get_mpq_t());
            r.coeffs_[i + j] += tmp;
        }
    }
    return r;
}

GradedSeries& GradedSeries::operator*=(const GradedSeries& o) { return *this = *this * o; }

GradedSeries& GradedSeries::operator*=(const Rational& c) {
    for (auto& q : coeffs_) q *= c;
    return *this;
}

GradedSeries GradedSeries::operator-() const {
    GradedSeries r = *this;
    for (auto& q : r.coeffs_) q = -q;
    return r;
}

bool GradedSeries::operator==(const GradedSeries& o) const {
    int D = std::min(trunc(), o.trunc());
    for (int d = 0; d <= D; ++d)
        if (coeffs_[d] != o.coeffs_[d]) return false;
    return true;
}

GradedSeries GradedSeries::reciprocal() const {
    if (coeffs_[0] == 0) throw std::domain_error("reciprocal of a series with zero constant term");
    GradedSeries g(trunc());
    Rational inv = 1 / coeffs_[0];
    g.coeffs_[0] = inv;
    for (int n = 1; n <= trunc(); ++n) {
        Rational acc = 0;
        for (int k = 1; k <= n; ++k)
            if (coeffs_[k] != 0) acc += coeffs_[k] * g.coeffs_[n - k];
        g.coeffs_[n] = -acc * inv;
    }
    return g;
}

GradedSeries GradedSeries::exp() const {
    if (coeffs_[0] != 0) throw std::domain_error("exp of a series with nonzero constant term");
    GradedSeries g(trunc());
    g.coeffs_[0] = 1;
    for (int n = 1; n <= trunc(); ++n) {
        Rational acc = 0;
        for (int k = 1; k <= n; ++k)
            if (coeffs_[k] != 0) acc += k * coeffs_[k] * g.coeffs_[n - k];
        g.coeffs_[n] = acc / n;
    }
    return g;
}

GradedSeries GradedSeries::log() const {
    if (coeffs_[0] != 1) throw std::domain_error("log of a series with constant term other than 1");
    // f' = g' f with g = log f
    GradedSeries g(trunc());
    for (int n = 1; n <= trunc(); ++n) {
        Rational acc = n * coeffs_[n];
        for (int k = 1; k < n; ++k)
            if (coeffs_[n - k] != 0) acc -= k * g.coeffs_[k] * coeffs_[n - k];
        g.coeffs_[n] = acc / n;
    }
    return g;
}

nlohmann::json GradedSeries::to_json() const {
    nlohmann::json c = nlohmann::json::array();
    for (const auto& q : coeffs_) c.push_back(rational_to_string(q));
    return {{"trunc", trunc()}, {"coeffs", c}};
}

GradedSeries GradedSeries::from_json(const nlohmann::json& j) {
    GradedSeries s(j.at("trunc").get<int>());
    const auto& c = j.at("coeffs");
    for (int d = 0; d <= s.trunc() && d < static_cast<int>(c.size()); ++d)
        s.coeffs_[d] = parse_rational(c[d].get<std::string>());
    return s;
}

std::string GradedSeries::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (int d = 0; d <= trunc(); ++d) {
        if (coeffs_[d] == 0) continue;
        if (!first) os << " + ";
        first = false;
        os << coeffs_[d].get_str();
        if (d > 0) os << "*t^" << d;
    }
    if (first) os << "0";
    os << " + O(t^" << trunc() + 1 << ")";
    return os.str();
}

Specialization::Specialization(std::vector<Variable> vars) : vars_(std::move(vars)) {
    for (auto& v : vars_) {
        v.value.canonicalize();
        if (v.grade < 0) throw std::invalid_argument("negative grade");
        if (v.laurent && v.value == 0) throw std::invalid_argument("Laurent variable must be nonzero");
    }
}

Specialization Specialization::ordinary(const std::vector<Rational>& values, int grade) {
    std::vector<Variable> v;
    for (const auto& q : values) v.push_back({q, grade, false});
    return Specialization(std::move(v));
}

Specialization Specialization::laurent(const std::vector<Rational>& values, int grade) {
    std::vector<Variable> v;
    for (const auto& q : values) v.push_back({q, grade, true});
    return Specialization(std::move(v));
}

std::vector<std::pair<Rational, int>> Specialization::expanded() const {
    std::vector<std::pair<Rational, int>> out;
    for (const auto& v : vars_) {
        out.emplace_back(v.value, v.grade);
        if (v.laurent) out.emplace_back(1 / v.value, v.grade);
    }
    return out;
}

int Specialization::min_grade() const {
    int g = 1 << 20;
    for (const auto& v : vars_) g = std::min(g, v.grade);
    return g;
}

bool Specialization::has_laurent() const {
    return std::any_of(vars_.begin(), vars_.end(), [](const Variable& v) { return v.laurent; });
}

Specialization Specialization::with_grade(int grade) const {
    auto v = vars_;
    for (auto& x : v) x.grade = grade;
    return Specialization(std::move(v));
}

Specialization operator+(const Specialization& a, const Specialization& b) {
    auto v = a.vars_;
    v.insert(v.end(), b.vars_.begin(), b.vars_.end());
    return Specialization(std::move(v));
}

nlohmann::json Specialization::to_json() const {
    nlohmann::json vars = nlohmann::json::array();
    for (const auto& v : vars_)
        vars.push_back({{"v", rational_to_string(v.value)}, {"grade", v.grade}, {"laurent", v.laurent}});
    return {{"vars", vars}};
}

Specialization Specialization::from_json(const nlohmann::json& j) {
    std::vector<Variable> vars;
    for (const auto& e : j.at("vars")) {
        Variable v;
        const auto& val = e.at("v");
        v.value = val.is_string() ? parse_rational(val.get<std::string>()) : Rational(val.get<double>());
        v.grade = e.value("grade", 1);
        v.laurent = e.value("laurent", false);
        vars.push_back(v);
    }
    return Specialization(std::move(vars));
}

Specialization union_of(const std::vector<Specialization>& specs, int first, int last) {
    Specialization u;
    for (int i = first; i <= last; ++i) u = u + specs[i];
    return u;
}

GradedSeries power_sum(const Specialization& s, int k, int D) {
    if (k < 1) throw std::invalid_argument("power sum index must be positive");
    GradedSeries r(D);
    for (const auto& [v, g] : s.expanded()) {
        Rational p;
        mpz_pow_ui(p.get_num_mpz_t(), v.get_num_mpz_t(), k);
        mpz_pow_ui(p.get_den_mpz_t(), v.get_den_mpz_t(), k);
        if (k * g <= D) r[k * g] += p;
    }
    return r;
}

namespace {

// multiply in place by 1/(1 - c t^g)
void divide_geometric(GradedSeries& s, const Rational& c, int g) {
    if (g == 0) {
        if (abs(c) >= 1) throw FormalDivergence("grade-0 pair with |product| >= 1");
        s *= Rational(1 / (1 - c));
        return;
    }
    for (int d = g; d <= s.trunc(); ++d) s[d] += c * s[d - g];
}

// multiply in place by (1 + c t^g)
void multiply_binomial(GradedSeries& s, const Rational& c, int g) {
    if (g == 0) {
        if (abs(c) >= 1) throw FormalDivergence("grade-0 pair with |product| >= 1");
        s *= Rational(1 + c);
        return;
    }
    for (int d = s.trunc(); d >= g; --d) s[d] += c * s[d - g];
}

GradedSeries exp_route(const std::vector<GradedSeries>& terms, int D) {
    GradedSeries sum(D);
    for (const auto& t : terms) sum += t;
    if (sum[0] != 0) throw FormalDivergence("exp route needs every contributing pair at positive grade");
    return sum.exp();
}

}  // namespace

GradedSeries H(const Specialization& a, const Specialization& b, int D) {
    GradedSeries s(D, 1);
    auto ea = a.expanded(), eb = b.expanded();
    for (const auto& [x, gx] : ea)
        for (const auto& [y, gy] : eb) {
            if (x * y == 0) continue;
            divide_geometric(s, x * y, gx + gy);
        }
    return s;
}

GradedSeries G(const Specialization& b, int D) {
    GradedSeries s(D, 1);
    auto e = b.expanded();
    for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = i + 1; j < e.size(); ++j) multiply_binomial(s, -(e[i].first * e[j].first), e[i].second + e[j].second);
    return s;
}

GradedSeries Gbar(const Specialization& b, int D) {
    GradedSeries s(D, 1);
    auto e = b.expanded();
    for (std::size_t i = 0; i < e.size(); ++i)
        for (std::size_t j = i; j < e.size(); ++j) multiply_binomial(s, -(e[i].first * e[j].first), e[i].second + e[j].second);
    return s;
}

GradedSeries E(const Specialization& a, const Specialization& b, int D) {
    GradedSeries s(D, 1);
    for (const auto& [x, gx] : a.expanded())
        for (const auto& [y, gy] : b.expanded()) multiply_binomial(s, x * y, gx + gy);
    return s;
}

GradedSeries H_exp(const Specialization& a, const Specialization& b, int D) {
    std::vector<GradedSeries> terms;
    for (int k = 1; k <= D; ++k) terms.push_back(power_sum(a, k, D) * power_sum(b, k, D) * Rational(1, k));
    return exp_route(terms, D);
}

GradedSeries G_exp(const Specialization& b, int D) {
    std::vector<GradedSeries> terms;
    for (int k = 1; k <= D; ++k) {
        auto pk = power_sum(b, k, D);
        terms.push_back((pk * pk - power_sum(b, 2 * k, D)) * Rational(-1, 2 * k));
    }
    return exp_route(terms, D);
}

GradedSeries Gbar_exp(const Specialization& b, int D) {
    std::vector<GradedSeries> terms;
    for (int k = 1; k <= D; ++k) {
        auto pk = power_sum(b, k, D);
        terms.push_back((pk * pk + power_sum(b, 2 * k, D)) * Rational(-1, 2 * k));
    }
    return exp_route(terms, D);
}

GradedSeries E_exp(const Specialization& a, const Specialization& b, int D) {
    std::vector<GradedSeries> terms;
    for (int k = 1; k <= D; ++k)
        terms.push_back(power_sum(a, k, D) * power_sum(b, k, D) * Rational(k % 2 ? 1 : -1, k));
    return exp_route(terms, D);
}

}  // namespace sspkit
