#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace sspkit {

using Rational = mpq_class;

Rational parse_rational(const std::string& s);
std::string rational_to_string(const Rational& q);

// Power series in t with exact coefficients for degrees 0..trunc.
class GradedSeries {
public:
    GradedSeries() : GradedSeries(0) {}
    explicit GradedSeries(int trunc);
    GradedSeries(int trunc, const Rational& constant);

    static GradedSeries monomial(int trunc, const Rational& c, int degree);

    int trunc() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }
    const Rational& operator[](int d) const { return coeffs_[d]; }
    Rational& operator[](int d) { return coeffs_[d]; }
    Rational coeff(int d) const { return d >= 0 && d <= trunc() ? coeffs_[d] : Rational(0); }
    bool is_zero() const;
    // lowest degree with a nonzero coefficient, or trunc()+1
    int valuation() const;

    GradedSeries truncated(int d) const;

    GradedSeries& operator+=(const GradedSeries& o);
    GradedSeries& operator-=(const GradedSeries& o);
    GradedSeries& operator*=(const GradedSeries& o);
    GradedSeries& operator*=(const Rational& c);
    GradedSeries operator-() const;

    friend GradedSeries operator+(GradedSeries a, const GradedSeries& b) { return a += b; }
    friend GradedSeries operator-(GradedSeries a, const GradedSeries& b) { return a -= b; }
    friend GradedSeries operator*(const GradedSeries& a, const GradedSeries& b);
    friend GradedSeries operator*(GradedSeries a, const Rational& c) { return a *= c; }
    friend GradedSeries operator*(const Rational& c, GradedSeries a) { return a *= c; }
    // compares up to the smaller truncation
    bool operator==(const GradedSeries& o) const;

    GradedSeries reciprocal() const;
    GradedSeries exp() const;
    GradedSeries log() const;

    nlohmann::json to_json() const;
    static GradedSeries from_json(const nlohmann::json& j);
    std::string to_string() const;

private:
    std::vector<Rational> coeffs_;
};

struct Variable {
    Rational value;
    int grade = 0;
    bool laurent = false;
};

// A finite list of graded variables; no variables is the Empty specialization.
class Specialization {
public:
    Specialization() = default;
    explicit Specialization(std::vector<Variable> vars);

    static Specialization empty() { return {}; }
    static Specialization ordinary(const std::vector<Rational>& values, int grade = 1);
    static Specialization laurent(const std::vector<Rational>& values, int grade = 0);

    const std::vector<Variable>& vars() const { return vars_; }
    bool is_empty() const { return vars_.empty(); }
    int num_variables() const { return static_cast<int>(vars_.size()); }
    // (value, grade) with Laurent entries expanded into v and 1/v
    std::vector<std::pair<Rational, int>> expanded() const;
    int min_grade() const;
    bool has_laurent() const;

    Specialization with_grade(int grade) const;

    friend Specialization operator+(const Specialization& a, const Specialization& b);  // union

    nlohmann::json to_json() const;
    static Specialization from_json(const nlohmann::json& j);

private:
    std::vector<Variable> vars_;
};

class FormalDivergence : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

Specialization union_of(const std::vector<Specialization>& specs, int first, int last);

GradedSeries power_sum(const Specialization& s, int k, int D);
GradedSeries H(const Specialization& a, const Specialization& b, int D);
GradedSeries G(const Specialization& b, int D);
GradedSeries Gbar(const Specialization& b, int D);
GradedSeries E(const Specialization& a, const Specialization& b, int D);

// exp-of-power-sum routes; require every contributing pair to have positive grade
GradedSeries H_exp(const Specialization& a, const Specialization& b, int D);
GradedSeries G_exp(const Specialization& b, int D);
GradedSeries Gbar_exp(const Specialization& b, int D);
GradedSeries E_exp(const Specialization& a, const Specialization& b, int D);

}  // namespace sspkit
