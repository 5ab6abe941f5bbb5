#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "sspkit/partitions.hpp"
#include "json.hpp"

namespace sspkit {

// letter i or i-bar, ordered 1 < 1b < 2 < 2b < ...; code = 2(i-1) + barred
class Letter {
public:
    Letter() = default;
    Letter(int index, bool barred) : code_(2 * (index - 1) + (barred ? 1 : 0)) {}
    static Letter from_code(int code) {
        Letter l;
        l.code_ = code;
        return l;
    }
    static Letter parse(const std::string& s);

    int code() const { return code_; }
    int index() const { return code_ / 2 + 1; }
    bool barred() const { return code_ % 2 == 1; }
    auto operator<=>(const Letter&) const = default;
    std::string to_string() const;

private:
    int code_ = 0;
};

using Word = std::vector<Letter>;

bool is_increasing(const Word& w);
// entry i-1 holds m_i(w) - m_ibar(w)
std::vector<int> word_weight(const Word& w, int n);

class SymplecticTableau {
public:
    SymplecticTableau() = default;
    explicit SymplecticTableau(std::vector<std::vector<Letter>> rows);

    const std::vector<std::vector<Letter>>& rows() const { return rows_; }
    std::vector<std::vector<Letter>>& rows() { return rows_; }
    Partition shape() const;
    int size() const;
    bool empty() const { return rows_.empty(); }
    // rows weak, columns strict, row r entries >= r, letters within the n-alphabet
    bool is_valid(int n) const;
    std::vector<int> weight(int n) const;
    bool operator==(const SymplecticTableau&) const = default;

    nlohmann::json to_json() const;
    static SymplecticTableau from_json(const nlohmann::json& j);
    std::string to_string() const;

private:
    std::vector<std::vector<Letter>> rows_;
};

struct InsertionEvent {
    bool added = true;
    // 0-based cell that was created or erased
    int row = 0;
    int col = 0;
    // cells visited by the star during the extraction, empty for additions
    std::vector<std::pair<int, int>> path;
    bool operator==(const InsertionEvent& o) const { return added == o.added && row == o.row && col == o.col; }
};

InsertionEvent insert_letter(SymplecticTableau& P, Letter x);
std::vector<InsertionEvent> insert_word(SymplecticTableau& P, const Word& w);

class InvalidStrip : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct SundaramImage {
    SymplecticTableau tableau;
    Partition kappa;
    Partition rho;
};

// requires l(shape(P)) <= n - 1 and w weakly increasing
SundaramImage sundaram(const SymplecticTableau& P, const Word& w, int n);

struct SundaramPreimage {
    SymplecticTableau tableau;
    Word word;
};

SundaramPreimage sundaram_inverse(const SymplecticTableau& Pp, const Partition& kappa, const Partition& rho,
                                  const Partition& lam, int n);

class ParameterOutOfRange : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// number of failures before the first success, P(G = k) = (1 - p) p^k
long long draw_geometric(double p, std::mt19937_64& rng);

// multiplicities m_i ~ Geo(x_i y), mbar_i ~ Geo(y / x_i), in the order 1 1b 2 2b ...
std::vector<long long> sample_multiplicities(const std::vector<double>& x, double y, std::mt19937_64& rng);
Word word_from_multiplicities(const std::vector<long long>& m);
Word sample_word(int n, const std::vector<double>& x, double y, std::mt19937_64& rng);

std::vector<Partition> sample_process(int n, int k, const std::vector<double>& x, const std::vector<double>& y,
                                      std::mt19937_64& rng);

// levels k = 1..2n, level k holds ceil(k/2) entries x_{k,1} >= x_{k,2} >= ...
class HalfTriangularArray {
public:
    explicit HalfTriangularArray(int n = 0);
    int n() const { return n_; }
    long long at(int k, int i) const;
    long long& at(int k, int i);
    // level-(k+1) neighbour convention: out-of-range entries read as 0
    long long value_or_zero(int k, int i) const;
    static int level_size(int k) { return (k + 1) / 2; }
    bool is_interlacing() const;
    Partition top() const;
    bool operator==(const HalfTriangularArray&) const = default;
    const std::vector<std::vector<long long>>& levels() const { return x_; }
    std::string to_string() const;

private:
    int n_;
    std::vector<std::vector<long long>> x_;
};

HalfTriangularArray tableau_to_array(const SymplecticTableau& P, int n);
// draws[k-1] right-jump instructions to x_{k,1}, levels processed in increasing k
HalfTriangularArray array_step(const HalfTriangularArray& a, const std::vector<long long>& draws);

struct CoupledRun {
    std::vector<HalfTriangularArray> arrays;
    std::vector<SymplecticTableau> tableaux;
    bool match = true;
};

// shared geometric draws: G_{2i-1,t} = m_{i,t}, G_{2i,t} = mbar_{i,t}
CoupledRun run_coupled(int n, int k, const std::vector<double>& x, const std::vector<double>& y,
                       std::mt19937_64& rng);

}  // namespace sspkit
