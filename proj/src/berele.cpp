#include "sspkit/berele.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

namespace sspkit {

Letter Letter::parse(const std::string& s) {
    bool barred = !s.empty() && s.back() == 'b';
    std::string digits = barred ? s.substr(0, s.size() - 1) : s;
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit))
        throw std::invalid_argument("bad letter: " + s);
    int i = std::stoi(digits);
    if (i < 1) throw std::invalid_argument("bad letter: " + s);
    return Letter(i, barred);
}

std::string Letter::to_string() const { return std::to_string(index()) + (barred() ? "b" : ""); }

bool is_increasing(const Word& w) { return std::is_sorted(w.begin(), w.end()); }

std::vector<int> word_weight(const Word& w, int n) {
    std::vector<int> wt(n, 0);
    for (auto l : w) wt.at(l.index() - 1) += l.barred() ? -1 : 1;
    return wt;
}

SymplecticTableau::SymplecticTableau(std::vector<std::vector<Letter>> rows) : rows_(std::move(rows)) {
    while (!rows_.empty() && rows_.back().empty()) rows_.pop_back();
}

Partition SymplecticTableau::shape() const {
    std::vector<int> p;
    for (const auto& r : rows_) p.push_back(static_cast<int>(r.size()));
    return Partition(p);
}

int SymplecticTableau::size() const {
    int s = 0;
    for (const auto& r : rows_) s += static_cast<int>(r.size());
    return s;
}

bool SymplecticTableau::is_valid(int n) const {
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        const auto& row = rows_[r];
        if (row.empty()) return false;
        if (r > 0 && row.size() > rows_[r - 1].size()) return false;
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (row[c].index() > n || row[c].code() < 0) return false;
            if (row[c].index() < static_cast<int>(r) + 1) return false;
            if (c > 0 && row[c] < row[c - 1]) return false;
            if (r > 0 && !(rows_[r - 1][c] < row[c])) return false;
        }
    }
    return true;
}

std::vector<int> SymplecticTableau::weight(int n) const {
    std::vector<int> wt(n, 0);
    for (const auto& r : rows_)
        for (auto l : r) wt.at(l.index() - 1) += l.barred() ? -1 : 1;
    return wt;
}

nlohmann::json SymplecticTableau::to_json() const {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rows_) {
        nlohmann::json row = nlohmann::json::array();
        for (auto l : r) row.push_back(l.to_string());
        j.push_back(row);
    }
    return j;
}

SymplecticTableau SymplecticTableau::from_json(const nlohmann::json& j) {
    std::vector<std::vector<Letter>> rows;
    for (const auto& r : j) {
        rows.emplace_back();
        for (const auto& s : r) rows.back().push_back(Letter::parse(s.get<std::string>()));
    }
    return SymplecticTableau(std::move(rows));
}

std::string SymplecticTableau::to_string() const {
    std::ostringstream os;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
        if (r) os << " / ";
        for (std::size_t c = 0; c < rows_[r].size(); ++c) os << (c ? " " : "") << rows_[r][c].to_string();
    }
    return os.str();
}

namespace {

constexpr int kInf = std::numeric_limits<int>::max();

int cell_code(const std::vector<std::vector<Letter>>& rows, int r, int c) {
    if (r < 0 || r >= static_cast<int>(rows.size()) || c < 0 || c >= static_cast<int>(rows[r].size())) return kInf;
    return rows[r][c].code();
}

InsertionEvent extract(std::vector<std::vector<Letter>>& rows, int i, int j) {
    InsertionEvent ev;
    ev.added = false;
    ev.path.push_back({i, j});
    while (true) {
        int below = cell_code(rows, i + 1, j), right = cell_code(rows, i, j + 1);
        if (below == kInf && right == kInf) {
            rows[i].pop_back();
            if (rows[i].empty()) rows.pop_back();
            ev.row = i;
            ev.col = j;
            return ev;
        }
        if (below <= right) {
            rows[i][j] = rows[i + 1][j];
            ++i;
        } else {
            rows[i][j] = rows[i][j + 1];
            ++j;
        }
        ev.path.push_back({i, j});
    }
}

// undoes the row bumps above row r, given the letter that left row r - 1
std::optional<Letter> unbump(std::vector<std::vector<Letter>>& rows, int r, Letter cur) {
    for (int rr = r - 1; rr >= 0; --rr) {
        auto& row = rows[rr];
        auto it = std::lower_bound(row.begin(), row.end(), cur);
        if (it == row.begin()) return std::nullopt;
        --it;
        std::swap(*it, cur);
    }
    return cur;
}

}  // namespace

InsertionEvent insert_letter(SymplecticTableau& P, Letter x) {
    auto& rows = P.rows();
    Letter cur = x;
    for (int r = 0;; ++r) {
        if (r == static_cast<int>(rows.size())) {
            rows.push_back({cur});
            return {true, r, 0, {}};
        }
        auto& row = rows[r];
        auto it = std::upper_bound(row.begin(), row.end(), cur);
        if (it == row.end()) {
            row.push_back(cur);
            return {true, r, static_cast<int>(row.size()) - 1, {}};
        }
        if (*it == Letter(r + 1, true) && cur == Letter(r + 1, false))
            return extract(rows, r, static_cast<int>(it - row.begin()));
        std::swap(*it, cur);
    }
}

std::vector<InsertionEvent> insert_word(SymplecticTableau& P, const Word& w) {
    std::vector<InsertionEvent> evs;
    evs.reserve(w.size());
    for (auto l : w) evs.push_back(insert_letter(P, l));
    return evs;
}

SundaramImage sundaram(const SymplecticTableau& P, const Word& w, int n) {
    if (P.shape().length() > n - 1) throw std::invalid_argument("sundaram needs l(shape) <= n - 1");
    if (!is_increasing(w)) throw std::invalid_argument("sundaram needs a weakly increasing word");
    SundaramImage out{P, P.shape(), P.shape()};
    bool growing = false;
    for (auto l : w) {
        auto ev = insert_letter(out.tableau, l);
        if (ev.added) {
            growing = true;
        } else {
            if (growing) throw std::logic_error("cancellation after an addition");
            out.kappa = out.tableau.shape();
        }
    }
    out.rho = out.tableau.shape();
    return out;
}

SundaramPreimage sundaram_inverse(const SymplecticTableau& Pp, const Partition& kappa, const Partition& rho,
                                  const Partition& lam, int n) {
    if (!(Pp.shape() == rho)) throw InvalidStrip("tableau shape differs from rho");
    if (!is_horizontal_strip(lam, kappa) || !is_horizontal_strip(rho, kappa))
        throw InvalidStrip("lambda/kappa and rho/kappa must be horizontal strips");
    if (lam.length() > n - 1) throw InvalidStrip("lambda needs length <= n - 1");

    auto strip_cells = [](const Partition& outer, const Partition& inner) {
        std::vector<std::pair<int, int>> cells;
        for (int r = 0; r < outer.length(); ++r)
            for (int c = inner[r]; c < outer[r]; ++c) cells.push_back({r, c});
        std::sort(cells.begin(), cells.end(), [](auto a, auto b) { return a.second < b.second; });
        return cells;
    };

    auto rows = Pp.rows();
    std::vector<Letter> rev;
    auto added = strip_cells(rho, kappa);
    for (auto it = added.rbegin(); it != added.rend(); ++it) {
        auto [r, c] = *it;
        Letter cur = rows[r].back();
        rows[r].pop_back();
        if (rows[r].empty()) rows.pop_back();
        auto up = unbump(rows, r, cur);
        if (!up) throw std::logic_error("reverse bump found no smaller entry");
        cur = *up;
        if (!rev.empty() && rev.back() < cur) throw std::logic_error("recovered word is not increasing");
        rev.push_back(cur);
    }

    auto cancelled = strip_cells(lam, kappa);
    std::optional<SundaramPreimage> found;
    std::function<void(std::size_t, std::vector<std::vector<Letter>>, std::vector<Letter>&)> dfs =
        [&](std::size_t idx, std::vector<std::vector<Letter>> cur_rows, std::vector<Letter>& letters) {
            if (found) return;
            if (idx == cancelled.size()) {
                Word w(letters.rbegin(), letters.rend());
                found = SundaramPreimage{SymplecticTableau(cur_rows), w};
                return;
            }
            auto [ci, cj] = cancelled[idx];
            SymplecticTableau target(cur_rows);
            auto grown = cur_rows;
            if (ci == static_cast<int>(grown.size())) grown.emplace_back();
            grown[ci].push_back(Letter::from_code(kInf));
            int i = ci, j = cj;
            while (true) {
                auto cand = grown;
                cand[i][j] = Letter(i + 1, true);
                auto up = unbump(cand, i, Letter(i + 1, false));
                SymplecticTableau Q(cand);
                if (up && Q.is_valid(n) && (letters.empty() || !(letters.back() < *up))) {
                    Letter x = *up;
                    SymplecticTableau check = Q;
                    auto ev = insert_letter(check, x);
                    if (!ev.added && ev.row == ci && ev.col == cj && check == target) {
                        letters.push_back(x);
                        dfs(idx + 1, cand, letters);
                        letters.pop_back();
                        if (found) return;
                    }
                }
                int north = i > 0 ? grown[i - 1][j].code() : -1;
                int west = j > 0 ? grown[i][j - 1].code() : -1;
                if (north < 0 && west < 0) break;
                if (north >= west) {
                    std::swap(grown[i][j], grown[i - 1][j]);
                    --i;
                } else {
                    std::swap(grown[i][j], grown[i][j - 1]);
                    --j;
                }
            }
        };
    dfs(0, rows, rev);
    if (!found) throw std::logic_error("no preimage found");
    return *found;
}

long long draw_geometric(double p, std::mt19937_64& rng) {
    if (p < 0 || p >= 1) throw ParameterOutOfRange("geometric parameter must lie in [0, 1)");
    if (p == 0) return 0;
    double u = 1.0 - std::generate_canonical<double, 53>(rng);
    return static_cast<long long>(std::floor(std::log(u) / std::log(p)));
}

namespace {

void check_params(const std::vector<double>& x, double y) {
    if (!(y > 0)) throw ParameterOutOfRange("y must be positive");
    for (double xi : x)
        if (!(xi > 0) || !(xi * y < 1) || !(y / xi < 1)) throw ParameterOutOfRange("need 0 < x_i y, y / x_i < 1");
}

}  // namespace

std::vector<long long> sample_multiplicities(const std::vector<double>& x, double y, std::mt19937_64& rng) {
    check_params(x, y);
    std::vector<long long> m;
    m.reserve(2 * x.size());
    for (double xi : x) {
        m.push_back(draw_geometric(xi * y, rng));
        m.push_back(draw_geometric(y / xi, rng));
    }
    return m;
}

Word word_from_multiplicities(const std::vector<long long>& m) {
    Word w;
    for (std::size_t c = 0; c < m.size(); ++c)
        for (long long t = 0; t < m[c]; ++t) w.push_back(Letter::from_code(static_cast<int>(c)));
    return w;
}

Word sample_word(int n, const std::vector<double>& x, double y, std::mt19937_64& rng) {
    if (static_cast<int>(x.size()) != n) throw std::invalid_argument("need n x parameters");
    return word_from_multiplicities(sample_multiplicities(x, y, rng));
}

std::vector<Partition> sample_process(int n, int k, const std::vector<double>& x, const std::vector<double>& y,
                                      std::mt19937_64& rng) {
    if (static_cast<int>(y.size()) != k) throw std::invalid_argument("need k y parameters");
    for (double yj : y) check_params(x, yj);
    SymplecticTableau P;
    std::vector<Partition> out;
    out.reserve(k);
    for (int j = 0; j < k; ++j) {
        insert_word(P, sample_word(n, x, y[j], rng));
        out.push_back(P.shape());
    }
    return out;
}

HalfTriangularArray::HalfTriangularArray(int n) : n_(n), x_(2 * n) {
    for (int k = 1; k <= 2 * n; ++k) x_[k - 1].assign(level_size(k), 0);
}

long long HalfTriangularArray::at(int k, int i) const { return x_.at(k - 1).at(i - 1); }
long long& HalfTriangularArray::at(int k, int i) { return x_.at(k - 1).at(i - 1); }

long long HalfTriangularArray::value_or_zero(int k, int i) const {
    if (k < 1 || k > 2 * n_ || i < 1 || i > level_size(k)) return 0;
    return x_[k - 1][i - 1];
}

bool HalfTriangularArray::is_interlacing() const {
    for (int k = 1; k <= 2 * n_; ++k)
        for (int i = 1; i <= level_size(k); ++i) {
            long long v = at(k, i);
            if (v < 0) return false;
            if (i > 1 && v > at(k, i - 1)) return false;
            if (k < 2 * n_ && (value_or_zero(k + 1, i + 1) > v || v > at(k + 1, i))) return false;
        }
    return true;
}

Partition HalfTriangularArray::top() const {
    std::vector<int> p;
    for (auto v : x_.back()) p.push_back(static_cast<int>(v));
    return Partition(p);
}

std::string HalfTriangularArray::to_string() const {
    std::ostringstream os;
    for (int k = 1; k <= 2 * n_; ++k) {
        if (k > 1) os << " | ";
        for (int i = 1; i <= level_size(k); ++i) os << (i > 1 ? " " : "") << at(k, i);
    }
    return os.str();
}

HalfTriangularArray tableau_to_array(const SymplecticTableau& P, int n) {
    if (P.shape().length() > n) throw std::invalid_argument("tableau has more than n rows");
    HalfTriangularArray a(n);
    const auto& rows = P.rows();
    for (int k = 1; k <= 2 * n; ++k)
        for (int i = 1; i <= HalfTriangularArray::level_size(k) && i <= static_cast<int>(rows.size()); ++i)
            a.at(k, i) = std::count_if(rows[i - 1].begin(), rows[i - 1].end(),
                                       [k](Letter l) { return l.code() <= k - 1; });
    return a;
}

namespace {

void jump_left(HalfTriangularArray& a, int k, int i);

void jump_right(HalfTriangularArray& a, int k, int i) {
    int top = 2 * a.n();
    long long& v = a.at(k, i);
    if (k % 2 == 1 && i == HalfTriangularArray::level_size(k)) {
        if (v < a.at(k + 1, i)) {
            jump_left(a, k + 1, i);
            return;
        }
        ++v;
        jump_right(a, k + 1, i);
        return;
    }
    long long old = v++;
    if (k == top) return;
    jump_right(a, k + 1, old == a.value_or_zero(k + 1, i) ? i : i + 1);
}

void jump_left(HalfTriangularArray& a, int k, int i) {
    long long old = a.at(k, i)--;
    if (k == 2 * a.n()) return;
    bool diag = i + 1 <= HalfTriangularArray::level_size(k + 1) && old == a.at(k + 1, i + 1);
    jump_left(a, k + 1, diag ? i + 1 : i);
}

}  // namespace

HalfTriangularArray array_step(const HalfTriangularArray& a, const std::vector<long long>& draws) {
    if (static_cast<int>(draws.size()) != 2 * a.n()) throw std::invalid_argument("need 2n draws");
    HalfTriangularArray out = a;
    for (int k = 1; k <= 2 * a.n(); ++k)
        for (long long g = 0; g < draws[k - 1]; ++g) jump_right(out, k, 1);
    return out;
}

CoupledRun run_coupled(int n, int k, const std::vector<double>& x, const std::vector<double>& y,
                       std::mt19937_64& rng) {
    if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != k)
        throw std::invalid_argument("need n x parameters and k y parameters");
    CoupledRun run;
    SymplecticTableau P;
    HalfTriangularArray a(n);
    run.arrays.push_back(a);
    run.tableaux.push_back(P);
    for (int t = 0; t < k; ++t) {
        auto m = sample_multiplicities(x, y[t], rng);
        insert_word(P, word_from_multiplicities(m));
        a = array_step(a, m);
        run.arrays.push_back(a);
        run.tableaux.push_back(P);
        if (!(tableau_to_array(P, n) == a)) run.match = false;
    }
    return run;
}

}  // namespace sspkit
