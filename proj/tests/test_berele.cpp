#include <cmath>
#include <map>
#include <random>

#include "doctest.h"
#include "sspkit/berele.hpp"
#include "sspkit/process.hpp"
#include "sspkit/schur.hpp"

using namespace sspkit;

namespace {

SymplecticTableau tab(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::vector<Letter>> out;
    for (const auto& r : rows) {
        out.emplace_back();
        for (const auto& s : r) out.back().push_back(Letter::parse(s));
    }
    return SymplecticTableau(out);
}

SymplecticTableau from_rows(const TableauRows& rows) {
    std::vector<std::vector<Letter>> out;
    for (const auto& r : rows) {
        out.emplace_back();
        for (int c : r) out.back().push_back(Letter::from_code(c));
    }
    return SymplecticTableau(out);
}

void increasing_words(int letters, int max_len, Word& cur, std::vector<Word>& out) {
    out.push_back(cur);
    if (static_cast<int>(cur.size()) == max_len) return;
    int start = cur.empty() ? 0 : cur.back().code();
    for (int c = start; c < letters; ++c) {
        cur.push_back(Letter::from_code(c));
        increasing_words(letters, max_len, cur, out);
        cur.pop_back();
    }
}

std::vector<int> add(std::vector<int> a, const std::vector<int>& b) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

SymplecticTableau random_tableau(int n, int inserts, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> letter(0, 2 * n - 1);
    SymplecticTableau P;
    for (int t = 0; t < inserts; ++t) insert_letter(P, Letter::from_code(letter(rng)));
    return P;
}

}  // namespace

TEST_CASE("letters") {
    CHECK(Letter(1, false) < Letter(1, true));
    CHECK(Letter(1, true) < Letter(2, false));
    CHECK(Letter::parse("2b") == Letter(2, true));
    CHECK(Letter(3, true).to_string() == "3b");
    CHECK_THROWS(Letter::parse("b"));
}

TEST_CASE("single insertions") {
    SymplecticTableau P;
    auto e1 = insert_letter(P, Letter(1, false));
    CHECK(e1.added);
    CHECK(e1.row == 0);
    CHECK(e1.col == 0);
    CHECK(P == tab({{"1"}}));
    auto e2 = insert_letter(P, Letter(1, true));
    CHECK(e2.added);
    CHECK(e2.col == 1);
    CHECK(P == tab({{"1", "1b"}}));
    auto e3 = insert_letter(P, Letter(1, false));
    CHECK_FALSE(e3.added);
    CHECK(e3.row == 0);
    CHECK(e3.col == 1);
    CHECK(P == tab({{"1"}}));
}

TEST_CASE("insertion with bumping and extraction") {
    SymplecticTableau P = tab({{"1", "1b", "2"}, {"2", "2b"}});
    REQUIRE(P.is_valid(2));
    auto Q = P;
    auto ev = insert_letter(Q, Letter(1, true));
    CHECK_FALSE(ev.added);
    CHECK(ev.row == 1);
    CHECK(Q == tab({{"1", "1b", "1b"}, {"2"}}));
    Q = P;
    ev = insert_letter(Q, Letter(1, false));
    CHECK_FALSE(ev.added);
    CHECK(Q == tab({{"1", "2"}, {"2", "2b"}}));
    CHECK(Q.is_valid(2));
    CHECK(ev.path.size() == 2);
    Q = P;
    ev = insert_letter(Q, Letter(2, true));
    CHECK(ev.added);
    CHECK(Q == tab({{"1", "1b", "2", "2b"}, {"2", "2b"}}));
}

TEST_CASE("tableau validity and json") {
    CHECK_FALSE(tab({{"2"}}).is_valid(2) == false);
    CHECK_FALSE(tab({{"1"}, {"1b"}}).is_valid(2));
    CHECK_FALSE(tab({{"1b", "1"}}).is_valid(2));
    CHECK_FALSE(tab({{"3"}}).is_valid(2));
    auto P = tab({{"1", "2b"}, {"3"}});
    CHECK(SymplecticTableau::from_json(P.to_json()) == P);
}

TEST_CASE("random insertions keep tableaux valid and conserve weight") {
    std::mt19937_64 rng(7);
    for (int n = 1; n <= 4; ++n) {
        std::uniform_int_distribution<int> letter(0, 2 * n - 1), len(0, 12);
        for (int rep = 0; rep < 1500; ++rep) {
            auto P = random_tableau(n, len(rng), rng);
            Letter x = Letter::from_code(letter(rng));
            auto before = P.weight(n);
            int size = P.size();
            auto ev = insert_letter(P, x);
            CHECK(P.is_valid(n));
            CHECK(P.weight(n) == add(before, word_weight({x}, n)));
            CHECK(P.size() == size + (ev.added ? 1 : -1));
        }
    }
}

TEST_CASE("increasing words cancel westward then add eastward") {
    std::mt19937_64 rng(11);
    for (int n = 2; n <= 4; ++n) {
        std::uniform_int_distribution<int> letter(0, 2 * n - 1), len(0, 8);
        for (int rep = 0; rep < 800; ++rep) {
            auto P = random_tableau(n, len(rng), rng);
            if (P.shape().length() > n - 1) continue;
            Word w;
            for (int t = 0, L = len(rng); t < L; ++t) w.push_back(Letter::from_code(letter(rng)));
            std::sort(w.begin(), w.end());
            int len0 = P.shape().length();
            auto evs = insert_word(P, w);
            bool adding = false;
            for (std::size_t t = 0; t < evs.size(); ++t) {
                if (evs[t].added) adding = true;
                CHECK((adding == evs[t].added));
                if (t > 0 && evs[t].added == evs[t - 1].added) {
                    if (evs[t].added)
                        CHECK(evs[t].col > evs[t - 1].col);
                    else
                        CHECK(evs[t].col < evs[t - 1].col);
                }
            }
            CHECK(P.shape().length() <= len0 + 1);
        }
    }
}

TEST_CASE("sundaram examples") {
    auto a = sundaram(SymplecticTableau(), Word{}, 2);
    CHECK(a.kappa == Partition{});
    CHECK(a.rho == Partition{});
    auto b = sundaram(SymplecticTableau(), Word{Letter(1, false), Letter(1, true)}, 2);
    CHECK(b.tableau == tab({{"1", "1b"}}));
    CHECK(b.kappa == Partition{});
    CHECK(b.rho == Partition{2});
    auto c = sundaram(tab({{"1", "1b"}}), Word{Letter(1, false)}, 2);
    CHECK(c.tableau == tab({{"1"}}));
    CHECK(c.kappa == Partition{1});
    CHECK(c.rho == Partition{1});
    CHECK_THROWS_AS(sundaram_inverse(tab({{"1"}}), Partition{}, Partition{1}, Partition{1, 1}, 3), InvalidStrip);
}

TEST_CASE("sundaram round trips exhaustively") {
    for (int n = 1; n <= 3; ++n) {
        std::vector<Word> words;
        Word cur;
        increasing_words(2 * n, 4, cur, words);
        long long checked = 0;
        for (const auto& lam : enumerate_partitions(4, n - 1)) {
            for (const auto& rows : enumerate_symplectic_tableaux(lam, n)) {
                auto P = from_rows(rows);
                for (const auto& w : words) {
                    auto img = sundaram(P, w, n);
                    CHECK(img.tableau.weight(n) == add(P.weight(n), word_weight(w, n)));
                    CHECK(is_horizontal_strip(lam, img.kappa));
                    CHECK(is_horizontal_strip(img.rho, img.kappa));
                    CHECK(static_cast<int>(w.size()) == lam.size() + img.rho.size() - 2 * img.kappa.size());
                    auto back = sundaram_inverse(img.tableau, img.kappa, img.rho, lam, n);
                    CHECK(back.tableau == P);
                    CHECK(back.word == w);
                    ++checked;
                }
            }
        }
        CHECK(checked > 0);
    }
}

TEST_CASE("sundaram inverse then forward is the identity") {
    for (int n = 2; n <= 3; ++n) {
        long long checked = 0;
        for (const auto& lam : enumerate_partitions(4, n - 1))
            for (const auto& kappa : subpartitions(lam)) {
                if (!is_horizontal_strip(lam, kappa)) continue;
                for (const auto& rho : superpartitions(kappa, kappa.size() + 4, n)) {
                    if (!is_horizontal_strip(rho, kappa)) continue;
                    if (lam.size() + rho.size() - 2 * kappa.size() > 4) continue;
                    for (const auto& rows : enumerate_symplectic_tableaux(rho, n)) {
                        auto Pp = from_rows(rows);
                        auto pre = sundaram_inverse(Pp, kappa, rho, lam, n);
                        CHECK(pre.tableau.shape() == lam);
                        CHECK(is_increasing(pre.word));
                        auto img = sundaram(pre.tableau, pre.word, n);
                        CHECK(img.tableau == Pp);
                        CHECK(img.kappa == kappa);
                        CHECK(img.rho == rho);
                        ++checked;
                    }
                }
            }
        CHECK(checked > 0);
    }
}

TEST_CASE("geometric draws") {
    std::mt19937_64 rng(3);
    const int N = 200000;
    double p = 0.5, sum = 0, sumsq = 0;
    int zeros = 0, ones = 0;
    for (int t = 0; t < N; ++t) {
        auto g = draw_geometric(p, rng);
        sum += g;
        sumsq += double(g) * g;
        zeros += g == 0;
        ones += g == 1;
    }
    double mean = sum / N, var = sumsq / N - mean * mean;
    CHECK(std::abs(mean - 1.0) < 3 * std::sqrt(var / N));
    CHECK(std::abs(zeros / double(N) - 0.5) < 3 * std::sqrt(0.25 / N));
    CHECK(std::abs(ones / double(N) - 0.25) < 3 * std::sqrt(0.25 * 0.75 / N));
    CHECK(draw_geometric(0.0, rng) == 0);
    CHECK_THROWS_AS(draw_geometric(1.0, rng), ParameterOutOfRange);
    CHECK_THROWS_AS(sample_word(1, {2.0}, 0.6, rng), ParameterOutOfRange);
    auto w = sample_word(3, {1.0, 2.0, 0.5}, 0.3, rng);
    CHECK(is_increasing(w));
}

TEST_CASE("sampled process shapes") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 2000; ++rep) {
        auto shapes = sample_process(3, 3, {1.0, 1.5, 0.8}, {0.5, 0.4, 0.6}, rng);
        CHECK(shapes[0].length() <= 1);
        for (int j = 0; j < 3; ++j) CHECK(shapes[j].length() <= j + 1);
    }
}

TEST_CASE("sampler matches the empty-tuple probability") {
    Rational third(1, 3);
    auto s = SpecTuple::oscillating({1, 1}, {third, third});
    double exact = ssp_probability(PartitionTuple{{Partition{}, Partition{}}, {Partition{}}}, s).get_d();
    std::mt19937_64 rng(2024);
    const int N = 40000;
    int hits = 0;
    for (int t = 0; t < N; ++t) {
        auto sh = sample_process(2, 2, {1.0, 1.0}, {1.0 / 3, 1.0 / 3}, rng);
        hits += sh[0].empty() && sh[1].empty();
    }
    CHECK(std::abs(hits / double(N) - exact) < 3 * std::sqrt(exact * (1 - exact) / N));
}

TEST_CASE("array dynamics by hand") {
    HalfTriangularArray z(2);
    CHECK(array_step(z, {0, 0, 0, 0}) == z);
    auto a = array_step(z, {1, 0, 0, 0});
    for (int k = 1; k <= 4; ++k) CHECK(a.at(k, 1) == 1);
    CHECK(a.at(3, 2) == 0);
    CHECK(a.at(4, 2) == 0);
    auto b = array_step(a, {0, 1, 0, 0});
    CHECK(b.at(1, 1) == 1);
    CHECK(b.at(2, 1) == 2);
    CHECK(b.at(3, 1) == 2);
    CHECK(b.at(4, 1) == 2);
    auto c = array_step(b, {1, 0, 0, 0});
    for (int k = 1; k <= 4; ++k) CHECK(c.at(k, 1) == 1);
    CHECK(c.is_interlacing());
}

TEST_CASE("tableau to array") {
    CHECK(tableau_to_array(SymplecticTableau(), 2) == HalfTriangularArray(2));
    auto a = tableau_to_array(tab({{"1", "1b"}}), 1);
    CHECK(a.at(1, 1) == 1);
    CHECK(a.at(2, 1) == 2);
    auto P = tab({{"1", "1", "1", "2", "2b", "2b", "3", "3b"}, {"2", "2b", "2b", "3", "3", "3b"}, {"3", "3", "3", "3b"}});
    REQUIRE(P.is_valid(3));
    auto x = tableau_to_array(P, 3);
    std::vector<std::vector<long long>> expect{{3}, {3}, {4, 1}, {6, 3}, {7, 5, 3}, {8, 6, 4}};
    CHECK(x.levels() == expect);
    CHECK(x.is_interlacing());
    CHECK(x.top() == Partition{8, 6, 4});

    auto y = array_step(x, {1, 1, 0, 1, 0, 0});
    CHECK(y.is_interlacing());
    auto Q = P;
    insert_word(Q, Word{Letter(1, false), Letter(1, true), Letter(2, true)});
    CHECK(tableau_to_array(Q, 3) == y);
}

TEST_CASE("array dynamics preserve interlacing") {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<int> g(0, 2);
    for (int n = 1; n <= 4; ++n) {
        HalfTriangularArray a(n);
        for (int t = 0; t < 300; ++t) {
            std::vector<long long> d(2 * n);
            for (auto& v : d) v = g(rng);
            a = array_step(a, d);
            REQUIRE(a.is_interlacing());
        }
    }
}

TEST_CASE("coupled dynamics match insertion") {
    std::mt19937_64 rng(17);
    int matched = 0;
    for (int rep = 0; rep < 2000; ++rep) {
        auto run = run_coupled(2, 2, {1.0, 1.0}, {0.5, 0.5}, rng);
        matched += run.match;
    }
    CHECK(matched == 2000);
    for (int rep = 0; rep < 200; ++rep) {
        auto run = run_coupled(3, 6, {1.0, 1.3, 0.9}, {0.5, 0.6, 0.4, 0.5, 0.5, 0.5}, rng);
        CHECK(run.match);
    }
}
