#include <gtest/gtest.h>

#include "dowling/perm_stats.hpp"
#include "oracles.hpp"

using namespace dowling;

namespace {

void expect_verdict(const IdentityReport& r, Verdict v, int eps) {
    EXPECT_EQ(r.verdict, v) << r.name;
    EXPECT_EQ(r.epsilon, eps) << r.name;
    EXPECT_TRUE(r.passed()) << r.name;
    if (r.verdict == Verdict::mismatch)
        for (const auto& row : r.rows)
            ADD_FAILURE() << r.name << " n=" << row.n << " " << row.tag << " brute=" << row.brute << " closed=" << row.closed;
}

std::vector<long long> coeffs(const QPolynomial& p) {
    return {p.coefficients().begin(), p.coefficients().end()};
}

}  // namespace

TEST(DescentWord, ParseAndPrint) {
    EXPECT_EQ(DescentWord::parse("abba").to_string(), "abba");
    EXPECT_EQ(DescentWord::parse("e").degree(), 0U);
    EXPECT_EQ(DescentWord::parse("").to_string(), "e");
    EXPECT_THROW(DescentWord::parse("abc"), Error);
    EXPECT_EQ(DescentWord::pattern(3, 2, 1).to_string(), "aabaaba");
    EXPECT_EQ(DescentWord::parse("abba").descent_positions(), (std::vector<unsigned>{2, 3}));
    EXPECT_EQ(DescentWord::parse("aab").reverse_complement().to_string(), "abb");
    EXPECT_EQ(DescentWord::all(3).size(), 8U);
}

TEST(DescentWord, FromPermutation) {
    EXPECT_EQ(descent_word({1, 3, 2, 4}).to_string(), "aba");
    EXPECT_EQ(descent_word({1}).to_string(), "e");
    EXPECT_THROW(descent_word({1, 1, 2}), Error);
    EXPECT_THROW(descent_word({0, 1}), Error);
    EXPECT_EQ(inversions({3, 1, 2}), 2U);
    EXPECT_EQ(parse_permutation("562418379"), (std::vector<unsigned>{5, 6, 2, 4, 1, 8, 3, 7, 9}));
    EXPECT_EQ(parse_permutation("2,1,10,3,4,5,6,7,8,9").size(), 10U);
    EXPECT_THROW(parse_permutation("1123"), Error);
}

TEST(QPolynomial, Printing) {
    EXPECT_EQ(des_q(DescentWord::parse("aba")).to_string(), "q + 2q^2 + q^3 + q^4");
    EXPECT_EQ(QPolynomial({1, -2, 0, 3}).to_string(), "1 - 2q + 3q^3");
    EXPECT_EQ(QPolynomial().to_string(), "0");
    EXPECT_EQ(QPolynomial({-1}).to_string(), "-1");
}

TEST(QPolynomial, Arithmetic) {
    const QPolynomial a({1, 1}), b({1, -1});
    EXPECT_EQ(a * b, QPolynomial({1, 0, -1}));
    EXPECT_EQ(a + b, QPolynomial({2}));
    EXPECT_EQ((a - a).degree(), 0U);
    EXPECT_EQ(QPolynomial({1, 2, 3}).eval(2), 17);
    EXPECT_EQ(QPolynomial({1, 2, 3}).at_one(), 6);
}

TEST(Gaussian, PascalAndSymmetry) {
    for (unsigned n = 0; n <= 9; ++n)
        for (unsigned k = 0; k <= n; ++k) {
            const auto g = gaussian(n, k);
            EXPECT_EQ(g.at_one(), oracle::choose(n, k));
            EXPECT_EQ(g, gaussian(n, n - k));
            EXPECT_EQ(g.degree(), k * (n - k));
        }
    EXPECT_EQ(gaussian(4, 2), QPolynomial({1, 1, 2, 1, 1}));
    EXPECT_THROW(gaussian(2, 3), Error);
}

TEST(DesQ, AgreesWithBruteForceOracle) {
    for (unsigned d = 0; d <= 6; ++d)
        for (const auto& w : DescentWord::all(d)) {
            const auto expected = oracle::descent_q_count(w.size(), w.descent_positions());
            EXPECT_EQ(coeffs(des_q_enumerate(w)), expected) << w.to_string();
            EXPECT_EQ(coeffs(des_q_inclusion_exclusion(w)), expected) << w.to_string();
        }
}

TEST(DesQ, TwoAlgorithmsAgreeOnLongWords) {
    for (const char* s : {"aabaaba", "abababab", "bbaabbab", "aaaaaaab"}) {
        const auto w = DescentWord::parse(s);
        EXPECT_EQ(des_q_enumerate(w), des_q_inclusion_exclusion(w)) << s;
    }
}

TEST(DesQ, SumsToQFactorial) {
    for (unsigned n = 1; n <= 7; ++n) {
        QPolynomial total;
        for (const auto& w : DescentWord::all(n - 1)) total += des_q(w);
        QPolynomial fact = QPolynomial::one();
        for (unsigned i = 1; i <= n; ++i) {
            std::vector<std::int64_t> c(i, 1);
            fact = fact * QPolynomial(c);
        }
        EXPECT_EQ(total, fact) << n;
        EXPECT_EQ(total.at_one(), oracle::fact(n));
    }
}

TEST(DesQ, ReversalComplementsInversions) {
    for (const auto& w : DescentWord::all(5)) {
        const auto p = des_q(w), r = des_q(w.reverse_complement());
        const unsigned top = 6 * 5 / 2;
        for (unsigned i = 0; i <= top; ++i) EXPECT_EQ(p[i], r[top - i]) << w.to_string();
    }
}

TEST(DesQ, GuardOnEnumeration) {
    EXPECT_THROW(des_q_enumerate(DescentWord::repeat('a', 11)), GuardError);
    EXPECT_EQ(des_count(DescentWord::repeat('a', 15)), 1);
}

TEST(EulerNumbers, MatchUpDownEnumeration) {
    for (unsigned i = 0; i <= 9; ++i) EXPECT_EQ(euler_number(i), Integer(static_cast<long>(oracle::euler_brute(i)))) << i;
    EXPECT_EQ(euler_number(10), 50521);
    EXPECT_EQ(euler_number(11), 353792);
    EXPECT_THROW(euler_number(12), GuardError);
}

TEST(EulerNumbers, AlternatingWords) {
    EXPECT_EQ(des_count(DescentWord::parse("aba")), 5);
    for (unsigned n = 0; n <= 4; ++n) EXPECT_EQ(des_count(DescentWord::pattern(2, n, 1)), euler_number(2 * n + 2));
    for (unsigned n = 1; n <= 5; ++n) EXPECT_EQ(des_count(DescentWord::pattern(2, n - 1, 0)), euler_number(2 * n - 1));
}

TEST(Multiplication, SinglePairs) {
    EXPECT_TRUE(multiplication_check(DescentWord::parse("a"), DescentWord::parse("b")));
    EXPECT_TRUE(multiplication_check(DescentWord::parse("e"), DescentWord::parse("abb")));
}

TEST(Multiplication, ExhaustiveUpToSix) {
    const auto r = multiplication_report(6);
    expect_verdict(r, Verdict::exact, 1);
    EXPECT_GT(r.rows.size(), 100U);
}

TEST(EulerianProduct, AtOneAndTwo) {
    expect_verdict(eulerian_product_report({Rational(1), Rational(2)}, 8), Verdict::exact, 1);
}

TEST(DescentEulerian, CriterionCases) {
    for (const auto& q : {Rational(1), Rational(2)})
        for (auto [r, w] : std::vector<std::pair<unsigned, const char*>>{{2, "a"}, {2, "aa"}, {3, "aa"}})
            expect_verdict(divisible_word_series_check(r, DescentWord::parse(w), q, 9), Verdict::exact, 1);
}

TEST(DescentEulerian, OtherWordsAndRationalQ) {
    expect_verdict(divisible_word_series_check(1, DescentWord::parse("e"), Rational(1), 8), Verdict::exact, 1);
    expect_verdict(divisible_word_series_check(2, DescentWord::parse("ab"), make_rational(1, 2), 8), Verdict::exact, 1);
    expect_verdict(divisible_word_series_check(3, DescentWord::parse("b"), Rational(3), 8), Verdict::exact, 1);
    EXPECT_THROW(divisible_word_series_check(2, DescentWord::parse("a"), Rational(-1), 6), Error);
}

TEST(MobiusDescents, SmallValues) {
    // mu of Pi_4^{2,2}: chain 0 < {12|34, 13|24, 14|23} < 1234
    EXPECT_EQ(mobius_bottom_top(build_extended(4, 2, 2).poset), 2);
    EXPECT_EQ(des_count(DescentWord::parse("ab")), 2);
    EXPECT_EQ(mobius_bottom_top(build_extended(6, 2, 2).poset), -16);
    EXPECT_EQ(euler_number(5), 16);
    EXPECT_EQ(mobius_bottom_top(build_extended(6, 1, 2).poset), -1);
    EXPECT_EQ(des_count(DescentWord::parse("bbbb")), 1);
}

TEST(MobiusDescents, ExtendedFamilies) {
    expect_verdict(mu_descent_check(1, 1, 5), Verdict::up_to_sign, -1);
    expect_verdict(mu_descent_check(1, 2, 4), Verdict::up_to_sign, -1);
    expect_verdict(mu_descent_check(2, 1, 3), Verdict::up_to_sign, -1);
    expect_verdict(mu_descent_check(2, 2, 2), Verdict::up_to_sign, -1);
    expect_verdict(mu_descent_check(3, 1, 2), Verdict::up_to_sign, -1);
    expect_verdict(mu_descent_check(3, 2, 1), Verdict::up_to_sign, -1);
    EXPECT_THROW(mu_descent_check(2, 0, 1), Error);
}

TEST(MobiusDescents, VanishingWhenJIsOne) {
    for (auto [r, n] : std::vector<std::pair<unsigned, unsigned>>{{2, 2}, {3, 1}, {1, 4}}) {
        expect_verdict(mu_zero_check(r, n), Verdict::exact, 1);
        expect_verdict(join_of_atoms_check(r, n), Verdict::exact, 1);
    }
}

TEST(MobiusDescents, DivisibleLattices) {
    expect_verdict(mu_divisible_check(2, 4), Verdict::up_to_sign, -1);
    expect_verdict(mu_divisible_check(3, 2), Verdict::up_to_sign, -1);
    EXPECT_THROW(mu_divisible_check(1, 2), Error);
    expect_verdict(alternating_divisible_check(4), Verdict::up_to_sign, -1);
    expect_verdict(secant_check(3), Verdict::up_to_sign, -1);
}
