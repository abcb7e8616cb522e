#include <gtest/gtest.h>

#include <random>

#include "dowling/identities.hpp"
#include "oracles.hpp"

using namespace dowling;

namespace {

void expect_verdict(const IdentityReport& r, Verdict v, int eps) {
    EXPECT_EQ(r.verdict, v) << r.name;
    EXPECT_EQ(r.epsilon, eps) << r.name;
    EXPECT_TRUE(r.passed()) << r.name;
    if (r.verdict == Verdict::mismatch)
        for (const auto& row : r.rows) ADD_FAILURE() << r.name << " n=" << row.n << " " << row.tag << " brute=" << row.brute << " closed=" << row.closed;
}

}  // namespace

TEST(Verdicts, SignHandling) {
    IdentityReport r("x", 1, 3);
    r.add(0, 0, 0);
    r.add(1, 2, -2);
    r.add(2, -5, 5);
    r.finalize();
    EXPECT_EQ(r.verdict, Verdict::up_to_sign);
    EXPECT_EQ(r.epsilon, -1);
    EXPECT_FALSE(r.passed());
    r.add(3, 1, 1);
    r.finalize();
    EXPECT_EQ(r.verdict, Verdict::mismatch);
    IdentityReport z("z", 1, 1);
    z.add(0, 0, 0);
    EXPECT_EQ(z.finalize().verdict, Verdict::exact);
    IdentityReport bad("b", 1, 1);
    bad.add(0, 0, 1);
    EXPECT_EQ(bad.finalize().verdict, Verdict::mismatch);
}

TEST(MobiusSeries, PartitionFamily) {
    auto s = series_mu_exponential(FamilyDescriptor::partition(), 6);
    EXPECT_EQ(s[1], -1);
    for (unsigned n = 2; n <= 6; ++n) EXPECT_EQ(s[n], 0);
    expect_verdict(mobius_series_check_exponential(FamilyDescriptor::partition(), 6), Verdict::exact, 1);
}

TEST(MobiusSeries, RDivisibleFamily) {
    auto rep = mobius_series_check_exponential(FamilyDescriptor::r_divisible(2), 4);
    expect_verdict(rep, Verdict::exact, 1);
    EXPECT_EQ(rep.rows[0].brute, -1);
    EXPECT_EQ(rep.rows[1].brute, 2);
    EXPECT_EQ(rep.rows[2].brute, -16);
    EXPECT_EQ(rep.rows[3].brute, 272);
    expect_verdict(mobius_series_check_exponential(FamilyDescriptor::r_divisible(3), 2), Verdict::exact, 1);
}

TEST(MobiusSeries, DowlingFamily) {
    auto one = series_mu_dowling(FamilyDescriptor::dowling(1), 5);
    EXPECT_EQ(to_string(one), "-1, 0, 0, 0, 0, 0");
    for (unsigned s : {1U, 2U, 3U}) expect_verdict(mobius_series_check_dowling(FamilyDescriptor::dowling(s), 4), Verdict::exact, 1);
}

TEST(MobiusSeries, TanhCoefficients) {
    auto s = series_mu_dowling(FamilyDescriptor::dowling_rk(2, 1, 1), 3);
    auto N = family_denominator(FamilyDescriptor::dowling_rk(2, 1, 1));
    EXPECT_EQ(coeff_den(s, 1, N), 2);
    EXPECT_EQ(coeff_den(s, 2, N), -16);
}

TEST(Compositional, CountsElements) {
    CompositionalInputs in{{0, 1, 1, 1, 1}, {1, 1, 1, 1, 1}, {1, 1, 1, 1, 1}};
    auto rep = compositional_check_dowling(in, FamilyDescriptor::dowling(1), 3);
    expect_verdict(rep, Verdict::exact, 1);
    EXPECT_EQ(rep.rows[3].brute, 15);
    CompositionalInputs p{{0, 1, 2, 3, 4}, {1, 2, 4, 8, 16}, {}};
    expect_verdict(compositional_check_exponential(p, FamilyDescriptor::partition(), 4), Verdict::exact, 1);
    CompositionalInputs badg{{0, 1}, {2, 1}, {}};
    EXPECT_THROW(compositional_check_exponential(badg, FamilyDescriptor::partition(), 1), Error);
}

TEST(Compositional, RandomTriples) {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> d(-3, 3);
    for (int trial = 0; trial < 3; ++trial) {
        CompositionalInputs in;
        in.f.assign(7, 0);
        in.g.assign(7, 0);
        in.k.assign(7, 0);
        for (unsigned i = 0; i < 7; ++i) {
            in.f[i] = d(rng);
            in.g[i] = d(rng);
            in.k[i] = d(rng);
        }
        for (unsigned s : {1U, 2U}) expect_verdict(compositional_check_dowling(in, FamilyDescriptor::dowling(s), 4), Verdict::exact, 1);
        expect_verdict(compositional_check_dowling(in, FamilyDescriptor::dowling_rk(2, 1, 2), 2), Verdict::exact, 1);
        in.g[0] = 1;
        expect_verdict(compositional_check_exponential(in, FamilyDescriptor::partition(), 6), Verdict::exact, 1);
        expect_verdict(compositional_check_exponential(in, FamilyDescriptor::r_divisible(2), 3), Verdict::exact, 1);
    }
}

TEST(RankPolynomials, BothFamilies) {
    std::vector<Rational> ts{2, 3, make_rational(1, 2), -1, 5, 7};
    expect_verdict(rank_polynomial_check_exponential(FamilyDescriptor::partition(), ts, 5), Verdict::exact, 1);
    expect_verdict(rank_polynomial_check_dowling(FamilyDescriptor::dowling(2), ts, 4), Verdict::exact, 1);
    expect_verdict(rank_polynomial_check_dowling(FamilyDescriptor::dowling(3), ts, 3), Verdict::exact, 1);
    expect_verdict(rank_polynomial_check_dowling(FamilyDescriptor::dowling_rk(2, 1, 1), ts, 2), Verdict::exact, 1);
    // W_2(2) for s=2: t^2 + 4t + 1 at t=2
    auto rep = rank_polynomial_check_dowling(FamilyDescriptor::dowling(2), {2, 3, 4}, 2);
    EXPECT_EQ(rep.rows[2].brute, 13);
    EXPECT_THROW(rank_polynomial_check_dowling(FamilyDescriptor::dowling(2), {2}, 2), Error);
}

TEST(RankPolynomials, CorankWithoutBlockShiftIsOffByT) {
    // V_2(t) = t + 1 by corank; the exponential closed form gives t^2 + t.
    auto Q = build_partition_lattice(2);
    auto series = exp(exponential_terms(2, 1) * Rational(3));
    EXPECT_EQ(coeff_den(series, 2, DenominatorSequence::ones()), 12);
    EXPECT_EQ(Q.size(), 2U);
}

TEST(Restricted, LiteralTwoOnly) {
    IndexSet I({2}, 8);
    auto d = restricted_partition_data(I, 8);
    EXPECT_EQ(d.mu[2], -1);
    EXPECT_EQ(d.mu[4], 0);
    EXPECT_EQ(d.m[4], -2);
    EXPECT_EQ(d.m[6], -14);
    EXPECT_EQ(d.m[8], -104);
    for (unsigned n : {1U, 3U, 5U, 7U}) EXPECT_EQ(d.m[n], 1);
    expect_verdict(restricted_mu_check(I, 8), Verdict::exact, 1);
    expect_verdict(restricted_m_expansion_check(I, 8), Verdict::exact, 1);
}

TEST(Restricted, EvenBlocks) {
    IndexSet I({2, 4, 6}, 6);
    auto d = restricted_partition_data(I, 6);
    EXPECT_EQ(d.mu[2], -1);
    EXPECT_EQ(d.mu[4], 2);
    EXPECT_EQ(d.mu[6], -16);
    expect_verdict(restricted_mu_check(I, 6), Verdict::exact, 1);
    expect_verdict(restricted_mu_check(IndexSet({1, 3, 4}, 7), 7), Verdict::exact, 1);
    expect_verdict(restricted_m_expansion_check(IndexSet({1, 3, 4}, 7), 7), Verdict::exact, 1);
}

TEST(Restricted, AllPositivesReducesToPlainSeries) {
    auto d = restricted_partition_data(IndexSet::all_positive(5), 5);
    for (unsigned n = 1; n <= 5; ++n) EXPECT_EQ(d.m[n], 0);
}

TEST(Restricted, DowlingVersion) {
    expect_verdict(restricted_mu_dowling_check(IndexSet({2}, 8), IndexSet({1}, 8), 1, 8), Verdict::exact, 1);
    expect_verdict(restricted_mu_dowling_check(IndexSet({2}, 5), IndexSet({1}, 5), 2, 5), Verdict::exact, 1);
    expect_verdict(restricted_mu_dowling_check(IndexSet({1, 3}, 5), IndexSet({0, 2}, 5), 3, 4), Verdict::exact, 1);
    auto R = build_restricted(3, FamilyDescriptor::restricted_dowling(IndexSet({2}, 3), IndexSet({1}, 3), 1));
    EXPECT_EQ(R.size(), 4U);
}

TEST(Semigroup, EvenAndOdd) {
    auto reps = semigroup_check(IndexSet({2, 4, 6, 8}, 8), IndexSet({1, 3, 5, 7}, 8), 1, 8);
    expect_verdict(reps.exponential, Verdict::exact, 1);
    expect_verdict(reps.dowling, Verdict::exact, 1);
    expect_verdict(reps.vanishing, Verdict::exact, 1);
    auto reps2 = semigroup_check(IndexSet({2, 4, 6}, 6), IndexSet({1, 3, 5}, 6), 2, 6);
    expect_verdict(reps2.dowling, Verdict::exact, 1);
}

TEST(Semigroup, AtLeastTwo) {
    IndexSet I = IndexSet::arithmetic(2, 1, 7);
    IndexSet J({0, 2, 3, 4, 5, 6, 7}, 7);
    auto reps = semigroup_check(I, J, 1, 7);
    expect_verdict(reps.exponential, Verdict::exact, 1);
    expect_verdict(reps.dowling, Verdict::exact, 1);
    expect_verdict(reps.vanishing, Verdict::exact, 1);
}

TEST(Semigroup, RejectsNonClosedSet) {
    try {
        semigroup_check(IndexSet({2, 5}, 8), IndexSet({1, 3, 5, 7}, 8), 1, 8);
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("2 + 2 = 4"), std::string::npos) << e.what();
    }
    try {
        semigroup_check(IndexSet({2, 4, 5, 6, 7, 8}, 8), IndexSet({0}, 8), 1, 8);
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("is not in J"), std::string::npos) << e.what();
    }
}

TEST(Drk, ProductFormCarriesMinusSign) {
    for (auto [r, k] : {std::pair{1U, 1U}, {1U, 2U}, {2U, 0U}, {2U, 1U}, {2U, 2U}})
        for (unsigned s : {1U, 2U}) {
            auto reps = d_rk_series_check(r, k, s, 6);
            expect_verdict(reps.product_form, Verdict::up_to_sign, -1);
            expect_verdict(reps.family_series, Verdict::exact, 1);
            if (reps.binomial) expect_verdict(*reps.binomial, Verdict::up_to_sign, -1);
            if (reps.hyperbolic) {
                expect_verdict(*reps.hyperbolic, Verdict::up_to_sign, -1);
                expect_verdict(*reps.hyperbolic_vs_product, Verdict::exact, 1);
            }
        }
}

TEST(Drk, SmallValues) {
    auto v = drk_mobius_values(1, 1, 1, 3);
    EXPECT_EQ(v[0], -1);
    auto w = drk_mobius_values(2, 1, 1, 5);
    EXPECT_EQ(w[1], 2);
    EXPECT_EQ(w[2], -16);
    auto u = drk_mobius_values(1, 2, 2, 6);
    for (unsigned n = 0; n < u.size(); ++n) EXPECT_EQ(abs(u[n]), n + 1);
}

TEST(Drk, OrderIndependence) {
    expect_verdict(drk_order_independence(2, 3, {1, 2, 3}), Verdict::exact, 1);
    expect_verdict(drk_order_independence(1, 4, {1, 2, 3}), Verdict::exact, 1);
}

TEST(Census, TypeCounts) {
    for (unsigned s : {1U, 2U, 3U})
        for (unsigned n = 0; n <= 4; ++n) expect_verdict(type_census_check(FamilyDescriptor::dowling(s), n), Verdict::exact, 1);
    expect_verdict(type_census_check(FamilyDescriptor::dowling_rk(2, 1, 2), 2), Verdict::exact, 1);
    expect_verdict(type_census_check(FamilyDescriptor::dowling_rk(1, 2, 2), 3), Verdict::exact, 1);
    expect_verdict(type_census_check(FamilyDescriptor::r_divisible(2), 3), Verdict::exact, 1);
}
