#include <gtest/gtest.h>

#include "dowling/structures.hpp"
#include "oracles.hpp"

using namespace dowling;

TEST(Structures, PartitionCountsAreBell) {
    auto bell = oracle::bell_numbers(10);
    for (unsigned m = 1; m <= 10; ++m) EXPECT_EQ(enumerate_partitions(m).size(), bell[m].get_ui()) << m;
    EXPECT_THROW(enumerate_partitions(13), GuardError);
}

TEST(Structures, PartitionLatticeMobius) {
    for (unsigned m = 1; m <= 7; ++m) {
        auto L = build_partition_lattice(m);
        EXPECT_EQ(L.size(), oracle::bell_numbers(m)[m].get_ui());
        EXPECT_EQ(mobius_bottom_top(L.poset), oracle::mu_partition(m).get_si()) << m;
        EXPECT_TRUE(L.poset.is_graded());
        EXPECT_EQ(L.poset.length(), m - 1);
    }
    EXPECT_THROW(build_partition_lattice(10), GuardError);
}

TEST(Structures, DowlingSizesAndMobius) {
    for (unsigned s : {1U, 2U, 3U})
        for (unsigned n = 0; n <= (s == 3 ? 4U : 5U); ++n) {
            auto L = build_dowling_lattice(n, s);
            EXPECT_EQ(L.size(), oracle::dowling_size(n, s).get_ui()) << n << " " << s;
            EXPECT_EQ(mobius_bottom_top(L.poset), oracle::mu_dowling(n, s).get_si()) << n << " " << s;
        }
    const unsigned known[] = {1, 2, 6, 24, 116, 648, 4088};
    for (unsigned n = 0; n < 7; ++n) EXPECT_EQ(build_dowling_lattice(n, 2).size(), known[n]);
}

TEST(Structures, PartitionParsePrint) {
    auto p = SetPartition::parse("78|459|16|23");
    EXPECT_EQ(p.to_string(), "16|23|459|78");
    EXPECT_EQ(p.ground, 9U);
    EXPECT_THROW(SetPartition::parse("12|23"), Error);
    EXPECT_THROW(SetPartition::parse("13"), Error);
    auto L = build_partition_lattice(9);
    auto idx = L.find(p);
    ASSERT_TRUE(idx.has_value());
    EXPECT_EQ(L.partition(*idx), p);
}

TEST(Structures, DowlingElementRoundTrip) {
    auto L = build_dowling_lattice(4, 3);
    for (auto i : L.elements()) {
        auto x = L.dowling(i);
        EXPECT_EQ(L.find(x), std::optional<Poset::Index>(i));
    }
}

TEST(Structures, CountOfTypeMatchesEnumeration) {
    for (unsigned s : {1U, 2U, 3U}) {
        const unsigned n = s == 3 ? 4 : 5;
        auto L = build_dowling_lattice(n, s);
        std::map<StructureType, unsigned> tally;
        for (auto i : L.elements()) ++tally[L.type(i)];
        for (const auto& t : all_types(n, true))
            EXPECT_EQ(count_of_type(n, s, t, FamilyDescriptor::dowling(s)), tally[t]) << t.to_string();
    }
    auto P = build_partition_lattice(6);
    std::map<StructureType, unsigned> tally;
    for (auto i : P.elements()) ++tally[P.type(i)];
    for (const auto& t : all_types(6, false))
        EXPECT_EQ(count_of_type(6, 1, t, FamilyDescriptor::partition()), tally[t]) << t.to_string();
    StructureType bad{1, {1, 0}};
    EXPECT_THROW(count_of_type(3, 1, bad, FamilyDescriptor::dowling(1)), Error);
}

TEST(Structures, RDivisibleTypesMatch) {
    auto Q = build_r_divisible(6, 2);
    std::map<StructureType, unsigned> tally;
    for (auto i : Q.elements()) ++tally[structure_type(Q, i)];
    for (const auto& t : all_types(3, false))
        EXPECT_EQ(count_of_type(3, 1, t, FamilyDescriptor::r_divisible(2)), tally[t]) << t.to_string();
    // minimal elements = M^(2)(3) = 15 perfect matchings
    EXPECT_EQ(denominator_M_r(3, 2), 15);
    EXPECT_EQ(Q.poset.upper_covers(0).size(), 15U);
}

TEST(Structures, DrkTypesMatch) {
    for (unsigned s : {1U, 2U}) {
        auto D = build_D_rk(2, 2, 1, s, false);
        std::map<StructureType, unsigned> tally;
        for (auto i : D.elements()) ++tally[structure_type(D, i)];
        const auto fam = FamilyDescriptor::dowling_rk(2, 1, s);
        unsigned total = 0;
        for (const auto& t : all_types(2, true)) {
            EXPECT_EQ(count_of_type(2, s, t, fam), tally[t]) << t.to_string();
            total += tally[t];
        }
        EXPECT_EQ(total, D.size());
        EXPECT_EQ(D.poset.minimal_elements().size(), denominator_N_rk(2, 2, 1, s).get_ui());
    }
}

TEST(Structures, ExtendedRequiresCongruence) {
    EXPECT_THROW(build_extended(5, 2, 2), Error);
    EXPECT_TRUE(is_lattice(build_extended(5, 2, 3).poset).is_lattice);
    EXPECT_TRUE(is_lattice(build_extended(6, 2, 2).poset).is_lattice);
    EXPECT_EQ(build_extended(6, 2, 2).size(), 32U);
    EXPECT_EQ(build_extended(7, 3, 4).size(), 22U);
}

TEST(Structures, ExtendedIsFilter) {
    EXPECT_TRUE(extended_is_filter(7, 2, 3));
    EXPECT_TRUE(extended_is_filter(7, 3, 1));
}

TEST(Structures, ExtendedBijection) {
    for (auto [m, r, k] : {std::tuple{5U, 2U, 0U}, {6U, 2U, 1U}, {7U, 3U, 0U}, {7U, 2U, 2U}, {7U, 3U, 3U}}) {
        auto bij = bijection_extended_to_dowling(m, r, k);
        EXPECT_TRUE(bij.is_order_isomorphism()) << m << r << k;
    }
}

TEST(Structures, RestrictedPartitionsEvenBlocks) {
    auto Q = build_restricted(4, FamilyDescriptor::restricted_partition(IndexSet({2, 4}, 4)));
    EXPECT_EQ(Q.size(), 5U);  // bottom, three matchings, top
    EXPECT_EQ(mobius_bottom_top(Q.poset), 2);
    auto R = build_restricted(6, FamilyDescriptor::restricted_partition(IndexSet({2, 4, 6}, 6)));
    EXPECT_EQ(mobius_bottom_top(R.poset), -16);
}

TEST(Structures, RestrictedDowlingAllIsFullLattice) {
    auto R = build_restricted(3, FamilyDescriptor::restricted_dowling(IndexSet::all_positive(3),
                                                                      IndexSet::arithmetic(0, 1, 3), 2));
    auto L = build_dowling_lattice(3, 2);
    EXPECT_EQ(R.size(), L.size() + 1);
}
