#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "galmod/abelian.hpp"

using namespace galmod;

namespace {

// Element-order histogram of Z/n_1 x ... x Z/n_m, computed over the raw factors.
std::map<i64, i64> order_histogram_raw(const std::vector<i64>& factors)
{
    std::map<i64, i64> hist;
    i64 total = 1;
    for (i64 n : factors)
        total *= n;
    for (i64 idx = 0; idx < total; ++idx) {
        i64 rest = idx, o = 1;
        for (i64 n : factors) {
            i64 c = rest % n;
            rest /= n;
            o = lcm_of(o, n / gcd_of(c, n));
        }
        ++hist[o];
    }
    return hist;
}

using ElementSet = std::vector<i64>; // sorted indices

ElementSet close_set(const FinAbGroup& g, std::set<i64> s)
{
    bool grown = true;
    while (grown) {
        grown = false;
        std::vector<i64> cur(s.begin(), s.end());
        for (i64 a : cur)
            for (i64 b : cur) {
                i64 c = index_of(g, add(g, element_at(g, a), element_at(g, b)));
                if (s.insert(c).second)
                    grown = true;
            }
    }
    return ElementSet(s.begin(), s.end());
}

// Every subgroup is generated by at most rank(g) elements, so closing all
// element sets reachable by adding one element at a time finds all of them.
std::set<ElementSet> brute_subgroups(const FinAbGroup& g)
{
    std::set<ElementSet> found;
    std::vector<ElementSet> frontier{close_set(g, {0})};
    found.insert(frontier[0]);
    while (!frontier.empty()) {
        std::vector<ElementSet> next;
        for (auto const& s : frontier)
            for (i64 x = 0; x < g.order(); ++x) {
                if (std::binary_search(s.begin(), s.end(), x))
                    continue;
                std::set<i64> t(s.begin(), s.end());
                t.insert(x);
                auto c = close_set(g, t);
                if (found.insert(c).second)
                    next.push_back(c);
            }
        frontier = std::move(next);
    }
    return found;
}

ElementSet as_set(const Subgroup& h)
{
    ElementSet out;
    for (auto const& x : elements(h))
        out.push_back(index_of(h.parent, x));
    return out;
}

const std::vector<std::vector<i64>> small_groups{{2},    {3},    {4},    {6},    {8},    {9},       {12},
                                                 {2, 2}, {2, 4}, {3, 3}, {2, 6}, {4, 4}, {2, 2, 2}, {3, 9}};

} // namespace

TEST(MakeGroup, Examples)
{
    EXPECT_EQ(make_group({9}).invariant_factors, (std::vector<i64>{9}));
    EXPECT_EQ(make_group({3, 3}).order(), 9);
    EXPECT_EQ(make_group({6, 3}).invariant_factors, (std::vector<i64>{3, 6}));
    EXPECT_TRUE(make_group({}).invariant_factors.empty());
    EXPECT_THROW(make_group({1}), invalid_factor_error);
    EXPECT_THROW(make_group({4, 0}), invalid_factor_error);
}

TEST(MakeGroup, IsomorphicToInputByOrderHistogram)
{
    const std::vector<std::vector<i64>> inputs{{6, 3}, {2, 3}, {4, 6}, {10, 15}, {12, 18}, {2, 2, 3}, {5, 10, 4}};
    for (auto const& in : inputs) {
        FinAbGroup g = make_group(in);
        for (std::size_t i = 0; i + 1 < g.rank(); ++i)
            EXPECT_EQ(g.invariant_factors[i + 1] % g.invariant_factors[i], 0);
        EXPECT_EQ(order_histogram_raw(in), order_histogram_raw(g.invariant_factors));
    }
}

TEST(Elements, EnumerationIsLexicographic)
{
    FinAbGroup g = make_group({2, 4});
    auto xs = elements(g);
    ASSERT_EQ(xs.size(), 8u);
    EXPECT_EQ(xs[1], (GroupElement{0, 1}));
    EXPECT_EQ(xs[4], (GroupElement{1, 0}));
    for (i64 i = 0; i < g.order(); ++i)
        EXPECT_EQ(index_of(g, element_at(g, i)), i);
}

TEST(Subgroups, CountsAndBruteForce)
{
    EXPECT_EQ(enumerate_subgroups(make_group({9})).size(), 3u);
    EXPECT_EQ(enumerate_subgroups(make_group({3, 3})).size(), 6u);
    EXPECT_EQ(enumerate_subgroups(make_group({2, 2})).size(), 5u);
    for (auto const& f : small_groups) {
        FinAbGroup g = make_group(f);
        auto subs = enumerate_subgroups(g);
        std::set<ElementSet> mine;
        for (auto const& h : subs)
            mine.insert(as_set(h));
        EXPECT_EQ(mine.size(), subs.size()) << group_label(g);
        EXPECT_EQ(mine, brute_subgroups(g)) << group_label(g);
        for (std::size_t i = 0; i + 1 < subs.size(); ++i)
            EXPECT_TRUE(subgroup_less(subs[i], subs[i + 1]));
        EXPECT_EQ(order(subs.front()), 1);
        EXPECT_EQ(order(subs.back()), g.order());
    }
}

TEST(Subgroups, CyclicCountIsDivisorCount)
{
    for (i64 n = 2; n <= 120; ++n)
        EXPECT_EQ(enumerate_subgroups(make_group({n})).size(), divisors(n).size()) << n;
}

TEST(Subgroups, CapacityBound)
{
    EXPECT_THROW(enumerate_subgroups(make_group({10001})), capacity_error);
    EXPECT_THROW(enumerate_subgroups(make_group({10}), 5), capacity_error);
    EXPECT_NO_THROW(enumerate_subgroups(make_group({10}), 10));
}

TEST(Subgroups, CanonicalRoundTripAndQuotientOrder)
{
    for (auto const& f : small_groups) {
        FinAbGroup g = make_group(f);
        for (auto const& h : enumerate_subgroups(g)) {
            EXPECT_EQ(generated_subgroup(g, generators(h)), h);
            EXPECT_EQ(generated_subgroup(g, elements(h)), h);
            auto q = structure_maps(g, h);
            EXPECT_EQ(g.order(), order(h) * q.quotient.order());
            EXPECT_EQ(structure(h).order(), order(h));
            for (auto const& y : elements(q.quotient))
                EXPECT_EQ(q.project(q.lift(y)), y);
            for (auto const& x : elements(g))
                EXPECT_EQ(is_identity(q.project(x)), contains(h, x));
            for (auto const& a : elements(g))
                for (auto const& b : standard_generators(g))
                    EXPECT_EQ(q.project(add(g, a, b)), add(q.quotient, q.project(a), q.project(b)));
        }
    }
}

TEST(Subgroups, JoinAndMeetLaws)
{
    for (auto const& f : std::vector<std::vector<i64>>{{12}, {2, 4}, {3, 3}, {2, 6}}) {
        FinAbGroup g = make_group(f);
        auto subs = enumerate_subgroups(g);
        Subgroup triv = trivial_subgroup(g);
        for (auto const& a : subs) {
            EXPECT_EQ(join(a, a), a);
            EXPECT_EQ(join(a, triv), a);
            for (auto const& b : subs) {
                EXPECT_EQ(join(a, b), join(b, a));
                EXPECT_EQ(order(meet(a, b)) * order(join(a, b)), order(a) * order(b));
                ElementSet sa = as_set(a), sb = as_set(b), inter;
                std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(inter));
                EXPECT_EQ(as_set(meet(a, b)), inter);
                for (auto const& c : subs)
                    EXPECT_EQ(join(join(a, b), c), join(a, join(b, c)));
            }
        }
    }
}

TEST(Subgroups, ParentMismatch)
{
    FinAbGroup g = make_group({9}), h = make_group({3, 3});
    EXPECT_THROW(join(full_subgroup(g), full_subgroup(h)), parent_mismatch_error);
    EXPECT_THROW(structure_maps(g, full_subgroup(h)), parent_mismatch_error);
}

TEST(Classify, Examples)
{
    FinAbGroup g = make_group({3, 5, 5});
    auto c = classify(full_subgroup(g));
    EXPECT_TRUE(c.is_elementary);
    EXPECT_EQ(c.elementary_primes, (std::vector<i64>{5}));

    auto t = classify(trivial_subgroup(g));
    EXPECT_TRUE(t.is_trivial && t.is_cyclic && t.is_elementary && t.every_prime);

    auto n = classify(full_subgroup(make_group({2, 2, 3, 3})));
    EXPECT_FALSE(n.is_elementary);
}

TEST(Classify, AgreesWithSylowElementOrders)
{
    for (auto const& f : std::vector<std::vector<i64>>{{6, 6}, {2, 12}, {3, 15}, {2, 2, 6}, {30}, {10, 10}}) {
        FinAbGroup g = make_group(f);
        for (auto const& h : enumerate_subgroups(g)) {
            i64 n = order(h);
            std::map<i64, bool> cyclic_sylow;
            for (i64 q : prime_divisors(n)) {
                i64 target = p_part(n, q);
                bool found = false;
                for (auto const& x : elements(h))
                    if (element_order(g, x) == target)
                        found = true;
                cyclic_sylow[q] = found;
            }
            std::vector<i64> expect;
            for (i64 p : prime_divisors(n)) {
                bool ok = true;
                for (auto const& [q, cyc] : cyclic_sylow)
                    if (q != p && !cyc)
                        ok = false;
                if (ok)
                    expect.push_back(p);
            }
            auto c = classify(h);
            EXPECT_EQ(c.elementary_primes, expect);
            bool all_cyclic = true;
            for (auto const& [q, cyc] : cyclic_sylow)
                all_cyclic = all_cyclic && cyc;
            EXPECT_EQ(c.is_cyclic, all_cyclic);
        }
    }
}

TEST(Quotients, SylowAndMaxPQuotient)
{
    FinAbGroup g = make_group({45});
    EXPECT_EQ(max_p_quotient(g, 3).quotient.invariant_factors, (std::vector<i64>{9}));
    EXPECT_EQ(order(sylow(full_subgroup(g), 5)), 5);

    FinAbGroup h = make_group({3, 9});
    auto q = max_p_quotient(h, 3);
    EXPECT_EQ(q.quotient, h);
    Subgroup i = cyclic_subgroup(h, {1, 0});
    EXPECT_EQ(order(image_subgroup(q, i)), 3);
}

TEST(Quotients, ImageOrderIsSylowOrder)
{
    for (auto const& f : std::vector<std::vector<i64>>{{30}, {2, 6}, {3, 15}, {6, 6}}) {
        FinAbGroup g = make_group(f);
        for (i64 p : prime_divisors(g.order())) {
            auto q = max_p_quotient(g, p);
            EXPECT_EQ(q.quotient.order(), p_part(g.order(), p));
            for (auto const& h : enumerate_subgroups(g)) {
                Subgroup s = sylow(h, p);
                EXPECT_EQ(order(s), p_part(order(h), p));
                EXPECT_TRUE(is_subgroup_of(s, h));
                EXPECT_EQ(order(image_subgroup(q, h)), order(s));
            }
        }
    }
}

TEST(Quotients, CanonicalLiftIsSmallest)
{
    FinAbGroup g = make_group({9});
    Subgroup i = cyclic_subgroup(g, {3});
    EXPECT_EQ(canonical_lift(i, {7}), (GroupElement{1}));
    EXPECT_EQ(coset_representatives(i).size(), 3u);
}
