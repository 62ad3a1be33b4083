#include <gtest/gtest.h>

#include <set>
#include <tuple>

#include "galmod/shift_lattices.hpp"

using namespace galmod;

namespace {

struct Pair {
    Subgroup i;
    GroupElement phi;
};

std::vector<Pair> pairs_of(const FinAbGroup& g)
{
    std::vector<Pair> out;
    for (auto const& i : enumerate_subgroups(g, default_enumeration_bound)) {
        if (is_trivial(i))
            continue;
        for (auto const& phi : coset_representatives(i))
            out.push_back({i, phi});
    }
    return out;
}

Subgroup subgroup_of_order(const FinAbGroup& g, i64 n)
{
    for (auto const& h : enumerate_subgroups(g, default_enumeration_bound))
        if (order(h) == n && is_cyclic(h))
            return h;
    throw std::runtime_error("no such subgroup");
}

IntMatrix orbit_rows(const FinAbGroup& g, const ZElem& a, const ZElem& b)
{
    IntMatrix rows;
    for (auto const& s : elements(g)) {
        IntRow r = translate(a, s).coeffs;
        IntRow t = translate(b, s).coeffs;
        r.insert(r.end(), t.begin(), t.end());
        rows.push_back(std::move(r));
    }
    return rows;
}

// Ker(rho) as the integer kernel of the stacked 2n x n matrix.
IntMatrix direct_kernel(const Subgroup& i, const GroupElement& lift)
{
    const FinAbGroup& g = i.parent;
    ZElem tm1 = group_elem<Int>(g, cyclic_generator(i)) - scalar_elem<Int>(g, Int(1));
    IntMatrix stacked = multiplication_matrix(tm1);
    for (auto& r : multiplication_matrix(g_tilde(i, lift)))
        stacked.push_back(r);
    return kernel_basis(stacked, static_cast<std::size_t>(g.order()));
}

Lattice scaled_standard_plus(const FinAbGroup& g, const IntMatrix& extra, const Int& den)
{
    std::size_t n = static_cast<std::size_t>(g.order());
    IntMatrix rows = identity_matrix<Int>(n);
    for (auto& r : rows)
        for (auto& x : r)
            x *= den;
    rows.insert(rows.end(), extra.begin(), extra.end());
    return lattice_from_rows(rows, den, n);
}

// p-local equality of full-rank lattices: both indices in the sum prime to p.
bool locally_equal(const Lattice& a, const Lattice& b, i64 p)
{
    Lattice s = lattice_sum(a, b);
    return ord_p(lattice_index(s, a), p) == 0 && ord_p(lattice_index(s, b), p) == 0;
}

} // namespace

TEST(Omega1, Examples)
{
    FinAbGroup z3 = make_group({3});
    auto rep = omega1_lattice(full_subgroup(z3), identity_element(z3));
    EXPECT_EQ(rep.direction, 1);
    EXPECT_EQ(cardinality(rep.lattice), 9);

    FinAbGroup z9 = make_group({9});
    Subgroup all = full_subgroup(z9);
    auto rep9 = omega1_lattice(all, identity_element(z9));
    EXPECT_EQ(rep9.lattice, ideal_from_generators(z9, {norm_element(all), scalar_elem<Int>(z9, Int(9))}));

    Subgroup i3 = subgroup_of_order(z9, 3);
    GroupElement sigma{1};
    auto rep3 = omega1_lattice(i3, sigma);
    ZElem n3 = group_elem<Int>(z9, {0}) + group_elem<Int>(z9, {3}) + group_elem<Int>(z9, {6});
    ZElem g3 = scalar_elem<Int>(z9, Int(4)) - group_elem<Int>(z9, {8});
    EXPECT_EQ(rep3.lattice, ideal_from_generators(z9, {n3, g3}));
    EXPECT_EQ(rep3.phi, sigma);
}

TEST(Omega1, RejectsNoncyclicGroups)
{
    FinAbGroup g = make_group({3, 3});
    Subgroup i = cyclic_subgroup(g, {1, 0});
    EXPECT_THROW(omega1_lattice(i, GroupElement{0, 1}), scope_error);
    EXPECT_THROW(verify_kernel_generators(i, GroupElement{0, 1}), scope_error);
}

TEST(KernelGenerators, Examples)
{
    FinAbGroup z3 = make_group({3});
    EXPECT_TRUE(verify_kernel_generators(full_subgroup(z3), identity_element(z3)).passed());
    FinAbGroup z9 = make_group({9});
    EXPECT_TRUE(verify_kernel_generators(subgroup_of_order(z9, 3), GroupElement{1}).passed());
    FinAbGroup z27 = make_group({27});
    EXPECT_TRUE(verify_kernel_generators(subgroup_of_order(z27, 9), GroupElement{1}).passed());
}

TEST(KernelGenerators, MatchesDirectIntegerKernel)
{
    for (i64 n = 2; n <= 16; ++n) {
        FinAbGroup g = make_group({n});
        for (auto const& [i, phi] : pairs_of(g)) {
            GroupElement lift = canonical_lift(i, phi);
            std::size_t sz = static_cast<std::size_t>(n);
            IntMatrix kernel = direct_kernel(i, lift);
            ZElem one = scalar_elem<Int>(g, Int(1));
            ZElem tau = group_elem<Int>(g, cyclic_generator(i));
            IntMatrix rows = orbit_rows(g, norm_element(i), zero_elem<Int>(g));
            for (auto& r : orbit_rows(g, g_tilde(i, lift), one - tau))
                rows.push_back(r);
            EXPECT_EQ(hnf(rows, 2 * sz), hnf(kernel, 2 * sz)) << group_label(g);

            IntMatrix first;
            for (auto const& r : kernel)
                first.emplace_back(r.begin(), r.begin() + n);
            IdealLattice j = ideal_from_generators(g, {norm_element(i), g_tilde(i, lift)});
            EXPECT_EQ(canonical_lattice(hnf(first, sz), Int(1)), j.lattice);

            auto check = verify_kernel_generators(i, phi);
            EXPECT_TRUE(check.passed());
        }
    }
}

TEST(KernelGenerators, PreimageProjectionMatchesIdeal)
{
    for (i64 n : {18, 20, 24, 27, 30, 32}) {
        FinAbGroup g = make_group({n});
        for (auto const& [i, phi] : pairs_of(g)) {
            GroupElement lift = canonical_lift(i, phi);
            EXPECT_EQ(kernel_projection(i, phi), ideal_from_generators(g, {norm_element(i), g_tilde(i, lift)}));
        }
    }
}

TEST(KernelGenerators, IndicesAgreeWithDeterminants)
{
    for (auto const& g : {make_group({6}), make_group({8}), make_group({9}), make_group({2, 4}), make_group({3, 3}),
                          make_group({12}), make_group({2, 2, 2})}) {
        for (auto const& [i, phi] : pairs_of(g)) {
            GroupElement lift = canonical_lift(i, phi);
            ZElem gt = g_tilde(i, lift);
            EXPECT_EQ(g_tilde_index(i, lift), abs(det_bareiss(multiplication_matrix(gt))));
            ZElem nu = norm_element(i);
            EXPECT_EQ(index_over_g_tilde(i, lift, nu), cardinality(ideal_from_generators(g, {nu, gt})));
            if (!g.is_cyclic())
                continue;
            auto check = verify_kernel_generators(i, phi);
            EXPECT_EQ(check.module_order, cardinality(a_module(i, phi)));
        }
    }
}

TEST(Omega1, IndexIdentityHoldsForEveryLift)
{
    // The ideal itself moves with the lift; the identity [R:J] #A = [R:g~R] does not.
    FinAbGroup z9 = make_group({9});
    Subgroup i3 = subgroup_of_order(z9, 3);
    std::set<Int> indices;
    for (auto const& x : elements(i3)) {
        GroupElement lift = x;
        ZElem gt = g_tilde(i3, lift);
        Int j = cardinality(ideal_from_generators(z9, {norm_element(i3), gt}));
        EXPECT_EQ(j * 27, g_tilde_index(i3, lift));
        indices.insert(j);
    }
    EXPECT_EQ(indices, (std::set<Int>{729, 9261}));
}

TEST(OmegaMinus1, Examples)
{
    FinAbGroup z3 = make_group({3});
    Subgroup all = full_subgroup(z3);
    auto rep = omega_minus1_lattice(all, identity_element(z3));
    EXPECT_EQ(rep.direction, -1);
    EXPECT_EQ(rep.lattice.denominator(), 3);
    QElem nu{z3, {1, 1, 1}};
    QElem second{z3, {mpq_class(2, 3), mpq_class(-1, 3), mpq_class(-1, 3)}};
    EXPECT_EQ(rep.lattice, ideal_from_generators(z3, std::vector<QElem>{nu, second}));
    EXPECT_TRUE(verify_ext_sequence(all, identity_element(z3)).passed());

    FinAbGroup g = make_group({3, 3});
    auto check = verify_ext_sequence(cyclic_subgroup(g, {1, 0}), GroupElement{0, 1});
    EXPECT_TRUE(check.passed());
    EXPECT_EQ(check.quotient_rank, 6u);
}

TEST(OmegaMinus1, RejectsTrivialSubgroup)
{
    FinAbGroup g = make_group({3});
    EXPECT_THROW(omega_minus1_lattice(trivial_subgroup(g), identity_element(g)), precondition_error);
    EXPECT_THROW(verify_ext_sequence(trivial_subgroup(g), identity_element(g)), precondition_error);
}

TEST(OmegaMinus1, LatticeDoesNotDependOnTheLift)
{
    for (auto const& g : {make_group({9}), make_group({2, 4}), make_group({12})}) {
        for (auto const& [i, phi] : pairs_of(g)) {
            Int n_i = to_int(order(i));
            ZElem nu = norm_element(i);
            std::set<Lattice, bool (*)(const Lattice&, const Lattice&)> seen(
                [](const Lattice& a, const Lattice& b) { return std::tie(a.denominator, a.basis) < std::tie(b.denominator, b.basis); });
            for (auto const& x : elements(i)) {
                GroupElement lift = add(g, phi, x);
                ZElem second = scalar_elem<Int>(g, n_i) - nu * group_elem<Int>(g, negate(g, lift));
                seen.insert(ideal_from_generators(g, {n_i * nu, second}, n_i).lattice);
            }
            ASSERT_EQ(seen.size(), 1u);
            EXPECT_EQ(*seen.begin(), omega_minus1_lattice(i, phi).lattice.lattice);
        }
    }
}

// pi(L) = pi(Z[G]) and {a : nu_I a in L} = Z[G/I], checked with lattice
// containments and exhaustive search over (1/#I) Z[G/I] / Z[G/I].
TEST(ExtSequence, AgreesWithContainmentAndSearchOracle)
{
    for (auto const& g : {make_group({4}), make_group({6}), make_group({8}), make_group({9}), make_group({2, 2}),
                          make_group({2, 4}), make_group({3, 3}), make_group({2, 6})}) {
        for (auto const& [i, phi] : pairs_of(g)) {
            auto rep = omega_minus1_lattice(i, phi);
            const Lattice& l = rep.lattice.lattice;
            Int n_i = to_int(order(i));
            QuotientData q = structure_maps(g, i);
            IntMatrix nu_rows;
            for (auto const& y : elements(q.quotient))
                nu_rows.push_back(pull_back_norm(q, group_elem<Int>(q.quotient, y)).coeffs);

            Lattice z_plus = scaled_standard_plus(g, nu_rows, n_i);
            IntMatrix l_rows = scaled_basis(l, n_i);
            l_rows.insert(l_rows.end(), nu_rows.begin(), nu_rows.end());
            Lattice l_plus = lattice_from_rows(l_rows, n_i, static_cast<std::size_t>(g.order()));
            bool projection_oracle = l_plus == z_plus;

            bool preimage_oracle = true;
            std::size_t m = nu_rows.size();
            long total = 1;
            for (std::size_t k = 0; k < m; ++k)
                total *= n_i.get_si();
            for (long code = 1; code < total; ++code) {
                IntRow v(static_cast<std::size_t>(g.order()), Int(0));
                long c = code;
                for (std::size_t k = 0; k < m; ++k) {
                    long a = c % n_i.get_si();
                    c /= n_i.get_si();
                    for (std::size_t j = 0; j < v.size(); ++j)
                        v[j] += a * nu_rows[k][j];
                }
                IntRow scaled = v;
                for (auto& x : scaled)
                    x *= l.denominator / n_i;
                if (solve_in_basis(l.basis, scaled))
                    preimage_oracle = false;
            }

            auto check = verify_ext_sequence(i, phi);
            EXPECT_EQ(check.projection_is_unit_image, projection_oracle) << group_label(g);
            EXPECT_EQ(check.preimage_is_integral, preimage_oracle) << group_label(g);
            EXPECT_TRUE(check.cokernel_free);
            EXPECT_EQ(check.quotient_rank, static_cast<std::size_t>(g.order() - q.quotient.order()));
            EXPECT_TRUE(check.passed());
        }
    }
}

TEST(UnitTransport, Examples)
{
    FinAbGroup z9 = make_group({9});
    Subgroup i3 = subgroup_of_order(z9, 3);
    auto r = verify_unit_transport(i3, GroupElement{1}, i3, GroupElement{4}, 40);
    EXPECT_TRUE(r.passed());

    auto same = verify_unit_transport(i3, GroupElement{1}, i3, GroupElement{1}, 40);
    EXPECT_TRUE(same.passed());
    EXPECT_EQ(same.exponent_k, 1);

    // D = <1> versus D = I
    EXPECT_THROW(verify_unit_transport(i3, GroupElement{1}, i3, GroupElement{0}, 40), precondition_error);
    EXPECT_THROW(verify_unit_transport(i3, GroupElement{1}, full_subgroup(z9), GroupElement{1}, 40),
                 precondition_error);
    EXPECT_THROW(verify_unit_transport(i3, GroupElement{1}, i3, GroupElement{4}, 0), precision_error);

    FinAbGroup z6 = make_group({6});
    Subgroup i2 = subgroup_of_order(z6, 2);
    EXPECT_THROW(verify_unit_transport(i2, GroupElement{1}, i2, GroupElement{1}, 40), precondition_error);
}

TEST(UnitTransport, BoundIsEnforcedExactly)
{
    FinAbGroup z9 = make_group({9});
    Subgroup i3 = subgroup_of_order(z9, 3);
    auto r = verify_unit_transport(i3, GroupElement{1}, i3, GroupElement{4}, 200);
    EXPECT_THROW(verify_unit_transport(i3, GroupElement{1}, i3, GroupElement{4}, r.precision_bound), precision_error);
    EXPECT_TRUE(verify_unit_transport(i3, GroupElement{1}, i3, GroupElement{4}, r.precision_bound + 1).passed());
}

TEST(UnitTransport, AgreesWithLocalIndexOracle)
{
    for (auto const& g : {make_group({4}), make_group({8}), make_group({9}), make_group({2, 2}), make_group({2, 4}),
                          make_group({3, 3}), make_group({27})}) {
        i64 p = prime_divisors(g.order()).front();
        auto ps = pairs_of(g);
        int checked = 0;
        for (auto const& a : ps)
            for (auto const& b : ps) {
                if (a.i != b.i || decomposition_group(a.i, a.phi) != decomposition_group(b.i, b.phi))
                    continue;
                auto r = verify_unit_transport(a.i, a.phi, b.i, b.phi, 1000);
                EXPECT_TRUE(r.passed()) << group_label(g);

                // m = (nu_I u~ + #I - nu_I) / #I with u~ a sum of powers of phi^{-1}
                Int n_i = to_int(order(a.i));
                ZElem nu = norm_element(a.i);
                ZElem u = zero_elem<Int>(g);
                GroupElement inv = negate(g, a.phi);
                for (int j = 0; j < r.exponent_k; ++j)
                    u = u + group_elem<Int>(g, scale(g, inv, j));
                ZElem m = nu * u + scalar_elem<Int>(g, n_i) - nu;
                const Lattice& l1 = omega_minus1_lattice(a.i, a.phi).lattice.lattice;
                IntMatrix rows;
                for (auto const& row : l1.basis)
                    rows.push_back((m * ZElem{g, row}).coeffs);
                Lattice ml = lattice_from_rows(rows, n_i * l1.denominator, static_cast<std::size_t>(g.order()));
                EXPECT_TRUE(locally_equal(ml, omega_minus1_lattice(b.i, b.phi).lattice.lattice, p));
                ++checked;
            }
        EXPECT_GT(checked, 0);
    }
}
