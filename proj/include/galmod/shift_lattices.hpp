#pragma once

// Lattice representatives of the shifts of A_{I,phi} and checks of the
// identities proved about them.

#include <string>

#include "galmod/group_ring.hpp"
#include "galmod/lattice.hpp"
#include "galmod/tate.hpp"

namespace galmod {

struct ShiftRep {
    int direction = 1;
    Subgroup i;
    GroupElement phi; // canonical lift
    IdealLattice lattice;
};

/// g~ = 1 - phi~^{-1} + #I in Z[G].
inline ZElem g_tilde(const Subgroup& i, const GroupElement& lift)
{
    const FinAbGroup& g = i.parent;
    return scalar_elem<Int>(g, Int(1) + to_int(order(i))) - group_elem<Int>(g, negate(g, lift));
}

/// With s = phi~^{-1} of order k and c = 1 + #I, Z[G] is free over Z[<s>] and
/// Z[<s>] / (c - s) = Z / (c^k - 1), so Z[G] / g~ Z[G] is (Z / (c^k - 1))^(|G| / k).
inline Int g_tilde_exponent(const Subgroup& i, const GroupElement& lift)
{
    i64 k = element_order(i.parent, lift);
    return int_pow(1 + order(i), static_cast<unsigned long>(k)) - 1;
}

inline Int g_tilde_index(const Subgroup& i, const GroupElement& lift)
{
    i64 k = element_order(i.parent, lift);
    Int e = g_tilde_exponent(i, lift);
    Int out = 1;
    for (i64 t = 0; t < i.parent.order() / k; ++t)
        out *= e;
    return out;
}

/// [Z[G] : (x, g~)], computed in Z[G] / g~ Z[G] = (Z / (c^k - 1))^(|G| / k):
/// the coordinate at the coset r <s> of sum a_y y is sum_t a_{r s^t} c^t.
inline Int index_over_g_tilde(const Subgroup& i, const GroupElement& lift, const ZElem& x)
{
    const FinAbGroup& g = i.parent;
    GroupElement s = negate(g, lift);
    i64 k = element_order(g, s);
    Int m = g_tilde_exponent(i, lift);
    Int c = to_int(1 + order(i));
    std::size_t cosets = static_cast<std::size_t>(g.order() / k);
    std::vector<Int> powers(static_cast<std::size_t>(k));
    powers[0] = 1;
    for (i64 t = 1; t < k; ++t)
        powers[static_cast<std::size_t>(t)] = mod_floor(powers[static_cast<std::size_t>(t - 1)] * c, m);

    std::vector<std::size_t> coset(static_cast<std::size_t>(g.order()), cosets);
    std::vector<std::size_t> exponent(static_cast<std::size_t>(g.order()), 0);
    std::vector<GroupElement> reps;
    for (i64 idx = 0; idx < g.order(); ++idx) {
        if (coset[static_cast<std::size_t>(idx)] != cosets)
            continue;
        GroupElement y = element_at(g, idx);
        reps.push_back(y);
        for (i64 t = 0; t < k; ++t) {
            auto at = static_cast<std::size_t>(index_of(g, y));
            coset[at] = reps.size() - 1;
            exponent[at] = static_cast<std::size_t>(t);
            y = add(g, y, s);
        }
    }
    IntMatrix rows;
    for (auto const& r : reps) {
        ZElem y = translate(x, r);
        IntRow v(cosets, Int(0));
        for (std::size_t a = 0; a < y.coeffs.size(); ++a)
            if (!is_zero(y.coeffs[a]))
                v[coset[a]] += y.coeffs[a] * powers[exponent[a]];
        rows.push_back(std::move(v));
    }
    return hnf_determinant(hnf_modular(rows, m, cosets));
}

inline ShiftRep omega1_lattice(const Subgroup& i, const GroupElement& phi)
{
    if (!i.parent.is_cyclic())
        throw scope_error("omega1_lattice needs a cyclic group, got " + group_label(i.parent));
    GroupElement lift = canonical_lift(i, phi);
    IdealLattice l = ideal_from_generators(i.parent, {norm_element(i), g_tilde(i, lift)});
    return ShiftRep{1, i, lift, l};
}

/// A generator of the cyclic subgroup i.
inline GroupElement cyclic_generator(const Subgroup& i)
{
    for (auto const& x : elements(i))
        if (element_order(i.parent, x) == order(i))
            return x;
    throw scope_error("subgroup is not cyclic");
}

struct KernelCheck {
    bool generators_in_kernel = false;
    bool projection_injective = false;
    Int ring_index = 0;   // [R : g~ R] = |det g~|
    Int ideal_index = 0;  // [R : (N_I, g~)]
    Int module_order = 0; // [R : (tau - 1, g~)] = #A_{I,phi}
    bool projection_equals_ideal = false;
    bool passed() const { return generators_in_kernel && projection_injective && projection_equals_ideal; }
};

/// rho: R^2 -> R, (a, b) -> a (tau - 1) + b g~ with R = Z[G]. The orbits of
/// (N_I, 0) and (g~, 1 - tau) lie in Ker(rho), and the first projection is
/// injective on Ker(rho) when g~ is a non-zero-divisor, so they span Ker(rho)
/// exactly when J = (N_I, g~) equals pi_1(Ker rho) = {a : a (tau - 1) in g~ R}.
/// Multiplication by tau - 1 identifies R / pi_1(Ker rho) with
/// (tau - 1, g~) / g~ R; since J lies in pi_1(Ker rho), equality is the index
/// identity [R : J] [R : (tau - 1, g~)] = [R : g~ R].
inline KernelCheck verify_kernel_generators(const Subgroup& i, const GroupElement& phi)
{
    if (!i.parent.is_cyclic())
        throw scope_error("verify_kernel_generators needs a cyclic group, got " + group_label(i.parent));
    const FinAbGroup& g = i.parent;
    GroupElement lift = canonical_lift(i, phi);
    GroupElement tau = cyclic_generator(i);
    ZElem one = scalar_elem<Int>(g, Int(1));
    ZElem gt = g_tilde(i, lift);
    ZElem tm1 = group_elem<Int>(g, tau) - one;
    ZElem nu = norm_element(i);

    KernelCheck out;
    out.generators_in_kernel = is_zero_row((nu * tm1).coeffs) && is_zero_row((gt * tm1 - tm1 * gt).coeffs);
    out.ring_index = g_tilde_index(i, lift);
    out.projection_injective = !is_zero(out.ring_index);
    if (!out.projection_injective)
        return out;
    out.ideal_index = index_over_g_tilde(i, lift, nu);
    out.module_order = index_over_g_tilde(i, lift, tm1);
    out.projection_equals_ideal = out.ideal_index * out.module_order == out.ring_index;
    return out;
}

/// The first projection of Ker(rho) computed directly as a preimage lattice.
inline IdealLattice kernel_projection(const Subgroup& i, const GroupElement& phi)
{
    const FinAbGroup& g = i.parent;
    std::size_t n = static_cast<std::size_t>(g.order());
    ZElem gt = g_tilde(i, canonical_lift(i, phi));
    ZElem tm1 = group_elem<Int>(g, cyclic_generator(i)) - scalar_elem<Int>(g, Int(1));
    IntMatrix gr = hnf_full_rank(multiplication_matrix(gt), n);
    IntMatrix proj = integer_preimage(multiplication_matrix(tm1), gr, hnf_determinant(gr), n);
    return IdealLattice{g, canonical_lattice(std::move(proj), Int(1))};
}

/// L_{I,phi} = (nu_I, 1 - (nu_I / #I) phi^{-1}), a lattice in (1/#I) Z[G].
inline ShiftRep omega_minus1_lattice(const Subgroup& i, const GroupElement& phi)
{
    if (is_trivial(i))
        throw precondition_error("omega_minus1_lattice needs a nontrivial subgroup I");
    const FinAbGroup& g = i.parent;
    GroupElement lift = canonical_lift(i, phi);
    Int n_i = to_int(order(i));
    ZElem nu = norm_element(i);
    ZElem second = scalar_elem<Int>(g, n_i) - nu * group_elem<Int>(g, negate(g, lift));
    // (#I - x)(#I + x) = #I^2 - #I nu phi^{-2} for x = nu phi^{-1}, so #I^2 lies in #I L.
    IdealLattice l = ideal_with_modulus(g, {n_i * nu, second}, n_i * n_i, n_i);
    return ShiftRep{-1, i, lift, l};
}

struct ExtSequenceCheck {
    bool projection_is_unit_image = false; // pi(L) = pi(Z[G]) in Q[G] / nu_I Q[G]
    bool preimage_is_integral = false;     // {a : nu_I a in L} = Z[G/I]
    bool cokernel_free = false;            // Z[G]/(nu_I) is torsion free
    std::size_t quotient_rank = 0;         // rank of L / nu_I Z[G/I]
    bool passed() const { return projection_is_unit_image && preimage_is_integral && cokernel_free; }
};

inline ExtSequenceCheck verify_ext_sequence(const Subgroup& i, const GroupElement& phi)
{
    ShiftRep rep = omega_minus1_lattice(i, phi);
    const FinAbGroup& g = i.parent;
    std::size_t n = static_cast<std::size_t>(g.order());
    QuotientData q = structure_maps(g, i);
    std::size_t m = static_cast<std::size_t>(q.quotient.order());

    // rows nu_I * (lift of each class of G/I)
    IntMatrix nu_rows;
    for (auto const& y : elements(q.quotient))
        nu_rows.push_back(pull_back_norm(q, group_elem<Int>(q.quotient, y)).coeffs);

    ExtSequenceCheck out;
    out.quotient_rank = n - m;
    auto nu_snf = smith_form(nu_rows, n);
    out.cokernel_free = true;
    for (std::size_t k = 0; k < m; ++k)
        if (nu_snf.diagonal[k] != 1)
            out.cokernel_free = false;

    // x -> x * p has kernel nu_I Q[G] and maps Z^n onto Z^(n-m).
    IntMatrix nu_t = zero_matrix<Int>(n, m);
    for (std::size_t r = 0; r < m; ++r)
        for (std::size_t c = 0; c < n; ++c)
            nu_t[c][r] = nu_rows[r][c];
    IntMatrix perp = kernel_basis(nu_t, m); // (n-m) x n
    IntMatrix p = zero_matrix<Int>(n, perp.size());
    for (std::size_t r = 0; r < perp.size(); ++r)
        for (std::size_t c = 0; c < n; ++c)
            p[c][r] = perp[r][c];
    IntMatrix image = multiply(rep.lattice.basis(), p, perp.size());
    try {
        Lattice pl = lattice_from_rows(image, rep.lattice.denominator(), perp.size());
        out.projection_is_unit_image = pl == standard_lattice(perp.size());
    } catch (const not_full_rank_error&) {
        out.projection_is_unit_image = false;
    }

    // nu_I Z[G/I] inside L, and saturated there.
    const Int& den = rep.lattice.denominator();
    IntMatrix coords;
    bool contained = true;
    for (auto r : nu_rows) {
        for (auto& x : r)
            x *= den;
        auto c = solve_in_basis(rep.lattice.basis(), r);
        if (!c) {
            contained = false;
            break;
        }
        coords.push_back(std::move(*c));
    }
    if (contained) {
        auto s = smith_form(coords, n);
        out.preimage_is_integral = true;
        for (std::size_t k = 0; k < m; ++k)
            if (s.diagonal[k] != 1)
                out.preimage_is_integral = false;
    }
    return out;
}

struct UnitTransportCheck {
    int exponent_k = 1;          // phi'^{-1} = (phi^{-1})^k in G/I
    int precision = 0;           // p-adic precision used
    int precision_bound = 0;     // ord_p [L0 : mL] + ord_p [L0 : L']
    bool unit_congruence = false; // u (1 - phi^{-1}) = 1 - phi'^{-1}
    bool unit_is_unit = false;    // aug(u) prime to p
    bool lattices_match = false;  // m L + p^M L0 = L' + p^M L0
    bool passed() const { return unit_congruence && unit_is_unit && lattices_match; }
};

namespace detail {

inline Lattice element_times_lattice(const FinAbGroup& g, const ZElem& num, const Int& num_den, const Lattice& l)
{
    IntMatrix rows;
    for (auto const& r : l.basis) {
        ZElem x{g, r};
        rows.push_back((num * x).coeffs);
    }
    return lattice_from_rows(rows, num_den * l.denominator, static_cast<std::size_t>(g.order()));
}

inline Lattice add_scaled_standard(const Lattice& l, const Int& den, const Int& scale)
{
    std::size_t n = l.basis.size();
    IntMatrix rows = identity_matrix<Int>(n);
    for (std::size_t k = 0; k < n; ++k)
        rows[k][k] = scale;
    return lattice_sum(l, lattice_from_rows(rows, den, n));
}

} // namespace detail

/// For a p-group G and pairs with I = I', D = D': builds u with
/// u (1 - phi^{-1}) = 1 - phi'^{-1}, the multiplier m = e u + (1 - e) with
/// e = nu_I / #I, and compares m L_{I,phi} with L_{I',phi'} modulo p^M L0,
/// L0 = (1/#I^2) Z[G].
inline UnitTransportCheck verify_unit_transport(const Subgroup& i, const GroupElement& phi, const Subgroup& i2,
                                                const GroupElement& phi2, int precision)
{
    const FinAbGroup& g = i.parent;
    require_same_parent(i, i2);
    if (!is_prime_power(g.order()))
        throw precondition_error("verify_unit_transport needs a p-group");
    i64 p = prime_divisors(g.order()).front();
    if (i != i2 || decomposition_group(i, phi) != decomposition_group(i2, phi2))
        throw precondition_error("pairs are not equivalent: need I = I' and D = D'");

    QuotientData q = structure_maps(g, i);
    GroupElement a = negate(q.quotient, q.project(phi));
    GroupElement b = negate(q.quotient, q.project(phi2));
    i64 ord = element_order(q.quotient, a);
    int k = -1;
    for (i64 t = 0; t < std::max<i64>(ord, 1); ++t)
        if (scale(q.quotient, a, t) == b && (ord == 1 || t % p != 0)) {
            k = static_cast<int>(t);
            break;
        }
    if (ord == 1)
        k = 1;
    if (k < 0)
        throw precondition_error("no unit u exists: phi and phi' generate different subgroups of G/I");

    UnitTransportCheck out;
    out.exponent_k = k;
    out.precision = precision;
    ZElem one_q = scalar_elem<Int>(q.quotient, Int(1));
    ZElem u = zero_elem<Int>(q.quotient);
    for (int j = 0; j < k; ++j)
        u = u + group_elem<Int>(q.quotient, scale(q.quotient, a, j));
    ZElem lhs = u * (one_q - group_elem<Int>(q.quotient, a));
    ZElem rhs = one_q - group_elem<Int>(q.quotient, b);
    Int pm = int_pow(p, static_cast<unsigned long>(std::max(precision, 0)));
    out.unit_congruence = true;
    for (std::size_t t = 0; t < lhs.coeffs.size(); ++t)
        if (!is_zero(mod_floor(lhs.coeffs[t] - rhs.coeffs[t], pm)))
            out.unit_congruence = false;
    out.unit_is_unit = !is_zero(mod_floor(augmentation(u), to_int(p)));

    // m = (nu_I u~ + #I - nu_I) / #I with u~ = sum of lifts
    Int n_i = to_int(order(i));
    ZElem nu = norm_element(i);
    ZElem lifted = pull_back_norm(q, u); // nu_I * u~
    ZElem m_num = lifted + n_i * scalar_elem<Int>(g, Int(1)) - nu;

    Lattice l1 = omega_minus1_lattice(i, phi).lattice.lattice;
    Lattice l2 = omega_minus1_lattice(i2, phi2).lattice.lattice;
    Lattice ml = detail::element_times_lattice(g, m_num, n_i, l1);
    Int den0 = n_i * n_i;
    Lattice l0 = detail::add_scaled_standard(standard_lattice(static_cast<std::size_t>(g.order())), den0, Int(1));
    out.precision_bound = ord_p(lattice_index(l0, ml), p) + ord_p(lattice_index(l0, l2), p);
    if (precision <= out.precision_bound)
        throw precision_error("precision " + std::to_string(precision) + " does not exceed the bound " +
                              std::to_string(out.precision_bound));
    Lattice a1 = detail::add_scaled_standard(ml, den0, pm);
    Lattice a2 = detail::add_scaled_standard(l2, den0, pm);
    out.lattices_match = a1 == a2;
    return out;
}

} // namespace galmod
