#pragma once

// Tate cohomology in degrees 0 and -1, the closed form for A_{I,phi},
// cohomological triviality, and chi-components of p-primary modules.

#include <optional>
#include <string>
#include <vector>

#include "galmod/abelian.hpp"
#include "galmod/finite_field.hpp"
#include "galmod/finite_module.hpp"
#include "galmod/group_ring.hpp"

namespace galmod {

struct TateResult {
    FiniteModule h0;  // M^H / N_H M
    FiniteModule hm1; // ker N_H / I_H M
    std::vector<Int> h0_invariants;
    std::vector<Int> hm1_invariants;
    std::vector<IntMatrix> h0_action;  // G acting in Smith coordinates
    std::vector<IntMatrix> hm1_action;
};

inline TateResult tate(const Subgroup& h, const FiniteModule& m)
{
    require_parent(m.group, h);
    std::size_t n = m.generator_count;
    IntMatrix norm = norm_action(m, h);
    IntMatrix norm_image = span_with_relations(m, norm);
    IntMatrix ker_norm = preimage_of_relations(m, norm);

    std::vector<GroupElement> gens = generators(h);
    IntMatrix aug_rows;
    IntMatrix stacked(n, IntRow(n * gens.size(), Int(0)));
    IntMatrix target;
    for (std::size_t t = 0; t < gens.size(); ++t) {
        IntMatrix a = element_action(m, gens[t]);
        for (std::size_t i = 0; i < n; ++i) {
            a[i][i] -= 1;
            aug_rows.push_back(a[i]);
            for (std::size_t j = 0; j < n; ++j)
                stacked[i][t * n + j] = a[i][j];
        }
        for (auto const& r : m.relations) {
            IntRow b(n * gens.size(), Int(0));
            for (std::size_t j = 0; j < n; ++j)
                b[t * n + j] = r[j];
            target.push_back(std::move(b));
        }
    }
    IntMatrix aug_image = span_with_relations(m, aug_rows);
    IntMatrix fixed = gens.empty() ? identity_matrix<Int>(n)
                                   : integer_preimage(stacked, target, cardinality(m), n * gens.size());

    TateResult out{subquotient(m, fixed, norm_image), subquotient(m, ker_norm, aug_image), {}, {}, {}, {}};
    auto s0 = smith_coordinates(out.h0);
    auto s1 = smith_coordinates(out.hm1);
    out.h0_invariants = s0.invariants;
    out.hm1_invariants = s1.invariants;
    out.h0_action = s0.actions;
    out.hm1_action = s1.actions;
    return out;
}

/// D = I + <phi>.
inline Subgroup decomposition_group(const Subgroup& i, const GroupElement& phi)
{
    return join(i, cyclic_subgroup(i.parent, phi));
}

/// Z[G/(D+H)] / (#(I meet H)).
inline FiniteModule tate_closed_form(const Subgroup& i, const GroupElement& phi, const Subgroup& h)
{
    require_same_parent(i, h);
    const FinAbGroup& g = i.parent;
    Subgroup k = join(decomposition_group(i, phi), h);
    Int c = to_int(order(meet(i, h)));
    QuotientData q = structure_maps(g, k);
    return quotient_ring_module(g, k, {scalar_elem<Int>(q.quotient, c)});
}

inline bool is_cohomologically_trivial(const FiniteModule& m)
{
    Subgroup full = full_subgroup(m.group);
    for (i64 q : prime_divisors(m.group.order())) {
        TateResult t = tate(sylow(full, q), m);
        if (!is_zero_module(t.h0) || !is_zero_module(t.hm1))
            return false;
    }
    return true;
}

// ---- characters ----

/// A character of G of order prime to p, given by an exponent tuple a:
/// chi(x) = exp(2 pi i sum a_j x_j / d_j). The tuple is the lexicographically
/// smallest member of its orbit under a -> p a.
struct ChiCharacter {
    i64 p = 0;
    FinAbGroup group;
    GroupElement exponents;
    i64 order = 1;

    bool operator==(const ChiCharacter&) const = default;
};

inline GroupElement frobenius_orbit_min(const FinAbGroup& g, const GroupElement& a, i64 p)
{
    GroupElement best = a, cur = a;
    for (;;) {
        cur = scale(g, cur, p);
        if (cur == a)
            break;
        if (index_of(g, cur) < index_of(g, best))
            best = cur;
    }
    return best;
}

inline ChiCharacter make_character(const FinAbGroup& g, i64 p, const GroupElement& a)
{
    GroupElement r = reduce(g, a);
    i64 ord = element_order(g, r);
    if (ord % p == 0)
        throw precondition_error("character order must be prime to p");
    return ChiCharacter{p, g, frobenius_orbit_min(g, r, p), ord};
}

/// Representatives of the Q_p-conjugacy classes of characters of order prime to p.
inline std::vector<ChiCharacter> enumerate_characters(const FinAbGroup& g, i64 p)
{
    std::vector<ChiCharacter> out;
    for (auto const& a : elements(g)) {
        if (element_order(g, a) % p == 0)
            continue;
        if (frobenius_orbit_min(g, a, p) == a)
            out.push_back(ChiCharacter{p, g, a, element_order(g, a)});
    }
    return out;
}

/// Exponent k with chi(x) = zeta_N^k, N the group exponent.
inline i64 character_exponent(const ChiCharacter& chi, const GroupElement& x)
{
    i64 n = chi.group.exponent();
    i64 k = 0;
    for (std::size_t i = 0; i < chi.group.rank(); ++i)
        k = mod_floor(k + chi.exponents[i] * x[i] % n * (n / chi.group.invariant_factors[i]), n);
    return k;
}

inline bool is_trivial_on(const ChiCharacter& chi, const Subgroup& d)
{
    for (auto const& x : generators(d))
        if (character_exponent(chi, x) != 0)
            return false;
    return true;
}

namespace detail {

inline ZElem newton_idempotent(ZElem e, const Int& mod, int precision)
{
    auto reduce_mod = [&](ZElem x) {
        for (auto& c : x.coeffs)
            c = mod_floor(c, mod);
        return x;
    };
    for (int reach = 1; reach < 2 * precision + 2; reach *= 2) {
        ZElem e2 = reduce_mod(e * e);
        ZElem e3 = reduce_mod(e2 * e);
        e = reduce_mod(Int(3) * e2 - Int(2) * e3);
    }
    if (reduce_mod(e * e) != e)
        throw error("idempotent lift did not converge");
    return e;
}

} // namespace detail

/// The idempotent e_chi of Z/p^precision [G]: sum over the Frobenius orbit of
/// the character idempotents, supported on the prime-to-p part of G.
inline ZElem character_idempotent(const ChiCharacter& chi, int precision)
{
    const FinAbGroup& g = chi.group;
    i64 p = chi.p;
    i64 n = g.exponent();
    i64 e_prime = n / p_part(n, p);
    std::vector<GroupElement> delta;
    for (auto const& x : elements(g))
        if (element_order(g, x) % p != 0)
            delta.push_back(x);
    int f = multiplicative_order(p, e_prime);
    int orbit = multiplicative_order(p, chi.order);
    FiniteField field(p, f);
    FiniteField::Elem theta = field.primitive_root_of_unity(e_prime);
    i64 step = n / e_prime;
    i64 delta_order = static_cast<i64>(delta.size());
    i64 inv_delta = 1;
    for (i64 k = 1; k < p; ++k)
        if ((delta_order % p) * k % p == 1)
            inv_delta = k;
    auto bar = zero_elem<Int>(g);
    for (auto const& x : delta) {
        i64 k = character_exponent(chi, x);
        if (k % step != 0)
            throw error("character takes values outside the prime-to-p roots of unity");
        i64 base = mod_floor(-(k / step), e_prime);
        FiniteField::Elem tr = field.zero();
        i64 pj = 1;
        for (int j = 0; j < orbit; ++j) {
            tr = field.add(tr, field.pow(theta, static_cast<std::uint64_t>(mod_floor(base * pj, e_prime))));
            pj = pj * p % e_prime;
        }
        bar[x] = to_int(field.to_prime_field(tr) * inv_delta % p);
    }
    Int mod = int_pow(p, static_cast<unsigned long>(precision));
    return detail::newton_idempotent(bar, mod, precision);
}

/// Action matrix of a group ring element on M.
inline IntMatrix ring_action(const FiniteModule& m, const ZElem& x, const Int& modulus)
{
    std::size_t n = m.generator_count;
    IntMatrix sum = zero_matrix<Int>(n, n);
    for (i64 i = 0; i < m.group.order(); ++i) {
        const Int& c = x.coeffs[static_cast<std::size_t>(i)];
        if (is_zero(c))
            continue;
        IntMatrix a = element_action(m, element_at(m.group, i));
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t s = 0; s < n; ++s)
                sum[r][s] += c * a[r][s];
    }
    return reduce_entries(sum, modulus);
}

/// The p-primary part m M, m the prime-to-p part of |M|.
inline FiniteModule p_part(const FiniteModule& m, i64 p)
{
    Int pz = to_int(p);
    Int rest = cardinality(m);
    while (is_zero(rest % pz))
        rest /= pz;
    std::size_t n = m.generator_count;
    IntMatrix rows = identity_matrix<Int>(n);
    for (auto& r : rows)
        for (auto& x : r)
            x *= rest;
    return submodule(m, span_with_relations(m, rows));
}

inline bool is_p_primary(const FiniteModule& m, i64 p)
{
    Int c = cardinality(m);
    Int pz = to_int(p);
    while (is_zero(c % pz))
        c /= pz;
    return c == 1;
}

/// e_chi M for M of p-power exponent p^e with e <= precision.
inline FiniteModule chi_component(const FiniteModule& m, const ChiCharacter& chi, int precision)
{
    if (m.group != chi.group)
        throw parent_mismatch_error("character and module over different groups");
    if (!is_p_primary(m, chi.p))
        throw precondition_error("chi_component needs a p-primary module; take p_part first");
    Int exp = module_exponent(m);
    int e = exp == 1 ? 0 : ord_p(exp, chi.p);
    if (precision < e)
        throw precision_error("precision exponent " + std::to_string(precision) + " below module exponent p^" +
                              std::to_string(e));
    int prec = std::max(precision, 1);
    Int mod = int_pow(chi.p, static_cast<unsigned long>(prec));
    ZElem idem = character_idempotent(chi, prec);
    IntMatrix act = ring_action(m, idem, mod);
    return submodule(m, span_with_relations(m, act));
}

inline int required_precision(const FiniteModule& m, i64 p)
{
    Int exp = module_exponent(m);
    return exp == 1 ? 1 : std::max(1, ord_p(exp, p));
}

/// Whether M is generated by one element over Z[G]. For each prime l dividing
/// |M|, with P the Sylow l-subgroup of G, cyclicity of the l-part is read off
/// W = M / (l M + I_P M), a semisimple module over F_l[G/P]: every isotypic
/// component must have F_l-dimension at most the degree of its character.
inline bool is_cyclic_over_group_ring(const FiniteModule& m)
{
    std::size_t n = m.generator_count;
    Subgroup full = full_subgroup(m.group);
    for (auto const& [l, e] : factorize(to_i64(module_exponent(m)))) {
        (void)e;
        IntMatrix rows = identity_matrix<Int>(n);
        for (auto& r : rows)
            for (auto& x : r)
                x *= l;
        for (auto const& g : generators(sylow(full, l))) {
            IntMatrix a = element_action(m, g);
            for (std::size_t i = 0; i < n; ++i) {
                a[i][i] -= 1;
                rows.push_back(a[i]);
            }
        }
        IntMatrix k = span_with_relations(m, rows);
        Int base = hnf_determinant(k);
        for (auto const& chi : enumerate_characters(m.group, l)) {
            ZElem idem = character_idempotent(chi, 1);
            IntMatrix act = ring_action(m, idem, to_int(l));
            IntMatrix all = k;
            all.insert(all.end(), act.begin(), act.end());
            Int sub = hnf_determinant(hnf_modular(all, base, n));
            int dim = ord_p(Int(base / sub), l);
            if (dim > multiplicative_order(l, chi.order))
                return false;
        }
    }
    return true;
}

enum class ActionCheck { matched, mismatched };

inline std::string to_string(ActionCheck a)
{
    return a == ActionCheck::matched ? "matched" : "mismatched";
}

struct ModuleComparison {
    bool invariants_equal = false;
    ActionCheck action = ActionCheck::mismatched;
    bool passed() const { return invariants_equal && action == ActionCheck::matched; }
};

/// Compares X with Y = Z[G/K]/(c). X is isomorphic to Y exactly when |X| = |Y|,
/// X is killed by c and by every k - 1 with k in K, and X is cyclic over Z[G].
inline ModuleComparison compare_with_cyclic(const FiniteModule& x, const Subgroup& k, const Int& c)
{
    ModuleComparison out;
    QuotientData q = structure_maps(x.group, k);
    FiniteModule y = quotient_ring_module(x.group, k, {scalar_elem<Int>(q.quotient, c)});
    out.invariants_equal = module_invariants(x) == module_invariants(y);
    if (!out.invariants_equal)
        return out;
    std::size_t n = x.generator_count;
    for (std::size_t i = 0; i < n; ++i) {
        IntRow r(n, Int(0));
        r[i] = c;
        if (!in_relations(x, r))
            return out;
    }
    for (auto const& t : generators(k)) {
        IntMatrix a = element_action(x, t);
        for (std::size_t i = 0; i < n; ++i) {
            a[i][i] -= 1;
            if (!in_relations(x, a[i]))
                return out;
        }
    }
    out.action = is_cyclic_over_group_ring(x) ? ActionCheck::matched : ActionCheck::mismatched;
    return out;
}

struct TateComparison {
    ModuleComparison h0;
    ModuleComparison hm1;
    bool passed() const { return h0.passed() && hm1.passed(); }
};

inline TateComparison check_tate_closed_form(const Subgroup& i, const GroupElement& phi, const Subgroup& h)
{
    FiniteModule a = a_module(i, phi);
    TateResult t = tate(h, a);
    Subgroup k = join(decomposition_group(i, phi), h);
    Int c = to_int(order(meet(i, h)));
    return TateComparison{compare_with_cyclic(t.h0, k, c), compare_with_cyclic(t.hm1, k, c)};
}

struct PropFreeResult {
    bool lhs = false; // chi-component of the p-part is cohomologically trivial
    bool rhs = false; // I_p trivial or chi nontrivial on D
    bool agree() const { return lhs == rhs; }
};

inline PropFreeResult check_prop_free(const Subgroup& i, const GroupElement& phi, const ChiCharacter& chi)
{
    require_parent(chi.group, i);
    FiniteModule mp = p_part(a_module(i, phi), chi.p);
    FiniteModule comp = chi_component(mp, chi, required_precision(mp, chi.p));
    PropFreeResult out;
    out.lhs = is_cohomologically_trivial(comp);
    out.rhs = order(i) % chi.p != 0 || !is_trivial_on(chi, decomposition_group(i, phi));
    return out;
}

} // namespace galmod
