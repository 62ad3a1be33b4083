#pragma once

// The group rings Z[G] and Q[G] with dense coefficient vectors indexed by the
// global element enumeration, ideal lattices, and the modules A_{I,phi}.

#include <vector>

#include "galmod/abelian.hpp"
#include "galmod/finite_module.hpp"
#include "galmod/lattice.hpp"

namespace galmod {

template <class T>
struct GroupRingElem {
    FinAbGroup group;
    std::vector<T> coeffs;

    bool operator==(const GroupRingElem&) const = default;

    const T& operator[](const GroupElement& x) const
    {
        return coeffs[static_cast<std::size_t>(index_of(group, x))];
    }
    T& operator[](const GroupElement& x) { return coeffs[static_cast<std::size_t>(index_of(group, x))]; }
};

using ZElem = GroupRingElem<Int>;
using QElem = GroupRingElem<mpq_class>;

namespace detail {

template <class T>
void require_same_group(const GroupRingElem<T>& a, const GroupRingElem<T>& b)
{
    if (a.group != b.group)
        throw parent_mismatch_error("group ring elements over different groups");
}

} // namespace detail

template <class T = Int>
GroupRingElem<T> zero_elem(const FinAbGroup& g)
{
    return GroupRingElem<T>{g, std::vector<T>(static_cast<std::size_t>(g.order()), T(0))};
}

template <class T = Int>
GroupRingElem<T> scalar_elem(const FinAbGroup& g, const T& c)
{
    auto x = zero_elem<T>(g);
    x.coeffs[0] = c;
    return x;
}

template <class T = Int>
GroupRingElem<T> group_elem(const FinAbGroup& g, const GroupElement& s)
{
    auto x = zero_elem<T>(g);
    x[s] = T(1);
    return x;
}

template <class T>
GroupRingElem<T> operator+(GroupRingElem<T> a, const GroupRingElem<T>& b)
{
    detail::require_same_group(a, b);
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
        a.coeffs[i] += b.coeffs[i];
    return a;
}

template <class T>
GroupRingElem<T> operator-(GroupRingElem<T> a, const GroupRingElem<T>& b)
{
    detail::require_same_group(a, b);
    for (std::size_t i = 0; i < a.coeffs.size(); ++i)
        a.coeffs[i] -= b.coeffs[i];
    return a;
}

template <class T>
GroupRingElem<T> operator-(GroupRingElem<T> a)
{
    for (auto& c : a.coeffs)
        c = -c;
    return a;
}

template <class T>
GroupRingElem<T> operator*(const T& c, GroupRingElem<T> a)
{
    for (auto& x : a.coeffs)
        x *= c;
    return a;
}

template <class T>
GroupRingElem<T> operator*(const GroupRingElem<T>& a, const GroupRingElem<T>& b)
{
    detail::require_same_group(a, b);
    const FinAbGroup& g = a.group;
    auto out = zero_elem<T>(g);
    std::vector<GroupElement> xs = elements(g);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (is_zero(a.coeffs[i]))
            continue;
        for (std::size_t j = 0; j < xs.size(); ++j) {
            if (is_zero(b.coeffs[j]))
                continue;
            out[add(g, xs[i], xs[j])] += a.coeffs[i] * b.coeffs[j];
        }
    }
    return out;
}

template <class T>
T augmentation(const GroupRingElem<T>& x)
{
    T s(0);
    for (auto const& c : x.coeffs)
        s += c;
    return s;
}

/// s * x for a group element s.
template <class T>
GroupRingElem<T> translate(const GroupRingElem<T>& x, const GroupElement& s)
{
    auto out = zero_elem<T>(x.group);
    for (i64 i = 0; i < x.group.order(); ++i)
        out[add(x.group, element_at(x.group, i), s)] = x.coeffs[static_cast<std::size_t>(i)];
    return out;
}

/// The involution sum a_s s -> sum a_s s^{-1}.
template <class T>
GroupRingElem<T> invert_group(const GroupRingElem<T>& x)
{
    auto out = zero_elem<T>(x.group);
    for (i64 i = 0; i < x.group.order(); ++i)
        out[negate(x.group, element_at(x.group, i))] = x.coeffs[static_cast<std::size_t>(i)];
    return out;
}

/// N_I, the sum of the elements of I.
inline ZElem norm_element(const Subgroup& i)
{
    auto out = zero_elem<Int>(i.parent);
    for (auto const& s : elements(i))
        out[s] = 1;
    return out;
}

/// Image of x under Z[G] -> Z[G/K] for a quotient.
inline ZElem push_forward(const QuotientData& q, const ZElem& x)
{
    auto out = zero_elem<Int>(q.quotient);
    for (i64 i = 0; i < q.parent.order(); ++i)
        out[q.project(element_at(q.parent, i))] += x.coeffs[static_cast<std::size_t>(i)];
    return out;
}

/// nu_K: Z[G/K] -> Z[G], a class maps to the sum of its elements.
inline ZElem pull_back_norm(const QuotientData& q, const ZElem& y)
{
    auto out = zero_elem<Int>(q.parent);
    for (i64 i = 0; i < q.parent.order(); ++i) {
        GroupElement s = element_at(q.parent, i);
        out.coeffs[static_cast<std::size_t>(i)] = y[q.project(s)];
    }
    return out;
}

/// Row i holds the coefficients of s_i * x, so v -> v * M is multiplication by x.
inline IntMatrix multiplication_matrix(const ZElem& x)
{
    IntMatrix out;
    for (i64 i = 0; i < x.group.order(); ++i)
        out.push_back(translate(x, element_at(x.group, i)).coeffs);
    return out;
}

inline IntMatrix translation_matrix(const FinAbGroup& g, const GroupElement& s)
{
    return multiplication_matrix(group_elem<Int>(g, s));
}

// ---- ideal lattices ----

struct IdealLattice {
    FinAbGroup group;
    Lattice lattice;

    const Int& denominator() const { return lattice.denominator; }
    const IntMatrix& basis() const { return lattice.basis; }
    bool operator==(const IdealLattice&) const = default;
};

inline bool is_stable(const IdealLattice& l)
{
    std::size_t n = static_cast<std::size_t>(l.group.order());
    for (auto const& e : standard_generators(l.group)) {
        IntMatrix t = translation_matrix(l.group, e);
        for (auto const& r : l.basis())
            if (!solve_in_basis(l.basis(), row_times(r, t, n)))
                return false;
    }
    return true;
}

namespace detail {

inline IntMatrix translate_rows(const FinAbGroup& g, const std::vector<ZElem>& gens)
{
    IntMatrix rows;
    for (auto const& x : gens) {
        if (x.group != g)
            throw parent_mismatch_error("ideal generator over a different group");
        for (i64 i = 0; i < g.order(); ++i)
            rows.push_back(translate(x, element_at(g, i)).coeffs);
    }
    return rows;
}

inline IdealLattice checked_ideal(IdealLattice out)
{
    if (!is_stable(out))
        throw error("ideal lattice failed the action-closure check");
    return out;
}

} // namespace detail

/// Z-span of all translates of gens, divided by den.
inline IdealLattice ideal_from_generators(const FinAbGroup& g, const std::vector<ZElem>& gens, const Int& den = 1)
{
    std::size_t n = static_cast<std::size_t>(g.order());
    return detail::checked_ideal(IdealLattice{g, lattice_from_rows(detail::translate_rows(g, gens), den, n)});
}

/// As ideal_from_generators when modulus * Z[G] is known to lie in the
/// integer span of the translates of gens.
inline IdealLattice ideal_with_modulus(const FinAbGroup& g, const std::vector<ZElem>& gens, const Int& modulus,
                                       const Int& den = 1)
{
    std::size_t n = static_cast<std::size_t>(g.order());
    IntMatrix h = hnf_modular(detail::translate_rows(g, gens), modulus, n);
    return detail::checked_ideal(IdealLattice{g, canonical_lattice(std::move(h), den)});
}

inline IdealLattice ideal_from_generators(const FinAbGroup& g, const std::vector<QElem>& gens)
{
    Int den = 1;
    for (auto const& x : gens)
        for (auto const& c : x.coeffs)
            den = lcm(den, Int(c.get_den()));
    std::vector<ZElem> scaled;
    for (auto const& x : gens) {
        auto z = zero_elem<Int>(g);
        for (std::size_t i = 0; i < x.coeffs.size(); ++i)
            z.coeffs[i] = Int(x.coeffs[i] * den);
        z.group = x.group;
        scaled.push_back(std::move(z));
    }
    return ideal_from_generators(g, scaled, den);
}

inline IdealLattice unit_ideal(const FinAbGroup& g)
{
    return IdealLattice{g, standard_lattice(static_cast<std::size_t>(g.order()))};
}

inline std::vector<Int> quotient_invariants(const IdealLattice& small, const IdealLattice& big)
{
    if (small.group != big.group)
        throw parent_mismatch_error("ideal lattices over different groups");
    return lattice_quotient_invariants(big.lattice, small.lattice);
}

/// |Z[G] / J| for J inside the ring.
inline Int cardinality(const IdealLattice& j)
{
    Int out = 1;
    for (auto const& d : quotient_invariants(j, unit_ideal(j.group)))
        out *= d;
    return out;
}

inline IdealLattice ideal_sum(const IdealLattice& a, const IdealLattice& b)
{
    if (a.group != b.group)
        throw parent_mismatch_error("ideal lattices over different groups");
    return IdealLattice{a.group, lattice_sum(a.lattice, b.lattice)};
}

// ---- modules ----

/// Z[G/K] / (relation elements), with G acting through G/K.
inline FiniteModule quotient_ring_module(const FinAbGroup& g, const Subgroup& k, const std::vector<ZElem>& rels)
{
    QuotientData q = structure_maps(g, k);
    IntMatrix rows;
    for (auto const& r : rels) {
        if (r.group != q.quotient)
            throw parent_mismatch_error("relation element not over the quotient group");
        for (i64 i = 0; i < q.quotient.order(); ++i)
            rows.push_back(translate(r, element_at(q.quotient, i)).coeffs);
    }
    std::vector<IntMatrix> acts;
    for (auto const& e : standard_generators(g))
        acts.push_back(translation_matrix(q.quotient, q.project(e)));
    return make_module(g, static_cast<std::size_t>(q.quotient.order()), rows, std::move(acts));
}

/// The relation element 1 - phi^{-1} + #I of Z[G/I].
inline ZElem a_relation(const QuotientData& q, const GroupElement& phi)
{
    GroupElement bar = q.project(phi);
    return scalar_elem<Int>(q.quotient, Int(1) + to_int(order(q.kernel))) -
           group_elem<Int>(q.quotient, negate(q.quotient, bar));
}

/// A_{I,phi} = Z[G/I] / (1 - phi^{-1} + #I).
inline FiniteModule a_module(const Subgroup& i, const GroupElement& phi)
{
    QuotientData q = structure_maps(i.parent, i);
    return quotient_ring_module(i.parent, i, {a_relation(q, phi)});
}

} // namespace galmod
