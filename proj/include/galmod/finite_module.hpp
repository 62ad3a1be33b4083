#pragma once

// Finite Z[G]-modules presented as Z^g / Lambda with G acting by integer
// matrices on row vectors. Lambda is kept in HNF and must have full rank.

#include <string>
#include <vector>

#include "galmod/abelian.hpp"
#include "galmod/lattice.hpp"

namespace galmod {

struct FiniteModule {
    FinAbGroup group;
    std::size_t generator_count = 0;
    IntMatrix relations;            // HNF of Lambda, generator_count rows
    std::vector<IntMatrix> actions; // one per standard generator of group

    bool operator==(const FiniteModule&) const = default;
};

inline Int cardinality(const FiniteModule& m) { return hnf_determinant(m.relations); }

/// Nonunit invariant factors, ascending.
inline std::vector<Int> module_invariants(const FiniteModule& m)
{
    std::vector<Int> out;
    for (auto const& d : smith_invariants_mod(m.relations, cardinality(m), m.generator_count))
        if (d > 1)
            out.push_back(d);
    return out;
}

inline Int module_exponent(const FiniteModule& m)
{
    auto inv = module_invariants(m);
    return inv.empty() ? Int(1) : inv.back();
}

inline bool is_zero_module(const FiniteModule& m) { return cardinality(m) == 1; }

inline bool in_relations(const FiniteModule& m, const IntRow& v) { return solve_in_basis(m.relations, v).has_value(); }

/// Builds a module from arbitrary relation rows; throws finiteness_error if
/// the cokernel is infinite.
inline FiniteModule make_module(const FinAbGroup& g, std::size_t gens, const IntMatrix& relation_rows,
                                std::vector<IntMatrix> actions)
{
    FiniteModule m{g, gens, {}, std::move(actions)};
    try {
        m.relations = hnf_full_rank(relation_rows, gens);
    } catch (const not_full_rank_error&) {
        throw finiteness_error("module presentation has infinite cokernel");
    }
    return m;
}

inline IntMatrix reduce_entries(IntMatrix a, const Int& modulus)
{
    for (auto& r : a)
        for (auto& x : r)
            x = mod_floor(x, modulus);
    return a;
}

/// Matrix of the action of a group element, entries reduced mod the exponent.
inline IntMatrix element_action(const FiniteModule& m, const GroupElement& x)
{
    std::size_t n = m.generator_count;
    Int e = module_exponent(m);
    IntMatrix out = identity_matrix<Int>(n);
    for (std::size_t i = 0; i < m.group.rank(); ++i) {
        i64 k = mod_floor(x[i], m.group.invariant_factors[i]);
        IntMatrix base = reduce_entries(m.actions[i], e);
        while (k > 0) {
            if (k & 1)
                out = reduce_entries(multiply(out, base, n), e);
            base = reduce_entries(multiply(base, base, n), e);
            k >>= 1;
        }
    }
    return out;
}

/// Sum of the actions of all elements of h, entries reduced mod the exponent.
inline IntMatrix norm_action(const FiniteModule& m, const Subgroup& h)
{
    std::size_t n = m.generator_count;
    Int e = module_exponent(m);
    IntMatrix sum = zero_matrix<Int>(n, n);
    for (auto const& x : elements(h)) {
        IntMatrix a = element_action(m, x);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                sum[i][j] += a[i][j];
    }
    return reduce_entries(sum, e);
}

/// Checks stability of Lambda, commutativity and generator orders.
inline bool is_valid_module(const FiniteModule& m)
{
    std::size_t n = m.generator_count;
    if (m.actions.size() != m.group.rank())
        return false;
    for (auto const& a : m.actions)
        for (auto const& r : m.relations)
            if (!in_relations(m, row_times(r, a, n)))
                return false;
    auto congruent = [&](const IntMatrix& a, const IntMatrix& b) {
        for (std::size_t i = 0; i < n; ++i) {
            IntRow d(n);
            for (std::size_t j = 0; j < n; ++j)
                d[j] = a[i][j] - b[i][j];
            if (!in_relations(m, d))
                return false;
        }
        return true;
    };
    for (std::size_t i = 0; i < m.actions.size(); ++i)
        for (std::size_t j = i + 1; j < m.actions.size(); ++j)
            if (!congruent(multiply(m.actions[i], m.actions[j], n), multiply(m.actions[j], m.actions[i], n)))
                return false;
    for (std::size_t i = 0; i < m.group.rank(); ++i) {
        GroupElement x(m.group.rank(), 0);
        x[i] = m.group.invariant_factors[i];
        if (!congruent(element_action(m, x), identity_matrix<Int>(n)))
            return false;
    }
    return true;
}

/// The subquotient K1 / K2 for G-stable lattices Lambda <= K2 <= K1 <= Z^g,
/// presented on the basis of K1.
inline FiniteModule subquotient(const FiniteModule& m, const IntMatrix& k1, const IntMatrix& k2)
{
    std::size_t n = m.generator_count;
    IntMatrix rel;
    for (auto const& r : k2) {
        auto c = solve_in_basis(k1, r);
        if (!c)
            throw containment_error("subquotient: K2 is not contained in K1");
        rel.push_back(std::move(*c));
    }
    std::vector<IntMatrix> acts;
    for (auto const& a : m.actions) {
        IntMatrix b;
        for (auto const& r : k1) {
            auto c = solve_in_basis(k1, row_times(r, a, n));
            if (!c)
                throw containment_error("subquotient: lattice is not stable under the action");
            b.push_back(std::move(*c));
        }
        acts.push_back(std::move(b));
    }
    return make_module(m.group, k1.size(), rel, std::move(acts));
}

inline FiniteModule submodule(const FiniteModule& m, const IntMatrix& k)
{
    return subquotient(m, k, m.relations);
}

/// Lattice Lambda + rowspan(rows), i.e. the submodule generated by the images
/// of the given vectors (the caller supplies a G-stable set).
inline IntMatrix span_with_relations(const FiniteModule& m, const IntMatrix& rows)
{
    IntMatrix all = m.relations;
    all.insert(all.end(), rows.begin(), rows.end());
    return hnf_modular(all, cardinality(m), m.generator_count);
}

/// {x in Z^g : x * t in Lambda}.
inline IntMatrix preimage_of_relations(const FiniteModule& m, const IntMatrix& t)
{
    return integer_preimage(t, m.relations, cardinality(m), m.generator_count);
}

/// The module in Smith coordinates: M = (+) Z/s_i, actions as matrices acting
/// on coordinate rows, reduced mod the exponent.
struct SmithCoordinates {
    std::vector<Int> invariants;    // nonunit, ascending
    std::vector<IntMatrix> actions; // k x k
    IntMatrix to_smith;             // g x k: x -> x * to_smith mod s
    IntMatrix from_smith;           // k x g
};

inline SmithCoordinates smith_coordinates(const FiniteModule& m)
{
    std::size_t n = m.generator_count;
    auto sf = smith_form(m.relations, n);
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < n; ++i)
        if (sf.diagonal[i] != 1)
            keep.push_back(i);
    SmithCoordinates out;
    for (std::size_t i : keep)
        out.invariants.push_back(sf.diagonal[i]);
    out.to_smith.assign(n, IntRow(keep.size()));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t j = 0; j < keep.size(); ++j)
            out.to_smith[r][j] = sf.v[r][keep[j]];
    for (std::size_t i : keep)
        out.from_smith.push_back(sf.v_inverse[i]);
    for (auto const& a : m.actions) {
        IntMatrix b = multiply(multiply(out.from_smith, a, n), out.to_smith, keep.size());
        for (auto& r : b)
            for (std::size_t j = 0; j < keep.size(); ++j)
                r[j] = mod_floor(r[j], out.invariants[j]);
        out.actions.push_back(std::move(b));
    }
    return out;
}

} // namespace galmod
