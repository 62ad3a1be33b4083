#pragma once

// Finite abelian groups Z/d_1 x ... x Z/d_k, their elements and subgroups.
// A subgroup H is stored as the HNF of its preimage lattice in Z^k.

#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "galmod/lattice.hpp"
#include "galmod/matrix.hpp"

namespace galmod {

using i64 = std::int64_t;
using GroupElement = std::vector<i64>;
using SmallMatrix = Matrix<i64>;

inline constexpr i64 default_enumeration_bound = 10000;

struct FinAbGroup {
    std::vector<i64> invariant_factors; // d_1 | d_2 | ... , each >= 2

    std::size_t rank() const { return invariant_factors.size(); }
    i64 order() const
    {
        i64 n = 1;
        for (i64 d : invariant_factors)
            n *= d;
        return n;
    }
    i64 exponent() const { return invariant_factors.empty() ? 1 : invariant_factors.back(); }
    bool is_cyclic() const { return invariant_factors.size() <= 1; }
    bool operator==(const FinAbGroup&) const = default;
    auto operator<=>(const FinAbGroup&) const = default;
};

inline std::string group_label(const FinAbGroup& g)
{
    if (g.invariant_factors.empty())
        return "1";
    std::string s;
    for (std::size_t i = 0; i < g.rank(); ++i) {
        if (i)
            s += ",";
        s += std::to_string(g.invariant_factors[i]);
    }
    return s;
}

/// Canonical invariant-factor form of Z/n_1 x ... x Z/n_m.
inline FinAbGroup make_group(const std::vector<i64>& factors)
{
    std::map<i64, std::vector<i64>> powers;
    for (i64 n : factors) {
        if (n <= 1)
            throw invalid_factor_error("invariant factor must be >= 2, got " + std::to_string(n));
        for (auto const& [p, e] : factorize(n))
            powers[p].push_back(ipow(p, e));
    }
    std::size_t k = 0;
    for (auto& [p, list] : powers) {
        std::sort(list.begin(), list.end(), std::greater<>());
        k = std::max(k, list.size());
    }
    std::vector<i64> out(k, 1);
    for (auto const& [p, list] : powers)
        for (std::size_t i = 0; i < list.size(); ++i)
            out[k - 1 - i] *= list[i];
    return FinAbGroup{out};
}

inline FinAbGroup cyclic_group(i64 n) { return n == 1 ? FinAbGroup{} : make_group({n}); }

/// All abelian groups of order n up to isomorphism, sorted.
inline std::vector<FinAbGroup> abelian_groups_of_order(i64 n)
{
    std::vector<std::vector<i64>> factor_lists{{}};
    for (auto const& [p, e] : factorize(n)) {
        std::vector<std::vector<int>> parts;
        std::vector<int> cur;
        auto split = [&](auto&& self, int rest, int max_part) -> void {
            if (rest == 0) {
                parts.push_back(cur);
                return;
            }
            for (int k = std::min(rest, max_part); k >= 1; --k) {
                cur.push_back(k);
                self(self, rest - k, k);
                cur.pop_back();
            }
        };
        split(split, e, e);
        std::vector<std::vector<i64>> next;
        for (auto const& base : factor_lists)
            for (auto const& part : parts) {
                std::vector<i64> f = base;
                for (int k : part)
                    f.push_back(ipow(p, k));
                next.push_back(std::move(f));
            }
        factor_lists = std::move(next);
    }
    std::vector<FinAbGroup> out;
    for (auto const& f : factor_lists)
        out.push_back(f.empty() ? FinAbGroup{} : make_group(f));
    std::sort(out.begin(), out.end());
    return out;
}

/// All abelian groups of order at most n, by order.
inline std::vector<FinAbGroup> abelian_groups_up_to(i64 n)
{
    std::vector<FinAbGroup> out;
    for (i64 m = 1; m <= n; ++m)
        for (auto& g : abelian_groups_of_order(m))
            out.push_back(std::move(g));
    return out;
}

// ---- elements ----

inline GroupElement identity_element(const FinAbGroup& g) { return GroupElement(g.rank(), 0); }

inline GroupElement element_at(const FinAbGroup& g, i64 index)
{
    GroupElement x(g.rank());
    for (std::size_t i = g.rank(); i-- > 0;) {
        x[i] = index % g.invariant_factors[i];
        index /= g.invariant_factors[i];
    }
    return x;
}

inline i64 index_of(const FinAbGroup& g, const GroupElement& x)
{
    i64 idx = 0;
    for (std::size_t i = 0; i < g.rank(); ++i)
        idx = idx * g.invariant_factors[i] + mod_floor(x[i], g.invariant_factors[i]);
    return idx;
}

inline std::vector<GroupElement> elements(const FinAbGroup& g)
{
    std::vector<GroupElement> out;
    out.reserve(static_cast<std::size_t>(g.order()));
    for (i64 i = 0; i < g.order(); ++i)
        out.push_back(element_at(g, i));
    return out;
}

inline GroupElement reduce(const FinAbGroup& g, GroupElement x)
{
    for (std::size_t i = 0; i < g.rank(); ++i)
        x[i] = mod_floor(x[i], g.invariant_factors[i]);
    return x;
}

inline GroupElement add(const FinAbGroup& g, const GroupElement& a, const GroupElement& b)
{
    GroupElement x(g.rank());
    for (std::size_t i = 0; i < g.rank(); ++i)
        x[i] = mod_floor(a[i] + b[i], g.invariant_factors[i]);
    return x;
}

inline GroupElement scale(const FinAbGroup& g, const GroupElement& a, i64 m)
{
    GroupElement x(g.rank());
    for (std::size_t i = 0; i < g.rank(); ++i)
        x[i] = mod_floor(a[i] * mod_floor(m, g.invariant_factors[i]), g.invariant_factors[i]);
    return x;
}

inline GroupElement negate(const FinAbGroup& g, const GroupElement& a) { return scale(g, a, -1); }

inline bool is_identity(const GroupElement& x)
{
    for (i64 c : x)
        if (c != 0)
            return false;
    return true;
}

inline i64 element_order(const FinAbGroup& g, const GroupElement& x)
{
    i64 o = 1;
    for (std::size_t i = 0; i < g.rank(); ++i)
        o = lcm_of(o, g.invariant_factors[i] / gcd_of(x[i], g.invariant_factors[i]));
    return o;
}

/// Standard generators e_1, ..., e_k.
inline std::vector<GroupElement> standard_generators(const FinAbGroup& g)
{
    std::vector<GroupElement> out;
    for (std::size_t i = 0; i < g.rank(); ++i) {
        GroupElement e(g.rank(), 0);
        e[i] = 1;
        out.push_back(e);
    }
    return out;
}

// ---- subgroups ----

struct Subgroup {
    FinAbGroup parent;
    SmallMatrix basis; // k x k HNF of the preimage lattice

    bool operator==(const Subgroup&) const = default;
};

inline void require_parent(const FinAbGroup& g, const Subgroup& h)
{
    if (h.parent != g)
        throw parent_mismatch_error("subgroup of " + group_label(h.parent) + " used with group " + group_label(g));
}

inline void require_same_parent(const Subgroup& a, const Subgroup& b) { require_parent(a.parent, b); }

inline Subgroup generated_subgroup(const FinAbGroup& g, const std::vector<GroupElement>& gens)
{
    std::size_t k = g.rank();
    SmallMatrix rows;
    for (std::size_t i = 0; i < k; ++i) {
        Row<i64> r(k, 0);
        r[i] = g.invariant_factors[i];
        rows.push_back(r);
    }
    for (auto const& x : gens)
        rows.push_back(reduce(g, x));
    return Subgroup{g, hnf_modular(rows, g.exponent(), k)};
}

inline Subgroup trivial_subgroup(const FinAbGroup& g) { return generated_subgroup(g, {}); }
inline Subgroup full_subgroup(const FinAbGroup& g) { return generated_subgroup(g, standard_generators(g)); }
inline Subgroup cyclic_subgroup(const FinAbGroup& g, const GroupElement& x) { return generated_subgroup(g, {x}); }

inline i64 order(const Subgroup& h)
{
    i64 det = 1;
    for (std::size_t i = 0; i < h.basis.size(); ++i)
        det *= h.basis[i][i];
    return h.parent.order() / det;
}

inline i64 index(const Subgroup& h) { return h.parent.order() / order(h); }

inline bool contains(const Subgroup& h, const GroupElement& x)
{
    return solve_in_basis(h.basis, reduce(h.parent, x)).has_value();
}

/// Nonzero basis rows, reduced into the group.
inline std::vector<GroupElement> generators(const Subgroup& h)
{
    std::vector<GroupElement> out;
    for (auto const& r : h.basis) {
        GroupElement x = reduce(h.parent, r);
        if (!is_identity(x))
            out.push_back(x);
    }
    return out;
}

/// All elements of h in global enumeration order.
inline std::vector<GroupElement> elements(const Subgroup& h)
{
    std::size_t k = h.parent.rank();
    std::vector<i64> bounds(k);
    for (std::size_t i = 0; i < k; ++i)
        bounds[i] = h.parent.invariant_factors[i] / h.basis[i][i];
    std::vector<i64> idx;
    std::vector<i64> c(k, 0);
    for (;;) {
        GroupElement x(k, 0);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                x[j] += c[i] * h.basis[i][j];
        idx.push_back(index_of(h.parent, x));
        std::size_t pos = 0;
        while (pos < k && ++c[pos] == bounds[pos])
            c[pos++] = 0;
        if (pos == k)
            break;
    }
    std::sort(idx.begin(), idx.end());
    std::vector<GroupElement> out;
    for (i64 i : idx)
        out.push_back(element_at(h.parent, i));
    return out;
}

inline bool is_subgroup_of(const Subgroup& a, const Subgroup& b)
{
    require_same_parent(a, b);
    for (auto const& r : a.basis)
        if (!solve_in_basis(b.basis, r))
            return false;
    return true;
}

inline Subgroup join(const Subgroup& a, const Subgroup& b)
{
    require_same_parent(a, b);
    SmallMatrix rows = a.basis;
    rows.insert(rows.end(), b.basis.begin(), b.basis.end());
    return Subgroup{a.parent, hnf_modular(rows, a.parent.exponent(), a.parent.rank())};
}

namespace detail {

inline IntMatrix to_int_matrix(const SmallMatrix& a)
{
    IntMatrix out;
    for (auto const& r : a) {
        IntRow s;
        for (i64 x : r)
            s.push_back(to_int(x));
        out.push_back(std::move(s));
    }
    return out;
}

inline SmallMatrix to_small_matrix(const IntMatrix& a)
{
    SmallMatrix out;
    for (auto const& r : a) {
        Row<i64> s;
        for (auto const& x : r)
            s.push_back(to_i64(x));
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace detail

inline Subgroup meet(const Subgroup& a, const Subgroup& b)
{
    require_same_parent(a, b);
    std::size_t k = a.parent.rank();
    if (k == 0)
        return a;
    IntMatrix ba = detail::to_int_matrix(a.basis);
    IntMatrix coeffs = integer_preimage(ba, detail::to_int_matrix(b.basis), to_int(a.parent.exponent()), k);
    IntMatrix rows = multiply(coeffs, ba, k);
    return Subgroup{a.parent, detail::to_small_matrix(hnf_modular(rows, to_int(a.parent.exponent()), k))};
}

/// Invariant factors of h as an abstract group.
inline FinAbGroup structure(const Subgroup& h)
{
    std::size_t k = h.parent.rank();
    i64 n = order(h);
    if (n == 1)
        return FinAbGroup{};
    IntMatrix coords;
    for (std::size_t i = 0; i < k; ++i) {
        Row<i64> r(k, 0);
        r[i] = h.parent.invariant_factors[i];
        coords.push_back(detail::to_int_matrix({*solve_in_basis(h.basis, r)})[0]);
    }
    std::vector<i64> out;
    for (auto const& d : smith_invariants_mod(coords, to_int(n), k))
        if (d > 1)
            out.push_back(to_i64(d));
    return FinAbGroup{out};
}

inline bool is_cyclic(const Subgroup& h) { return structure(h).is_cyclic(); }

inline bool is_trivial(const Subgroup& h) { return order(h) == 1; }

/// Canonical order: by order, then lexicographically by basis.
inline bool subgroup_less(const Subgroup& a, const Subgroup& b)
{
    i64 oa = order(a), ob = order(b);
    if (oa != ob)
        return oa < ob;
    return a.basis < b.basis;
}

inline std::vector<Subgroup> enumerate_subgroups(const FinAbGroup& g, i64 bound = default_enumeration_bound)
{
    if (g.order() > bound)
        throw capacity_error("group order " + std::to_string(g.order()) + " exceeds enumeration bound " +
                             std::to_string(bound));
    std::set<SmallMatrix> seen;
    std::vector<Subgroup> cyclic;
    for (auto const& x : elements(g)) {
        Subgroup c = cyclic_subgroup(g, x);
        if (seen.insert(c.basis).second)
            cyclic.push_back(c);
    }
    std::vector<Subgroup> all = cyclic;
    std::vector<Subgroup> frontier = cyclic;
    while (!frontier.empty()) {
        std::vector<Subgroup> next;
        for (auto const& s : frontier)
            for (auto const& c : cyclic) {
                Subgroup j = join(s, c);
                if (seen.insert(j.basis).second) {
                    all.push_back(j);
                    next.push_back(j);
                }
            }
        frontier = std::move(next);
    }
    std::sort(all.begin(), all.end(), subgroup_less);
    return all;
}

struct Classification {
    bool is_trivial = false;
    bool is_cyclic = false;
    bool is_elementary = false;
    bool every_prime = false;            // cyclic: elementary for every prime
    std::vector<i64> elementary_primes; // primes dividing |H| that witness elementarity
};

inline Classification classify(const Subgroup& h)
{
    Classification c;
    FinAbGroup s = structure(h);
    i64 n = order(h);
    c.is_trivial = n == 1;
    c.is_cyclic = s.is_cyclic();
    auto sylow_cyclic = [&](i64 q) {
        int count = 0;
        for (i64 d : s.invariant_factors)
            if (d % q == 0)
                ++count;
        return count <= 1;
    };
    auto primes = prime_divisors(n);
    for (i64 p : primes) {
        bool ok = true;
        for (i64 q : primes)
            if (q != p && !sylow_cyclic(q))
                ok = false;
        if (ok)
            c.elementary_primes.push_back(p);
    }
    c.every_prime = c.is_cyclic;
    c.is_elementary = c.is_cyclic || !c.elementary_primes.empty();
    return c;
}

inline bool is_elementary(const Subgroup& h) { return classify(h).is_elementary; }

/// The unique Sylow p-subgroup of h.
inline Subgroup sylow(const Subgroup& h, i64 p)
{
    i64 n = order(h);
    i64 m = n / p_part(n, p);
    std::vector<GroupElement> gens;
    for (auto const& x : generators(h))
        gens.push_back(scale(h.parent, x, m));
    return generated_subgroup(h.parent, gens);
}

// ---- quotients ----

struct QuotientData {
    FinAbGroup parent;
    Subgroup kernel;
    FinAbGroup quotient;
    SmallMatrix projection; // k x m: x -> x * projection mod quotient factors
    SmallMatrix section;    // m x k: y -> y * section mod parent factors

    GroupElement project(const GroupElement& x) const
    {
        GroupElement y(quotient.rank(), 0);
        for (std::size_t j = 0; j < quotient.rank(); ++j) {
            i64 s = 0, d = quotient.invariant_factors[j];
            for (std::size_t i = 0; i < parent.rank(); ++i)
                s = mod_floor(s + mod_floor(x[i], d) * projection[i][j], d);
            y[j] = s;
        }
        return y;
    }

    GroupElement lift(const GroupElement& y) const
    {
        GroupElement x(parent.rank(), 0);
        for (std::size_t i = 0; i < parent.rank(); ++i) {
            i64 s = 0, d = parent.invariant_factors[i];
            for (std::size_t j = 0; j < quotient.rank(); ++j)
                s = mod_floor(s + mod_floor(y[j], d) * section[j][i], d);
            x[i] = s;
        }
        return x;
    }
};

inline QuotientData structure_maps(const FinAbGroup& g, const Subgroup& h)
{
    require_parent(g, h);
    std::size_t k = g.rank();
    QuotientData q{g, h, {}, {}, {}};
    if (k == 0)
        return q;
    auto sf = smith_form(detail::to_int_matrix(h.basis), k);
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < k; ++i)
        if (sf.diagonal[i] > 1)
            keep.push_back(i);
    for (std::size_t i : keep)
        q.quotient.invariant_factors.push_back(to_i64(sf.diagonal[i]));
    q.projection.assign(k, Row<i64>(keep.size(), 0));
    for (std::size_t r = 0; r < k; ++r)
        for (std::size_t j = 0; j < keep.size(); ++j)
            q.projection[r][j] = to_i64(mod_floor(sf.v[r][keep[j]], sf.diagonal[keep[j]]));
    for (std::size_t j = 0; j < keep.size(); ++j) {
        Row<i64> r(k);
        for (std::size_t c = 0; c < k; ++c)
            r[c] = to_i64(mod_floor(sf.v_inverse[keep[j]][c], to_int(g.invariant_factors[c])));
        q.section.push_back(std::move(r));
    }
    return q;
}

/// Quotient of g by its prime-to-p part.
inline QuotientData max_p_quotient(const FinAbGroup& g, i64 p)
{
    i64 m = p_part(g.exponent(), p);
    std::vector<GroupElement> gens;
    for (auto const& e : standard_generators(g))
        gens.push_back(scale(g, e, m));
    return structure_maps(g, generated_subgroup(g, gens));
}

inline Subgroup image_subgroup(const QuotientData& q, const Subgroup& h)
{
    require_parent(q.parent, h);
    std::vector<GroupElement> gens;
    for (auto const& x : generators(h))
        gens.push_back(q.project(x));
    return generated_subgroup(q.quotient, gens);
}

inline Subgroup preimage_subgroup(const QuotientData& q, const Subgroup& h)
{
    require_parent(q.quotient, h);
    std::vector<GroupElement> gens = generators(q.kernel);
    for (auto const& y : generators(h))
        gens.push_back(q.lift(y));
    return generated_subgroup(q.parent, gens);
}

/// Lexicographically smallest element of the coset x + h.
inline GroupElement canonical_lift(const Subgroup& h, const GroupElement& x)
{
    i64 best = -1;
    for (auto const& y : elements(h)) {
        i64 idx = index_of(h.parent, add(h.parent, x, y));
        if (best < 0 || idx < best)
            best = idx;
    }
    return element_at(h.parent, best);
}

/// Canonical lifts of all cosets of h, ascending.
inline std::vector<GroupElement> coset_representatives(const Subgroup& h)
{
    std::vector<GroupElement> out;
    std::vector<char> covered(static_cast<std::size_t>(h.parent.order()), 0);
    auto hs = elements(h);
    for (i64 i = 0; i < h.parent.order(); ++i) {
        if (covered[static_cast<std::size_t>(i)])
            continue;
        GroupElement x = element_at(h.parent, i);
        out.push_back(x);
        for (auto const& y : hs)
            covered[static_cast<std::size_t>(index_of(h.parent, add(h.parent, x, y)))] = 1;
    }
    return out;
}

} // namespace galmod
