#pragma once

// The index sets S~, S, S_p, T of admissible generators, the homomorphism
// beta: N^S -> N^T, and the freeness analysis of its image.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "galmod/abelian.hpp"

namespace galmod {

struct PairIV {
    Subgroup i;
    GroupElement phi; // canonical lift
};

struct PairID {
    Subgroup i;
    Subgroup d;
    bool operator==(const PairID&) const = default;
};

struct TTuple {
    i64 p = 0;
    Subgroup h;     // in G, G/H cyclic of order prime to p
    Subgroup istar; // in G_p
    Subgroup dstar; // in G_p
};

/// Finitely supported element of N^T: sorted (tuple index, multiplicity) entries, multiplicities > 0.
struct MonoidVector {
    std::vector<std::pair<std::size_t, i64>> entries;

    i64 at(std::size_t k) const
    {
        auto it = std::lower_bound(entries.begin(), entries.end(), std::pair<std::size_t, i64>{k, 0});
        return it != entries.end() && it->first == k ? it->second : 0;
    }
    i64 total() const
    {
        i64 s = 0;
        for (auto const& e : entries)
            s += e.second;
        return s;
    }
    bool is_zero() const { return entries.empty(); }
    bool is_basis_vector() const { return entries.size() == 1 && entries[0].second == 1; }
    std::vector<i64> dense(std::size_t size) const
    {
        std::vector<i64> out(size, 0);
        for (auto const& [k, c] : entries)
            out[k] = c;
        return out;
    }
    bool operator==(const MonoidVector&) const = default;
    auto operator<=>(const MonoidVector&) const = default;
};

inline MonoidVector operator+(const MonoidVector& a, const MonoidVector& b)
{
    MonoidVector out;
    std::size_t i = 0, j = 0;
    while (i < a.entries.size() || j < b.entries.size()) {
        if (j == b.entries.size() || (i < a.entries.size() && a.entries[i].first < b.entries[j].first))
            out.entries.push_back(a.entries[i++]);
        else if (i == a.entries.size() || b.entries[j].first < a.entries[i].first)
            out.entries.push_back(b.entries[j++]);
        else {
            out.entries.emplace_back(a.entries[i].first, a.entries[i].second + b.entries[j].second);
            ++i;
            ++j;
        }
    }
    return out;
}

/// a - b, or nullopt unless b <= a coordinatewise.
inline std::optional<MonoidVector> checked_difference(const MonoidVector& a, const MonoidVector& b)
{
    MonoidVector out;
    std::size_t j = 0;
    for (auto const& [k, c] : a.entries) {
        i64 sub = 0;
        if (j < b.entries.size() && b.entries[j].first == k)
            sub = b.entries[j++].second;
        else if (j < b.entries.size() && b.entries[j].first < k)
            return std::nullopt;
        if (sub > c)
            return std::nullopt;
        if (c > sub)
            out.entries.emplace_back(k, c - sub);
    }
    if (j != b.entries.size())
        return std::nullopt;
    return out;
}

inline bool quotient_is_cyclic(const Subgroup& big, const Subgroup& small)
{
    QuotientData q = structure_maps(big.parent, small);
    return is_cyclic(image_subgroup(q, big));
}

inline PairIV make_pair_iv(const Subgroup& i, const GroupElement& phi)
{
    if (is_trivial(i))
        throw precondition_error("I must be nontrivial");
    if (!is_elementary(i))
        throw precondition_error("I must be elementary");
    return PairIV{i, canonical_lift(i, phi)};
}

inline PairID make_pair_id(const Subgroup& i, const Subgroup& d)
{
    require_same_parent(i, d);
    if (is_trivial(i))
        throw precondition_error("I must be nontrivial");
    if (!is_elementary(i))
        throw precondition_error("I must be elementary");
    if (!is_subgroup_of(i, d))
        throw precondition_error("I must lie in D");
    if (!quotient_is_cyclic(d, i))
        throw precondition_error("D/I must be cyclic");
    return PairID{i, d};
}

inline bool is_prime_power_order(const Subgroup& h) { return is_prime_power(order(h)); }

struct MonoidSets {
    FinAbGroup group;
    std::vector<PairIV> s_tilde;
    std::vector<PairID> s;
    std::vector<i64> primes;               // prime divisors of |G|
    std::vector<QuotientData> p_quotients; // G -> G_p, aligned with primes
    std::vector<std::vector<PairID>> s_p;  // pairs in G_p, aligned with primes
    std::vector<std::vector<Subgroup>> h_for_p;
    std::vector<TTuple> t;
    std::vector<std::size_t> s_prime;        // indices into s
    std::vector<std::size_t> s_double_prime; // indices into s
    std::vector<std::size_t> projection;     // S~ -> S, indices into s
    std::vector<std::size_t> t_offset;       // first T index for each prime
    std::map<std::pair<SmallMatrix, SmallMatrix>, std::size_t> s_index;
    std::vector<std::map<std::pair<SmallMatrix, SmallMatrix>, std::size_t>> s_p_index;

    std::size_t index_of_pair(const PairID& x) const
    {
        auto it = s_index.find({x.i.basis, x.d.basis});
        if (it == s_index.end() || x.i.parent != group)
            throw precondition_error("pair is not in S");
        return it->second;
    }
    bool in_s_prime(std::size_t k) const { return std::binary_search(s_prime.begin(), s_prime.end(), k); }
};

namespace detail {

inline bool basis_less(const Subgroup& a, const Subgroup& b) { return a.basis < b.basis; }

inline bool pair_less(const PairID& a, const PairID& b)
{
    return std::tie(a.i.basis, a.d.basis) < std::tie(b.i.basis, b.d.basis);
}

/// Pairs (I, D) with I nontrivial and D/I cyclic: D runs over preimages of cyclic subgroups of G/I.
inline std::vector<PairID> pairs_in(const std::vector<Subgroup>& subs, bool require_elementary)
{
    std::vector<PairID> out;
    for (auto const& i : subs) {
        if (is_trivial(i) || (require_elementary && !is_elementary(i)))
            continue;
        QuotientData q = structure_maps(i.parent, i);
        std::set<SmallMatrix> seen;
        for (auto const& y : elements(q.quotient)) {
            Subgroup c = cyclic_subgroup(q.quotient, y);
            if (seen.insert(c.basis).second)
                out.push_back(PairID{i, preimage_subgroup(q, c)});
        }
    }
    std::sort(out.begin(), out.end(), pair_less);
    return out;
}

inline std::map<std::pair<SmallMatrix, SmallMatrix>, std::size_t> index_pairs(const std::vector<PairID>& pairs)
{
    std::map<std::pair<SmallMatrix, SmallMatrix>, std::size_t> out;
    for (std::size_t k = 0; k < pairs.size(); ++k)
        out.emplace(std::pair{pairs[k].i.basis, pairs[k].d.basis}, k);
    return out;
}

} // namespace detail

/// S~, S, S_p, T, S', S'' in canonical (HNF-lexicographic) order, and the projection S~ -> S.
inline MonoidSets build_sets(const FinAbGroup& g, i64 bound = default_enumeration_bound)
{
    MonoidSets m;
    m.group = g;
    std::vector<Subgroup> subs = enumerate_subgroups(g, bound);
    std::sort(subs.begin(), subs.end(), detail::basis_less);
    m.s = detail::pairs_in(subs, true);
    m.s_index = detail::index_pairs(m.s);
    for (std::size_t k = 0; k < m.s.size(); ++k) {
        bool prime_power = is_prime_power_order(m.s[k].i);
        if (prime_power)
            m.s_double_prime.push_back(k);
        if (prime_power || !is_cyclic(m.s[k].d))
            m.s_prime.push_back(k);
    }
    for (auto const& i : subs) {
        if (is_trivial(i) || !is_elementary(i))
            continue;
        for (auto const& phi : coset_representatives(i)) {
            m.s_tilde.push_back(PairIV{i, phi});
            m.projection.push_back(m.index_of_pair(PairID{i, join(i, cyclic_subgroup(g, phi))}));
        }
    }

    m.primes = g.order() > 1 ? prime_divisors(g.order()) : std::vector<i64>{};
    std::vector<std::pair<Subgroup, i64>> cocyclic;
    for (auto const& h : subs) {
        QuotientData q = structure_maps(g, h);
        if (q.quotient.is_cyclic())
            cocyclic.emplace_back(h, q.quotient.order());
    }
    for (i64 p : m.primes) {
        QuotientData qp = max_p_quotient(g, p);
        std::vector<PairID> sp = detail::pairs_in(enumerate_subgroups(qp.quotient, bound), false);
        std::vector<Subgroup> hs;
        for (auto const& [h, n] : cocyclic)
            if (n % p != 0)
                hs.push_back(h);
        m.t_offset.push_back(m.t.size());
        for (auto const& h : hs)
            for (auto const& x : sp)
                m.t.push_back(TTuple{p, h, x.i, x.d});
        m.p_quotients.push_back(std::move(qp));
        m.s_p_index.push_back(detail::index_pairs(sp));
        m.s_p.push_back(std::move(sp));
        m.h_for_p.push_back(std::move(hs));
    }
    return m;
}

/// beta((I, D)) = sum of the tuples (p, H, I*, D*) with D in H, I_p = I*, D_p = D*.
inline MonoidVector beta(const MonoidSets& m, const PairID& x)
{
    m.index_of_pair(x);
    MonoidVector out;
    for (std::size_t k = 0; k < m.primes.size(); ++k) {
        Subgroup ip = image_subgroup(m.p_quotients[k], x.i);
        if (is_trivial(ip))
            continue;
        Subgroup dp = image_subgroup(m.p_quotients[k], x.d);
        auto it = m.s_p_index[k].find({ip.basis, dp.basis});
        if (it == m.s_p_index[k].end())
            throw error("image pair missing from S_p");
        for (std::size_t hi = 0; hi < m.h_for_p[k].size(); ++hi)
            if (is_subgroup_of(x.d, m.h_for_p[k][hi]))
                out.entries.emplace_back(m.t_offset[k] + hi * m.s_p[k].size() + it->second, 1);
    }
    return out;
}

struct CardinalityFormulas {
    Int s;
    Int t;
};

/// #S = prod (e+1)(e+2)/2 - prod (e+1), #T = (sum e) prod (e+1) / 2 for cyclic G.
inline CardinalityFormulas cardinality_formulas(const FinAbGroup& g)
{
    if (!g.is_cyclic())
        throw scope_error("cardinality formulas need a cyclic group, got " + group_label(g));
    Int a = 1, b = 1, sum = 0;
    if (g.order() > 1)
        for (auto const& [p, e] : factorize(g.order())) {
            (void)p;
            a *= Int((e + 1) * (e + 2) / 2);
            b *= Int(e + 1);
            sum += e;
        }
    return {a - b, sum * b / 2};
}

namespace detail {

/// For each tuple index, the generators whose support contains it.
inline std::vector<std::vector<std::size_t>> support_index(const std::vector<MonoidVector>& gens, std::size_t t_size)
{
    std::vector<std::vector<std::size_t>> out(t_size);
    for (std::size_t j = 0; j < gens.size(); ++j)
        for (auto const& e : gens[j].entries)
            out[e.first].push_back(j);
    return out;
}

} // namespace detail

/// Whether target is a sum of at least two nonzero vectors from gens (repetition allowed).
inline bool decomposes(const MonoidVector& target, const std::vector<MonoidVector>& gens,
                       const std::vector<std::vector<std::size_t>>& by_support)
{
    if (target.total() < 2)
        return false;
    std::set<std::size_t> seen;
    std::vector<MonoidVector> cands;
    for (auto const& e : target.entries)
        for (std::size_t j : by_support[e.first])
            if (seen.insert(j).second && !gens[j].is_zero() && checked_difference(target, gens[j]))
                cands.push_back(gens[j]);
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

    std::set<std::pair<MonoidVector, std::size_t>> failed;
    auto search = [&](auto&& self, const MonoidVector& rem, std::size_t start, bool first) -> bool {
        if (rem.is_zero())
            return !first;
        if (!first && failed.count({rem, start}))
            return false;
        for (std::size_t j = start; j < cands.size(); ++j) {
            auto next = checked_difference(rem, cands[j]);
            if (!next || (first && next->is_zero()))
                continue;
            if (self(self, *next, j, false))
                return true;
        }
        if (!first)
            failed.insert({rem, start});
        return false;
    };
    return search(search, target, 0, true);
}

inline bool decomposes(const MonoidVector& target, const std::vector<MonoidVector>& gens)
{
    std::size_t t_size = 0;
    for (auto const& v : gens)
        for (auto const& e : v.entries)
            t_size = std::max(t_size, e.first + 1);
    return decomposes(target, gens, detail::support_index(gens, t_size));
}

inline constexpr std::size_t default_injectivity_capacity = 2000000;

struct BoundedInjectivity {
    int bound = 0;
    bool by_basis = false;       // images are distinct basis vectors: injective on all of N^S'
    bool completed = false;      // search finished within capacity
    std::size_t vectors_checked = 0;
    bool injective = true;       // no collision found
    std::vector<std::size_t> witness_a; // two multisets (domain indices) with equal image
    std::vector<std::size_t> witness_b;

    bool certified() const { return injective && (by_basis || completed); }
};

/// Distinct images for all multisets of size <= bound; stops at the first collision or at capacity.
inline BoundedInjectivity bounded_injectivity(const std::vector<MonoidVector>& images, int bound,
                                              std::size_t capacity = default_injectivity_capacity)
{
    BoundedInjectivity out;
    out.bound = bound;
    std::set<MonoidVector> distinct(images.begin(), images.end());
    if (distinct.size() == images.size() &&
        std::all_of(images.begin(), images.end(), [](const MonoidVector& v) { return v.is_basis_vector(); })) {
        out.by_basis = true;
        out.completed = true;
        return out;
    }
    std::map<MonoidVector, std::vector<std::size_t>> seen;
    std::vector<std::size_t> chosen;
    bool stop = false;
    auto walk = [&](auto&& self, const MonoidVector& sum, std::size_t start) -> void {
        if (stop)
            return;
        if (++out.vectors_checked > capacity) {
            stop = true;
            return;
        }
        auto [it, fresh] = seen.emplace(sum, chosen);
        if (!fresh) {
            out.injective = false;
            out.witness_a = it->second;
            out.witness_b = chosen;
            stop = true;
            return;
        }
        if (static_cast<int>(chosen.size()) == bound)
            return;
        for (std::size_t j = start; j < images.size() && !stop; ++j) {
            chosen.push_back(j);
            self(self, sum + images[j], j);
            chosen.pop_back();
        }
    };
    walk(walk, MonoidVector{}, 0);
    out.completed = !stop || !out.injective;
    if (out.vectors_checked > capacity)
        out.vectors_checked = capacity;
    return out;
}

/// Every subgroup D is the intersection of the H containing it with G/H cyclic.
inline bool subgroup_recovery_holds(const FinAbGroup& g, i64 bound = default_enumeration_bound)
{
    std::vector<Subgroup> subs = enumerate_subgroups(g, bound);
    std::vector<Subgroup> cocyclic;
    for (auto const& h : subs)
        if (structure_maps(g, h).quotient.is_cyclic())
            cocyclic.push_back(h);
    for (auto const& d : subs) {
        Subgroup inter = full_subgroup(g);
        for (auto const& h : cocyclic)
            if (is_subgroup_of(d, h))
                inter = meet(inter, h);
        if (inter != d)
            return false;
    }
    return true;
}

enum class Verdict { free, not_free };

inline std::string to_string(Verdict v) { return v == Verdict::free ? "FREE" : "NOT-FREE"; }

struct FreenessReport {
    FinAbGroup group;
    int bound_b = 0;
    std::size_t s_tilde_count = 0;
    std::size_t s_count = 0;
    std::size_t s_prime_count = 0;
    std::size_t s_double_prime_count = 0;
    std::size_t t_count = 0;
    std::vector<std::pair<i64, std::size_t>> s_p_counts;
    std::vector<MonoidVector> beta_values;  // (a), aligned with S
    std::size_t decompositions_checked = 0; // (b): every pair with D cyclic
    bool decompositions_hold = true;
    bool beta_injective_on_s_prime = true;  // (c)
    std::size_t irreducible_count = 0;      // (d)
    bool all_s_prime_irreducible = true;
    bool rest_reducible = true;             // S \ S' elements decompose
    BoundedInjectivity beta_prime_injectivity;        // (e)
    BoundedInjectivity beta_double_prime_injectivity; // evidence only
    bool subgroup_recovery = true;
    bool expected_free = false; // cyclic or prime-power order
    Verdict verdict = Verdict::not_free;
    std::size_t rank = 0;       // number of irreducibles
    bool checks_passed = false;
};

inline FreenessReport analyze_monoid(const FinAbGroup& g, int bound_b = 3, i64 bound = default_enumeration_bound,
                                     std::size_t capacity = default_injectivity_capacity)
{
    if (bound_b < 2)
        throw precondition_error("injectivity bound must be at least 2, got " + std::to_string(bound_b));
    MonoidSets m = build_sets(g, bound);
    FreenessReport r;
    r.group = g;
    r.bound_b = bound_b;
    r.s_tilde_count = m.s_tilde.size();
    r.s_count = m.s.size();
    r.s_prime_count = m.s_prime.size();
    r.s_double_prime_count = m.s_double_prime.size();
    r.t_count = m.t.size();
    for (std::size_t k = 0; k < m.primes.size(); ++k)
        r.s_p_counts.emplace_back(m.primes[k], m.s_p[k].size());
    for (auto const& x : m.s)
        r.beta_values.push_back(beta(m, x));

    for (std::size_t k = 0; k < m.s.size(); ++k) {
        const PairID& x = m.s[k];
        if (!is_cyclic(x.d))
            continue;
        ++r.decompositions_checked;
        MonoidVector sum;
        for (i64 p : prime_divisors(order(x.i))) {
            std::size_t idx = m.index_of_pair(PairID{sylow(x.i, p), x.d});
            if (!m.in_s_prime(idx))
                r.decompositions_hold = false;
            sum = sum + r.beta_values[idx];
        }
        if (sum != r.beta_values[k])
            r.decompositions_hold = false;
    }

    std::vector<MonoidVector> prime_images;
    for (std::size_t k : m.s_prime)
        prime_images.push_back(r.beta_values[k]);
    r.beta_injective_on_s_prime = std::set<MonoidVector>(prime_images.begin(), prime_images.end()).size() ==
                                  prime_images.size();

    auto by_support = detail::support_index(r.beta_values, m.t.size());
    for (std::size_t k = 0; k < m.s.size(); ++k) {
        bool reducible = decomposes(r.beta_values[k], r.beta_values, by_support);
        if (m.in_s_prime(k)) {
            if (reducible)
                r.all_s_prime_irreducible = false;
            else
                ++r.irreducible_count;
        } else if (!reducible) {
            r.rest_reducible = false;
        }
    }

    r.beta_prime_injectivity = bounded_injectivity(prime_images, bound_b, capacity);
    std::vector<MonoidVector> double_images;
    for (std::size_t k : m.s_double_prime)
        double_images.push_back(r.beta_values[k]);
    r.beta_double_prime_injectivity = bounded_injectivity(double_images, bound_b, capacity);
    r.subgroup_recovery = subgroup_recovery_holds(g, bound);

    r.expected_free = g.is_cyclic() || is_prime_power(g.order());
    r.verdict = r.expected_free ? Verdict::free : Verdict::not_free;
    r.rank = r.irreducible_count;
    bool common = r.decompositions_hold && r.beta_injective_on_s_prime && r.all_s_prime_irreducible &&
                  r.rest_reducible && r.subgroup_recovery && r.s_double_prime_count == r.t_count;
    if (r.expected_free)
        r.checks_passed = common && r.s_prime_count == r.t_count && r.beta_prime_injectivity.certified();
    else
        r.checks_passed = common && r.s_prime_count > r.t_count;
    return r;
}

} // namespace galmod
