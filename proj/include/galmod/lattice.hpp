#pragma once

// Full-rank lattices in Q^n stored as (denominator, integer HNF).

#include <vector>

#include "galmod/matrix.hpp"

namespace galmod {

struct Lattice {
    Int denominator{1};
    IntMatrix basis; // rows span denominator * L, HNF

    std::size_t rank() const { return basis.size(); }
    bool operator==(const Lattice& o) const { return denominator == o.denominator && basis == o.basis; }
};

inline Lattice canonical_lattice(IntMatrix hnf_basis, Int den)
{
    Int g = den;
    for (auto const& r : hnf_basis)
        for (auto const& x : r)
            if (!is_zero(x))
                g = gcd(g, x);
    if (g != 1) {
        for (auto& r : hnf_basis)
            for (auto& x : r)
                x /= g;
        den /= g;
    }
    return Lattice{den, std::move(hnf_basis)};
}

/// Lattice spanned by rows / den. Throws not_full_rank_error if rank < n.
inline Lattice lattice_from_rows(const IntMatrix& rows, const Int& den, std::size_t n)
{
    if (den <= 0)
        throw error("lattice denominator must be positive");
    return canonical_lattice(hnf_full_rank(rows, n), den);
}

inline Lattice standard_lattice(std::size_t n) { return Lattice{Int(1), identity_matrix<Int>(n)}; }

inline Int lattice_determinant(const Lattice& l) { return hnf_determinant(l.basis); }

inline IntMatrix scaled_basis(const Lattice& l, const Int& den)
{
    Int f = den / l.denominator;
    IntMatrix out = l.basis;
    if (f != 1)
        for (auto& r : out)
            for (auto& x : r)
                x *= f;
    return out;
}

inline Lattice lattice_sum(const Lattice& a, const Lattice& b)
{
    std::size_t n = a.rank();
    Int den = lcm(a.denominator, b.denominator);
    IntMatrix ra = scaled_basis(a, den), rb = scaled_basis(b, den);
    Int m = gcd(hnf_determinant(ra), hnf_determinant(rb));
    IntMatrix rows = std::move(ra);
    rows.insert(rows.end(), rb.begin(), rb.end());
    return canonical_lattice(hnf_modular(rows, m, n), den);
}

/// Whether every vector of `small` lies in `big`.
inline bool lattice_contains(const Lattice& big, const Lattice& small)
{
    Int den = lcm(big.denominator, small.denominator);
    IntMatrix rb = scaled_basis(big, den);
    for (auto const& r : scaled_basis(small, den))
        if (!solve_in_basis(rb, r))
            return false;
    return true;
}

/// Invariant factors (n entries, ascending) of big / small.
inline std::vector<Int> lattice_quotient_invariants(const Lattice& big, const Lattice& small)
{
    std::size_t n = big.rank();
    Int den = lcm(big.denominator, small.denominator);
    IntMatrix rb = scaled_basis(big, den);
    IntMatrix coords;
    for (auto const& r : scaled_basis(small, den)) {
        auto c = solve_in_basis(rb, r);
        if (!c)
            throw containment_error("lattice is not contained in the ambient lattice");
        coords.push_back(std::move(*c));
    }
    Int index = hnf_determinant(scaled_basis(small, den)) / hnf_determinant(rb);
    return smith_invariants_mod(coords, index, n);
}

inline Int lattice_index(const Lattice& big, const Lattice& small)
{
    if (!lattice_contains(big, small))
        throw containment_error("lattice is not contained in the ambient lattice");
    Int den = lcm(big.denominator, small.denominator);
    return hnf_determinant(scaled_basis(small, den)) / hnf_determinant(scaled_basis(big, den));
}

namespace detail {

// Rows [t_i | e_i] and [b | 0]; target rows go first so they take the leading pivots.
inline IntMatrix preimage_rows(const IntMatrix& t, const IntMatrix& target, std::size_t h)
{
    std::size_t g = t.size();
    std::size_t w = h + g;
    IntMatrix rows;
    rows.reserve(g + target.size());
    for (auto const& b : target) {
        IntRow r(w, Int(0));
        for (std::size_t j = 0; j < h; ++j)
            r[j] = b[j];
        rows.push_back(std::move(r));
    }
    for (std::size_t i = 0; i < g; ++i) {
        IntRow r(w, Int(0));
        for (std::size_t j = 0; j < h; ++j)
            r[j] = t[i][j];
        r[h + i] = 1;
        rows.push_back(std::move(r));
    }
    return rows;
}

inline IntMatrix preimage_block(const IntMatrix& full, std::size_t h)
{
    IntMatrix out;
    for (auto const& r : full) {
        bool head_zero = true;
        for (std::size_t j = 0; j < h; ++j)
            if (!is_zero(r[j])) {
                head_zero = false;
                break;
            }
        if (head_zero)
            out.emplace_back(r.begin() + static_cast<std::ptrdiff_t>(h), r.end());
    }
    return out;
}

} // namespace detail

/// Integer lattice {x in Z^g : x * t in target}, where target is an integer
/// lattice with modulus * Z^h inside it and t is a g x h matrix.
inline IntMatrix integer_preimage(const IntMatrix& t, const IntMatrix& target, const Int& modulus, std::size_t h)
{
    // modulus * Z^w lies in the span: on the first block via target, on the
    // second block because modulus * e_i maps into modulus * Z^h.
    return detail::preimage_block(hnf_modular(detail::preimage_rows(t, target, h), modulus, h + t.size()), h);
}

} // namespace galmod
