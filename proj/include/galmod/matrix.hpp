#pragma once

// Dense integer matrices with row-vector conventions: a lattice is the row
// span of a matrix, and a linear map acts as x -> x * A.

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "galmod/integer.hpp"

namespace galmod {

template <class T>
using Row = std::vector<T>;
template <class T>
using Matrix = std::vector<Row<T>>;

using IntRow = Row<Int>;
using IntMatrix = Matrix<Int>;

template <class T>
Matrix<T> identity_matrix(std::size_t n)
{
    Matrix<T> m(n, Row<T>(n, T(0)));
    for (std::size_t i = 0; i < n; ++i)
        m[i][i] = T(1);
    return m;
}

template <class T>
Matrix<T> zero_matrix(std::size_t rows, std::size_t cols)
{
    return Matrix<T>(rows, Row<T>(cols, T(0)));
}

template <class T>
Row<T> row_times(const Row<T>& v, const Matrix<T>& a, std::size_t ncols)
{
    Row<T> out(ncols, T(0));
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (is_zero(v[i]))
            continue;
        for (std::size_t j = 0; j < ncols; ++j)
            out[j] += v[i] * a[i][j];
    }
    return out;
}

template <class T>
Matrix<T> multiply(const Matrix<T>& a, const Matrix<T>& b, std::size_t ncols)
{
    Matrix<T> out;
    out.reserve(a.size());
    for (auto const& r : a)
        out.push_back(row_times(r, b, ncols));
    return out;
}

template <class T>
bool is_zero_row(const Row<T>& v)
{
    for (auto const& x : v)
        if (!is_zero(x))
            return false;
    return true;
}

namespace detail {

// Shared incremental echelon insertion. `reduce` is applied to the tail of
// every touched row (identity for the exact variant, mod D for the modular one).
template <class T, class Reduce>
void echelon_insert(std::vector<std::optional<Row<T>>>& piv, Row<T> v, std::size_t ncols, Reduce reduce)
{
    for (std::size_t c = 0; c < ncols; ++c) {
        reduce(v, c);
        if (is_zero(v[c]))
            continue;
        if (!piv[c]) {
            if (v[c] < 0)
                for (auto& x : v)
                    x = -x;
            piv[c] = std::move(v);
            return;
        }
        Row<T>& p = *piv[c];
        if (is_zero(v[c] % p[c])) {
            T q = v[c] / p[c];
            for (std::size_t j = c; j < ncols; ++j)
                v[j] -= q * p[j];
            continue;
        }
        auto [g, a, b] = ext_gcd(p[c], v[c]);
        T pc = p[c] / g;
        T vc = v[c] / g;
        for (std::size_t j = c; j < ncols; ++j) {
            T np = a * p[j] + b * v[j];
            T nv = vc * p[j] - pc * v[j];
            p[j] = std::move(np);
            v[j] = std::move(nv);
        }
        reduce(p, c + 1);
    }
}

template <class T>
Matrix<T> echelon_finish(std::vector<std::optional<Row<T>>>& piv, std::size_t ncols)
{
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < ncols; ++c)
        if (piv[c])
            cols.push_back(c);
    for (std::size_t k = 0; k < cols.size(); ++k) {
        std::size_t c = cols[k];
        const Row<T>& p = *piv[c];
        for (std::size_t k2 = 0; k2 < k; ++k2) {
            Row<T>& r = *piv[cols[k2]];
            T q = floor_div(r[c], p[c]);
            if (is_zero(q))
                continue;
            for (std::size_t j = c; j < ncols; ++j)
                r[j] -= q * p[j];
        }
    }
    Matrix<T> out;
    for (std::size_t c : cols)
        out.push_back(std::move(*piv[c]));
    return out;
}

} // namespace detail

/// Hermite normal form of the row span: echelon, positive pivots, entries
/// above each pivot reduced into [0, pivot). Zero rows are dropped.
template <class T>
Matrix<T> hnf(const Matrix<T>& rows, std::size_t ncols)
{
    std::vector<std::optional<Row<T>>> piv(ncols);
    for (auto const& r : rows)
        detail::echelon_insert(piv, r, ncols, [](Row<T>&, std::size_t) {});
    return detail::echelon_finish(piv, ncols);
}

namespace detail {

// Echelon pivots of span(rows) + d * Z^ncols. Entries are reduced only once
// they leave [0, d]; the multiples d * e_c go in last.
template <class T>
std::vector<std::optional<Row<T>>> modular_pivots(const Matrix<T>& rows, const T& d, std::size_t ncols)
{
    std::vector<std::optional<Row<T>>> piv(ncols);
    auto reduce = [&d](Row<T>& v, std::size_t from) {
        for (std::size_t j = from; j < v.size(); ++j)
            if (v[j] < 0 || v[j] > d)
                v[j] = mod_floor(v[j], d);
    };
    for (auto const& r : rows)
        echelon_insert(piv, r, ncols, reduce);
    for (std::size_t c = 0; c < ncols; ++c) {
        Row<T> e(ncols, T(0));
        e[c] = d;
        echelon_insert(piv, std::move(e), ncols, reduce);
    }
    return piv;
}

} // namespace detail

/// HNF of span(rows) + modulus * Z^ncols. Correct for the row span itself
/// whenever modulus * Z^ncols is already contained in it.
template <class T>
Matrix<T> hnf_modular(const Matrix<T>& rows, const T& modulus, std::size_t ncols)
{
    auto piv = detail::modular_pivots(rows, abs_value(modulus), ncols);
    return detail::echelon_finish(piv, ncols);
}

/// Integer version: moduli below 2^30 run the elimination in 64-bit words
/// (all products stay below 2^63); the final reduction is done exactly.
inline IntMatrix hnf_modular(const IntMatrix& rows, const Int& modulus, std::size_t ncols)
{
    Int d = abs_value(modulus);
    if (d >= Int(1) << 30)
        return hnf_modular<Int>(rows, d, ncols);
    std::int64_t dd = d.get_si();
    Matrix<std::int64_t> small;
    small.reserve(rows.size());
    for (auto const& r : rows) {
        Row<std::int64_t> v(ncols);
        for (std::size_t j = 0; j < ncols; ++j)
            v[j] = mod_floor(r[j], d).get_si();
        small.push_back(std::move(v));
    }
    auto piv = detail::modular_pivots(small, dd, ncols);
    std::vector<std::optional<IntRow>> big(ncols);
    for (std::size_t c = 0; c < ncols; ++c)
        if (piv[c])
            big[c] = IntRow(piv[c]->begin(), piv[c]->end());
    return detail::echelon_finish(big, ncols);
}

/// Coordinates of v in an echelon basis, or nullopt if v is not in the span.
template <class T>
std::optional<Row<T>> solve_in_basis(const Matrix<T>& basis, Row<T> v)
{
    Row<T> coeffs(basis.size(), T(0));
    for (std::size_t r = 0; r < basis.size(); ++r) {
        const Row<T>& b = basis[r];
        std::size_t c = 0;
        while (c < b.size() && is_zero(b[c]))
            ++c;
        for (std::size_t j = 0; j < c; ++j)
            if (!is_zero(v[j]))
                return std::nullopt;
        if (is_zero(v[c]))
            continue;
        if (!is_zero(v[c] % b[c]))
            return std::nullopt;
        coeffs[r] = v[c] / b[c];
        for (std::size_t j = c; j < v.size(); ++j)
            v[j] -= coeffs[r] * b[j];
    }
    if (!is_zero_row(v))
        return std::nullopt;
    return coeffs;
}

/// Lattice {x in Z^m : x * M = 0} for an m x n matrix, in HNF.
template <class T>
Matrix<T> kernel_basis(const Matrix<T>& m, std::size_t ncols)
{
    std::size_t rows = m.size();
    Matrix<T> aug;
    aug.reserve(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        Row<T> r(ncols + rows, T(0));
        for (std::size_t j = 0; j < ncols; ++j)
            r[j] = m[i][j];
        r[ncols + i] = T(1);
        aug.push_back(std::move(r));
    }
    Matrix<T> h = hnf(aug, ncols + rows);
    Matrix<T> out;
    for (auto& r : h) {
        bool head_zero = true;
        for (std::size_t j = 0; j < ncols; ++j)
            if (!is_zero(r[j])) {
                head_zero = false;
                break;
            }
        if (head_zero)
            out.emplace_back(r.begin() + static_cast<std::ptrdiff_t>(ncols), r.end());
    }
    return out;
}

/// Smith normal form with column transforms: U * M * V = diag(d_1, ...),
/// d_i | d_{i+1}, d_i >= 0. Vinv is the inverse of V. For the quotient
/// Z^n / rowspan(M), the map x -> x * V identifies it with (+) Z/d_i.
template <class T>
struct SmithForm {
    std::vector<T> diagonal; // length n; zero entries mark free directions
    Matrix<T> v;
    Matrix<T> v_inverse;
};

template <class T>
SmithForm<T> smith_form(Matrix<T> a, std::size_t ncols)
{
    std::size_t m = a.size(), n = ncols;
    Matrix<T> v = identity_matrix<T>(n);
    Matrix<T> vinv = identity_matrix<T>(n);
    auto swap_cols = [&](std::size_t i, std::size_t j) {
        if (i == j)
            return;
        for (auto& r : a)
            std::swap(r[i], r[j]);
        for (auto& r : v)
            std::swap(r[i], r[j]);
        std::swap(vinv[i], vinv[j]);
    };
    // col_j -= q * col_t
    auto col_op = [&](std::size_t j, std::size_t t, const T& q) {
        for (auto& r : a)
            r[j] -= q * r[t];
        for (auto& r : v)
            r[j] -= q * r[t];
        for (std::size_t k = 0; k < n; ++k)
            vinv[t][k] += q * vinv[j][k];
    };
    std::size_t lim = std::min(m, n);
    for (std::size_t t = 0; t < lim; ++t) {
        for (;;) {
            std::size_t bi = m, bj = n;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (!is_zero(a[i][j]) && (bi == m || abs_value(a[i][j]) < abs_value(a[bi][bj]))) {
                        bi = i;
                        bj = j;
                    }
            if (bi == m)
                goto finished;
            std::swap(a[t], a[bi]);
            swap_cols(t, bj);
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (is_zero(a[i][t]))
                    continue;
                T q = floor_div(a[i][t], a[t][t]);
                for (std::size_t j = t; j < n; ++j)
                    a[i][j] -= q * a[t][j];
                if (!is_zero(a[i][t]))
                    clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (is_zero(a[t][j]))
                    continue;
                T q = floor_div(a[t][j], a[t][t]);
                col_op(j, t, q);
                if (!is_zero(a[t][j]))
                    clean = false;
            }
            if (!clean)
                continue;
            bool divisible = true;
            for (std::size_t i = t + 1; i < m && divisible; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (!is_zero(a[i][j] % a[t][t])) {
                        for (std::size_t k = t; k < n; ++k)
                            a[t][k] += a[i][k];
                        divisible = false;
                        break;
                    }
            if (divisible)
                break;
        }
        if (a[t][t] < 0)
            for (auto& x : a[t])
                x = -x;
    }
finished:
    SmithForm<T> out;
    out.diagonal.assign(n, T(0));
    for (std::size_t t = 0; t < lim; ++t)
        out.diagonal[t] = a[t][t];
    out.v = std::move(v);
    out.v_inverse = std::move(vinv);
    return out;
}

/// Invariant factors of Z^n / rowspan(M) when modulus * Z^n lies in the span.
/// All arithmetic is reduced mod the modulus; returns n entries d_1 | ... | d_n.
inline std::vector<Int> smith_invariants_mod(IntMatrix a, const Int& modulus, std::size_t n)
{
    Int d = abs(modulus);
    for (auto& r : a)
        for (auto& x : r)
            x = mod_floor(x, d);
    std::size_t m = a.size();
    std::vector<Int> out(n, d);
    for (std::size_t t = 0; t < n; ++t) {
        for (;;) {
            std::size_t bi = m, bj = n;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (!is_zero(a[i][j]) && (bi == m || a[i][j] < a[bi][bj])) {
                        bi = i;
                        bj = j;
                    }
            if (bi == m)
                goto finished;
            if (bi != t)
                std::swap(a[t], a[bi]);
            if (bj != t)
                for (auto& r : a)
                    std::swap(r[t], r[bj]);
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                if (is_zero(a[i][t]))
                    continue;
                Int q = a[i][t] / a[t][t];
                for (std::size_t j = t; j < n; ++j)
                    a[i][j] = mod_floor(a[i][j] - q * a[t][j], d);
                if (!is_zero(a[i][t]))
                    clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                if (is_zero(a[t][j]))
                    continue;
                Int q = a[t][j] / a[t][t];
                for (std::size_t i = t; i < m; ++i)
                    a[i][j] = mod_floor(a[i][j] - q * a[i][t], d);
                if (!is_zero(a[t][j]))
                    clean = false;
            }
            if (!clean)
                continue;
            bool divisible = true;
            for (std::size_t i = t + 1; i < m && divisible; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (!is_zero(a[i][j] % a[t][t])) {
                        for (std::size_t k = t; k < n; ++k)
                            a[t][k] = mod_floor(a[t][k] + a[i][k], d);
                        divisible = false;
                        break;
                    }
            if (divisible)
                break;
        }
        out[t] = gcd(a[t][t], d);
    }
finished:
    std::sort(out.begin(), out.end());
    return out;
}

/// Exact determinant by fraction-free elimination.
inline Int det_bareiss(IntMatrix a)
{
    std::size_t n = a.size();
    if (n == 0)
        return Int(1);
    Int prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (is_zero(a[k][k])) {
            std::size_t s = k + 1;
            while (s < n && is_zero(a[s][k]))
                ++s;
            if (s == n)
                return Int(0);
            std::swap(a[k], a[s]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                Int t = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                mpz_divexact(t.get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
                a[i][j] = std::move(t);
            }
        }
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

namespace detail {

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t q)
{
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % q);
}

inline std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t q)
{
    std::uint64_t r = 1;
    while (e) {
        if (e & 1)
            r = mulmod(r, a, q);
        a = mulmod(a, a, q);
        e >>= 1;
    }
    return r;
}

// Greedy choice of rows independent modulo the prime q.
inline std::vector<std::size_t> independent_rows_mod(const IntMatrix& rows, std::size_t n, std::uint64_t q)
{
    Int qq;
    mpz_set_ui(qq.get_mpz_t(), q);
    std::vector<std::vector<std::uint64_t>> basis(n);
    std::vector<std::size_t> picked;
    for (std::size_t i = 0; i < rows.size() && picked.size() < n; ++i) {
        std::vector<std::uint64_t> v(n);
        for (std::size_t j = 0; j < n; ++j)
            v[j] = mpz_get_ui(Int(mod_floor(rows[i][j], qq)).get_mpz_t());
        for (std::size_t c = 0; c < n; ++c) {
            if (v[c] == 0)
                continue;
            if (basis[c].empty()) {
                std::uint64_t inv = powmod(v[c], q - 2, q);
                for (auto& x : v)
                    x = mulmod(x, inv, q);
                basis[c] = std::move(v);
                picked.push_back(i);
                break;
            }
            std::uint64_t f = v[c];
            for (std::size_t j = c; j < n; ++j)
                v[j] = (v[j] + q - mulmod(f, basis[c][j], q)) % q;
        }
    }
    return picked;
}

} // namespace detail

/// HNF of a full-rank lattice in Z^n spanned by `rows`. Picks n independent
/// rows, uses their determinant as the modulus. Throws not_full_rank_error.
inline IntMatrix hnf_full_rank(const IntMatrix& rows, std::size_t n)
{
    if (n == 0)
        return {};
    static constexpr std::uint64_t primes[] = {2305843009213693951ULL, 1000000000000000003ULL,
                                               4611686018427387847ULL};
    for (std::uint64_t q : primes) {
        auto idx = detail::independent_rows_mod(rows, n, q);
        if (idx.size() < n)
            continue;
        IntMatrix sub;
        for (auto i : idx)
            sub.push_back(rows[i]);
        Int d = abs(det_bareiss(sub));
        return hnf_modular(rows, d, n);
    }
    IntMatrix h = hnf(rows, n);
    if (h.size() < n)
        throw not_full_rank_error("lattice is not of full rank");
    return h;
}

inline Int hnf_determinant(const IntMatrix& h)
{
    Int d = 1;
    for (std::size_t i = 0; i < h.size(); ++i)
        d *= h[i][i];
    return d;
}

} // namespace galmod
