#pragma once

// Integer helpers shared by the whole library. Everything is generic over
// std::int64_t (small group data) and mpz_class (ring and lattice data).

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <gmpxx.h>

namespace galmod {

using Int = mpz_class;

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct invalid_factor_error : error { using error::error; };
struct capacity_error : error { using error::error; };
struct parent_mismatch_error : error { using error::error; };
struct not_full_rank_error : error { using error::error; };
struct containment_error : error { using error::error; };
struct scope_error : error { using error::error; };
struct precision_error : error { using error::error; };
struct degenerate_character_error : error { using error::error; };
struct finiteness_error : error { using error::error; };
struct precondition_error : error { using error::error; };

inline std::int64_t abs_value(std::int64_t a) { return a < 0 ? -a : a; }
inline Int abs_value(const Int& a) { return abs(a); }

inline bool is_zero(std::int64_t a) { return a == 0; }
inline bool is_zero(const Int& a) { return sgn(a) == 0; }
template <class T, class U>
bool is_zero(const __gmp_expr<T, U>& a)
{
    return sgn(a) == 0;
}

inline std::int64_t floor_div(std::int64_t a, std::int64_t b)
{
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}
inline Int floor_div(const Int& a, const Int& b)
{
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

/// Remainder in [0, |m|).
inline std::int64_t mod_floor(std::int64_t a, std::int64_t m)
{
    m = abs_value(m);
    std::int64_t r = a % m;
    return r < 0 ? r + m : r;
}
inline Int mod_floor(const Int& a, const Int& m)
{
    Int r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

/// Returns (g, x, y) with g = gcd(a, b) >= 0 and a*x + b*y = g.
inline std::tuple<std::int64_t, std::int64_t, std::int64_t> ext_gcd(std::int64_t a, std::int64_t b)
{
    std::int64_t old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        std::int64_t q = old_r / r;
        std::tie(old_r, r) = std::make_tuple(r, old_r - q * r);
        std::tie(old_s, s) = std::make_tuple(s, old_s - q * s);
        std::tie(old_t, t) = std::make_tuple(t, old_t - q * t);
    }
    if (old_r < 0)
        return {-old_r, -old_s, -old_t};
    return {old_r, old_s, old_t};
}
inline std::tuple<Int, Int, Int> ext_gcd(const Int& a, const Int& b)
{
    Int g, x, y;
    mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return {g, x, y};
}

inline std::int64_t gcd_of(std::int64_t a, std::int64_t b)
{
    a = abs_value(a);
    b = abs_value(b);
    while (b != 0) {
        a %= b;
        std::swap(a, b);
    }
    return a;
}
inline std::int64_t lcm_of(std::int64_t a, std::int64_t b)
{
    if (a == 0 || b == 0)
        return 0;
    return abs_value(a / gcd_of(a, b) * b);
}

inline bool is_prime(std::int64_t n)
{
    if (n < 2)
        return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

/// Prime factorization as an ordered map prime -> exponent.
inline std::map<std::int64_t, int> factorize(std::int64_t n)
{
    std::map<std::int64_t, int> out;
    n = abs_value(n);
    for (std::int64_t d = 2; d * d <= n; ++d)
        while (n % d == 0) {
            ++out[d];
            n /= d;
        }
    if (n > 1)
        ++out[n];
    return out;
}

inline std::vector<std::int64_t> prime_divisors(std::int64_t n)
{
    std::vector<std::int64_t> out;
    for (auto const& [p, e] : factorize(n))
        out.push_back(p);
    return out;
}

inline std::vector<std::int64_t> divisors(std::int64_t n)
{
    std::vector<std::int64_t> out{1};
    for (auto const& [p, e] : factorize(n)) {
        std::size_t sz = out.size();
        std::int64_t pk = 1;
        for (int k = 1; k <= e; ++k) {
            pk *= p;
            for (std::size_t i = 0; i < sz; ++i)
                out.push_back(out[i] * pk);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline bool is_prime_power(std::int64_t n) { return n > 1 && factorize(n).size() == 1; }

/// p-adic valuation; the caller guarantees n != 0.
inline int ord_p(std::int64_t n, std::int64_t p)
{
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}
inline int ord_p(const Int& n, std::int64_t p)
{
    if (is_zero(n))
        throw error("ord_p of zero");
    Int pp = static_cast<long>(p);
    Int m = n;
    return static_cast<int>(mpz_remove(m.get_mpz_t(), m.get_mpz_t(), pp.get_mpz_t()));
}

/// Largest power of p dividing n.
inline std::int64_t p_part(std::int64_t n, std::int64_t p)
{
    std::int64_t out = 1;
    while (n % p == 0) {
        n /= p;
        out *= p;
    }
    return out;
}

inline std::int64_t ipow(std::int64_t b, int e)
{
    std::int64_t r = 1;
    while (e-- > 0)
        r *= b;
    return r;
}

inline Int int_pow(std::int64_t b, unsigned long e)
{
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(b), e);
    return r;
}

inline Int to_int(std::int64_t v) { return Int(static_cast<long>(v)); }

inline std::int64_t to_i64(const Int& v)
{
    if (!v.fits_slong_p())
        throw error("integer does not fit in 64 bits: " + v.get_str());
    return v.get_si();
}

} // namespace galmod
