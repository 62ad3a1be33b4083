#pragma once

// Arithmetic in F_{p^f} = F_p[X]/(g) for small p and f. Elements are
// coefficient vectors of length f, lowest degree first.

#include <cstdint>
#include <vector>

#include "galmod/integer.hpp"

namespace galmod {

class FiniteField {
public:
    using Elem = std::vector<std::int64_t>;

    FiniteField(std::int64_t p, int f) : p_(p), f_(f), modulus_(find_irreducible(p, f)) {}

    std::int64_t characteristic() const { return p_; }
    int degree() const { return f_; }
    const Elem& modulus() const { return modulus_; }

    Elem zero() const { return Elem(static_cast<std::size_t>(f_), 0); }
    Elem one() const
    {
        Elem e = zero();
        e[0] = 1;
        return e;
    }
    Elem from_int(std::int64_t c) const
    {
        Elem e = zero();
        e[0] = mod_floor(c, p_);
        return e;
    }

    Elem add(const Elem& a, const Elem& b) const
    {
        Elem r(a.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            r[i] = (a[i] + b[i]) % p_;
        return r;
    }

    Elem mul(const Elem& a, const Elem& b) const
    {
        std::vector<std::int64_t> prod(2 * static_cast<std::size_t>(f_), 0);
        for (int i = 0; i < f_; ++i)
            for (int j = 0; j < f_; ++j)
                prod[static_cast<std::size_t>(i + j)] = (prod[static_cast<std::size_t>(i + j)] + a[i] * b[j]) % p_;
        return reduce_poly(prod, modulus_, p_);
    }

    Elem pow(Elem a, std::uint64_t e) const
    {
        Elem r = one();
        while (e) {
            if (e & 1)
                r = mul(r, a);
            a = mul(a, a);
            e >>= 1;
        }
        return r;
    }

    std::uint64_t size() const
    {
        std::uint64_t q = 1;
        for (int i = 0; i < f_; ++i)
            q *= static_cast<std::uint64_t>(p_);
        return q;
    }

    Elem inverse(const Elem& a) const { return pow(a, size() - 2); }

    Elem element_at(std::uint64_t code) const
    {
        Elem e = zero();
        for (int i = 0; i < f_; ++i) {
            e[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(code % static_cast<std::uint64_t>(p_));
            code /= static_cast<std::uint64_t>(p_);
        }
        return e;
    }

    /// An element of multiplicative order exactly n (n divides p^f - 1).
    Elem primitive_root_of_unity(std::int64_t n) const
    {
        std::uint64_t q1 = size() - 1;
        if (q1 % static_cast<std::uint64_t>(n) != 0)
            throw precondition_error("no primitive root of unity of this order in the field");
        for (std::uint64_t code = 1; code <= q1; ++code) {
            Elem t = pow(element_at(code), q1 / static_cast<std::uint64_t>(n));
            bool primitive = true;
            for (std::int64_t l : prime_divisors(n))
                if (pow(t, static_cast<std::uint64_t>(n / l)) == one())
                    primitive = false;
            if (primitive)
                return t;
        }
        throw error("primitive root of unity not found");
    }

    /// The F_p value of an element known to lie in the prime field.
    std::int64_t to_prime_field(const Elem& a) const
    {
        for (int i = 1; i < f_; ++i)
            if (a[static_cast<std::size_t>(i)] != 0)
                throw error("element is not in the prime field");
        return a[0];
    }

private:
    // Poly helpers on coefficient vectors (lowest degree first) over F_p.
    static Elem trim(Elem a)
    {
        while (!a.empty() && a.back() == 0)
            a.pop_back();
        return a;
    }

    static Elem reduce_poly(Elem a, const Elem& monic_tail, std::int64_t p)
    {
        // monic_tail holds g without its leading 1, so deg g = monic_tail.size().
        std::size_t f = monic_tail.size();
        for (std::size_t d = a.size(); d-- > f;) {
            std::int64_t c = mod_floor(a[d], p);
            if (c == 0)
                continue;
            a[d] = 0;
            for (std::size_t i = 0; i < f; ++i)
                a[d - f + i] = mod_floor(a[d - f + i] - c * monic_tail[i], p);
        }
        a.resize(f);
        for (auto& x : a)
            x = mod_floor(x, p);
        return a;
    }

    static Elem poly_mod(Elem a, const Elem& b, std::int64_t p)
    {
        a = trim(a);
        Elem bt = trim(b);
        std::int64_t inv = 1;
        std::int64_t lead = bt.back();
        for (std::int64_t k = 1; k < p; ++k)
            if ((lead * k) % p == 1)
                inv = k;
        while (a.size() >= bt.size()) {
            std::int64_t c = a.back() * inv % p;
            std::size_t shift = a.size() - bt.size();
            for (std::size_t i = 0; i < bt.size(); ++i)
                a[shift + i] = mod_floor(a[shift + i] - c * bt[i], p);
            a = trim(a);
        }
        return a;
    }

    static Elem poly_gcd(Elem a, Elem b, std::int64_t p)
    {
        a = trim(a);
        b = trim(b);
        while (!b.empty()) {
            Elem r = poly_mod(a, b, p);
            a = std::move(b);
            b = std::move(r);
        }
        return a;
    }

    // X^(p^k) mod g, as a reduced residue.
    static Elem frobenius_power(const Elem& tail, std::int64_t p, int k)
    {
        std::size_t f = tail.size();
        Elem x(f, 0);
        if (f == 1) {
            x[0] = mod_floor(-tail[0], p);
        } else {
            x[1] = 1;
        }
        auto mul = [&](const Elem& a, const Elem& b) {
            Elem prod(2 * f, 0);
            for (std::size_t i = 0; i < f; ++i)
                for (std::size_t j = 0; j < f; ++j)
                    prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
            return reduce_poly(prod, tail, p);
        };
        for (int step = 0; step < k; ++step) {
            Elem r(f, 0);
            r[0] = 1;
            Elem base = x;
            std::int64_t e = p;
            while (e) {
                if (e & 1)
                    r = mul(r, base);
                base = mul(base, base);
                e >>= 1;
            }
            x = r;
        }
        return x;
    }

    // Rabin's test on monic polynomials enumerated in a fixed order.
    static Elem find_irreducible(std::int64_t p, int f)
    {
        if (f == 1)
            return Elem{0};
        std::size_t fs = static_cast<std::size_t>(f);
        std::uint64_t total = 1;
        for (int i = 0; i < f; ++i)
            total *= static_cast<std::uint64_t>(p);
        for (std::uint64_t code = 0; code < total; ++code) {
            Elem tail(fs);
            std::uint64_t c = code;
            for (std::size_t i = 0; i < fs; ++i) {
                tail[i] = static_cast<std::int64_t>(c % static_cast<std::uint64_t>(p));
                c /= static_cast<std::uint64_t>(p);
            }
            if (tail[0] == 0)
                continue;
            Elem g = tail;
            g.push_back(1);
            Elem xpf = frobenius_power(tail, p, f);
            Elem xr(fs, 0);
            xr[1] = 1;
            if (xpf != xr)
                continue;
            bool ok = true;
            for (std::int64_t q : prime_divisors(f)) {
                Elem h = frobenius_power(tail, p, f / static_cast<int>(q));
                h[1] = mod_floor(h[1] - 1, p);
                if (poly_gcd(g, h, p).size() != 1) {
                    ok = false;
                    break;
                }
            }
            if (ok)
                return tail;
        }
        throw error("no irreducible polynomial found");
    }

    std::int64_t p_;
    int f_;
    Elem modulus_; // monic modulus without its leading coefficient
};

/// Multiplicative order of a modulo n (gcd(a, n) = 1).
inline int multiplicative_order(std::int64_t a, std::int64_t n)
{
    if (n == 1)
        return 1;
    std::int64_t x = mod_floor(a, n);
    int k = 1;
    while (x != 1) {
        x = x * a % n;
        ++k;
    }
    return k;
}

} // namespace galmod
