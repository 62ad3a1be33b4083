#pragma once

// Valuations of x = (sigma - 1) u + p^r eps in Z[Z/p^r] under the characters
// chi_i (sigma -> zeta_{p^i}), read off integer resultants and cross-checked
// against |Z[G] / (N_G, x)|.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "galmod/group_ring.hpp"

namespace galmod {

using Poly = std::vector<Int>; // coefficient of X^k at index k

inline Poly cyclotomic_prime_power(i64 p, int i)
{
    // Phi_{p^i}(X) = sum_{k<p} X^{k p^{i-1}}
    i64 step = ipow(p, i - 1);
    Poly out(static_cast<std::size_t>(step * (p - 1) + 1), Int(0));
    for (i64 k = 0; k < p; ++k)
        out[static_cast<std::size_t>(k * step)] = 1;
    return out;
}

/// f mod a monic polynomial m.
inline Poly poly_mod_monic(Poly f, const Poly& m)
{
    std::size_t d = m.size() - 1;
    for (std::size_t k = f.size(); k-- > d;) {
        Int c = f[k];
        if (is_zero(c))
            continue;
        for (std::size_t j = 0; j <= d; ++j)
            f[k - d + j] -= c * m[j];
    }
    f.resize(d, Int(0));
    return f;
}

/// Res(m, f) for monic m: determinant of multiplication by f on Z[X]/(m).
inline Int resultant_monic(const Poly& m, const Poly& f)
{
    std::size_t d = m.size() - 1;
    IntMatrix rows;
    Poly cur = poly_mod_monic(f, m);
    for (std::size_t j = 0; j < d; ++j) {
        rows.push_back(cur);
        Poly shifted(d + 1, Int(0));
        for (std::size_t k = 0; k < d; ++k)
            shifted[k + 1] = cur[k];
        cur = poly_mod_monic(shifted, m);
    }
    return det_bareiss(rows);
}

struct CyclicPGroup {
    i64 p = 0;
    int r = 0;
    FinAbGroup group;
    GroupElement sigma;
};

inline CyclicPGroup cyclic_p_group(i64 p, int r)
{
    if (!is_prime(p) || p == 2)
        throw precondition_error("p must be an odd prime, got " + std::to_string(p));
    if (r < 1)
        throw precondition_error("r must be at least 1, got " + std::to_string(r));
    return CyclicPGroup{p, r, cyclic_group(ipow(p, r)), GroupElement{1}};
}

inline Poly polynomial_of(const ZElem& x) { return x.coeffs; }

/// ord_p Res(Phi_{p^i}, f_x): the valuation of chi_i(x), normalized by ord(zeta - 1) = 1.
inline int char_valuation(const CyclicPGroup& c, const ZElem& x, int i)
{
    if (i < 1 || i > c.r)
        throw precondition_error("character index out of range");
    if (x.group != c.group)
        throw parent_mismatch_error("element is not over Z[Z/p^r]");
    Int res = resultant_monic(cyclotomic_prime_power(c.p, i), polynomial_of(x));
    if (is_zero(res))
        throw degenerate_character_error("chi_" + std::to_string(i) + "(x) = 0");
    return ord_p(res, c.p);
}

/// Membership in {rn, r(n+1), ..., r(n+p-1)} together with everything above r(n+p-1).
inline bool predicted_membership(i64 v, i64 p, i64 r, i64 n = 1)
{
    if (p < 3 || !is_prime(p) || r < 1 || n < 1)
        throw precondition_error("predicted set needs an odd prime p, r >= 1, n >= 1");
    i64 top = r * (n + p - 1);
    if (v > top)
        return true;
    return v >= r * n && v % r == 0;
}

struct SpectrumSample {
    i64 p = 0;
    int r = 0;
    ZElem u;
    i64 epsilon = 1;
    ZElem x;
    std::vector<int> c;                 // c_1..c_r
    std::vector<std::optional<int>> a;  // a_i = ord chi_i(u); nullopt when chi_i(u) = 0
    int total = 0;                      // sum of c_i
    int snf_total = 0;                  // ord_p |Z[G] / (N_G, x)|
    bool oracle_agrees = false;
    bool member = false;
};

inline ZElem spectrum_element(const CyclicPGroup& c, const ZElem& u, i64 epsilon)
{
    ZElem s = group_elem<Int>(c.group, c.sigma) - scalar_elem<Int>(c.group, Int(1));
    return s * u + scalar_elem<Int>(c.group, int_pow(c.p, static_cast<unsigned long>(c.r)) * Int(static_cast<long>(epsilon)));
}

/// ord_p |Z[G] / (N_G, x)| from the Smith form of the ideal.
inline int snf_valuation(const CyclicPGroup& c, const ZElem& x)
{
    ZElem norm = norm_element(full_subgroup(c.group));
    IdealLattice j = ideal_from_generators(c.group, {norm, x});
    return ord_p(cardinality(j), c.p);
}

/// Full sample record; throws degenerate_character_error when some chi_i(x) = 0.
inline SpectrumSample evaluate_sample(const CyclicPGroup& c, const ZElem& u, i64 epsilon = 1)
{
    if (epsilon % c.p == 0)
        throw precondition_error("epsilon must be prime to p");
    SpectrumSample s;
    s.p = c.p;
    s.r = c.r;
    s.u = u;
    s.epsilon = epsilon;
    s.x = spectrum_element(c, u, epsilon);
    for (int i = 1; i <= c.r; ++i)
        s.c.push_back(char_valuation(c, s.x, i));
    for (int i = 1; i <= c.r; ++i) {
        Int res = resultant_monic(cyclotomic_prime_power(c.p, i), polynomial_of(u));
        s.a.push_back(is_zero(res) ? std::nullopt : std::optional<int>(ord_p(res, c.p)));
    }
    for (int v : s.c)
        s.total += v;
    s.snf_total = snf_valuation(c, s.x);
    s.oracle_agrees = s.total == s.snf_total;
    s.member = predicted_membership(s.total, c.p, c.r, 1);
    return s;
}

struct ClaimsReport {
    bool augmentation_ok = false; // (a) aug(x) = p^r eps, eps prime to p
    bool case1 = false;           // some a_i < p - 1
    bool claim2_ok = false;       // (b)
    bool case1_total_ok = true;   // (c)
    bool case2_bound_ok = true;   // (d)
    bool bounds_apply = true;     // (c) and (d) use r(p-1) > p-1, so need r >= 2
    bool passed() const
    {
        return augmentation_ok && claim2_ok && (!bounds_apply || (case1_total_ok && case2_bound_ok));
    }
};

inline ClaimsReport verify_claims(const SpectrumSample& s)
{
    ClaimsReport out;
    Int aug = 0;
    for (auto const& v : s.x.coeffs)
        aug += v;
    Int pr = int_pow(s.p, static_cast<unsigned long>(s.r));
    out.augmentation_ok = aug == pr * Int(static_cast<long>(s.epsilon)) && s.epsilon % s.p != 0;
    out.bounds_apply = s.r >= 2;

    auto small = [&](const std::optional<int>& a) { return a && *a < s.p - 1; };
    out.case1 = std::any_of(s.a.begin(), s.a.end(), small);
    if (out.case1) {
        out.claim2_ok = std::all_of(s.a.begin(), s.a.end(), [&](const std::optional<int>& a) { return a == s.a[0]; });
        int b = 1 + *s.a[0];
        out.case1_total_ok = out.claim2_ok && s.total == s.r * b && b >= 1 && b <= s.p - 1;
    } else {
        out.claim2_ok = true;
        out.case2_bound_ok = std::all_of(s.c.begin(), s.c.end(), [&](int v) { return v >= s.p; }) &&
                             s.total >= s.p * s.r;
    }
    return out;
}

inline constexpr int max_resample_attempts = 1000;

/// Uniform integer in [0, bound) from a 64-bit engine, by rejection.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t bound)
{
    std::uint64_t limit = (~std::uint64_t(0) / bound) * bound;
    for (;;) {
        std::uint64_t v = gen();
        if (v < limit)
            return v % bound;
    }
}

struct SpectrumBatch {
    i64 p = 0;
    int r = 0;
    int coeff_exp = 0;
    std::uint64_t seed = 0;
    std::vector<SpectrumSample> samples;
    std::size_t rejections = 0;
};

/// The u of sample `index`, attempt `attempt`: coefficients uniform in [0, p^K).
inline ZElem draw_u(const CyclicPGroup& c, int coeff_exp, std::uint64_t seed, std::uint64_t index, std::uint64_t attempt)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                      static_cast<std::uint32_t>(attempt)};
    std::mt19937_64 gen(seq);
    std::uint64_t bound = static_cast<std::uint64_t>(ipow(c.p, coeff_exp));
    ZElem u = zero_elem<Int>(c.group);
    for (auto& v : u.coeffs)
        v = Int(static_cast<unsigned long>(uniform_below(gen, bound)));
    return u;
}

inline SpectrumBatch sample_spectrum(i64 p, int r, int coeff_exp, std::size_t count, std::uint64_t seed,
                                     i64 epsilon = 1)
{
    CyclicPGroup c = cyclic_p_group(p, r);
    if (coeff_exp < 1 || int_pow(p, static_cast<unsigned long>(coeff_exp)) > int_pow(2, 40))
        throw capacity_error("coefficient bound p^K out of range");
    SpectrumBatch b{p, r, coeff_exp, seed, {}, 0};
    for (std::size_t k = 0; k < count; ++k) {
        for (int attempt = 0;; ++attempt) {
            if (attempt == max_resample_attempts)
                throw capacity_error("too many degenerate samples");
            try {
                b.samples.push_back(evaluate_sample(c, draw_u(c, coeff_exp, seed, k, attempt), epsilon));
                break;
            } catch (const degenerate_character_error&) {
                ++b.rejections;
            }
        }
    }
    return b;
}

struct SpectrumSummary {
    std::map<int, std::size_t> histogram; // total -> count
    std::size_t oracle_passes = 0;
    std::size_t membership_passes = 0;
    std::size_t claims_passes = 0;
    std::size_t claim2_passes = 0;
};

inline SpectrumSummary summarize(const SpectrumBatch& b)
{
    SpectrumSummary s;
    for (auto const& x : b.samples) {
        ++s.histogram[x.total];
        s.oracle_passes += x.oracle_agrees;
        s.membership_passes += x.member;
        ClaimsReport c = verify_claims(x);
        s.claims_passes += c.passed();
        s.claim2_passes += c.claim2_ok;
    }
    return s;
}

} // namespace galmod
