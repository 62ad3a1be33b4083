#!/usr/bin/env python3
"""Generate data/class_numbers_p3_r2.csv: ord_3 of the minus class number of L = L+ F.

L+ is the degree-9 subfield of Q(mu_q) (q prime, q = 1 mod 9, q < 3600) and F is one of
Q(sqrt-1), Q(sqrt-2), Q(sqrt-5), Q(sqrt-6) with q split in F. L is abelian over Q, so

    h^-(L) = Q w prod_{chi odd} (-1/2) B_{1,chi},

with chi = psi * eps_F, psi running over the characters of Gal(L+/Q) and eps_F the
quadratic character of F. Q and w are prime to 3, and the product over characters of a
fixed order m is the norm from Q(zeta_m), so ord_3 h^- is the 3-valuation of a rational
number computed exactly with integer resultants.
"""

import argparse
import csv
import math
import sys
from fractions import Fraction

from sympy import Poly, cyclotomic_poly, isprime, primerange, resultant, symbols
from sympy.functions.combinatorial.numbers import jacobi_symbol
from sympy.ntheory import primitive_root

FIELDS = [-4, -8, -20, -24]  # discriminants of Q(sqrt-1), Q(sqrt-2), Q(sqrt-5), Q(sqrt-6)
X = symbols("x")


def ord_p(x, p):
    x = Fraction(x)
    if x == 0:
        raise ValueError("zero has no valuation")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def eps(d, a):
    """Kronecker symbol (d/a) for odd a > 0 coprime to d."""
    return jacobi_symbol(d % a, a)


def bernoulli_norm(q, d, order):
    """N_{Q(zeta_m)/Q} of B_{1, chi} for chi = psi eps_F, psi of order m = order mod q."""
    if order == 1:
        f = abs(d)
        return Fraction(sum(eps(d, a) * a for a in range(1, f) if math.gcd(a, f) == 1), f)
    f = q * abs(d)
    g = primitive_root(q)
    log = [0] * q
    y = 1
    for k in range(q - 1):
        log[y] = k
        y = y * g % q
    coeffs = [0] * order
    for a in range(1, f):
        if math.gcd(a, f) != 1:
            continue
        coeffs[log[a % q] % order] += eps(d, a) * a
    poly = Poly(list(reversed(coeffs)), X)
    phi = Poly(cyclotomic_poly(order, X), X)
    norm = int(resultant(phi.as_expr(), poly.as_expr(), X))
    return Fraction(norm, f ** phi.degree())


def minus_valuation(q, d):
    v = 0
    for m in (1, 3, 9):
        v += ord_p(bernoulli_norm(q, d, m), 3)
    return v


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--qmax", type=int, default=3600)
    ap.add_argument("--out", default="-")
    args = ap.parse_args()
    rows = []
    for q in primerange(2, args.qmax):
        if q % 9 != 1:
            continue
        for d in FIELDS:
            if eps(d, q) != 1:
                continue
            rows.append((q, d, minus_valuation(q, d)))
    out = sys.stdout if args.out == "-" else open(args.out, "w", newline="")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["q", "field_tag", "ord_value"])
    w.writerows(rows)
    if out is not sys.stdout:
        out.close()


if __name__ == "__main__":
    main()
