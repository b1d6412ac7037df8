"""Thin bridge to sympy for multivariate gcds and small polynomial systems."""

from __future__ import annotations

from fractions import Fraction

import sympy

from .jet import VARS, Jet

SYMS = sympy.symbols(" ".join(VARS))


def to_sympy(F: Jet):
    expr = sympy.Integer(0)
    for m, c in F.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, e in zip(SYMS, m):
            if e:
                term *= s ** e
        expr += term
    return expr


def from_sympy(expr, order: int, nvars: int = 4) -> Jet:
    poly = sympy.Poly(sympy.expand(expr), *SYMS[:nvars])
    terms = {}
    for m, c in poly.terms():
        c = sympy.Rational(c)
        terms[tuple(m)] = Fraction(int(c.p), int(c.q))
    return Jet(terms, order, nvars)


def jet_gcd(jets) -> Jet:
    """gcd over Q of several jets (treated as polynomials), normalized monic-ish."""
    jets = [j for j in jets if not j.is_zero()]
    if not jets:
        raise ValueError("gcd of zero polynomials")
    order = max(j.order for j in jets)
    g = to_sympy(jets[0])
    for j in jets[1:]:
        g = sympy.gcd(g, to_sympy(j))
        if g.is_number:
            break
    if g.is_number:
        return Jet.constant(1, order)
    poly = sympy.Poly(g, *SYMS)
    g = g / poly.LC()
    return from_sympy(g, order)


def real_projective_singular_points(f: Jet, variables=(1, 2, 3)) -> list:
    """Real points of P^2 (in the given three variables) where f and its gradient vanish.

    Returns representatives as tuples of sympy numbers (one per point).
    """
    syms = [SYMS[i] for i in variables]
    expr = to_sympy(f)
    grads = [sympy.diff(expr, s) for s in syms]
    found = []
    # chart k: variable k = 1, earlier variables = 0
    for k in range(3):
        subs = {syms[i]: sympy.Integer(0) for i in range(k)}
        subs[syms[k]] = sympy.Integer(1)
        free = syms[k + 1:]
        eqs = [sympy.expand(g.subs(subs)) for g in grads] + [sympy.expand(expr.subs(subs))]
        eqs = [e for e in eqs if e != 0]
        if not free:
            if not eqs:
                found.append(tuple(subs.get(s, sympy.Integer(0)) for s in syms))
            continue
        if not eqs:
            return [("curve",)]       # every point is singular
        sols = sympy.solve(eqs, free, dict=True)
        for sol in sols:
            if any(not v.is_real for v in sol.values() if v.free_symbols == set()):
                continue
            if any(v.free_symbols for v in sol.values()) or set(free) - set(sol):
                return [("curve",)]
            pt = tuple(subs.get(s, sol.get(s)) for s in syms)
            if all(v.is_real for v in pt):
                found.append(pt)
    return found
