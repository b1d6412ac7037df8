"""Real analysis of bivariate germs f(z, t).

Univariate polynomials are plain lists of ``Fraction`` coefficients in
ascending degree.  Bivariate inputs are :class:`~realterm.jet.Jet` objects
that only involve the ``z`` and ``t`` variables (indices 2 and 3).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DegenerateCircle, EmptyInput, Unstable
from .jet import Jet

Z, T = 2, 3

# --------------------------------------------------------------------------
# univariate polynomials


def ptrim(p: Sequence) -> list:
    p = [Fraction(c) for c in p]
    while p and p[-1] == 0:
        p.pop()
    return p


def pdeg(p) -> int:
    return len(p) - 1


def peval(p, x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def psign(p, x) -> int:
    v = peval(p, x)
    return (v > 0) - (v < 0)


def pderiv(p) -> list:
    return [c * i for i, c in enumerate(p)][1:]


def padd(a, b) -> list:
    n = max(len(a), len(b))
    return ptrim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def pscale(p, c) -> list:
    return ptrim([x * c for x in p])


def pmul(a, b) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return ptrim(out)


def ppow(p, k) -> list:
    out = [Fraction(1)]
    for _ in range(k):
        out = pmul(out, p)
    return out


def pdivmod(a, b):
    a = ptrim(a)
    b = ptrim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    lb = b[-1]
    while len(r) >= len(b) and r:
        k = len(r) - len(b)
        f = r[-1] / lb
        q[k] = f
        for i, c in enumerate(b):
            r[i + k] -= f * c
        r = ptrim(r)
    return ptrim(q), r


def _primitive_positive(p) -> list:
    """Rescale by a positive rational so coefficients are coprime integers."""
    if not p:
        return p
    from math import gcd, lcm
    den = 1
    for c in p:
        den = lcm(den, c.denominator)
    ints = [int(c * den) for c in p]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    return [Fraction(v // g) for v in ints]


def pmonic(p) -> list:
    p = ptrim(p)
    return [c / p[-1] for c in p] if p else p


def pgcd(a, b) -> list:
    a, b = ptrim(a), ptrim(b)
    while b:
        _, r = pdivmod(a, b)
        a, b = b, _primitive_positive(r)
    return pmonic(a)


def squarefree_decomposition(p) -> list:
    """Yun's algorithm: ``[(factor, multiplicity), ...]`` with monic coprime factors."""
    p = ptrim(p)
    if pdeg(p) < 1:
        return []
    out = []
    a = pgcd(p, pderiv(p))
    b, _ = pdivmod(p, a)
    c, _ = pdivmod(pderiv(p), a)
    d = padd(c, pscale(pderiv(b), -1))
    i = 1
    while pdeg(b) >= 1:
        g = pgcd(b, d)
        if pdeg(g) >= 1:
            out.append((g, i))
        b, _ = pdivmod(b, g)
        c, _ = pdivmod(d, g)
        d = padd(c, pscale(pderiv(b), -1))
        i += 1
    return out


def squarefree_part(p) -> list:
    p = ptrim(p)
    g = pgcd(p, pderiv(p))
    q, _ = pdivmod(p, g)
    return pmonic(q)


def sturm_sequence(p) -> list:
    p = ptrim(p)
    seq = [_primitive_positive(p), _primitive_positive(pderiv(p))]
    while seq[-1] and pdeg(seq[-1]) > 0:
        _, r = pdivmod(seq[-2], seq[-1])
        if not r:
            break
        seq.append(_primitive_positive(pscale(r, -1)))
    return [s for s in seq if s]


def sign_variations(seq, x) -> int:
    signs = [s for s in (psign(q, x) for q in seq) if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(seq, a, b) -> int:
    """Distinct real roots in (a, b] of the first polynomial of ``seq``."""
    return sign_variations(seq, a) - sign_variations(seq, b)


def root_bound(p) -> Fraction:
    p = ptrim(p)
    lead = abs(p[-1])
    return 1 + max((abs(c) / lead for c in p[:-1]), default=Fraction(0))


@dataclass(frozen=True)
class RootInterval:
    lo: Fraction
    hi: Fraction
    multiplicity: int

    @property
    def odd(self) -> bool:
        return self.multiplicity % 2 == 1

    @property
    def parity(self) -> str:
        return "odd" if self.odd else "even"

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2


_SPLITS = (Fraction(1, 2), Fraction(1, 3), Fraction(2, 5), Fraction(3, 7), Fraction(4, 9))


def _split_point(p, a, b):
    for s in _SPLITS:
        m = a + (b - a) * s
        if peval(p, m) != 0:
            return m
    m = a + (b - a) * Fraction(5, 11)
    k = 12
    while peval(p, m) == 0:
        m = a + (b - a) * Fraction(k - 1, 2 * k)
        k += 1
    return m


def _isolate_squarefree(p) -> list:
    seq = sturm_sequence(p)
    B = root_bound(p)
    out = []
    stack = [(-B, B)]
    while stack:
        a, b = stack.pop()
        n = sturm_count(seq, a, b)
        if n == 0:
            continue
        if n == 1:
            out.append((a, b))
            continue
        m = _split_point(p, a, b)
        stack.append((a, m))
        stack.append((m, b))
    return sorted(out), seq


def _refine(seq, p, a, b):
    m = _split_point(p, a, b)
    if sturm_count(seq, a, m) == 1:
        return a, m
    return m, b


def isolate_real_roots(p) -> list:
    """Disjoint isolating intervals (open, rational endpoints) with multiplicities."""
    p = ptrim(p)
    if not p:
        raise EmptyInput("cannot isolate roots of the zero polynomial")
    if pdeg(p) < 1:
        return []
    found = []
    for factor, mult in squarefree_decomposition(p):
        ivs, seq = _isolate_squarefree(factor)
        for a, b in ivs:
            found.append([a, b, mult, seq, factor])
    # refine until pairwise disjoint
    while True:
        found.sort(key=lambda r: r[0])
        clash = False
        for i in range(len(found) - 1):
            r1, r2 = found[i], found[i + 1]
            if r1[1] > r2[0]:
                clash = True
                for r in (r1, r2):
                    r[0], r[1] = _refine(r[3], r[4], r[0], r[1])
        if not clash:
            break
    return [RootInterval(a, b, m) for a, b, m, _, _ in found]


def count_real_roots(p) -> int:
    """Number of distinct real roots by a single Sturm count on the squarefree part."""
    sf = squarefree_part(p)
    if pdeg(sf) < 1:
        return 0
    B = root_bound(sf)
    return sturm_count(sturm_sequence(sf), -B, B)


# --------------------------------------------------------------------------
# sign arcs on circles


def _sgn(v) -> int:
    return (v > 0) - (v < 0)


def _check_bivariate(f: Jet):
    if f.is_zero():
        raise EmptyInput("zero polynomial")
    if f.variables_used() - {Z, T}:
        raise ValueError("plane curve input must only involve z and t")


def circle_polynomial(f: Jet, eps) -> list:
    """(1+u^2)^deg f * f on the rational parametrization of z^2+t^2 = eps^2."""
    eps = Fraction(eps)
    D = f.degree()
    zpar = [eps, 0, -eps]           # eps (1 - u^2)
    tpar = [0, 2 * eps]             # 2 eps u
    wpar = [1, 0, 1]                # 1 + u^2
    out: list = []
    zp, tp, wp = {}, {}, {}
    for m, c in f.items():
        i, j = m[Z], m[T]
        for cache, base, k in ((zp, zpar, i), (tp, tpar, j), (wp, wpar, D - i - j)):
            if k not in cache:
                cache[k] = ppow([Fraction(v) for v in base], k)
        term = pmul(pmul(zp[i], tp[j]), wp[D - i - j])
        out = padd(out, pscale(term, c))
    return out


@dataclass(frozen=True)
class SignWord:
    """Cyclic sign pattern of f on a circle.

    ``signs`` lists the signs of the open arcs between consecutive circle
    zeros, in cyclic order; ``zeros`` holds the multiplicity parity of the
    zero that ends each arc ("odd" crossings, "even" touch points).
    """
    eps: Fraction
    signs: tuple
    zeros: tuple

    @property
    def crossings(self) -> int:
        return sum(1 for z in self.zeros if z == "odd")

    @property
    def touches(self) -> int:
        return sum(1 for z in self.zeros if z == "even")

    def maximal_arcs(self) -> list:
        """Signs of maximal open arcs: arcs are glued across touch points."""
        if not self.zeros:
            return list(self.signs)
        if self.crossings == 0:
            return [self.signs[0]]
        # rotate so the word starts right after a crossing
        k = self.zeros.index("odd")
        n = len(self.signs)
        signs = [self.signs[(k + 1 + i) % n] for i in range(n)]
        zeros = [self.zeros[(k + 1 + i) % n] for i in range(n)]
        arcs = []
        cur = signs[0]
        for s, z in zip(signs, zeros):
            cur = s
            if z == "odd":
                arcs.append(cur)
        return arcs

    @property
    def negative_arcs(self) -> int:
        if self.crossings == 0:
            return 0
        return sum(1 for s in self.maximal_arcs() if s < 0)

    @property
    def positive_arcs(self) -> int:
        if self.crossings == 0:
            return 0
        return sum(1 for s in self.maximal_arcs() if s > 0)

    @property
    def definite_sign(self) -> int:
        return self.signs[0] if self.crossings == 0 else 0

    def word(self) -> str:
        out = []
        for s, z in zip(self.signs, self.zeros or [None] * len(self.signs)):
            out.append("+" if s > 0 else "-")
            if z == "odd":
                out.append("|")
            elif z == "even":
                out.append(":")
        return "".join(out)


def circle_sign_arcs(f: Jet, eps) -> SignWord:
    """Exact cyclic sign word of f on the circle z^2 + t^2 = eps^2."""
    _check_bivariate(f)
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    P = circle_polynomial(f, eps)
    if not P:
        raise DegenerateCircle("f vanishes identically on the circle")
    D = f.degree()
    at_infinity = f.evaluate((0, 0, -eps, 0))
    inf_mult = 2 * D - pdeg(P)
    roots = isolate_real_roots(P) if pdeg(P) >= 1 else []
    # sample points between roots, walking u from -inf to +inf
    samples = []
    if roots:
        samples.append(roots[0].lo - 1)
        for r1, r2 in zip(roots, roots[1:]):
            samples.append((r1.hi + r2.lo) / 2)
        samples.append(roots[-1].hi + 1)
    else:
        samples.append(Fraction(0))
    signs = [psign(P, u) for u in samples]
    zeros = [r.parity for r in roots]
    if at_infinity == 0:
        zeros.append("odd" if inf_mult % 2 else "even")
    else:
        # the arcs at u -> +inf and u -> -inf meet through the point (-eps, 0)
        if len(signs) > 1:
            signs = signs[:-1]
            signs[0] = _sgn(at_infinity)
        else:
            signs = [_sgn(at_infinity)]
    # signs[i] is followed by zeros[i]; both lists now have equal length unless no zeros
    return SignWord(eps, tuple(signs), tuple(zeros))


@dataclass(frozen=True)
class BranchReport:
    m: int
    definite_sign: str | None
    epsilon_used: Fraction
    arc_layout: str
    touch_points: bool = False
    history: tuple = ()

    def to_dict(self) -> dict:
        return {"m": self.m, "definite_sign": self.definite_sign,
                "epsilon_used": str(self.epsilon_used), "arc_layout": self.arc_layout,
                "touch_points": self.touch_points}


def _sign_name(s: int):
    return {1: "+", -1: "-"}.get(s)


def branch_report(f: Jet, k_start: int = 4, k_max: int = 24) -> BranchReport:
    """Stabilized count of maximal negative arcs on circles of radius 2^-k."""
    _check_bivariate(f)
    if f.constant_term() != 0:
        s = _sgn(f.constant_term())
        return BranchReport(0, _sign_name(s), Fraction(1, 2 ** k_start), "+" if s > 0 else "-")
    history = []
    prev = None
    for k in range(k_start, k_max + 1):
        w = circle_sign_arcs(f, Fraction(1, 2 ** k))
        key = (w.negative_arcs, w.definite_sign)
        history.append((k, key[0], key[1], w.touches))
        persistent_touch = len(history) >= 3 and all(h[3] for h in history[-3:])
        if prev is not None and prev[0] == key and (not w.touches or persistent_touch):
            return BranchReport(key[0], _sign_name(key[1]), w.eps, w.word(),
                                bool(w.touches), tuple(history))
        prev = (key, w)
    raise Unstable(f"negative-arc count did not stabilize by eps = 2^-{k_max}: {history}")


# --------------------------------------------------------------------------
# binary forms


@dataclass(frozen=True)
class BinaryFormReport:
    rho: int
    multiplicities: tuple
    squarefree: bool
    divisible_by_z: bool
    sign_at_0_1: int
    degree: int

    def to_dict(self) -> dict:
        return {"rho": self.rho, "multiplicities": list(self.multiplicities),
                "squarefree": self.squarefree, "divisible_by_z": self.divisible_by_z,
                "sign_at_0_1": self.sign_at_0_1, "degree": self.degree}


def binary_form_report(h: Jet) -> BinaryFormReport:
    """Real linear factor statistics of a binary form h(z, t)."""
    _check_bivariate(h)
    if not h.is_homogeneous():
        raise ValueError("binary form must be homogeneous")
    d = h.degree()
    # p(u) = h(1, u); a real root r gives the factor (t - r z)
    p = [Fraction(0)] * (d + 1)
    for m, c in h.items():
        p[m[T]] += c
    p = ptrim(p)
    z_mult = d - pdeg(p)
    mults = []
    if pdeg(p) >= 1:
        mults = [r.multiplicity for r in isolate_real_roots(p)]
    if z_mult:
        mults.append(z_mult)
    sign01 = _sgn(h.evaluate((0, 0, 0, 1)))
    return BinaryFormReport(len(mults), tuple(sorted(mults, reverse=True)),
                            all(k == 1 for k in mults), z_mult > 0, sign01, d)


# --------------------------------------------------------------------------
# squarefreeness


@dataclass(frozen=True)
class SquarefreeCheck:
    verified: bool
    witness: Jet | None = None

    def __bool__(self):
        return self.verified


def squarefree_germ_check(f: Jet) -> SquarefreeCheck:
    """Refute squarefreeness with a nonunit common factor of f and its partials."""
    from .symbolic import jet_gcd
    _check_bivariate(f)
    g = jet_gcd([f, f.derivative(Z), f.derivative(T)])
    if g.degree() >= 1 and g.constant_term() == 0:
        return SquarefreeCheck(False, g)
    return SquarefreeCheck(True, None)
