"""Terminal quotient singularities (F = 0) / (1/n)(a_x, a_y, a_z, a_t).

Odd index: the cover's real link maps homeomorphically.  Even index: the
link is assembled from the cover (F = 0) and the companion (F^c = 0), each
divided by the sign involution tau.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (GradingError, InternalContractViolation, NotCDV, RealTermError,
                     ResolutionTooCoarse)
from .jet import GradedWeights, Jet, graded_check, mono_key
from .link_topology import (EMPTY, K, LinkResult, M, Surface, SurfaceDescriptor,
                            assemble_link, cone_weights)
from .normal_form import classify
from .plane_curve import branch_report

X, Y, Z, T = range(4)


def v2(k: int) -> int:
    if k == 0:
        return 10 ** 9
    k = abs(k)
    e = 0
    while k % 2 == 0:
        k //= 2
        e += 1
    return e


@dataclass(frozen=True)
class GradedAction:
    """The grading (1/n)(a_1, ..., a_m) with its derived 2-adic data."""
    n: int
    grades: tuple
    faithful_from: tuple | None = None

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("index must be >= 2")
        object.__setattr__(self, "grades", tuple(int(a) for a in self.grades))

    @classmethod
    def parse(cls, text: str) -> "GradedAction":
        import re
        mt = re.fullmatch(r"\s*1\s*/\s*(\d+)\s*\(([^)]*)\)\s*", text)
        if not mt:
            raise ValueError(f"cannot parse action {text!r}")
        return cls(int(mt.group(1)), tuple(int(a) for a in mt.group(2).split(",")))

    def faithful(self) -> "GradedAction":
        g = math.gcd(self.n, *self.grades)
        if g == 1:
            return self
        return GradedAction(self.n // g, tuple(a // g for a in self.grades), (self.n, self.grades))

    @property
    def is_faithful(self) -> bool:
        return math.gcd(self.n, *self.grades) == 1

    @property
    def s(self) -> int:
        return v2(self.n)

    @property
    def c(self) -> int:
        return min(v2(a) for a in self.grades)

    @property
    def tau(self) -> tuple:
        return tau_of(self)

    def grading(self) -> GradedWeights:
        return GradedWeights(self.n, self.grades)

    def __str__(self):
        return f"1/{self.n}({','.join(str(a) for a in self.grades)})"


def tau_of(action: GradedAction) -> tuple:
    """Sign vector of tau; all +1 (identity) when s = c."""
    act = action.faithful()
    s, c = act.s, act.c
    if s <= c:
        return (1,) * len(act.grades)
    return tuple(-1 if (a >> c) % 2 else 1 for a in act.grades)


# --------------------------------------------------------------------------
# validation against the table


@dataclass(frozen=True)
class QuotientClass:
    row: str
    action: GradedAction
    grade: int
    family: str
    conditions: tuple = ()


def _units(n):
    return [u for u in range(1, n) if math.gcd(u, n) == 1]


def _match_row(F: Jet, act: GradedAction, family: str):
    n = act.n
    a = [x % n for x in act.grades]
    cA = family in ("cA0", "cA1", "cA")
    cD = family in ("cD4", "cD")
    cE = family in ("cE6", "cE7", "cE8")
    for u in _units(n):
        w = tuple((u * x) % n for x in a)
        if n == 2 and w == (1, 1, 1, 0) and cA:
            return "cA/2", ()
        if n >= 3 and cA and w[Z] == 1 and w[T] == 0 and (w[X] + w[Y]) % n == 0 and math.gcd(w[X], n) == 1:
            return "cA/n", (f"(n,r)=1 with r={w[X]}",)
        if n == 2 and w == (0, 1, 1, 1) and family in ("cA1", "cA"):
            return "cAx/2", ()
        if n == 4 and w == (1, 3, 1, 2) and family in ("cA1", "cA"):
            if F.coeff((0, 0, 0, 2)) == 0:
                return "cAx/4", ("f2(0,1)=0",)
        if n == 2 and w == (1, 0, 1, 1) and cD:
            return "cD/2", ()
        if n == 3 and w == (0, 2, 1, 1) and cD:
            if F.coeff((0, 3, 0, 0)) != 0:
                return "cD/3", ("f3(1,0,0)!=0",)
        if n == 2 and w == (1, 0, 1, 1) and cE:
            return "cE/2", ()
    return None, ()


def validate_action(F: Jet, action: GradedAction) -> QuotientClass:
    """Check graded homogeneity and match exactly one row of the terminal quotient list."""
    act = action.faithful()
    chk = graded_check(F, act.grading())
    if not chk:
        m1, m2 = chk.witness
        raise GradingError(f"monomials of different grades under {act}", witness=(m1, m2))
    try:
        cls = classify(F)
    except NotCDV as exc:
        raise _not_terminal(f"cover is not cDV: {exc}") from exc
    row, conds = _match_row(F, act, cls.family)
    if row is None:
        raise _not_terminal(f"{cls.family} with {act} matches no row of the list")
    return QuotientClass(row, act, chk.grade, cls.family, conds)


def _not_terminal(msg):
    from .errors import NotTerminalQuotient
    return NotTerminalQuotient(msg)


# --------------------------------------------------------------------------
# companion


@dataclass(frozen=True)
class CompanionPair:
    F: Jet
    Fc: Jet
    d: int
    action: GradedAction


def default_grade(F: Jet, action: GradedAction) -> int:
    """Integer weight of the lowest-degree monomial (ties go to the largest in the monomial order)."""
    m = max(F.monomials(), key=lambda m: (-sum(m), mono_key(m)))
    return action.grading().integer_grade(m)


def companion(F: Jet, action: GradedAction, d: int | None = None) -> CompanionPair:
    """eta^-d F(eta^a_1 x_1, ...) computed by the exact sign rule."""
    g = action.grading()
    chk = graded_check(F, g)
    if not chk:
        raise GradingError("companion needs a graded homogeneous series", witness=chk.witness)
    if d is None:
        d = default_grade(F, action)
    n = action.n
    terms = {}
    for m, c in F.items():
        k, r = divmod(g.integer_grade(m) - d, n)
        if r:
            raise GradingError("grade d is inconsistent with F", witness=(m,))
        terms[m] = -c if k % 2 else c
    return CompanionPair(F, Jet(terms, F.order, F.nvars), d, action)


# --------------------------------------------------------------------------
# link assembly


def _tau_orientation_flip(F: Jet, tau) -> int:
    """Parity (0/1) of #sign flips of tau plus the sign of F under tau."""
    flips = sum(1 for s in tau if s < 0)
    m = next(iter(F.monomials()))
    fsign = sum(e for e, s in zip(m, tau) if s < 0) % 2
    for m2 in F.monomials():
        if sum(e for e, s in zip(m2, tau) if s < 0) % 2 != fsign:
            raise InternalContractViolation("F is not tau-homogeneous")
    return (flips + fsign) % 2


def _half_axis_signs(f: Jet):
    """Signs of f(0, t) for t -> 0+ and t -> 0-, or None if f(0, t) vanishes identically."""
    ft = {m[T]: c for m, c in f.items() if m[Z] == 0}
    if not ft:
        return None
    k = min(ft)
    s = 1 if ft[k] > 0 else -1
    return s, s * (-1) ** k


def _literal_cA_form(F: Jet):
    """(a, b, f) when F = a x^2 + b y^2 + f(z, t) literally."""
    a = F.coeff((2, 0, 0, 0))
    b = F.coeff((0, 2, 0, 0))
    if a == 0 or b == 0:
        return None
    for m in F.monomials():
        if (m[X] or m[Y]) and m not in ((2, 0, 0, 0), (0, 2, 0, 0)):
            return None
    f = F.restrict([Z, T])
    return a, b, f


def cA2_orbits(F: Jet):
    """Symbolic tau-orbits for a x^2 + b y^2 + f(z, t) under tau = (-x, -y, -z, t).

    Returns ``(components, fixed flags)`` or None when the half-axis rule is silent.
    """
    lit = _literal_cA_form(F)
    if lit is None:
        return None
    a, b, f = lit
    if f.is_zero():
        return None
    if (a > 0) == (b > 0):
        if a < 0:
            f = -f
        br = branch_report(f)
        if br.m == 0:
            if br.definite_sign == "+":
                return [], []
            return [Surface(True, 1)], [True]
        sides = _half_axis_signs(f)
        if sides is None:
            return None
        fixed = sum(1 for s in sides if s < 0)
        if (br.m - fixed) % 2:
            raise InternalContractViolation("odd number of swapped spheres")
        comps = [Surface(True, 0)] * br.m
        return comps, [True] * fixed + [False] * (br.m - fixed)
    br = branch_report(f)
    if br.m == 0:
        return [Surface(True, 0)] * 2, [False, False]
    return [Surface(True, br.m - 1)], [True]


@dataclass
class _CoverPiece:
    label: str
    F: Jet
    components: list = field(default_factory=list)   # Euler characteristics
    fixed: list = field(default_factory=list)
    method: str = ""


def _orbits_for(G: Jet, label: str, act: GradedAction, tau, resolution: int):
    """Components of L(G = 0) and which are tau-fixed, by the strongest available method."""
    from .numeric_oracle import GridConfig, match_components, sample_link
    piece = _CoverPiece(label, G)
    if act.n == 2 and tuple(x % 2 for x in act.grades) == (1, 1, 1, 0):
        sym = cA2_orbits(G)
        if sym is not None:
            comps, fixed = sym
            piece.components = [s.euler for s in comps]
            piece.fixed = fixed
            piece.method = "symbolic half-axis rule"
            return piece
    desc = None
    weights = None
    try:
        cls = classify(G)
        lr = assemble_link(cls)
        if lr.exact:
            desc = lr.descriptor
        if cls.family not in ("cA0", "cA1", "cA"):
            weights = cone_weights(cls.family, cls.params)
    except RealTermError:
        pass
    if desc is not None and len(desc) <= 1:
        piece.components = [s.euler for s in desc.components]
        piece.fixed = [True] * len(desc)
        piece.method = "connected link"
        return piece
    link = sample_link(G, GridConfig(resolution=resolution, weights=weights))
    if desc is not None and sorted(link.chis) != sorted(desc.euler()):
        raise ResolutionTooCoarse(f"numeric link {link.chis} disagrees with {desc}")
    orb = match_components(link, tau)
    piece.components = [c.chi for c in link.components]
    fixed = set(orb["fixed"])
    piece.fixed = [i in fixed for i in range(link.n_components)]
    piece.method = "numeric component matching"
    return piece


def quotient_link(F: Jet, action: GradedAction, cover_link: LinkResult | None = None,
                  resolution: int = 64) -> LinkResult:
    """Link of (F = 0) / action."""
    qc = validate_action(F, action)
    act = qc.action
    if act.n % 2:
        lr = cover_link or assemble_link(classify(F))
        if lr.exact:
            return LinkResult.Exact(lr.descriptor, lr.method,
                                    f"odd index {act.n}: cover link maps homeomorphically ({lr.provenance})")
        lr.notes.append(f"odd index {act.n}: cover link maps homeomorphically")
        return lr
    tau = tau_of(act)
    pair = companion(F, act)
    flip = _tau_orientation_flip(F, tau)
    pieces = []
    try:
        for label, G in (("cover", F), ("companion", pair.Fc)):
            pieces.append(_orbits_for(G, label, act, tau, resolution))
    except RealTermError as exc:
        return LinkResult.Partial(None, notes=[f"tau-orbits undetermined: {exc.code}: {exc}"])
    comps = []
    for p in pieces:
        swapped = [chi for chi, fx in zip(p.components, p.fixed) if not fx]
        swapped.sort()
        if len(swapped) % 2:
            raise InternalContractViolation("swapped components must pair up")
        for chi in swapped[::2]:
            comps.append(Surface(True, (2 - chi) // 2))
        for chi, fx in zip(p.components, p.fixed):
            if not fx:
                continue
            if chi % 2:
                raise InternalContractViolation("fixed component with odd Euler characteristic")
            half = chi // 2
            if flip:
                comps.append(K(2 - half))
            else:
                if half % 2:
                    raise InternalContractViolation("orientable quotient with odd Euler characteristic")
                comps.append(M((2 - half) // 2))
    desc = SurfaceDescriptor(tuple(comps))
    methods = "; ".join(f"{p.label}: {p.method}" for p in pieces)
    res = LinkResult.Exact(desc, "quotient", f"{qc.row} at index {act.n}, tau={tau}; {methods}")
    res.notes.append(f"companion: {pair.Fc.to_str()}")
    return res


def not_isolated_check(qc: QuotientClass, link: LinkResult) -> str:
    if qc.action.n < 2:
        raise ValueError("index must exceed 1")
    if link.exact and not link.descriptor.is_empty:
        return "verified"
    if not link.exact and link.numeric and link.numeric.get("components", 0) > 0:
        return "verified"
    return "violation"
