"""Topology of the real link L(X(R)) from a classified germ.

Exact answers come from the cA tables, the generic cD/cE corollaries and two
worked smoothing examples (cD4 with f3 = yzt, cE6 with h4 = +-z^2 t^2).
Everything else gets a :class:`ReductionReport` describing the weighted
tangent cone and its singular loci.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import sympy

from .errors import (DegenerateCircle, InternalContractViolation, NotGeneric, NotSmooth,
                     RealTermError, TruncationInconclusive, Unstable)
from .jet import Jet, Step, jacobian_reduce, linear_images, lowest_weighted_part, substitute
from .plane_curve import binary_form_report, branch_report, squarefree_germ_check
from .symbolic import SYMS, from_sympy, real_projective_singular_points, to_sympy

X, Y, Z, T = range(4)


# --------------------------------------------------------------------------
# surfaces


@dataclass(frozen=True, order=True)
class Surface:
    """M_g when ``orientable`` else K_k = S^2 # k RP^2."""
    orientable: bool
    invariant: int

    def __post_init__(self):
        if self.invariant < 0 or (not self.orientable and self.invariant < 1):
            raise ValueError("bad surface invariant")

    @property
    def euler(self) -> int:
        return 2 - 2 * self.invariant if self.orientable else 2 - self.invariant

    @property
    def name(self) -> str:
        if self.orientable:
            return {0: "S2", 1: "T2"}.get(self.invariant, f"M{self.invariant}")
        return {1: "RP2"}.get(self.invariant, f"K{self.invariant}")


SPHERE = Surface(True, 0)
TORUS = Surface(True, 1)
RP2 = Surface(False, 1)


def M(g: int) -> Surface:
    return Surface(True, g)


def K(k: int) -> Surface:
    return Surface(False, k)


_TOKEN = re.compile(r"^(\d*)\s*(S2|T2|RP2|M\d+|K\d+)$")


@dataclass(frozen=True)
class SurfaceDescriptor:
    components: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "components",
                           tuple(sorted(self.components, key=lambda s: (not s.orientable, -s.invariant))))

    @classmethod
    def of(cls, *parts) -> "SurfaceDescriptor":
        comps = []
        for p in parts:
            if isinstance(p, tuple):
                k, s = p
                comps.extend([s] * k)
            else:
                comps.append(p)
        return cls(tuple(comps))

    @classmethod
    def parse(cls, text: str) -> "SurfaceDescriptor":
        """Parse strings like ``"M1 + 2S2"``, ``"empty"`` or ``"RP2 + RP2"``."""
        text = text.strip().replace("⊎", "+")
        if text in ("", "empty", "∅"):
            return cls(())
        comps = []
        for tok in text.split("+"):
            mt = _TOKEN.match(tok.strip())
            if not mt:
                raise ValueError(f"cannot parse surface {tok!r}")
            k = int(mt.group(1) or 1)
            name = mt.group(2)
            if name == "S2":
                s = SPHERE
            elif name == "T2":
                s = TORUS
            elif name == "RP2":
                s = RP2
            elif name[0] == "M":
                s = M(int(name[1:]))
            else:
                s = K(int(name[1:]))
            comps.extend([s] * k)
        return cls(tuple(comps))

    def __add__(self, other: "SurfaceDescriptor") -> "SurfaceDescriptor":
        return SurfaceDescriptor(self.components + other.components)

    def __len__(self):
        return len(self.components)

    @property
    def is_empty(self) -> bool:
        return not self.components

    @property
    def orientable(self) -> bool:
        return all(s.orientable for s in self.components)

    def euler(self) -> list:
        return sorted((s.euler for s in self.components), reverse=True)

    def __str__(self):
        if not self.components:
            return "empty"
        counts = Counter(self.components)
        parts = []
        for s in sorted(counts, key=lambda s: (not s.orientable, -s.invariant)):
            k = counts[s]
            parts.append(f"{k}{s.name}" if k > 1 else s.name)
        return " + ".join(parts)

    def to_dict(self) -> dict:
        return {"name": str(self), "components": [
            {"orientable": s.orientable, "genus" if s.orientable else "crosscaps": s.invariant,
             "euler": s.euler} for s in self.components]}


EMPTY = SurfaceDescriptor(())


# --------------------------------------------------------------------------
# results


@dataclass
class ReductionReport:
    cone: Jet
    weights: tuple
    loci: list = field(default_factory=list)
    flags: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"cone": self.cone.to_str(), "weights": list(self.weights),
                "singular_loci": list(self.loci), "flags": dict(self.flags)}


@dataclass
class LinkResult:
    exact: bool
    descriptor: SurfaceDescriptor | None = None
    method: str | None = None
    provenance: str | None = None
    report: ReductionReport | None = None
    numeric: dict | None = None
    notes: list = field(default_factory=list)

    @classmethod
    def Exact(cls, descriptor, method, provenance, **kw):
        return cls(True, descriptor, method, provenance, **kw)

    @classmethod
    def Partial(cls, report, numeric=None, notes=None):
        return cls(False, None, None, None, report, numeric, list(notes or []))

    def to_dict(self) -> dict:
        out = {"status": "exact" if self.exact else "partial"}
        if self.exact:
            out.update({"link": self.descriptor.to_dict(), "method": self.method,
                        "provenance": self.provenance})
        if self.report is not None:
            out["reduction"] = self.report.to_dict()
        if self.numeric is not None:
            out["numeric"] = self.numeric
        if self.notes:
            out["notes"] = list(self.notes)
        return out


# --------------------------------------------------------------------------
# cA


def cA_link_from_branch(positive_pair: bool, m: int, definite: str | None) -> SurfaceDescriptor:
    if positive_pair:
        if m == 0:
            if definite == "+":
                return EMPTY
            if definite == "-":
                return SurfaceDescriptor((TORUS,))
            raise InternalContractViolation("m = 0 needs a definite sign")
        return SurfaceDescriptor.of((m, SPHERE))
    if m == 0:
        return SurfaceDescriptor.of((2, SPHERE))
    return SurfaceDescriptor((M(m - 1),))


def link_cA(cls, br=None) -> SurfaceDescriptor:
    """Link of ax^2 + by^2 + f(z, t) from the sign-change structure of f."""
    if cls.family == "cA0":
        return SurfaceDescriptor((SPHERE,))
    if cls.family not in ("cA1", "cA"):
        raise InternalContractViolation(f"link_cA called on {cls.family}")
    br = br or cls.branch
    if br is None:
        br = branch_report(cls.params["f"])
    sign_case = cls.params["sign_case"]
    mt = re.match(r"cA([+-])\((\d+)(?:,([+-]))?\)", sign_case)
    if not mt:
        raise InternalContractViolation(f"bad case tag {sign_case}")
    if int(mt.group(2)) != br.m or (br.m == 0 and mt.group(1) == "+" and mt.group(3) != br.definite_sign):
        raise InternalContractViolation("case tag disagrees with the branch report")
    return cA_link_from_branch(mt.group(1) == "+", br.m, br.definite_sign)


# --------------------------------------------------------------------------
# tangent cone reports


def cone_weights(family: str, params: dict | None = None) -> tuple:
    params = params or {}
    if family == "cD4":
        return (3, 2, 2, 2)
    if family == "cE6":
        return (6, 4, 3, 3)
    if family == "cE7":
        return (9, 6, 4, 4)
    if family == "cE8":
        return (15, 10, 6, 6)
    if family == "cD":
        s, r, a = params.get("s"), params.get("r"), params.get("a", 0)
        if s is None:
            raise TruncationInconclusive("h_s not visible")
        if not a or 2 * r > s + 1:
            return (s, s - 1, 2, 2)
        return (2 * r * (2 * r - 1), 4 * r * r - 5 * r, 6 * r, 4 * r + 1)
    if family in ("cA", "cA1"):
        return (1, 1, 1, 1)
    raise ValueError(f"no cone weights for {family}")


def cD_weight_case(params: dict) -> int:
    s, r, a = params.get("s"), params.get("r"), params.get("a", 0)
    return 1 if (not a or 2 * r > s + 1) else 2


def _line_factors(h: Jet):
    """Real linear factors of a binary form as (Jet factor, multiplicity, exact?)."""
    rep = binary_form_report(h)
    return rep


_CUBIC_TAGS = {2: "A2", 3: "D4", 4: "E6", 5: "E8"}
_E7_TAGS = {1: "A1", 2: "D4", 3: "E7"}


def _factor_multiplicities(h: Jet) -> list:
    """(factor string, multiplicity) of real linear factors of a binary form, exact over Q when possible."""
    rep = binary_form_report(h)
    return list(rep.multiplicities), rep


def tangent_cone_report(F: Jet, family: str, params: dict | None = None) -> ReductionReport:
    params = params or {}
    w = cone_weights(family, params)
    _, cone = lowest_weighted_part(F, w)
    loci, flags = [], {}
    if family == "cD4":
        f3 = F.restrict([Y, Z, T]).homogeneous_part(3)
        pts = real_projective_singular_points(f3)
        if pts and pts[0] == ("curve",):
            loci.append({"where": "whole curve", "tag": "non-reduced"})
        for p in pts:
            if p == ("curve",):
                continue
            loci.append({"where": f"+-({', '.join(str(c) for c in p)})", "count": 2,
                         "tag": _node_tag(f3, p)})
        flags["generic"] = not pts
    elif family == "cD":
        case = cD_weight_case(params)
        flags["weight_case"] = case
        if case == 1:
            hs = params["h_s"]
            rep = binary_form_report(hs)
            for k in rep.multiplicities:
                if k > 1:
                    loci.append({"where": "multiple real factor of h_s", "multiplicity": k,
                                 "tag": f"A{k - 1}"})
            if rep.divisible_by_z:
                e = _z_power(hs)
                loci.append({"where": "z-axis", "tag": f"D{e + 2}"})
            flags["generic"] = rep.squarefree and not rep.divisible_by_z
        else:
            r = params["r"]
            loci.append({"where": "z-axis", "tag": f"A{2 * r - 1}"})
            flags["generic"] = False
    elif family in ("cE6", "cE8"):
        key = "h4" if family == "cE6" else "h5"
        h = params.get(key) or F.restrict([Z, T]).homogeneous_part(4 if family == "cE6" else 5)
        rep = binary_form_report(h)
        for k in rep.multiplicities:
            if k > 1:
                loci.append({"where": f"multiple real factor of {key}", "multiplicity": k,
                             "tag": _CUBIC_TAGS.get(k, f"y^3+u^{k}")})
        flags["generic"] = rep.squarefree
    elif family == "cE7":
        g3 = params["g3"]
        rep = binary_form_report(g3)
        for k in rep.multiplicities:
            loci.append({"where": "real factor of g3", "multiplicity": k, "tag": _E7_TAGS[k]})
        flags["generic"] = False
    return ReductionReport(cone, w, loci, flags)


def _z_power(h: Jet) -> int:
    return min(m[T] == h.degree() and 0 or m[Z] for m in h.monomials())


def _node_tag(f3: Jet, p) -> str:
    """Local 2-variable type of a real singular point of a projective cubic."""
    expr = to_sympy(f3)
    syms = [SYMS[1], SYMS[2], SYMS[3]]
    k = next(i for i, c in enumerate(p) if c != 0)
    others = [s for i, s in enumerate(syms) if i != k]
    loc = expr.subs({syms[i]: (p[i] / p[k] if i != k else 1) for i in range(3)}, simultaneous=True)
    u, v = sympy.symbols("u v")
    loc = sympy.expand(expr.subs({syms[k]: 1, others[0]: p[[i for i in range(3) if i != k][0]] / p[k] + u,
                                  others[1]: p[[i for i in range(3) if i != k][1]] / p[k] + v},
                                 simultaneous=True))
    H = sympy.hessian(loc, (u, v)).subs({u: 0, v: 0})
    det = H.det()
    if det < 0:
        return "A1 (u^2 - v^2)"
    if det > 0:
        return "A1 (u^2 + v^2)"
    return "degenerate (A>=2 or D)"


# --------------------------------------------------------------------------
# generic corollaries


def link_cD4_generic(f3: Jet, resolution: int = 64) -> SurfaceDescriptor:
    from .numeric_oracle import projective_curve_components
    try:
        n = projective_curve_components(f3, resolution)
    except NotSmooth as exc:
        raise NotGeneric(str(exc)) from exc
    if n == 1:
        return SurfaceDescriptor((SPHERE,))
    if n == 2:
        return SurfaceDescriptor((SPHERE, TORUS))
    raise NotGeneric(f"unexpected component count {n} for a smooth cubic")


def link_cDgt4_generic(rep) -> SurfaceDescriptor:
    """Link for x^2 + y^2 z + h_{>=s} from the real factor data of h_s."""
    if rep.divisible_by_z:
        raise NotGeneric("z divides h_s")
    if not rep.squarefree:
        raise NotGeneric("h_s has a multiple real linear factor")
    rho = rep.rho
    if rho == 0:
        raise NotGeneric("h_s has no real linear factor")
    if rho % 2:
        r = (rho - 1) // 2
        return SurfaceDescriptor.of(M(r), (r, SPHERE))
    r = rho // 2
    if rep.sign_at_0_1 < 0:
        return SurfaceDescriptor.of(M(r), (r - 1, SPHERE))
    return SurfaceDescriptor.of(M(r - 1), (r, SPHERE))


def link_cE_generic(subtype: str, h: Jet) -> SurfaceDescriptor:
    if subtype not in ("cE6", "cE8"):
        raise NotGeneric(f"no generic statement for {subtype}")
    rep = binary_form_report(h)
    if not rep.squarefree:
        raise NotGeneric("multiple real linear factor")
    return SurfaceDescriptor((SPHERE,))


# --------------------------------------------------------------------------
# cD4 with f3 = yzt

# smoothing sites in the order +e_y, -e_y, +e_z, -e_z, +e_t, -e_t
YZT_SITES = tuple((axis, side) for axis in range(3) for side in (1, -1))
_NEG_OCTANTS = tuple(o for o in itertools.product((1, -1), repeat=3) if o[0] * o[1] * o[2] < 0)


def link_cD4_yzt(signs) -> SurfaceDescriptor:
    """Link of x^2 + yzt + (perturbation) from the perturbation signs at the 6 axis points.

    A negative sign at a site joins the two negative octants meeting there;
    each connected region is planar with b = 1 - nodes + edges + 1 boundary
    circles and contributes its double, a surface of genus b - 1.
    """
    signs = tuple(signs)
    if len(signs) != 6 or any(s not in (1, -1) for s in signs):
        raise ValueError("need six signs in {+1, -1}")
    parent = list(range(4))

    def find(a):
        while parent[a] != a:
            a = parent[a]
        return a
    edges = []
    for (axis, side), s in zip(YZT_SITES, signs):
        if s < 0:
            i, j = [k for k, o in enumerate(_NEG_OCTANTS) if o[axis] == side]
            edges.append((i, j))
            parent[find(i)] = find(j)
    comps = Counter(find(i) for i in range(4))
    ecount = Counter(find(i) for i, _ in edges)
    return SurfaceDescriptor(tuple(M(1 - comps[c] + ecount[c]) for c in comps))


def octahedral_group(preserving_yzt: bool = False):
    """The 48 signed permutations of (y, z, t) as permutations of the 6 sites.

    With ``preserving_yzt`` only the 24 with an even number of sign flips are
    returned; the others send yzt to -yzt and are not symmetries of the germ.
    """
    out = []
    for perm in itertools.permutations(range(3)):
        for flips in itertools.product((1, -1), repeat=3):
            if preserving_yzt and flips[0] * flips[1] * flips[2] < 0:
                continue
            mapping = []
            for axis, side in YZT_SITES:
                mapping.append(YZT_SITES.index((perm[axis], side * flips[perm[axis]])))
            out.append((perm, flips, tuple(mapping)))
    return out


def yzt_signs(F: Jet):
    """Perturbation signs at the 6 sites for x^2 + yzt + f_{>=4}; None if some f4 value vanishes."""
    f4 = F.restrict([Y, Z, T]).homogeneous_part(4)
    signs = []
    for axis, side in YZT_SITES:
        p = [0, 0, 0, 0]
        p[axis + 1] = side
        v = f4.evaluate(p)
        if v == 0:
            return None
        signs.append(1 if v > 0 else -1)
    return tuple(signs)


def _to_yzt(F: Jet):
    """Linear change making f3 = yzt exactly, or None if f3 is not three distinct real lines."""
    f3 = F.restrict([Y, Z, T]).homogeneous_part(3)
    expr = sympy.factor_list(to_sympy(f3))
    lead, facs = expr
    lins = []
    for fac, k in facs:
        if sympy.Poly(fac, *SYMS).total_degree() != 1:
            return None
        lins.extend([fac] * k)
    if len(lins) != 3 or len(set(lins)) != 3:
        return None
    rows = []
    for l in lins:
        rows.append([sympy.Rational(sympy.Poly(l, *SYMS).coeff_monomial(s)) for s in SYMS[1:]])
    Mx = sympy.Matrix(rows)
    if Mx.det() == 0:
        return None
    inv = Mx.inv()
    full = [[Fraction(int(i == j)) for j in range(4)] for i in range(4)]
    for i in range(3):
        for j in range(3):
            v = inv[i, j]
            full[i + 1][j + 1] = Fraction(int(v.p), int(v.q))
    G = substitute(F, linear_images(full, F.order))
    c = G.coeff((0, 1, 1, 1))
    if c != 1:
        imgs = [None, Jet.var(Y, F.order).scale(1 / c), None, None]
        G = substitute(G, imgs)
    return G


# --------------------------------------------------------------------------
# cE6 with h4 = +-z^2 t^2


@dataclass(frozen=True)
class HalfAxis:
    axis: str
    side: int
    oval: bool
    cusp: bool


def _lowest_sign(coeffs: dict, side: int):
    """Sign of sum c_k s^k as s -> 0 with sign(s) = side; None for the zero polynomial."""
    nz = [k for k, c in coeffs.items() if c != 0]
    if not nz:
        return None
    k = min(nz)
    s = 1 if coeffs[k] > 0 else -1
    return s * (side ** k)


def _poly_dict_mul(a, b):
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = out.get(i + j, 0) + x * y
    return {k: v for k, v in out.items() if v != 0}


def cE6_half_axes(W: Jet):
    """Oval decision on the four half-axes of x^2 + y^3 + c z^2 t^2 + y a(z) + y b(t) + c(z) + d(t)."""
    out = []
    for name, var in (("z", Z), ("t", T)):
        lin = {m[var]: c for m, c in W.items()
               if m[X] == 0 and m[Y] == 1 and all(m[v] == 0 for v in (Z, T) if v != var)}
        con = {m[var]: c for m, c in W.items()
               if m[X] == 0 and m[Y] == 0 and all(m[v] == 0 for v in (Z, T) if v != var)}
        a3 = _poly_dict_mul(_poly_dict_mul(lin, lin), lin)
        c2 = _poly_dict_mul(con, con)
        disc = {k: 4 * a3.get(k, 0) + 27 * c2.get(k, 0) for k in set(a3) | set(c2)}
        for side in (1, -1):
            if not lin and not con:
                out.append(HalfAxis(name, side, False, True))
                continue
            sg = _lowest_sign(disc, side)
            if sg is None:
                raise TruncationInconclusive(f"discriminant vanishes identically on the {name}-axis")
            out.append(HalfAxis(name, side, sg < 0, False))
    return out


def _reduce_z2t2(W: Jet):
    """Coordinates with h4 = c z^2 t^2 and the cE6 example's reduced shape; None if h4 differs."""
    h4 = W.restrict([Z, T]).homogeneous_part(4)
    lead, facs = sympy.factor_list(to_sympy(h4))
    lins = []
    for fac, k in facs:
        if sympy.Poly(fac, *SYMS).total_degree() != 1 or k != 2:
            return None
        lins.append(fac)
    if len(lins) != 2:
        return None
    rows = [[sympy.Rational(sympy.Poly(l, *SYMS).coeff_monomial(s)) for s in SYMS[2:]] for l in lins]
    Mx = sympy.Matrix(rows)
    inv = Mx.inv()
    full = [[Fraction(int(i == j)) for j in range(4)] for i in range(4)]
    for i in range(2):
        for j in range(2):
            v = inv[i, j]
            full[i + 2][j + 2] = Fraction(int(v.p), int(v.q))
    G = substitute(W, linear_images(full, W.order))
    c = G.coeff((0, 0, 2, 2))
    lead_form = Jet({(2, 0, 0, 0): 1, (0, 3, 0, 0): 1, (0, 0, 2, 2): c}, W.order)
    G, _ = jacobian_reduce(G, (6, 4, 3, 3), leading=lead_form)
    return G, c


def link_cE6_z2t2(W: Jet):
    """Link of a cE6 witness whose h4 is a product of two distinct real double lines.

    Returns ``(descriptor, half_axes, sign)``; sign is that of the z^2 t^2 term.
    """
    red = _reduce_z2t2(W)
    if red is None:
        raise NotGeneric("h4 is not of the form c * l1^2 * l2^2")
    G, c = red
    axes = cE6_half_axes(G)
    r = sum(1 for h in axes if h.oval)
    if c > 0:
        return SurfaceDescriptor.of(((1 + r), SPHERE)), axes, 1
    return SurfaceDescriptor((M(r),)), axes, -1


# --------------------------------------------------------------------------
# orchestration


def _numeric_estimate(F: Jet, weights, resolution: int):
    from .numeric_oracle import GridConfig, sample_link
    try:
        link = sample_link(F, GridConfig(resolution=resolution, weights=weights))
    except RealTermError as exc:
        return {"error": exc.code}
    return link.summary()


def assemble_link(cls, numeric_resolution: int | None = None) -> LinkResult:
    """Exact link when a table, corollary or worked example applies, else a reduction report."""
    fam = cls.family
    W = cls.witness
    result = None
    notes = []
    try:
        if fam == "cA0":
            result = LinkResult.Exact(SurfaceDescriptor((SPHERE,)), "table", "smooth point (cA0)")
        elif fam in ("cA1", "cA"):
            if cls.isolated == "refuted":
                notes.append("f(z, t) has a repeated factor: the cA tables do not apply")
            else:
                tag = "cA1 table" if fam == "cA1" else "cA>1 table"
                result = LinkResult.Exact(link_cA(cls), "table", f"{tag}, {cls.params['sign_case']}")
        elif fam == "cD4":
            f3 = cls.params["f3"]
            pts = real_projective_singular_points(f3)
            if not pts:
                result = LinkResult.Exact(link_cD4_generic(f3), "generic", "generic cD4 corollary")
            else:
                G = _to_yzt(W)
                if G is not None:
                    signs = yzt_signs(G)
                    if signs is not None:
                        result = LinkResult.Exact(link_cD4_yzt(signs), "combinatorial",
                                                  f"cD4 yzt smoothing, signs {signs}")
                    else:
                        notes.append("f4 vanishes at an axis point: smoothing signs undetermined")
        elif fam == "cD":
            p = cls.params
            if p.get("s") is not None and cD_weight_case(p) == 1:
                try:
                    rep = binary_form_report(p["h_s"])
                    result = LinkResult.Exact(link_cDgt4_generic(rep), "generic",
                                              f"generic cD>4 corollary, rho={rep.rho}")
                except NotGeneric as exc:
                    notes.append(str(exc))
        elif fam == "cE6":
            h4 = cls.params["h4"]
            try:
                result = LinkResult.Exact(link_cE_generic("cE6", h4), "generic", "generic cE corollary")
            except NotGeneric:
                try:
                    desc, axes, sign = link_cE6_z2t2(W)
                    flagged = [f"{h.axis}{'+' if h.side > 0 else '-'}" for h in axes if h.cusp]
                    result = LinkResult.Exact(desc, "example",
                                              f"cE6 z^2t^2 example, sign {'+' if sign > 0 else '-'}, "
                                              f"ovals {sum(h.oval for h in axes)}")
                    if flagged:
                        result.notes.append(f"cusp along half-axes {flagged}: germ not isolated")
                except NotGeneric as exc:
                    notes.append(str(exc))
        elif fam == "cE8":
            try:
                result = LinkResult.Exact(link_cE_generic("cE8", cls.params["h5"]), "generic",
                                          "generic cE corollary")
            except NotGeneric as exc:
                notes.append(str(exc))
    except (NotGeneric, TruncationInconclusive, Unstable, DegenerateCircle) as exc:
        notes.append(f"{exc.code}: {exc}")
        result = None
    if result is not None:
        if not result.descriptor.orientable:
            raise InternalContractViolation("hypersurface link must be orientable")
        if numeric_resolution:
            w = None if fam in ("cA0", "cA1", "cA") else cone_weights(fam, cls.params)
            result.numeric = _numeric_estimate(W, w, numeric_resolution)
        return result
    report = tangent_cone_report(W, fam, cls.params)
    numeric = None
    if numeric_resolution:
        numeric = _numeric_estimate(W, report.weights, numeric_resolution)
    return LinkResult.Partial(report, numeric, notes)
