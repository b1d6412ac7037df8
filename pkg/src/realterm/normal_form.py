"""Classification of 4-variable germs into cA / cD / cE families.

Every coordinate change is recorded as a :class:`~realterm.jet.Step`, so
``replay(germ, cls.log)`` reproduces ``cls.witness`` exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import GermViolation, InternalContractViolation, NotCDV, SmoothPoint, TruncationInconclusive
from .jet import Jet, Step, invert_unit, jacobian_reduce, linear_images, replay, substitute
from .plane_curve import BranchReport, branch_report, squarefree_germ_check
from .symbolic import SYMS, from_sympy, jet_gcd, to_sympy

X, Y, Z, T = range(4)
MAX_ORDER = 48

CD_WEIGHTS = (3, 2, 2, 6)
CE_SPLIT_WEIGHTS = (3, 2, 2, 2)

FAMILIES = ("cA0", "cA1", "cA", "cD4", "cD", "cE6", "cE7", "cE8", "NotCDV")


@dataclass(frozen=True)
class HypersurfaceGerm:
    F: Jet
    provenance: str = "raw input"

    def __post_init__(self):
        if self.F.constant_term() != 0:
            raise GermViolation("germ must vanish at the origin")

    @property
    def order(self) -> int:
        return self.F.order


@dataclass(frozen=True)
class QuadraticData:
    signature: tuple
    rank: int
    diagonal: tuple
    log: tuple = ()

    @property
    def corank(self) -> int:
        return 4 - self.rank


@dataclass
class SingularityClass:
    family: str
    n: int | None = None
    case: str | None = None
    params: dict = field(default_factory=dict)
    witness: Jet | None = None
    log: list = field(default_factory=list)
    order: int | None = None
    quadratic: QuadraticData | None = None
    isolated: str = "unknown"
    branch: BranchReport | None = None
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        params = {}
        for k, v in self.params.items():
            params[k] = v.to_str() if isinstance(v, Jet) else (str(v) if isinstance(v, Fraction) else v)
        return {
            "family": self.family, "n": self.n, "case": self.case, "params": params,
            "witness": self.witness.to_str() if self.witness is not None else None,
            "truncation_order": self.order,
            "quadratic_signature": list(self.quadratic.signature) if self.quadratic else None,
            "isolated_check": self.isolated,
            "branch": self.branch.to_dict() if self.branch else None,
            "notes": list(self.notes),
        }


def _germ(F) -> Jet:
    return F.F if isinstance(F, HypersurfaceGerm) else F


# --------------------------------------------------------------------------
# quadratic part


def quadratic_matrix(F: Jet) -> list:
    n = F.nvars
    A = [[Fraction(0)] * n for _ in range(n)]
    for m, c in F.homogeneous_part(2).items():
        idx = [i for i, e in enumerate(m) for _ in range(e)]
        i, j = idx
        if i == j:
            A[i][i] += c
        else:
            A[i][j] += c / 2
            A[j][i] += c / 2
    return A


def diagonalize(A: list):
    """Rational congruence diagonalization: P^T A P = diag, nonzero entries first.

    Returns ``(P, diag)`` where the substitution is old = P * new.
    """
    n = len(A)
    A = [row[:] for row in A]
    P = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]

    def swap(i, j):
        if i == j:
            return
        A[i], A[j] = A[j], A[i]
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in P:
            row[i], row[j] = row[j], row[i]

    def add_col(dst, src, c):
        # new variable change: x_dst-column += c * x_src-column
        for row in A:
            row[dst] += c * row[src]
        for k in range(n):
            A[dst][k] += c * A[src][k]
        for row in P:
            row[dst] += c * row[src]

    for k in range(n):
        piv = next((i for i in range(k, n) if A[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in range(k, n) for j in range(i + 1, n) if A[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            add_col(i, j, Fraction(1))
            piv = i
        swap(piv, k)
        for j in range(k + 1, n):
            if A[k][j] != 0:
                add_col(j, k, -A[k][j] / A[k][k])
    diag = [A[i][i] for i in range(n)]
    return P, diag


def _perm_images(perm, order):
    """Images for old variable perm[i] <- new variable i."""
    n = len(perm)
    M = [[0] * n for _ in range(n)]
    for new, old in enumerate(perm):
        M[old][new] = 1
    return linear_images(M, order)


def split_quadratic(F):
    """Splitting lemma: F ~ sum a_i x_i^2 + G(remaining variables).

    Returns ``(QuadraticData, residual G, transformed F, log)``.  The sign of
    F is flipped when needed so the signature satisfies p >= q.
    """
    F = _germ(F)
    if any(F.homogeneous_part(1).items()):
        raise SmoothPoint("linear part is nonzero")
    log = []
    P, diag = diagonalize(quadratic_matrix(F))
    step = Step("substitute", tuple(linear_images(P, F.order)), note="diagonalize quadratic part")
    if any(P[i][j] != int(i == j) for i in range(4) for j in range(4)):
        F = step.apply(F)
        log.append(step)
    rank = sum(1 for d in diag if d != 0)
    p = sum(1 for d in diag if d > 0)
    q = rank - p
    if q > p:
        step = Step("multiply", factor=Fraction(-1), note="normalize signature")
        F = step.apply(F)
        log.append(step)
        diag = [-d for d in diag]
        p, q = q, p
    if rank:
        lead = F.homogeneous_part(2)
        F, sub_log = jacobian_reduce(F, (1, 1, 1, 1), leading=lead)
        log.extend(sub_log)
    residual = F.restrict(range(rank, 4))
    qd = QuadraticData((p, q), rank, tuple(diag[:rank]), tuple(log))
    return qd, residual, F, log


# --------------------------------------------------------------------------
# helpers


def _apply(F, log, step):
    log.append(step)
    return step.apply(F)


def _complete_basis(rows):
    """Extend independent linear forms (rows over y,z,t) by unit vectors."""
    import sympy
    rows = [list(r) for r in rows]
    for k in range(3):
        unit = [Fraction(int(i == k)) for i in range(3)]
        cand = rows + [unit]
        if sympy.Matrix(cand).rank() == len(cand):
            rows = cand
        if len(rows) == 3:
            break
    return rows


def _linear_form_coeffs(L: Jet):
    return [L.coeff(tuple(int(i == j) for i in range(4))) for j in (Y, Z, T)]


def _change_yzt(F: Jet, rows, log, note):
    """Substitute so that new (y, z, t) = rows * old (y, z, t)."""
    import sympy
    M = sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in r] for r in rows])
    inv = M.inv()
    full = [[Fraction(int(i == j)) for j in range(4)] for i in range(4)]
    for i in range(3):
        for j in range(3):
            v = inv[i, j]
            full[i + 1][j + 1] = Fraction(int(v.p), int(v.q))
    return _apply(F, log, Step("substitute", tuple(linear_images(full, F.order)), note=note))


def _scale_var(F, log, i, c, note):
    imgs = [None] * 4
    imgs[i] = Jet.var(i, F.order).scale(c)
    return _apply(F, log, Step("substitute", tuple(imgs), note=note))


def absorb_unit_one_variable(F: Jet, var: int, log: list):
    """Bring G(v) = d v^m u(v) to d v^m by v -> v * (unit); G involves only ``var``."""
    m = F.multiplicity()
    d = F.coeff(tuple(m if i == var else 0 for i in range(4)))
    for _ in range(F.order):
        rest = F - Jet.monomial(tuple(m if i == var else 0 for i in range(4)), d, F.order)
        if rest.is_zero():
            break
        # F = d v^m (1 + w(v));  v -> v (1 + w)^(-1/m) to first order in w
        w = Jet({tuple(e - (m if i == var else 0) for i, e in enumerate(k)): c / d
                 for k, c in rest.items()}, F.order)
        factor = _binomial_power(w, Fraction(-1, m))
        imgs = [None] * 4
        imgs[var] = Jet.var(var, F.order) * factor
        F = _apply(F, log, Step("substitute", tuple(imgs), note="absorb unit"))
    return F, m, d


def _binomial_power(w: Jet, alpha: Fraction) -> Jet:
    """(1 + w)^alpha as a truncated series; w has zero constant term."""
    out = w.one()
    term = w.one()
    coef = Fraction(1)
    k = 0
    mw = w.multiplicity()
    if mw <= 0:
        return out
    while k * mw < w.order:
        k += 1
        coef = coef * (alpha - k + 1) / k
        term = term * w
        if term.is_zero():
            break
        out = out + term.scale(coef)
    return out


# --------------------------------------------------------------------------
# cA


def _sign(c) -> int:
    return (c > 0) - (c < 0)


def _cA_sign_case(a, b, br: BranchReport) -> str:
    if _sign(a) == _sign(b):
        if br.m == 0:
            return f"cA+(0,{br.definite_sign})"
        return f"cA+({br.m})"
    if br.m == 0:
        return "cA-(0)"
    return f"cA-({br.m})"


def _cA1_table_case(signs3, d_sign, m):
    """Case number 1..6 and table index n of the cA1 list."""
    p = sum(1 for s in signs3 if s > 0)
    if m % 2:
        return (1 if p == 3 else 2), (m - 1) // 2
    if p == 3:
        return (3 if d_sign > 0 else 4), m // 2
    return (5 if d_sign > 0 else 6), m // 2


def reduce_cA(F, qd: QuadraticData, log: list) -> SingularityClass:
    F = _germ(F)
    diag = list(qd.diagonal)
    rank = qd.rank
    # choose the (x, y) pair: mixed signs if available
    pos = [i for i in range(rank) if diag[i] > 0]
    neg = [i for i in range(rank) if diag[i] < 0]
    if rank == 2:
        pair = [0, 1]
    elif pos and neg:
        pair = [pos[0], neg[0]]
    else:
        pair = [0, 1]
    rest_quad = [i for i in range(rank) if i not in pair]
    others = [i for i in range(rank, 4)]
    perm = pair + rest_quad + others          # new variable k <- old variable perm[k]
    if perm != [0, 1, 2, 3]:
        F = _apply(F, log, Step("substitute", tuple(_perm_images(perm, F.order)),
                                note="order variables"))
        diag = [diag[i] for i in perm if i < rank] + [0] * (4 - rank)
    a, b = diag[0], diag[1]
    if a < 0 and b > 0:
        F = _apply(F, log, Step("substitute", tuple(_perm_images([1, 0, 2, 3], F.order)), note="swap x,y"))
        a, b = b, a
    if a < 0 and b < 0:
        F = _apply(F, log, Step("multiply", factor=Fraction(-1), note="make x^2, y^2 positive"))
        a, b = -a, -b
        diag = [-d for d in diag]
    if rank >= 3:
        c = diag[2]
        residual = F.restrict([T])
        if rank == 3:
            if residual.is_zero():
                raise TruncationInconclusive("residual g(t) vanishes through the truncation order")
            other = F - residual
            log_tmp = []
            res_new, m, d = absorb_unit_one_variable(residual, T, log_tmp)
            for st in log_tmp:
                F = st.apply(F)
                log.append(st)
            if F.restrict([T]) != res_new or F - res_new != other:
                raise InternalContractViolation("unit absorption touched other variables")
        else:
            m, d = 2, diag[3]
        f = F.restrict([Z, T])
        br = branch_report(f)
        signs3 = [_sign(a), _sign(b), _sign(c)]
        if rank == 4:
            signs4 = signs3 + [_sign(d)]
            p = sum(1 for s in signs4 if s > 0)
            if p < 2:
                p = 4 - p
            case_no = {4: 3, 3: 4, 2: 6}[p]
            table_n = 1
        else:
            flip = sum(1 for s in signs3 if s > 0) < 2
            s3 = [-s for s in signs3] if flip else signs3
            case_no, table_n = _cA1_table_case(s3, -_sign(d) if flip else _sign(d), m)
        cls = SingularityClass("cA1", 1, f"cA1({case_no})", witness=F, log=log, order=F.order,
                               quadratic=qd, branch=br)
        cls.params.update({"table_case": case_no, "table_n": table_n, "m": m,
                           "coefficients": [str(a), str(b), str(c), str(d)],
                           "sign_case": _cA_sign_case(a, b, br), "f": f})
        cls.isolated = "verified"
        return cls
    f = F.restrict([Z, T])
    if f.is_zero():
        raise TruncationInconclusive("f(z, t) vanishes through the truncation order")
    n = f.multiplicity() - 1
    br = branch_report(f)
    cls = SingularityClass("cA", n, _cA_sign_case(a, b, br), witness=F, log=log, order=F.order,
                           quadratic=qd, branch=br)
    cls.params.update({"f": f, "coefficients": [str(a), str(b)], "sign_case": cls.case})
    sq = squarefree_germ_check(f)
    cls.isolated = "verified" if sq.verified else "refuted"
    if not sq.verified:
        cls.notes.append(f"f has the repeated factor {sq.witness.to_str()}: not isolated")
    return cls


# --------------------------------------------------------------------------
# cD and cE


def _cubic_gcd_degree(f3: Jet):
    g = jet_gcd([f3, f3.derivative(Y), f3.derivative(Z), f3.derivative(T)])
    return g, max(g.degree(), 0)


def _exact_div(a: Jet, b: Jet) -> Jet:
    import sympy
    q, r = sympy.div(to_sympy(a), to_sympy(b), *SYMS)
    if r != 0:
        raise ValueError("inexact division")
    return from_sympy(q, a.order)


def reduce_cD(F, qd: QuadraticData, log: list, f3_gcd=None) -> SingularityClass:
    F = _germ(F)
    a = qd.diagonal[0]
    F = _apply(F, log, Step("multiply", factor=1 / a, note="normalize x^2"))
    G = F.restrict([Y, Z, T])
    f3 = G.homogeneous_part(3)
    g, gdeg = f3_gcd if f3_gcd is not None else _cubic_gcd_degree(f3)
    if gdeg == 0:
        cls = SingularityClass("cD4", 4, "cD4", witness=F, log=log, order=F.order, quadratic=qd)
        cls.params["f3"] = f3
        return cls
    l1 = g
    l2 = _exact_div(f3, l1 * l1)
    rows = [_linear_form_coeffs(l1), _linear_form_coeffs(l2)]
    rows = _complete_basis(rows)
    F = _change_yzt(F, rows, log, "l1 -> y, l2 -> z")
    c = F.coeff((0, 2, 1, 0))
    if c != 1:
        F = _scale_var(F, log, Z, 1 / c, "normalize y^2 z")
    F, sub_log = jacobian_reduce(F, CD_WEIGHTS)
    log.extend(sub_log)
    yt = {m[T]: c for m, c in F.items() if m[X] == 0 and m[Y] == 1 and m[Z] == 0}
    h = F.restrict([Z, T])
    N = F.order
    if yt:
        r = min(yt)
        acoef = yt[r]
    else:
        r, acoef = None, Fraction(0)
    if h.is_zero():
        if acoef and 2 * r <= N + 2:
            s = None
            n = 2 * r
        else:
            raise TruncationInconclusive("h(z, t) vanishes through the truncation order")
    else:
        s = h.multiplicity()
        n = min(2 * r, s + 1) if acoef else s + 1
    cls = SingularityClass("cD", n, "cD>4", witness=F, log=log, order=N, quadratic=qd)
    cls.params.update({"a": acoef, "r": r, "s": s, "h": h,
                       "h_s": h.lowest_part() if not h.is_zero() else h})
    if not h.is_zero() and not acoef:
        # with a = 0 a repeated factor of h is a singular curve inside y = 0
        sq = squarefree_germ_check(h)
        cls.isolated = "verified" if sq.verified else "refuted"
    return cls


def reduce_cE(F, qd: QuadraticData, log: list, f3_gcd=None) -> SingularityClass:
    F = _germ(F)
    a = qd.diagonal[0]
    F = _apply(F, log, Step("multiply", factor=1 / a, note="normalize x^2"))
    G = F.restrict([Y, Z, T])
    f3 = G.homogeneous_part(3)
    g, _ = f3_gcd if f3_gcd is not None else _cubic_gcd_degree(f3)
    lin = _exact_div(f3, g)
    rows = _complete_basis([_linear_form_coeffs(lin)])
    F = _change_yzt(F, rows, log, "l -> y")
    b = F.coeff((0, 3, 0, 0))
    F, sub_log = jacobian_reduce(F, CE_SPLIT_WEIGHTS)
    log.extend(sub_log)
    # x^2 + b y^3 + ...  ->  multiply by b^2, x -> x/b, y -> y/b
    if b != 1:
        F = _apply(F, log, Step("multiply", factor=b * b, note="normalize y^3"))
        imgs = [Jet.var(X, F.order).scale(1 / b), Jet.var(Y, F.order).scale(1 / b), None, None]
        F = _apply(F, log, Step("substitute", tuple(imgs), note="normalize y^3"))
    gpart = Jet({(0, 0, m[Z], m[T]): c for m, c in F.items() if m[X] == 0 and m[Y] == 1}, F.order)
    h = F.restrict([Z, T])
    g3 = gpart.homogeneous_part(3)
    h4 = h.homogeneous_part(4)
    h5 = h.homogeneous_part(5)
    if F.order < 5:
        raise TruncationInconclusive("need truncation order >= 5 for cE subtypes")
    if h4:
        fam = "cE6"
    elif g3:
        fam = "cE7"
    elif h5:
        fam = "cE8"
    else:
        raise NotCDV("g3 = h4 = h5 = 0: not a terminal cE point")
    cls = SingularityClass(fam, int(fam[-1]), fam, witness=F, log=log, order=F.order, quadratic=qd)
    cls.params.update({"g": gpart, "h": h, "g3": g3, "h4": h4, "h5": h5})
    return cls


# --------------------------------------------------------------------------
# dispatch


def _classify_once(F: Jet) -> SingularityClass:
    if F.is_zero():
        raise NotCDV("F = 0")
    if F.homogeneous_part(1):
        cls = SingularityClass("cA0", 0, "cA0", witness=F, log=[], order=F.order)
        cls.isolated = "verified"
        return cls
    qd, residual, G, log = split_quadratic(F)
    log = list(log)
    if qd.rank >= 2:
        return reduce_cA(G, qd, log)
    if qd.rank == 0:
        raise NotCDV("quadratic part vanishes")
    f3 = residual.homogeneous_part(3)
    if f3.is_zero():
        raise NotCDV("rank-one quadratic part and vanishing cubic term")
    g, gdeg = _cubic_gcd_degree(f3)
    if gdeg == 2:
        return reduce_cE(G, qd, log, (g, gdeg))
    return reduce_cD(G, qd, log, (g, gdeg))


def classify(F, max_order: int = MAX_ORDER) -> SingularityClass:
    """Family, subtype and normal-form witness of a germ.

    Raises :class:`NotCDV` for germs outside the cA/cD/cE families.  When a
    subtype decision is not visible at the truncation order the order is
    doubled (up to ``max_order``) before giving up.
    """
    F = _germ(F)
    if F.constant_term() != 0:
        raise GermViolation("germ must vanish at the origin")
    order = F.order
    while True:
        try:
            cls = _classify_once(F.with_order(order))
            cls.order = order
            return cls
        except TruncationInconclusive:
            if order * 2 > max_order:
                raise
            order *= 2


def check_witness_shape(cls: SingularityClass) -> bool:
    """Machine check that the witness has its family's defining shape."""
    W = cls.witness
    fam = cls.family
    if W is None:
        return fam == "NotCDV"
    if fam == "cA0":
        return bool(W.homogeneous_part(1))
    if fam in ("cA1", "cA"):
        xy = {m for m in W.monomials() if m[X] or m[Y]}
        if not xy <= {(2, 0, 0, 0), (0, 2, 0, 0)}:
            return False
        if fam == "cA1":
            rest = W.restrict([Z, T])
            return rest.coeff((0, 0, 2, 0)) != 0 or rest.homogeneous_part(2).coeff((0, 0, 0, 2)) != 0
        return W.restrict([Z, T]).multiplicity() >= 3
    if fam == "cD4":
        xs = {m for m in W.monomials() if m[X]}
        return xs == {(2, 0, 0, 0)} and W.coeff((2, 0, 0, 0)) == 1 and W.restrict([Y, Z, T]).multiplicity() == 3
    if fam == "cD":
        for m in W.monomials():
            if m == (2, 0, 0, 0) or m == (0, 2, 1, 0):
                continue
            if m[X] or m[Y] >= 2 or (m[Y] and m[Z]):
                return False
        return W.coeff((2, 0, 0, 0)) == 1 and W.coeff((0, 2, 1, 0)) == 1
    if fam.startswith("cE"):
        for m in W.monomials():
            if m in ((2, 0, 0, 0), (0, 3, 0, 0)):
                continue
            if m[X] or m[Y] >= 2:
                return False
        return W.coeff((2, 0, 0, 0)) == 1 and W.coeff((0, 3, 0, 0)) == 1
    return False
