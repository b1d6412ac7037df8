"""Truncated multivariate power series over the rationals.

A :class:`Jet` is a polynomial in a fixed ordered list of variables
(default ``x, y, z, t``) whose terms of total degree above ``order`` are
discarded.  All arithmetic is exact (``fractions.Fraction``).

The reduction engine lives here as well: substitution, unit inversion,
weighted decomposition, grading checks and the weighted Jacobian-ideal
elimination used to bring germs into normal form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Iterable, Mapping, Sequence

from .errors import EmptyInput, GermViolation, NotAUnit

VARS = ("x", "y", "z", "t")
DEFAULT_ORDER = 12

Monomial = tuple


def mono_degree(m: Monomial) -> int:
    return sum(m)


def mono_key(m: Monomial):
    """Sort key for graded lexicographic order (x > y > z > t)."""
    return (sum(m), m)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(i + j for i, j in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(i <= j for i, j in zip(a, b))


def mono_str(m: Monomial, names: Sequence[str] = VARS) -> str:
    parts = []
    for name, e in zip(names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


@lru_cache(maxsize=None)
def monomials_of_degree(nvars: int, d: int) -> tuple:
    """All exponent vectors of total degree ``d``, in descending grlex order."""
    out = []
    for combo in combinations_with_replacement(range(nvars), d):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return tuple(out)


@lru_cache(maxsize=None)
def monomials_of_weighted_degree(weights: tuple, d: int, maxdeg: int) -> tuple:
    """Exponent vectors with weighted degree ``d`` and total degree <= ``maxdeg``."""
    n = len(weights)
    out = []

    def rec(i, remaining, acc, total):
        if i == n - 1:
            w = weights[i]
            if remaining % w == 0 and total + remaining // w <= maxdeg:
                out.append(tuple(acc + [remaining // w]))
            return
        w = weights[i]
        for e in range(remaining // w + 1):
            if total + e > maxdeg:
                break
            rec(i + 1, remaining - e * w, acc + [e], total + e)

    if d >= 0:
        rec(0, d, [], 0)
    return tuple(sorted(out, key=mono_key, reverse=True))


class Jet:
    """Exact truncated polynomial; immutable after construction."""

    __slots__ = ("_terms", "order", "nvars", "names")

    def __init__(self, terms: Mapping[Monomial, object] | None = None,
                 order: int = DEFAULT_ORDER, nvars: int = 4,
                 names: Sequence[str] | None = None):
        if order < 1:
            raise ValueError("truncation order must be >= 1")
        clean = {}
        for m, c in (terms or {}).items():
            m = tuple(int(e) for e in m)
            if len(m) != nvars:
                raise ValueError(f"monomial {m} has wrong arity for {nvars} variables")
            if any(e < 0 for e in m):
                raise ValueError(f"negative exponent in {m}")
            if sum(m) > order:
                continue
            c = Fraction(c)
            if c:
                clean[m] = clean.get(m, Fraction(0)) + c
                if not clean[m]:
                    del clean[m]
        self._terms = clean
        self.order = order
        self.nvars = nvars
        self.names = tuple(names) if names is not None else VARS[:nvars] if nvars <= 4 else tuple(
            f"x{i}" for i in range(nvars))

    # construction helpers -------------------------------------------------

    @classmethod
    def _raw(cls, terms, order, nvars, names):
        obj = cls.__new__(cls)
        obj._terms = terms
        obj.order = order
        obj.nvars = nvars
        obj.names = names
        return obj

    def _like(self, terms, order=None):
        return Jet._raw(terms, self.order if order is None else order, self.nvars, self.names)

    @classmethod
    def constant(cls, c, order=DEFAULT_ORDER, nvars=4) -> "Jet":
        return cls({(0,) * nvars: c}, order, nvars)

    @classmethod
    def var(cls, i: int | str, order=DEFAULT_ORDER, nvars=4) -> "Jet":
        if isinstance(i, str):
            i = VARS.index(i)
        m = [0] * nvars
        m[i] = 1
        return cls({tuple(m): 1}, order, nvars)

    @classmethod
    def monomial(cls, m: Monomial, c=1, order=DEFAULT_ORDER) -> "Jet":
        return cls({tuple(m): c}, order, len(m))

    @classmethod
    def variables(cls, order=DEFAULT_ORDER, nvars=4):
        return tuple(cls.var(i, order, nvars) for i in range(nvars))

    def zero(self) -> "Jet":
        return self._like({})

    def one(self) -> "Jet":
        return self._like({(0,) * self.nvars: Fraction(1)})

    # basic accessors ------------------------------------------------------

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def monomials(self):
        return sorted(self._terms, key=mono_key, reverse=True)

    def coeff(self, m: Monomial) -> Fraction:
        return self._terms.get(tuple(m), Fraction(0))

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.nvars, Fraction(0))

    def degree(self) -> int:
        return max((sum(m) for m in self._terms), default=-1)

    def multiplicity(self) -> int:
        """Lowest total degree present (mult_0); -1 for the zero jet."""
        return min((sum(m) for m in self._terms), default=-1)

    def homogeneous_part(self, d: int) -> "Jet":
        return self._like({m: c for m, c in self._terms.items() if sum(m) == d})

    def part_at_least(self, d: int) -> "Jet":
        return self._like({m: c for m, c in self._terms.items() if sum(m) >= d})

    def lowest_part(self) -> "Jet":
        return self.homogeneous_part(self.multiplicity())

    def variables_used(self) -> set:
        return {i for m in self._terms for i, e in enumerate(m) if e}

    def with_order(self, order: int) -> "Jet":
        return Jet(self._terms, order, self.nvars, self.names)

    def truncate(self, order: int) -> "Jet":
        return self.with_order(min(order, self.order))

    # arithmetic -----------------------------------------------------------

    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return Jet.constant(other, self.order, self.nvars)

    def __add__(self, other):
        other = self._coerce(other)
        order = min(self.order, other.order)
        out = {m: c for m, c in self._terms.items() if sum(m) <= order}
        for m, c in other._terms.items():
            if sum(m) > order:
                continue
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return self._like(out, order)

    __radd__ = __add__

    def __neg__(self):
        return self._like({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> "Jet":
        c = Fraction(c)
        if not c:
            return self.zero()
        return self._like({m: v * c for m, v in self._terms.items()})

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return self.scale(other)
        other = self._coerce(other)
        order = min(self.order, other.order)
        return self._like(_mul_terms(self._terms, other._terms, order), order)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, c):
        return self.scale(Fraction(1) / Fraction(c))

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power; use invert_unit")
        result = self.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Jet):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == self._coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    # calculus / evaluation -----------------------------------------------

    def derivative(self, i: int) -> "Jet":
        out = {}
        for m, c in self._terms.items():
            if m[i]:
                mm = list(m)
                mm[i] -= 1
                out[tuple(mm)] = c * m[i]
        return self._like(out)

    def gradient(self):
        return tuple(self.derivative(i) for i in range(self.nvars))

    def evaluate(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        pt = [Fraction(p) for p in point]
        for m, c in self._terms.items():
            v = c
            for p, e in zip(pt, m):
                if e:
                    v *= p ** e
            total += v
        return total

    def restrict(self, keep: Iterable[int]) -> "Jet":
        """Set every variable not in ``keep`` to zero."""
        keep = set(keep)
        return self._like({m: c for m, c in self._terms.items()
                           if all(e == 0 or i in keep for i, e in enumerate(m))})

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self._terms}) <= 1

    # printing -------------------------------------------------------------

    def to_str(self) -> str:
        if not self._terms:
            return "0"
        out = []
        for m in self.monomials():
            c = self._terms[m]
            sign = "-" if c < 0 else "+"
            a = abs(c)
            body = mono_str(m, self.names)
            if body == "1":
                txt = str(a)
            elif a == 1:
                txt = body
            else:
                txt = f"{a}*{body}"
            out.append((sign, txt))
        s = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, txt in out[1:]:
            s += f" {sign} {txt}"
        return s

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Jet({self.to_str()!r}, order={self.order})"


def _mul_terms(a: dict, b: dict, order: int) -> dict:
    if not a or not b:
        return {}
    bl = sorted(b.items(), key=lambda kv: sum(kv[0]))
    out = {}
    for ma, ca in a.items():
        da = sum(ma)
        if da > order:
            continue
        for mb, cb in bl:
            if da + sum(mb) > order:
                break
            m = tuple(i + j for i, j in zip(ma, mb))
            v = out.get(m, 0) + ca * cb
            if v:
                out[m] = v
            else:
                del out[m]
    return out


# --------------------------------------------------------------------------
# substitution and units


def _identity_image(img: Jet | None, i: int) -> bool:
    if img is None:
        return True
    if len(img) != 1:
        return False
    (m, c), = img.items()
    return c == 1 and m[i] == 1 and sum(m) == 1


def substitute(F: Jet, images: Sequence[Jet | None] | Mapping[int, Jet]) -> Jet:
    """Return F(phi_1, ..., phi_n) truncated at F.order.

    ``images`` is a sequence with one entry per variable (``None`` keeps the
    variable) or a mapping from variable index to image.  Images must have
    zero constant term.
    """
    n = F.nvars
    if isinstance(images, Mapping):
        imgs = [images.get(i) for i in range(n)]
    else:
        imgs = list(images)
        if len(imgs) != n:
            raise ValueError("need one image per variable")
    order = F.order
    for i, img in enumerate(imgs):
        if img is not None:
            if img.nvars != n:
                raise ValueError("image has wrong number of variables")
            if img.constant_term() != 0:
                raise GermViolation(f"image of {F.names[i]} has nonzero constant term")
            order = min(order, img.order)
    changed = [i for i, img in enumerate(imgs) if not _identity_image(img, i)]
    if not changed:
        return F.with_order(order) if order != F.order else F

    powers: dict = {}

    def power(i, k):
        key = (i, k)
        if key not in powers:
            if k == 0:
                powers[key] = {(0,) * n: Fraction(1)}
            elif k == 1:
                powers[key] = {m: c for m, c in imgs[i].items() if sum(m) <= order}
            else:
                powers[key] = _mul_terms(power(i, k - 1), power(i, 1), order)
        return powers[key]

    # group monomials by their exponents in the changed variables
    groups: dict = {}
    for m, c in F.items():
        if sum(m) > order:
            continue
        key = tuple(m[i] for i in changed)
        rest = tuple(0 if i in changed else e for i, e in enumerate(m))
        groups.setdefault(key, {})[rest] = c

    out: dict = {}
    for key, rest_terms in groups.items():
        prod = {(0,) * n: Fraction(1)}
        for i, k in zip(changed, key):
            if k:
                prod = _mul_terms(prod, power(i, k), order)
        for m, c in _mul_terms(prod, rest_terms, order).items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                del out[m]
    return Jet._raw(out, order, n, F.names)


def linear_images(matrix: Sequence[Sequence], order=DEFAULT_ORDER) -> list:
    """Images for the linear change old_i = sum_j matrix[i][j] * new_j."""
    n = len(matrix)
    out = []
    for row in matrix:
        terms = {}
        for j, a in enumerate(row):
            if a:
                m = [0] * n
                m[j] = 1
                terms[tuple(m)] = Fraction(a)
        out.append(Jet(terms, order, n))
    return out


def invert_unit(u: Jet) -> Jet:
    """Inverse of a unit, exact through u.order."""
    c0 = u.constant_term()
    if c0 == 0:
        raise NotAUnit("constant term is zero")
    inv0 = 1 / c0
    # u = c0 (1 + v), 1/u = inv0 * sum (-v)^k
    v = (u.scale(inv0) - 1)
    result = u.one()
    term = u.one()
    mv = v.multiplicity()
    if mv <= 0:
        return result.scale(inv0)
    for _ in range(u.order // mv):
        term = term * (-v)
        if term.is_zero():
            break
        result = result + term
    return result.scale(inv0)


# --------------------------------------------------------------------------
# weights and gradings


@dataclass(frozen=True)
class WeightVector:
    weights: tuple

    def __post_init__(self):
        object.__setattr__(self, "weights", tuple(int(w) for w in self.weights))
        if any(w < 1 for w in self.weights):
            raise ValueError("weights must be positive integers")

    def degree(self, m: Monomial) -> int:
        return sum(w * e for w, e in zip(self.weights, m))

    def __iter__(self):
        return iter(self.weights)

    def __len__(self):
        return len(self.weights)


@dataclass(frozen=True)
class GradedWeights:
    modulus: int
    grades: tuple

    def __post_init__(self):
        object.__setattr__(self, "grades", tuple(int(a) for a in self.grades))
        if self.modulus < 2:
            raise ValueError("grading modulus must be >= 2")

    def integer_grade(self, m: Monomial) -> int:
        return sum(a * e for a, e in zip(self.grades, m))

    def grade(self, m: Monomial) -> int:
        return self.integer_grade(m) % self.modulus


def _as_weights(w) -> WeightVector:
    return w if isinstance(w, WeightVector) else WeightVector(tuple(w))


def weighted_degree(m: Monomial, w) -> int:
    return _as_weights(w).degree(m)


def weighted_decompose(F: Jet, w) -> list:
    """Split F into weighted-homogeneous pieces, as ``[(degree, Jet), ...]``."""
    w = _as_weights(w)
    pieces: dict = {}
    for m, c in F.items():
        pieces.setdefault(w.degree(m), {})[m] = c
    return [(d, F._like(pieces[d])) for d in sorted(pieces)]


def lowest_weighted_part(F: Jet, w):
    pieces = weighted_decompose(F, w)
    if not pieces:
        return None, F.zero()
    return pieces[0]


@dataclass(frozen=True)
class GradeCheck:
    homogeneous: bool
    grade: int | None = None
    witness: tuple | None = None

    def __bool__(self):
        return self.homogeneous


def graded_check(F: Jet, g: GradedWeights) -> GradeCheck:
    """Common grade of all monomials mod n, or two monomials that disagree."""
    if F.is_zero():
        raise EmptyInput("graded_check needs a nonzero series")
    first = None
    for m in F.monomials():
        if first is None:
            first = m
            continue
        if g.grade(m) != g.grade(first):
            return GradeCheck(False, None, (first, m))
    return GradeCheck(True, g.grade(first), None)


# --------------------------------------------------------------------------
# transform logs


@dataclass(frozen=True)
class Step:
    """One logged operation: ``substitute`` (images) or ``multiply`` (factor)."""
    kind: str
    images: tuple | None = None
    factor: Jet | Fraction | None = None
    note: str = ""

    def apply(self, F: Jet) -> Jet:
        if self.kind == "substitute":
            return substitute(F, list(self.images))
        if self.kind == "multiply":
            if isinstance(self.factor, Jet):
                return F * self.factor
            return F.scale(self.factor)
        raise ValueError(f"unknown step kind {self.kind}")

    def describe(self) -> str:
        if self.kind == "substitute":
            parts = []
            for i, img in enumerate(self.images):
                if img is not None and not _identity_image(img, i):
                    parts.append(f"{VARS[i] if i < 4 else i}->{img.to_str()}")
            body = ", ".join(parts) or "identity"
        else:
            f = self.factor
            body = f"* ({f.to_str() if isinstance(f, Jet) else f})"
        return f"{self.kind}: {body}" + (f" [{self.note}]" if self.note else "")


def replay(F: Jet, log: Iterable[Step]) -> Jet:
    for step in log:
        F = step.apply(F)
    return F


# --------------------------------------------------------------------------
# weighted Jacobian-ideal elimination


@dataclass
class _EchelonBasis:
    rows: dict = field(default_factory=dict)     # pivot -> (row, combination)

    def add(self, row: dict, combo: dict):
        row = dict(row)
        combo = dict(combo)
        while row:
            piv = max(row, key=mono_key)
            if piv not in self.rows:
                self.rows[piv] = (row, combo)
                return
            brow, bcombo = self.rows[piv]
            f = row[piv] / brow[piv]
            _axpy(row, brow, -f)
            _axpy(combo, bcombo, -f)

    def reduce(self, vec: dict):
        """Eliminate basis pivots from ``vec``; return (remainder, combination)."""
        rem = dict(vec)
        used: dict = {}
        while True:
            cands = [m for m in rem if m in self.rows]
            if not cands:
                return rem, used
            piv = max(cands, key=mono_key)
            brow, bcombo = self.rows[piv]
            f = rem[piv] / brow[piv]
            _axpy(rem, brow, -f)
            _axpy(used, bcombo, f)


def _axpy(target: dict, src: dict, a):
    for k, v in src.items():
        nv = target.get(k, 0) + a * v
        if nv:
            target[k] = nv
        else:
            target.pop(k, None)


def jacobian_reduce(F: Jet, w, leading: Jet | None = None, max_rounds: int | None = None):
    """Kill weighted-degree > d elements of the Jacobian ideal of the leading form.

    ``leading`` defaults to the lowest weighted piece F_d.  For each weighted
    degree D > d (up to what the truncation order can hold) the span of
    g_i * dF_d/dx_i with w(g_i) = w_i + (D - d) is row-reduced with pivots
    chosen by graded lex order, and F_D is reduced against it through the
    substitution x_i -> x_i + g_i.  Returns ``(reduced, log)``.
    """
    w = _as_weights(w)
    if F.is_zero():
        return F, []
    if leading is None:
        d, lead = lowest_weighted_part(F, w)
    else:
        lead = leading
        degs = {w.degree(m) for m in lead.monomials()}
        if len(degs) != 1:
            raise ValueError("leading form is not weighted homogeneous")
        d = degs.pop()
    grads = [lead.derivative(i) for i in range(F.nvars)]
    N = F.order
    max_w = N * max(w.weights)
    log = []
    current = F
    rounds = 0
    for D in range(d + 1, max_w + 1):
        piece = {m: c for m, c in current.items() if w.degree(m) == D}
        if not piece:
            continue
        e = D - d
        basis = _EchelonBasis()
        for i, gi in enumerate(grads):
            if gi.is_zero():
                continue
            for gm in monomials_of_weighted_degree(w.weights, w.weights[i] + e, N):
                row = {}
                for m, c in gi.items():
                    mm = mono_mul(gm, m)
                    if sum(mm) <= N:
                        row[mm] = c
                if row:
                    basis.add(row, {(i, gm): Fraction(1)})
        rem, used = basis.reduce(piece)
        if not used:
            continue
        images = [None] * F.nvars
        gterms: dict = {}
        for (i, gm), c in used.items():
            gterms.setdefault(i, {})[gm] = -c
        for i, terms in gterms.items():
            base = [0] * F.nvars
            base[i] = 1
            terms = dict(terms)
            terms[tuple(base)] = terms.get(tuple(base), 0) + 1
            images[i] = Jet(terms, N, F.nvars)
        step = Step("substitute", tuple(images), note=f"weighted degree {D}")
        current = step.apply(current)
        log.append(step)
        rounds += 1
        if max_rounds is not None and rounds >= max_rounds:
            break
    return current, log
