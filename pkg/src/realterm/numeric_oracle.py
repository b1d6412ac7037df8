"""Floating-point oracle: mesh the link on a small sphere and count its pieces.

The 3-sphere is modelled by the boundary of [-1, 1]^4, Kuhn-triangulated on
a regular grid and mapped onto either a round sphere of radius ``eps`` or the
anisotropic level set ``sum x_i^(2 u_i) = eps^(2w)`` (weighted case).  The
zero set of F on that simplicial 3-sphere is extracted with marching
tetrahedra; vertex values that are exactly zero count as positive, which is
a consistent symbolic perturbation and keeps the extraction a closed
manifold.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .errors import NotSmooth, ResolutionTooCoarse
from .jet import Jet
from .symbolic import real_projective_singular_points

SIGN_TOL = 1e-12


@dataclass(frozen=True)
class GridConfig:
    resolution: int = 64
    eps: Fraction = Fraction(1, 2)
    weights: tuple | None = None
    sign_tol: float = SIGN_TOL

    def __post_init__(self):
        if self.resolution < 16:
            raise ValueError("resolution must be >= 16")
        if self.eps <= 0:
            raise ValueError("eps must be positive")


@dataclass(frozen=True)
class Component:
    chi: int
    vertices: int
    edges: int
    faces: int
    representative: tuple
    bbox: tuple


@dataclass
class SampledLink:
    components: list
    config: GridConfig
    points: np.ndarray = field(repr=False, default=None)     # surface vertices, cube coordinates
    labels: np.ndarray = field(repr=False, default=None)     # component id per surface vertex
    polygons: list = field(repr=False, default=None)

    @property
    def n_components(self) -> int:
        return len(self.components)

    @property
    def chis(self) -> list:
        return sorted((c.chi for c in self.components), reverse=True)

    def summary(self) -> dict:
        return {"components": self.n_components, "euler": self.chis,
                "resolution": self.config.resolution, "eps": str(self.config.eps),
                "weights": list(self.config.weights) if self.config.weights else None}


# --------------------------------------------------------------------------
# evaluation


def _compile(F: Jet):
    terms = [(m, float(c)) for m, c in F.items()]
    maxdeg = [max((m[i] for m, _ in terms), default=0) for i in range(F.nvars)]

    def ev(P):
        # P: (..., nvars)
        pows = []
        for i in range(F.nvars):
            xi = P[..., i]
            p = [np.ones_like(xi)]
            for _ in range(maxdeg[i]):
                p.append(p[-1] * xi)
            pows.append(p)
        out = np.zeros(P.shape[:-1])
        for m, c in terms:
            v = c
            for i, e in enumerate(m):
                if e:
                    v = v * pows[i][e]
            out = out + v
        return out
    return ev


def _to_sphere(P: np.ndarray, cfg: GridConfig) -> np.ndarray:
    eps = float(cfg.eps)
    if cfg.weights is None:
        norm = np.sqrt((P * P).sum(axis=-1, keepdims=True))
        return eps * P / norm
    w = np.array(cfg.weights, dtype=float)
    W = math.lcm(*cfg.weights)
    u = np.array([W // wi for wi in cfg.weights], dtype=float)
    s = (np.abs(P) ** (2 * u)).sum(axis=-1, keepdims=True)
    lam = eps * s ** (-1.0 / (2 * W))
    return P * lam ** w


def _signs(F: Jet, ev, P: np.ndarray, cfg: GridConfig) -> np.ndarray:
    Q = _to_sphere(P, cfg)
    vals = ev(Q)
    scale = max(float(np.max(np.abs(vals))), 1e-300)
    pos = vals > 0
    sus = np.abs(vals) <= cfg.sign_tol * scale
    if np.any(sus):
        idx = np.argwhere(sus)
        flat = Q[sus]
        for k, q in zip(map(tuple, idx), flat):
            exact = F.evaluate([Fraction(float(c)) for c in q])
            pos[k] = exact >= 0
    return pos, vals


# --------------------------------------------------------------------------
# boundary complex of the cube


def _kuhn(dim):
    """Simplices of the Kuhn triangulation of the unit dim-cube as vertex offset lists."""
    out = []
    for perm in itertools.permutations(range(dim)):
        v = [0] * dim
        simplex = [tuple(v)]
        for a in perm:
            v = v.copy()
            v[a] = 1
            simplex.append(tuple(v))
        out.append(simplex)
    return out


def _facets(ambient):
    for axis in range(ambient):
        for side in (0, 1):
            yield axis, side


def _embed(axis, side, res, local):
    """Integer ambient coordinates (…, ambient) from local facet coordinates."""
    shape = local.shape[:-1] + (local.shape[-1] + 1,)
    out = np.empty(shape, dtype=np.int64)
    k = 0
    for a in range(shape[-1]):
        if a == axis:
            out[..., a] = side * res
        else:
            out[..., a] = local[..., k]
            k += 1
    return out


def _gid(coords, R):
    g = np.zeros(coords.shape[:-1], dtype=np.int64)
    for a in range(coords.shape[-1]):
        g = g * R + coords[..., a]
    return g


def _march(F: Jet, cfg: GridConfig, ambient: int):
    """Marching simplices on the boundary of [-1,1]^ambient.

    Returns ``(cells, edge_info)``: cells are arrays of crossing-edge keys, one
    row per polygon (segment when ambient == 3); edge_info holds the sorted
    unique keys with endpoint ids and values for interpolation.
    """
    res = cfg.resolution
    R = res + 1
    ev = _compile(F)
    d = ambient - 1
    simplices = np.array(_kuhn(d), dtype=np.int64)          # (d!, d+1, d)
    cells = []                                                # arrays (n, k) of edge keys
    info = []
    grid = np.indices((R,) * d).reshape(d, -1).T.astype(np.int64)
    for axis, side in _facets(ambient):
        ic = _embed(axis, side, res, grid)
        P = -1.0 + 2.0 * ic / res
        pos, vals = _signs(F, ev, P, cfg)
        pos = pos.reshape((R,) * d)
        vals = vals.reshape((R,) * d)
        # active cubes
        lo = np.ones((res,) * d, dtype=bool)
        hi = np.zeros((res,) * d, dtype=bool)
        for corner in itertools.product((0, 1), repeat=d):
            sl = tuple(slice(c, c + res) for c in corner)
            lo &= pos[sl]
            hi |= pos[sl]
        active = np.argwhere(hi & ~lo)
        if len(active) == 0:
            continue
        # all simplices of active cubes: (n, d!, d+1, d)
        verts = active[:, None, None, :] + simplices[None]
        verts = verts.reshape(-1, d + 1, d)
        vpos = pos[tuple(verts[..., a] for a in range(d))]
        vval = vals[tuple(verts[..., a] for a in range(d))]
        vid = _gid(_embed(axis, side, res, verts), R)
        code = (vpos * (1 << np.arange(d + 1))).sum(axis=1)
        for c in np.unique(code):
            if c == 0 or c == (1 << (d + 1)) - 1:
                continue
            sel = code == c
            poly = _polygon(int(c), d + 1)
            ids = vid[sel]
            vv = vval[sel]
            keys = []
            for (a, b) in poly:
                ga, gb = ids[:, a], ids[:, b]
                k = np.minimum(ga, gb) * (R ** ambient) + np.maximum(ga, gb)
                keys.append(k)
                lo_end = np.where(ga < gb, a, b)
                hi_end = np.where(ga < gb, b, a)
                rows = np.arange(len(ids))
                info.append((k, np.minimum(ga, gb), np.maximum(ga, gb),
                             vv[rows, lo_end], vv[rows, hi_end]))
            cells.append(np.stack(keys, axis=1))
    if info:
        k, ga, gb, fa, fb = (np.concatenate(col) for col in zip(*info))
        _, first = np.unique(k, return_index=True)
        edge_info = (k[first], ga[first], gb[first], fa[first], fb[first])
    else:
        edge_info = None
    return cells, edge_info


def _polygon(code, nv):
    """Crossing edges of a simplex with the given sign code, in cyclic order."""
    P = [i for i in range(nv) if code >> i & 1]
    N = [i for i in range(nv) if not code >> i & 1]
    if nv == 3:
        lone = P if len(P) == 1 else N
        other = N if len(P) == 1 else P
        return [(lone[0], other[0]), (lone[0], other[1])]
    if len(P) == 1 or len(N) == 1:
        lone = P if len(P) == 1 else N
        other = N if len(P) == 1 else P
        return [(lone[0], o) for o in other]
    a, b = P
    c, e = N
    return [(a, c), (a, e), (b, e), (b, c)]


def _decode(g, R, ambient):
    out = []
    for _ in range(ambient):
        out.append(g % R)
        g //= R
    return out[::-1]


def _positions(keys, edge_info, res, ambient):
    R = res + 1
    k, ga, gb, fa, fb = edge_info
    # keys arrive sorted and equal to the unique edge keys
    assert np.array_equal(k, keys)
    a = np.stack(_decode(ga.copy(), R, ambient), axis=1).astype(float)
    b = np.stack(_decode(gb.copy(), R, ambient), axis=1).astype(float)
    den = fa - fb
    s = np.where(den != 0, fa / np.where(den != 0, den, 1.0), 0.5)
    s = np.clip(s, 0.0, 1.0)[:, None]
    return -1.0 + 2.0 * (a + s * (b - a)) / res


def sample_link(F: Jet, cfg: GridConfig | None = None) -> SampledLink:
    """Components and Euler characteristics of {F = 0} on a small 3-sphere."""
    cfg = cfg or GridConfig()
    cells, info = _march(F, cfg, 4)
    if not cells:
        return SampledLink([], cfg, np.empty((0, 4)), np.empty(0, dtype=np.int64), [])
    allkeys = np.concatenate([c.reshape(-1) for c in cells])
    keys, inv = np.unique(allkeys, return_inverse=True)
    polys = []
    off = 0
    for c in cells:
        n, k = c.shape
        polys.append(inv[off:off + n * k].reshape(n, k))
        off += n * k
    edges = []
    for p in polys:
        k = p.shape[1]
        for i in range(k):
            a, b = p[:, i], p[:, (i + 1) % k]
            edges.append(np.stack([np.minimum(a, b), np.maximum(a, b)], axis=1))
    E = np.concatenate(edges)
    Eu, counts = np.unique(E, axis=0, return_counts=True)
    if np.any(counts != 2):
        raise ResolutionTooCoarse("extracted surface is not a closed manifold")
    nV = len(keys)
    g = coo_matrix((np.ones(len(Eu)), (Eu[:, 0], Eu[:, 1])), shape=(nV, nV))
    ncomp, labels = connected_components(g, directed=False)
    # canonical labels: order by smallest contained key
    first = np.full(ncomp, np.iinfo(np.int64).max)
    np.minimum.at(first, labels, keys)
    order = np.argsort(first)
    relabel = np.empty(ncomp, dtype=np.int64)
    relabel[order] = np.arange(ncomp)
    labels = relabel[labels]
    vcount = np.bincount(labels, minlength=ncomp)
    ecount = np.bincount(labels[Eu[:, 0]], minlength=ncomp)
    fcount = np.zeros(ncomp, dtype=np.int64)
    for p in polys:
        fcount += np.bincount(labels[p[:, 0]], minlength=ncomp)
    pts = _positions(keys, info, cfg.resolution, 4)
    comps = []
    for c in range(ncomp):
        mask = labels == c
        cp = pts[mask]
        comps.append(Component(int(vcount[c] - ecount[c] + fcount[c]), int(vcount[c]), int(ecount[c]),
                               int(fcount[c]), tuple(cp[0]), (tuple(cp.min(0)), tuple(cp.max(0)))))
    return SampledLink(comps, cfg, pts, labels, polys)


def match_components(link: SampledLink, involution, samples: int = 24) -> dict:
    """Orbit structure of the link components under a coordinate sign involution.

    Returns ``{"fixed": [ids], "swapped": [(i, j), ...]}``.
    """
    if link.n_components == 0:
        return {"fixed": [], "swapped": []}
    sig = np.array(involution, dtype=float)
    tree = cKDTree(link.points)
    tol = 4.0 * 2.0 / link.config.resolution
    image = {}
    for c in range(link.n_components):
        idx = np.flatnonzero(link.labels == c)
        pick = idx[np.linspace(0, len(idx) - 1, min(samples, len(idx))).astype(int)]
        dist, near = tree.query(link.points[pick] * sig)
        if np.any(dist > tol):
            raise ResolutionTooCoarse("involution image of a component not found on the mesh")
        targets = set(link.labels[near].tolist())
        if len(targets) != 1:
            raise ResolutionTooCoarse("component image is spread over several components")
        image[c] = targets.pop()
    fixed, swapped = [], []
    for c, d in image.items():
        if image.get(d) != c:
            raise ResolutionTooCoarse("component images do not form an involution")
        if c == d:
            fixed.append(c)
        elif c < d:
            swapped.append((c, d))
    return {"fixed": fixed, "swapped": swapped}


def projective_curve_components(f3: Jet, res: int = 64) -> int:
    """Connected components of the real projective plane curve of a ternary form in (y, z, t)."""
    sing = real_projective_singular_points(f3)
    if sing:
        raise NotSmooth(f"real singular point(s) {sing}")
    G = Jet({m[1:]: c for m, c in f3.items()}, f3.order, nvars=3)
    cfg = GridConfig(resolution=res, eps=Fraction(1))
    cells, info = _march(G, cfg, 3)
    if not cells:
        return 0
    allkeys = np.concatenate([c.reshape(-1) for c in cells])
    keys, inv = np.unique(allkeys, return_inverse=True)
    segs = inv.reshape(-1, 2)
    nV = len(keys)
    g = coo_matrix((np.ones(len(segs)), (segs[:, 0], segs[:, 1])), shape=(nV, nV))
    ncomp, labels = connected_components(g, directed=False)
    pts = _positions(keys, info, res, 3)
    tree = cKDTree(pts)
    # identify antipodal components
    parent = list(range(ncomp))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a
    for c in range(ncomp):
        i = int(np.flatnonzero(labels == c)[0])
        _, j = tree.query(-pts[i])
        parent[find(c)] = find(int(labels[j]))
    return len({find(c) for c in range(ncomp)})


def region_arcs_numeric(f: Jet, samples: int = 4096, eps: float = 1e-3) -> int:
    """Number of maximal negative arcs of f(z, t) on a small circle (crossings only)."""
    ev = _compile(f)
    th = np.linspace(0.0, 2 * np.pi, samples, endpoint=False)
    P = np.zeros((samples, 4))
    P[:, 2] = eps * np.cos(th)
    P[:, 3] = eps * np.sin(th)
    neg = ev(P) < 0
    if neg.all() or not neg.any():
        return 0
    return int(np.count_nonzero(neg & ~np.roll(neg, 1)))


def write_off(link: SampledLink, path) -> None:
    """Dump the mesh (4-dimensional vertices) in 4OFF text format."""
    polys = link.polygons or []
    nf = sum(len(p) for p in polys)
    with open(path, "w") as fh:
        fh.write("4OFF\n")
        fh.write(f"{len(link.points)} {nf} 0\n")
        for p in _to_sphere(link.points, link.config) if len(link.points) else []:
            fh.write(" ".join(f"{v:.9g}" for v in p) + "\n")
        for p in polys:
            for row in p:
                fh.write(f"{len(row)} " + " ".join(str(int(v)) for v in row) + "\n")
