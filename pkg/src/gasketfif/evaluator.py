"""Evaluation of the interpolation function.

Four routes are provided and cross-check each other: the exact recursion
at dyadic addresses, a truncated unrolling at arbitrary points with a
certified error bound, the contraction operator on grid functions (whose
fixed point is f), and chaos-game sampling of the graph.
"""

from __future__ import annotations

import os
import tempfile
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import PreconditionError
from .gasket import (
    Address,
    GasketSpec,
    address_point,
    barycentric_many,
    bary_f,
    canonicalize,
    enumerate_vertices,
    locate,
    word_map_inverse,
    word_map_xy,
)
from .model import FifModel, _bilinear


def _padded_words(model: FifModel, addr_t: Address, addr_s: Address):
    """Equalize the two words to a common length that is a multiple of N
    by repeating the terminal corner: (w, v) and (w.v^r, v) name the same
    point."""
    n = model.n
    m = max(len(addr_t.word), len(addr_s.word), 1)
    m = n * ((m + n - 1) // n)
    wt = addr_t.word + str(addr_t.corner) * (m - len(addr_t.word))
    ws = addr_s.word + str(addr_s.corner) * (m - len(addr_s.word))
    return wt, ws, m


def eval_exact(model: FifModel, addr_t: Address, addr_s: Address) -> float:
    """f at an exact product vertex, by peeling N letters per step.

    The recursion bottoms out at a corner pair, where f vanishes; the
    result carries no truncation error, only float rounding.
    """
    n = model.n
    wt, ws, m = _padded_words(model, addr_t, addr_s)
    g1, g2 = model.gasket1, model.gasket2
    pt = g1.corners[addr_t.corner - 1]
    qs = g2.corners[addr_s.corner - 1]
    x = 0.0
    for r in range(m // n, 0, -1):
        t_arg = word_map_xy(g1, wt[r * n :], pt[0], pt[1])
        s_arg = word_map_xy(g2, ws[r * n :], qs[0], qs[1])
        block_t = wt[(r - 1) * n : r * n]
        block_s = ws[(r - 1) * n : r * n]
        lam = bary_f(g1, t_arg[0], t_arg[1])
        mu = bary_f(g2, s_arg[0], s_arg[1])
        alpha = _bilinear(model.scaling.cell(block_t, block_s), lam, mu)
        h = _bilinear(model.shift[(block_t, block_s)], lam, mu)
        x = alpha * x + h
    return x


def eval_approx(model: FifModel, t, s, k: int) -> tuple:
    """Truncated unrolling of f at an arbitrary point of the product.

    Locates the nested cell chain of (t, s) down k*N letters, accumulates
    the shift contributions, and drops the residual f-term, which is worth
    at most alpha_sup^k * f_sup_bound.  Returns (value, error_bound).
    """
    if k < 1:
        raise PreconditionError("truncation depth k must be >= 1")
    n = model.n
    g1, g2 = model.gasket1, model.gasket2
    d = k * n
    wt = locate(g1, t, d)
    ws = locate(g2, s, d)
    tb = word_map_inverse(g1, wt, t)
    sb = word_map_inverse(g2, ws, s)
    # u[r] = image of the deep preimage under the last k-r blocks, i.e. the
    # argument fed to block r+1 of the recursion
    ut = [(float(tb[0]), float(tb[1]))] * (k + 1)
    us = [(float(sb[0]), float(sb[1]))] * (k + 1)
    for r in range(k - 1, 0, -1):
        ut[r] = word_map_xy(g1, wt[r * n : (r + 1) * n], *ut[r + 1])
        us[r] = word_map_xy(g2, ws[r * n : (r + 1) * n], *us[r + 1])
    value = 0.0
    coeff = 1.0
    for r in range(1, k + 1):
        block_t = wt[(r - 1) * n : r * n]
        block_s = ws[(r - 1) * n : r * n]
        lam = bary_f(g1, ut[r][0], ut[r][1])
        mu = bary_f(g2, us[r][0], us[r][1])
        value += coeff * _bilinear(model.shift[(block_t, block_s)], lam, mu)
        coeff *= _bilinear(model.scaling.cell(block_t, block_s), lam, mu)
    bound = model.alpha_sup**k * model.f_sup_bound
    return value, bound


@dataclass(frozen=True)
class _Frame:
    """Per-factor indexing of a depth-m vertex set for grid functions."""

    verts: tuple
    index: dict
    coords: np.ndarray
    pre_idx: np.ndarray
    pre_lam: np.ndarray
    groups: dict  # block word -> vertex index array


@lru_cache(maxsize=64)
def _frame(spec: GasketSpec, depth: int, n: int) -> _Frame:
    verts = enumerate_vertices(depth)
    index = {a: i for i, a in enumerate(verts)}
    coords = np.array([address_point(spec, a) for a in verts])
    pre_idx = np.empty(len(verts), dtype=np.intp)
    groups = {}
    for i, a in enumerate(verts):
        padded = a.word + str(a.corner) * (depth - len(a.word))
        # the canonical padding starts with the lexicographically smallest
        # containing cell, which is the deterministic junction rule
        block = padded[:n]
        pre = canonicalize(Address(padded[n:], a.corner))
        pre_idx[i] = index[pre]
        groups.setdefault(block, []).append(i)
    groups = {w: np.array(ix, dtype=np.intp) for w, ix in groups.items()}
    pre_lam = barycentric_many(spec, coords[pre_idx])
    return _Frame(tuple(verts), index, coords, pre_idx, pre_lam, groups)


class GridFunction:
    """Values on a depth-m product vertex grid with tensor-barycentric
    off-grid extension; the domain and range of the contraction operator."""

    def __init__(self, model: FifModel, depth: int, values: np.ndarray = None):
        if depth < model.n or depth % model.n:
            raise PreconditionError(
                f"grid depth must be a positive multiple of N={model.n}"
            )
        self.model = model
        self.depth = depth
        self.frame1 = _frame(model.gasket1, depth, model.n)
        self.frame2 = _frame(model.gasket2, depth, model.n)
        shape = (len(self.frame1.verts), len(self.frame2.verts))
        if values is None:
            values = np.zeros(shape)
        if values.shape != shape:
            raise PreconditionError(f"values must have shape {shape}")
        self.values = values

    def at(self, addr_t: Address, addr_s: Address) -> float:
        i = self.frame1.index[canonicalize(addr_t)]
        j = self.frame2.index[canonicalize(addr_s)]
        return float(self.values[i, j])

    def __call__(self, t, s) -> float:
        """Off-grid evaluation: bilinear in the barycentric coordinates of
        the containing depth-m cell-pair, from its nine corner values."""
        g1, g2 = self.model.gasket1, self.model.gasket2
        w1 = locate(g1, t, self.depth)
        w2 = locate(g2, s, self.depth)
        tb = word_map_inverse(g1, w1, t)
        sb = word_map_inverse(g2, w2, s)
        lam = bary_f(g1, float(tb[0]), float(tb[1]))
        mu = bary_f(g2, float(sb[0]), float(sb[1]))
        rows = [self.frame1.index[canonicalize(Address(w1, i))] for i in (1, 2, 3)]
        cols = [self.frame2.index[canonicalize(Address(w2, j))] for j in (1, 2, 3)]
        corner = self.values[np.ix_(rows, cols)]
        return _bilinear(corner, lam, mu)

    def as_dict(self) -> dict:
        from .model import ProductVertex

        return {
            ProductVertex(a, b): float(self.values[i, j])
            for i, a in enumerate(self.frame1.verts)
            for j, b in enumerate(self.frame2.verts)
        }

    def copy(self) -> "GridFunction":
        return GridFunction(self.model, self.depth, self.values.copy())


def rb_apply(model: FifModel, g: GridFunction) -> GridFunction:
    """One application of the contraction operator T on a grid function.

    Each grid vertex is pulled back through its (lexicographically
    smallest) containing depth-N cell-pair; the preimages of grid vertices
    are again grid vertices, so the application is exact.
    """
    if g.depth < model.n:
        raise PreconditionError("grid depth must be at least N")
    f1, f2 = g.frame1, g.frame2
    out = np.empty_like(g.values)
    for w1, rows in f1.groups.items():
        lam = f1.pre_lam[rows]
        pr = f1.pre_idx[rows]
        for w2, cols in f2.groups.items():
            mu = f2.pre_lam[cols]
            pc = f2.pre_idx[cols]
            h = lam @ model.shift[(w1, w2)] @ mu.T
            sc = model.scaling.cell(w1, w2)
            amat = sc if np.isscalar(sc) else lam @ sc @ mu.T
            out[np.ix_(rows, cols)] = amat * g.values[np.ix_(pr, pc)] + h
    return GridFunction(model, g.depth, out)


def solve_fixed_point(model: FifModel, depth: int, tol: float) -> GridFunction:
    """Iterate T from the zero grid function until the sup change is <= tol.

    The geometric contraction rate bounds the iteration count by
    log(tol / f_sup_bound) / log(alpha_sup) + 1.
    """
    if tol <= 0:
        raise PreconditionError("tolerance must be positive")
    g = GridFunction(model, depth)
    iterations = 0
    while True:
        nxt = rb_apply(model, g)
        iterations += 1
        change = float(np.max(np.abs(nxt.values - g.values)))
        g = nxt
        if change <= tol:
            break
        if iterations > 100000:
            raise RuntimeError("fixed-point iteration failed to converge")
    g.iterations = iterations
    return g


@dataclass(frozen=True)
class GraphSample:
    """One point of the graph of f produced by the chaos game."""

    t: tuple
    s: tuple
    value: float


def chaos_game(
    model: FifModel, count: int, seed: int, burn_in: int = 100
) -> list:
    """Random iteration of the lifted maps, started on the graph.

    The orbit starts at (p1, q1, 0), which lies on the graph because f
    vanishes at corner pairs, and stays on it under every map.  Cell-pairs
    are drawn uniformly; the stream is deterministic for a fixed seed.
    """
    if count <= 0:
        raise PreconditionError("count must be positive")
    if burn_in < 0:
        raise PreconditionError("burn_in must be non-negative")
    from .model import words_of_length

    words = words_of_length(model.n)
    rng = np.random.default_rng(seed)
    draws = rng.integers(0, len(words), size=(burn_in + count, 2))
    g1, g2 = model.gasket1, model.gasket2
    t = g1.corners[0]
    s = g2.corners[0]
    x = 0.0
    out = []
    for i in range(burn_in + count):
        w1 = words[draws[i, 0]]
        w2 = words[draws[i, 1]]
        lam = bary_f(g1, t[0], t[1])
        mu = bary_f(g2, s[0], s[1])
        alpha = _bilinear(model.scaling.cell(w1, w2), lam, mu)
        h = _bilinear(model.shift[(w1, w2)], lam, mu)
        x = alpha * x + h
        t = word_map_xy(g1, w1, t[0], t[1])
        s = word_map_xy(g2, w2, s[0], s[1])
        if i >= burn_in:
            out.append(GraphSample(t, s, x))
    return out


def samples_to_csv(samples, path) -> None:
    """Write graph samples as CSV with 17-significant-digit decimals.

    The file is written atomically (temp file + rename)."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write("t_x,t_y,s_x,s_y,f\n")
            for sm in samples:
                fh.write(
                    f"{sm.t[0]:.17g},{sm.t[1]:.17g},"
                    f"{sm.s[0]:.17g},{sm.s[1]:.17g},{sm.value:.17g}\n"
                )
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
