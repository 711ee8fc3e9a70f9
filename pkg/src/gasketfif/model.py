"""Assembly of the interpolation system on the product of two gaskets.

A model bundles the two gasket geometries, the subdivision depth N, the
vertical scaling field alpha and the shift field h.  Data values live on
the product vertex set V_N, vanish on the boundary, and fix the corner
values of each shift cell; the shift field is the tensor-barycentric
interpolant of those nine corner values, which makes every junction
compatibility identity hold by construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ContractionError, ValidationError
from .gasket import (
    Address,
    GasketSpec,
    address_point,
    bary_f,
    canonicalize,
    enumerate_vertices,
    standard_gasket,
)


def words_of_length(n: int) -> list:
    return ["".join(p) for p in itertools.product("123", repeat=n)]


@dataclass(frozen=True)
class ProductVertex:
    """A vertex of the product grid, keyed by canonical addresses."""

    first: Address
    second: Address

    def __str__(self):
        return f"{self.first}|{self.second}"


@dataclass(frozen=True)
class DataSet:
    """Interpolation values z on the depth-N product vertex set.

    Complete (every canonical vertex of V_N has a value), zero on the
    boundary, and single-valued: feeding two representations of the same
    point with different z is a hard error.
    """

    n: int
    entries: dict = field(compare=False)

    @classmethod
    def build(cls, n: int, triples) -> "DataSet":
        """Validate raw (first, second, z) triples into a DataSet.

        Addresses may be Address objects or "word@corner" strings and need
        not be canonical.
        """
        if n < 1:
            raise ValidationError("depth N must be >= 1")
        entries = {}
        for first, second, z in triples:
            a = first if isinstance(first, Address) else Address.parse(first)
            b = second if isinstance(second, Address) else Address.parse(second)
            key = ProductVertex(canonicalize(a), canonicalize(b))
            z = float(z)
            if key in entries and entries[key] != z:
                raise ValidationError(
                    f"conflicting values {entries[key]} and {z} for vertex {key}"
                )
            entries[key] = z
        verts = enumerate_vertices(n)
        required = {ProductVertex(a, b) for a in verts for b in verts}
        missing = sorted(str(v) for v in required - set(entries))
        if missing:
            shown = ", ".join(missing[:8])
            more = "" if len(missing) <= 8 else f" (+{len(missing) - 8} more)"
            raise ValidationError(f"missing data for vertices: {shown}{more}")
        extra = set(entries) - required
        if extra:
            raise ValidationError(
                f"data contains vertices outside V_{n}: "
                + ", ".join(sorted(str(v) for v in extra)[:8])
            )
        for key, z in entries.items():
            if (not key.first.word or not key.second.word) and z != 0.0:
                raise ValidationError(
                    f"boundary vertex {key} must carry z = 0, got {z}"
                )
        return cls(n, entries)

    @classmethod
    def zeros(cls, n: int) -> "DataSet":
        verts = enumerate_vertices(n)
        return cls(n, {ProductVertex(a, b): 0.0 for a in verts for b in verts})


@dataclass(frozen=True)
class ScalingField:
    """Vertical scaling alpha per cell-pair: a constant or a 3x3 corner
    tensor extended bilinearly in barycentric coordinates."""

    n: int
    cells: dict = field(compare=False)  # (omega, eta) -> float | 3x3 ndarray

    @classmethod
    def constant(cls, value: float, n: int) -> "ScalingField":
        value = float(value)
        words = words_of_length(n)
        return cls(n, {(w1, w2): value for w1 in words for w2 in words})

    @classmethod
    def from_cells(cls, mapping: dict, n: int) -> "ScalingField":
        words = words_of_length(n)
        cells = {}
        for w1 in words:
            for w2 in words:
                if (w1, w2) not in mapping:
                    raise ValidationError(f"scaling field misses cell-pair {w1}|{w2}")
                v = mapping[(w1, w2)]
                if np.isscalar(v):
                    cells[(w1, w2)] = float(v)
                else:
                    arr = np.asarray(v, dtype=float)
                    if arr.shape != (3, 3):
                        raise ValidationError(
                            f"corner tensor for {w1}|{w2} must be 3x3, got {arr.shape}"
                        )
                    cells[(w1, w2)] = arr
        return cls(n, cells)

    def cell(self, omega: str, eta: str):
        return self.cells[(omega, eta)]

    def sup(self) -> float:
        # bilinear forms attain their sup at corner pairs, so this is exact
        out = 0.0
        for v in self.cells.values():
            m = abs(v) if np.isscalar(v) else float(np.max(np.abs(v)))
            out = max(out, m)
        return out

    def corner_range(self) -> float:
        out = 0.0
        for v in self.cells.values():
            if not np.isscalar(v):
                out = max(out, float(np.max(v) - np.min(v)))
        return out


@dataclass(frozen=True)
class FifModel:
    """Immutable, fully assembled interpolation system with its derived
    constants."""

    gasket1: GasketSpec
    gasket2: GasketSpec
    n: int
    scaling: ScalingField
    shift: dict = field(compare=False)  # (omega, eta) -> 3x3 corner values
    data: DataSet = field(compare=False)
    a: float = 0.0
    alpha_sup: float = 0.0
    shift_sup: float = 0.0
    f_sup_bound: float = 0.0
    k_h: float = 0.0
    k_alpha: float = 0.0
    s_h: float = 1.0
    s_alpha: float = 1.0


def build_model(
    data: DataSet,
    scaling: ScalingField,
    g1: GasketSpec = None,
    g2: GasketSpec = None,
) -> FifModel:
    """Assemble a FifModel from validated data and a scaling field."""
    g1 = g1 if g1 is not None else standard_gasket()
    g2 = g2 if g2 is not None else standard_gasket()
    if scaling.n != data.n:
        raise ValidationError(
            f"scaling field depth {scaling.n} does not match data depth {data.n}"
        )
    alpha_sup = scaling.sup()
    if alpha_sup >= 1.0:
        raise ContractionError(f"scaling sup norm {alpha_sup} must be < 1")
    n = data.n
    words = words_of_length(n)
    shift = {}
    shift_sup = 0.0
    k_h_range = 0.0
    for w1 in words:
        for w2 in words:
            c = np.empty((3, 3))
            for i in (1, 2, 3):
                ai = canonicalize(Address(w1, i))
                for j in (1, 2, 3):
                    bj = canonicalize(Address(w2, j))
                    c[i - 1, j - 1] = data.entries[ProductVertex(ai, bj)]
            c.setflags(write=False)
            shift[(w1, w2)] = c
            shift_sup = max(shift_sup, float(np.max(np.abs(c))))
            k_h_range = max(k_h_range, float(np.max(c) - np.min(c)))
    min_sep = min(g1.min_side, g2.min_side)
    return FifModel(
        gasket1=g1,
        gasket2=g2,
        n=n,
        scaling=scaling,
        shift=shift,
        data=data,
        a=2.0**-n,
        alpha_sup=alpha_sup,
        shift_sup=shift_sup,
        f_sup_bound=shift_sup / (1.0 - alpha_sup),
        k_h=k_h_range / min_sep,
        k_alpha=scaling.corner_range() / min_sep,
    )


def _bilinear(cell, lam, mu) -> float:
    if np.isscalar(cell):
        return float(cell)
    return float(
        lam[0] * (cell[0, 0] * mu[0] + cell[0, 1] * mu[1] + cell[0, 2] * mu[2])
        + lam[1] * (cell[1, 0] * mu[0] + cell[1, 1] * mu[1] + cell[1, 2] * mu[2])
        + lam[2] * (cell[2, 0] * mu[0] + cell[2, 1] * mu[1] + cell[2, 2] * mu[2])
    )


def eval_scaling(model: FifModel, omega: str, eta: str, t, s) -> float:
    """alpha_{omega eta}(t, s) for preimage coordinates (t, s)."""
    lam = bary_f(model.gasket1, float(t[0]), float(t[1]))
    mu = bary_f(model.gasket2, float(s[0]), float(s[1]))
    return _bilinear(model.scaling.cell(omega, eta), lam, mu)


def eval_shift(model: FifModel, omega: str, eta: str, t, s) -> float:
    """h_{omega eta}(t, s) for preimage coordinates (t, s)."""
    lam = bary_f(model.gasket1, float(t[0]), float(t[1]))
    mu = bary_f(model.gasket2, float(s[0]), float(s[1]))
    return _bilinear(model.shift[(omega, eta)], lam, mu)


def sup_bounds(model: FifModel) -> tuple:
    """(alpha sup, shift sup, a-priori sup bound on f)."""
    return model.alpha_sup, model.shift_sup, model.f_sup_bound


def touching_pairs(n: int) -> list:
    """All touching pairs of distinct depth-n cells of one gasket factor.

    Each entry is (omega, tau, i, j) with omega = w.a.b^k, tau = w.b.a^k
    and shared point L_omega(p_i) = L_tau(p_j), i.e. i = b, j = a.
    """
    out = []
    for plen in range(n):
        k = n - plen - 1
        for w in words_of_length(plen):
            for a in (1, 2, 3):
                for b in range(a + 1, 4):
                    omega = w + str(a) + str(b) * k
                    tau = w + str(b) + str(a) * k
                    out.append((omega, tau, b, a))
    return out


def sample_points(spec: GasketSpec, count: int) -> np.ndarray:
    """Deterministic gasket points: the canonical vertices of the coarsest
    depth that yields at least `count` of them (corners come first)."""
    m = 0
    while 3 * (3**m + 1) // 2 < count:
        m += 1
    verts = enumerate_vertices(m)[:count]
    return np.array([address_point(spec, a) for a in verts])


@dataclass
class CompatibilityReport:
    max_discrepancy: float
    first_factor_pairs: int
    second_factor_pairs: int
    worst: str
    violations: list  # (description, discrepancy) above tolerance


def check_compatibility(
    model: FifModel, samples_per_edge: int = 10, tol: float = 1e-12
) -> CompatibilityReport:
    """Verify the shift field agrees across every junction of depth-N cells.

    Covers all touching pairs in either factor, not only the same-prefix
    neighbours; the shared point is fed as an exact corner so the check is
    not polluted by barycentric round-off.
    """
    n = model.n
    words = words_of_length(n)
    pairs1 = touching_pairs(n)
    pairs2 = touching_pairs(n)
    mu2 = np.array(
        [bary_f(model.gasket2, p[0], p[1]) for p in sample_points(model.gasket2, samples_per_edge)]
    )
    lam1 = np.array(
        [bary_f(model.gasket1, p[0], p[1]) for p in sample_points(model.gasket1, samples_per_edge)]
    )
    worst = ""
    max_disc = 0.0
    violations = []

    def record(desc, disc):
        nonlocal max_disc, worst
        if disc > max_disc:
            max_disc, worst = disc, desc
        if disc > tol:
            violations.append((desc, disc))

    # junctions in the first factor: h_{omega eta}(p_i, s) = h_{tau eta}(p_j, s)
    for omega, tau, i, j in pairs1:
        for eta in words:
            row_a = model.shift[(omega, eta)][i - 1]
            row_b = model.shift[(tau, eta)][j - 1]
            disc = float(np.max(np.abs(mu2 @ (row_a - row_b))))
            record(f"first-factor junction {omega}/{tau} x {eta}", disc)
    # junctions in the second factor: h_{omega eta}(t, q_i) = h_{omega xi}(t, q_j)
    for eta, xi, i, j in pairs2:
        for omega in words:
            col_a = model.shift[(omega, eta)][:, i - 1]
            col_b = model.shift[(omega, xi)][:, j - 1]
            disc = float(np.max(np.abs(lam1 @ (col_a - col_b))))
            record(f"second-factor junction {eta}/{xi} x {omega}", disc)
    # double junctions at corner pairs
    for omega, tau, i, j in pairs1:
        for eta, xi, k, l in pairs2:
            disc = abs(
                model.shift[(omega, eta)][i - 1, k - 1]
                - model.shift[(tau, xi)][j - 1, l - 1]
            )
            record(f"corner junction {omega}/{tau} x {eta}/{xi}", disc)
    return CompatibilityReport(
        max_discrepancy=max_disc,
        first_factor_pairs=len(pairs1),
        second_factor_pairs=len(pairs2),
        worst=worst,
        violations=violations,
    )


def perturb_shift(
    model: FifModel, omega: str, eta: str, i: int, j: int, delta: float
) -> FifModel:
    """Copy of the model with one shift corner value perturbed.

    Breaks junction compatibility on purpose; used by diagnostics and
    tests, never by construction.
    """
    shift = dict(model.shift)
    c = np.array(shift[(omega, eta)])
    c[i - 1, j - 1] += delta
    c.setflags(write=False)
    shift[(omega, eta)] = c
    return replace(model, shift=shift)
