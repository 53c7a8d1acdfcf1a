"""Algebraic curvature tensors with Kaehler symmetries.

Components are stored densely as a ``(2m, 2m, 2m, 2m)`` numpy object array of
``Fraction``; ``R[i, j, k, l] = R(b_i, b_j, b_k, b_l)`` in the real basis of the space.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import lcm
from typing import Mapping, Optional

import numpy as np

from .errors import DegeneratePlane, DimensionMismatch, InvalidTensor, NullVector
from .linalg import Space, Vector, apply_J, as_scalar, inner

SYMMETRY_NAMES = ("antisym12", "bianchi", "antisym34", "j_invariance", "pair_symmetry")


def _zeros(n: int) -> np.ndarray:
    arr = np.empty((n, n, n, n), dtype=object)
    arr[...] = Fraction(0)
    return arr


_as_fractions = np.frompyfunc(as_scalar, 1, 1)


def _to_integers(values) -> tuple[list[int], int]:
    den = lcm(*(v.denominator for v in values)) if values else 1
    return [int(v * den) for v in values], den


class CurvatureTensor:
    """Dense exact 4-index tensor on a :class:`Space`."""

    def __init__(self, space: Space, components: np.ndarray):
        n = space.dim
        if components.shape != (n, n, n, n):
            raise DimensionMismatch(
                f"components of shape {components.shape} for real dimension {n}"
            )
        arr = _as_fractions(np.asarray(components, dtype=object))
        arr.flags.writeable = False
        self.space = space
        self.components = arr

    @classmethod
    def zero(cls, space: Space) -> "CurvatureTensor":
        return cls(space, _zeros(space.dim))

    @classmethod
    def from_entries(cls, space: Space, entries: Mapping[tuple[int, int, int, int], object]):
        arr = _zeros(space.dim)
        for idx, value in entries.items():
            arr[idx] = as_scalar(value)
        return cls(space, arr)

    @classmethod
    def from_flat(cls, space: Space, values) -> "CurvatureTensor":
        n = space.dim
        arr = np.empty(n**4, dtype=object)
        arr[:] = [as_scalar(v) for v in values]
        return cls(space, arr.reshape(n, n, n, n))

    def flat(self) -> list[Fraction]:
        return list(self.components.flat)

    def entries(self) -> dict[tuple[int, int, int, int], Fraction]:
        """Nonzero components keyed by index tuple, lexicographic order."""
        return {
            tuple(int(i) for i in idx): self.components[tuple(idx)]
            for idx in np.argwhere(self.components != 0)
        }

    def __getitem__(self, idx):
        return self.components[idx]

    def _same_space(self, other: "CurvatureTensor"):
        if self.space != other.space:
            raise DimensionMismatch("tensors live on different spaces")

    def __add__(self, other):
        if not isinstance(other, CurvatureTensor):
            return NotImplemented
        self._same_space(other)
        return CurvatureTensor(self.space, self.components + other.components)

    def __sub__(self, other):
        if not isinstance(other, CurvatureTensor):
            return NotImplemented
        self._same_space(other)
        return CurvatureTensor(self.space, self.components - other.components)

    def __neg__(self):
        return CurvatureTensor(self.space, -self.components)

    def __mul__(self, scalar):
        if isinstance(scalar, CurvatureTensor):
            return NotImplemented
        return CurvatureTensor(self.space, self.components * as_scalar(scalar))

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, CurvatureTensor):
            return NotImplemented
        return self.space == other.space and bool(np.all(self.components == other.components))

    __hash__ = None

    def is_zero(self) -> bool:
        return not bool(np.any(self.components != 0))

    @cached_property
    def _integer_form(self):
        items = self.entries()
        ints, den = _to_integers(list(items.values()))
        return [(i, j, k, l, v) for (i, j, k, l), v in zip(items, ints)], den

    def __repr__(self):
        return f"CurvatureTensor(space={self.space.signature}, nonzero={len(self.entries())})"


def combination(space: Space, coeffs, tensors) -> CurvatureTensor:
    arr = _zeros(space.dim)
    for c, T in zip(coeffs, tensors):
        if c:
            arr = arr + T.components * as_scalar(c)
    return CurvatureTensor(space, arr)


def evaluate(R: CurvatureTensor, x: Vector, y: Vector, z: Vector, u: Vector) -> Fraction:
    """Quadrilinear contraction ``sum R[i,j,k,l] x_i y_j z_k u_l``."""
    R.space.check(x, y, z, u)
    terms, den = R._integer_form
    if not terms:
        return Fraction(0)
    (xi, dx), (yi, dy), (zi, dz), (ui, du) = (_to_integers(v.coords) for v in (x, y, z, u))
    total = 0
    for i, j, k, l, v in terms:
        a = xi[i]
        if a:
            b = yi[j]
            if b:
                total += v * a * b * zi[k] * ui[l]
    return Fraction(total, den * dx * dy * dz * du)


def pi1(space: Space, x: Vector, y: Vector, z: Vector, u: Vector) -> Fraction:
    return inner(space, x, u) * inner(space, y, z) - inner(space, x, z) * inner(space, y, u)


def pi2(space: Space, x: Vector, y: Vector, z: Vector, u: Vector) -> Fraction:
    Jy, Jz, Ju = apply_J(space, y), apply_J(space, z), apply_J(space, u)
    return (
        inner(space, x, Ju) * inner(space, y, Jz)
        - inner(space, x, Jz) * inner(space, y, Ju)
        - 2 * inner(space, x, Jy) * inner(space, z, Ju)
    )


def _metric_tables(space: Space):
    basis = space.basis()
    G = [[inner(space, a, b) for b in basis] for a in basis]
    W = [[inner(space, a, apply_J(space, b)) for b in basis] for a in basis]
    return G, W


@lru_cache(maxsize=None)
def _pi1_plus_pi2(space: Space) -> np.ndarray:
    n = space.dim
    G, W = _metric_tables(space)
    arr = _zeros(n)
    for i, j, k, l in itertools.product(range(n), repeat=4):
        p1 = G[i][l] * G[j][k] - G[i][k] * G[j][l]
        p2 = W[i][l] * W[j][k] - W[i][k] * W[j][l] - 2 * W[i][j] * W[k][l]
        if p1 or p2:
            arr[i, j, k, l] = p1 + p2
    arr.flags.writeable = False
    return arr


def model_tensor(space: Space, mu) -> CurvatureTensor:
    """The constant holomorphic sectional curvature tensor ``(mu/4)(pi1 + pi2)``."""
    return CurvatureTensor(space, _pi1_plus_pi2(space) * (as_scalar(mu) / 4))


def j_matrix(space: Space) -> np.ndarray:
    """Matrix with ``J b_k = sum_a J[a, k] b_a``."""
    n = space.dim
    J = np.zeros((n, n), dtype=object)
    for k in range(n):
        idx, sign = space.j_image(k)
        J[idx, k] = sign
    return J


def permuted(arr: np.ndarray, perm: tuple[int, int, int, int]) -> np.ndarray:
    """``out[i0, i1, i2, i3] = arr[i_perm[0], i_perm[1], i_perm[2], i_perm[3]]``."""
    axes = [0] * 4
    for pos, src in enumerate(perm):
        axes[src] = pos
    return np.transpose(arr, axes)


def _j_on_last_pair(space: Space, arr: np.ndarray) -> np.ndarray:
    """Components of ``R(X, Y, JZ, JU)``."""
    # J is a signed permutation of the basis: J b_k = sign_k b_{idx_k}
    idx, sign = zip(*(space.j_image(k) for k in range(space.dim)))
    idx = np.array(idx)
    signs = np.array(sign, dtype=object)
    out = arr[:, :, idx, :][:, :, :, idx]
    return out * signs[:, None] * signs[None, :]


@dataclass
class SymmetryReport:
    failures: dict[str, tuple[int, int, int, int]] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def status(self) -> dict[str, bool]:
        return {name: name not in self.failures for name in SYMMETRY_NAMES}

    def __str__(self):
        if self.passed:
            return "all symmetries hold"
        return "; ".join(f"{name} fails at {idx}" for name, idx in self.failures.items())


def _first_nonzero(arr: np.ndarray):
    hits = np.argwhere(arr != 0)
    if len(hits) == 0:
        return None
    return tuple(int(i) for i in hits[0])


def validate_symmetries(R: CurvatureTensor) -> SymmetryReport:
    A = R.components
    residuals = {
        "antisym12": A + permuted(A, (1, 0, 2, 3)),
        "bianchi": A + permuted(A, (1, 2, 0, 3)) + permuted(A, (2, 0, 1, 3)),
        "antisym34": A + permuted(A, (0, 1, 3, 2)),
        "j_invariance": A - _j_on_last_pair(R.space, A),
        "pair_symmetry": A - permuted(A, (2, 3, 0, 1)),
    }
    report = SymmetryReport()
    for name in SYMMETRY_NAMES:
        idx = _first_nonzero(residuals[name])
        if idx is not None:
            report.failures[name] = idx
    return report


def require_valid(R: CurvatureTensor) -> None:
    report = validate_symmetries(R)
    if not report.passed:
        raise InvalidTensor(f"not a Kaehler curvature tensor: {report}", report)


def sectional(R: CurvatureTensor, x: Vector, y: Vector) -> Fraction:
    denom = pi1(R.space, x, y, y, x)
    if denom == 0:
        raise DegeneratePlane("the plane spanned by the pair is degenerate")
    return evaluate(R, x, y, y, x) / denom


def holomorphic_sectional(R: CurvatureTensor, x: Vector) -> Fraction:
    gxx = inner(R.space, x, x)
    if gxx == 0:
        raise NullVector("holomorphic sectional curvature is undefined on null vectors")
    Jx = apply_J(R.space, x)
    return evaluate(R, x, Jx, Jx, x) / (gxx * gxx)


@dataclass
class Verdict:
    constant: bool
    mu: Fraction
    component_witness: Optional[tuple[tuple[int, int, int, int], Fraction]] = None
    plane_witness: Optional[tuple[Vector, Fraction, Vector, Fraction]] = None

    def __str__(self):
        if self.constant:
            return f"ConstantHSC(mu={self.mu})"
        return f"NotConstant(component {self.component_witness})"


def _holomorphic_witness(R: CurvatureTensor, mu: Fraction, b: Vector, rng: random.Random):
    """Find a non-null vector whose H differs from ``mu``; ``b`` has H = mu."""
    space = R.space
    basis = space.basis()
    candidates = list(basis)
    for u, v in itertools.combinations(basis, 2):
        candidates += [u + v, u - v, u + 2 * v]
    candidates += [Vector(rng.randint(-3, 3) for _ in range(space.dim)) for _ in range(200)]
    for v in candidates:
        if inner(space, v, v) == 0:
            continue
        h = holomorphic_sectional(R, v)
        if h != mu:
            return b, mu, v, h
    return None


def is_constant_hsc(R: CurvatureTensor) -> Verdict:
    require_valid(R)
    space = R.space
    b = space.basis_vector(0)  # every basis vector is non-null
    mu = holomorphic_sectional(R, b)
    residual = R - model_tensor(space, mu)
    idx = _first_nonzero(residual.components)
    if idx is None:
        return Verdict(constant=True, mu=mu)
    witness = _holomorphic_witness(R, mu, b, random.Random(0))
    return Verdict(
        constant=False,
        mu=mu,
        component_witness=(idx, residual.components[idx]),
        plane_witness=witness,
    )
