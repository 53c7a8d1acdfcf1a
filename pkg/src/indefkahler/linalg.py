"""Exact vector arithmetic on a pseudo-Euclidean space with compatible complex structure.

The real basis is ordered ``e_0..e_{m-1}, f_0..f_{m-1}`` with ``J e_i = f_i`` and
``J f_i = -e_i``.  The metric is diagonal with ``g(e_i, e_i) = g(f_i, f_i) = eps[i]``,
so signatures are given per complex direction.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, UnrealizableSignature

Scalar = Fraction


def as_scalar(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted in exact arithmetic; pass a Fraction or str")
    return Fraction(value)


def parse_signature(text: str) -> tuple[int, ...]:
    signs = []
    for ch in text.strip():
        if ch == "+":
            signs.append(1)
        elif ch in "-−":
            signs.append(-1)
        else:
            raise ValueError(f"signature characters must be '+' or '-', got {ch!r}")
    if not signs:
        raise ValueError("empty signature")
    return tuple(signs)


@dataclass(frozen=True)
class Space:
    """Tangent space of complex dimension ``m`` with per-direction signs ``eps``."""

    m: int
    eps: tuple[int, ...]

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("complex dimension must be >= 1")
        eps = tuple(int(s) for s in self.eps)
        if len(eps) != self.m or any(s not in (1, -1) for s in eps):
            raise ValueError(f"eps must be {self.m} signs from {{+1, -1}}, got {self.eps!r}")
        object.__setattr__(self, "eps", eps)

    @classmethod
    def from_signature(cls, signature: str) -> "Space":
        eps = parse_signature(signature)
        return cls(len(eps), eps)

    @property
    def dim(self) -> int:
        return 2 * self.m

    @property
    def signature(self) -> str:
        return "".join("+" if s > 0 else "-" for s in self.eps)

    @property
    def is_indefinite(self) -> bool:
        return 1 in self.eps and -1 in self.eps

    def metric_sign(self, k: int) -> int:
        """Sign ``g(b_k, b_k)`` of the k-th real basis vector."""
        return self.eps[k % self.m]

    def basis_vector(self, k: int) -> "Vector":
        coords = [Fraction(0)] * self.dim
        coords[k] = Fraction(1)
        return Vector(coords)

    def e(self, i: int) -> "Vector":
        return self.basis_vector(i)

    def f(self, i: int) -> "Vector":
        return self.basis_vector(self.m + i)

    def basis(self) -> list["Vector"]:
        return [self.basis_vector(k) for k in range(self.dim)]

    def zero(self) -> "Vector":
        return Vector([0] * self.dim)

    def vector(self, coords: Iterable) -> "Vector":
        v = Vector(coords)
        self.check(v)
        return v

    def check(self, *vectors: "Vector") -> None:
        for v in vectors:
            if len(v) != self.dim:
                raise DimensionMismatch(
                    f"vector of length {len(v)} in a space of real dimension {self.dim}"
                )

    def j_image(self, k: int) -> tuple[int, int]:
        """``J b_k = sign * b_index``; returned as ``(index, sign)``."""
        if k < self.m:
            return k + self.m, 1
        return k - self.m, -1


class Vector:
    """Immutable coordinate vector with exact rational entries."""

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable):
        object.__setattr__(self, "coords", tuple(as_scalar(c) for c in coords))

    def __setattr__(self, name, value):
        raise AttributeError("Vector is immutable")

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, k):
        return self.coords[k]

    def __eq__(self, other):
        if isinstance(other, Vector):
            return self.coords == other.coords
        return NotImplemented

    def __hash__(self):
        return hash(self.coords)

    def _check_len(self, other: "Vector"):
        if len(self) != len(other):
            raise DimensionMismatch(f"cannot combine vectors of length {len(self)} and {len(other)}")

    def __add__(self, other):
        if not isinstance(other, Vector):
            return NotImplemented
        self._check_len(other)
        return Vector(a + b for a, b in zip(self.coords, other.coords))

    def __sub__(self, other):
        if not isinstance(other, Vector):
            return NotImplemented
        self._check_len(other)
        return Vector(a - b for a, b in zip(self.coords, other.coords))

    def __neg__(self):
        return Vector(-a for a in self.coords)

    def __mul__(self, scalar):
        if isinstance(scalar, Vector):
            return NotImplemented
        s = as_scalar(scalar)
        return Vector(s * a for a in self.coords)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        s = as_scalar(scalar)
        return Vector(a / s for a in self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def __repr__(self):
        return "Vector([" + ", ".join(str(c) for c in self.coords) + "])"


def inner(space: Space, u: Vector, v: Vector) -> Fraction:
    space.check(u, v)
    m = space.m
    total = Fraction(0)
    for i, s in enumerate(space.eps):
        term = u[i] * v[i] + u[m + i] * v[m + i]
        total += term if s > 0 else -term
    return total


def norm2(space: Space, v: Vector) -> Fraction:
    return inner(space, v, v)


def apply_J(space: Space, v: Vector) -> Vector:
    space.check(v)
    m = space.m
    a, b = v.coords[:m], v.coords[m:]
    return Vector(tuple(-c for c in b) + a)


def gram(space: Space, vectors: Sequence[Vector]) -> list[list[Fraction]]:
    return [[inner(space, u, v) for v in vectors] for u in vectors]


class SignatureClass(enum.Enum):
    POS_POS = "pos-pos"
    POS_NEG = "pos-neg"
    NEG_NEG = "neg-neg"
    DEGENERATE = "degenerate"
    POS_POS_POS = "pos-pos-pos"
    POS_POS_NEG = "pos-pos-neg"
    POS_NEG_NEG = "pos-neg-neg"
    NEG_NEG_NEG = "neg-neg-neg"
    DEGENERATE_TRIPLE = "degenerate-triple"

    @property
    def signs(self) -> tuple[int, ...]:
        """Ordered signs of an orthonormal representative, positives first."""
        if self in (SignatureClass.DEGENERATE, SignatureClass.DEGENERATE_TRIPLE):
            raise ValueError(f"{self.value} has no sign pattern")
        return tuple(1 if part == "pos" else -1 for part in self.value.split("-"))

    @property
    def arity(self) -> int:
        if self is SignatureClass.DEGENERATE:
            return 2
        if self is SignatureClass.DEGENERATE_TRIPLE:
            return 3
        return len(self.value.split("-"))

    @classmethod
    def from_signs(cls, signs: Iterable[int]) -> "SignatureClass":
        ordered = sorted(signs, reverse=True)
        return cls("-".join("pos" if s > 0 else "neg" for s in ordered))

    @classmethod
    def parse(cls, text: str) -> "SignatureClass":
        key = text.strip().lower().replace("_", "-").replace("−", "-")
        if key and set(key) <= {"+", "-"} and len(key) in (2, 3):
            return cls.from_signs([1 if ch == "+" else -1 for ch in key])
        return cls(key)


def classify_pair(space: Space, x: Vector, y: Vector) -> SignatureClass:
    gxx, gxy, gyy = inner(space, x, x), inner(space, x, y), inner(space, y, y)
    det = gxx * gyy - gxy * gxy
    if det == 0:
        return SignatureClass.DEGENERATE
    if det < 0:
        return SignatureClass.POS_NEG
    return SignatureClass.POS_POS if gxx > 0 else SignatureClass.NEG_NEG


def _sign_changes(coeffs: Sequence[Fraction]) -> int:
    nonzero = [c for c in coeffs if c != 0]
    return sum(1 for a, b in zip(nonzero, nonzero[1:]) if (a > 0) != (b > 0))


def classify_triple(space: Space, x: Vector, y: Vector, z: Vector) -> SignatureClass:
    G = gram(space, [x, y, z])
    trace = G[0][0] + G[1][1] + G[2][2]
    minors = (
        G[0][0] * G[1][1] - G[0][1] * G[1][0]
        + G[0][0] * G[2][2] - G[0][2] * G[2][0]
        + G[1][1] * G[2][2] - G[1][2] * G[2][1]
    )
    det = (
        G[0][0] * (G[1][1] * G[2][2] - G[1][2] * G[2][1])
        - G[0][1] * (G[1][0] * G[2][2] - G[1][2] * G[2][0])
        + G[0][2] * (G[1][0] * G[2][1] - G[1][1] * G[2][0])
    )
    if det == 0:
        return SignatureClass.DEGENERATE_TRIPLE
    # Characteristic polynomial of a symmetric matrix is real-rooted, so
    # Descartes' rule counts the positive eigenvalues exactly.
    positives = _sign_changes([Fraction(1), -trace, minors, -det])
    return SignatureClass.from_signs([1] * positives + [-1] * (3 - positives))


def is_antiholomorphic_pair(space: Space, x: Vector, y: Vector) -> bool:
    if x.is_zero() or y.is_zero():
        return False
    return inner(space, x, y) == 0 and inner(space, x, apply_J(space, y)) == 0


def is_antiholomorphic_triple(space: Space, x: Vector, y: Vector, z: Vector) -> bool:
    return (
        is_antiholomorphic_pair(space, x, y)
        and is_antiholomorphic_pair(space, x, z)
        and is_antiholomorphic_pair(space, y, z)
    )


# --- sampling ---------------------------------------------------------------
#
# Unit vectors are produced as columns of a random rational element of U(p, q)
# acting on complex coordinates z_i = a_i + i b_i (v = sum a_i e_i + b_i f_i).
# Such a matrix commutes with J and preserves g, so images of distinct basis
# directions are orthonormal and mutually antiholomorphic with exact unit norms.


def _random_parameter(rng: random.Random) -> Fraction:
    q = rng.randint(2, 5)
    p = rng.randint(1, q - 1)
    return Fraction(p if rng.random() < 0.5 else -p, q)


def _cos_sin(t: Fraction) -> tuple[Fraction, Fraction]:
    d = 1 + t * t
    return (1 - t * t) / d, 2 * t / d


def _cosh_sinh(t: Fraction) -> tuple[Fraction, Fraction]:
    d = 1 - t * t
    return (1 + t * t) / d, 2 * t / d


def _cmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _cadd(a, b):
    return (a[0] + b[0], a[1] + b[1])


def _mix_rows(U, a, b, block):
    """Left-multiply rows ``a, b`` of ``U`` by the complex 2x2 ``block``."""
    (p, q), (r, s) = block
    row_a, row_b = U[a], U[b]
    U[a] = [_cadd(_cmul(p, x), _cmul(q, y)) for x, y in zip(row_a, row_b)]
    U[b] = [_cadd(_cmul(r, x), _cmul(s, y)) for x, y in zip(row_a, row_b)]


def random_unitary(space: Space, rng: random.Random, steps: int | None = None):
    """Random rational matrix in U(p, q) as an ``m x m`` list of complex pairs."""
    m = space.m
    zero, one = Fraction(0), Fraction(1)
    U = [[(one, zero) if i == j else (zero, zero) for j in range(m)] for i in range(m)]
    if steps is None:
        steps = m * m + 2
    for _ in range(steps):
        t = _random_parameter(rng)
        kind = rng.randrange(3) if m > 1 else 0
        if kind == 0:
            a = rng.randrange(m)
            c, s = _cos_sin(t)
            U[a] = [_cmul((c, s), x) for x in U[a]]
            continue
        a, b = rng.sample(range(m), 2)
        same = space.eps[a] == space.eps[b]
        c, s = _cos_sin(t) if same else _cosh_sinh(t)
        if kind == 1:
            block = (((c, zero), (-s if same else s, zero)), ((s, zero), (c, zero)))
        else:
            block = (((c, zero), (zero, s)), ((zero, s if same else -s), (c, zero)))
        _mix_rows(U, a, b, block)
    return U


def unitary_frame(space: Space, rng: random.Random) -> list[Vector]:
    """Images ``U e_0 .. U e_{m-1}``; ``g(u_k, u_k) = eps[k]`` and ``J u_k = U f_k``."""
    U = random_unitary(space, rng)
    m = space.m
    frame = []
    for k in range(m):
        column = [U[i][k] for i in range(m)]
        frame.append(Vector([z[0] for z in column] + [z[1] for z in column]))
    return frame


def _pick_directions(space: Space, signs: Sequence[int], rng: random.Random) -> list[int]:
    pools = {
        1: [i for i, s in enumerate(space.eps) if s > 0],
        -1: [i for i, s in enumerate(space.eps) if s < 0],
    }
    need = {1: sum(1 for s in signs if s > 0), -1: sum(1 for s in signs if s < 0)}
    for sign, count in need.items():
        if len(pools[sign]) < count:
            raise UnrealizableSignature(
                f"signature {space.signature} has {len(pools[sign])} "
                f"{'positive' if sign > 0 else 'negative'} complex directions, "
                f"{count} required for an antiholomorphic family with signs {tuple(signs)}"
            )
    chosen = {sign: rng.sample(pool, need[sign]) for sign, pool in pools.items()}
    out = []
    for s in signs:
        out.append(chosen[s].pop())
    return out


def check_antiholomorphic_realizable(space: Space, signs: Sequence[int]) -> None:
    _pick_directions(space, signs, random.Random(0))


def draw_antiholomorphic(space: Space, signs: Sequence[int], rng: random.Random) -> list[Vector]:
    """Mutually antiholomorphic orthonormal vectors with ``g(v_k, v_k) = signs[k]``."""
    dirs = _pick_directions(space, signs, rng)
    frame = unitary_frame(space, rng)
    return [frame[d] for d in dirs]


def draw_pair(space: Space, signs: Sequence[int], antiholomorphic: bool, rng: random.Random):
    if antiholomorphic:
        x, y = draw_antiholomorphic(space, signs, rng)
        return x, y
    s1, s2 = signs
    candidates_a = [i for i, s in enumerate(space.eps) if s == s1]
    if not candidates_a:
        raise UnrealizableSignature(f"no complex direction of sign {s1:+d} in {space.signature}")
    a = rng.choice(candidates_a)
    others = [i for i, s in enumerate(space.eps) if s == s2 and i != a]
    frame = unitary_frame(space, rng)
    x = frame[a]
    if not others:
        if s1 != s2:
            raise UnrealizableSignature(
                f"a pair of signs {(s1, s2)} needs both signs in {space.signature}"
            )
        return x, apply_J(space, x)
    b = rng.choice(others)
    t = _random_parameter(rng)
    p, q = _cos_sin(t) if s1 == s2 else _cosh_sinh(t)
    y = p * frame[b] + q * apply_J(space, x)
    return x, y


def sample_pair(
    space: Space, cls: SignatureClass, antiholomorphic: bool = True, seed: int = 0
) -> tuple[Vector, Vector]:
    """Deterministic unit pair of the given class; a +1 vector comes first for POS_NEG."""
    if cls.arity != 2 or cls is SignatureClass.DEGENERATE:
        raise ValueError(f"cannot sample a nondegenerate pair of class {cls.value}")
    return draw_pair(space, cls.signs, antiholomorphic, random.Random(seed))


def sample_triple(space: Space, cls: SignatureClass, seed: int = 0) -> tuple[Vector, Vector, Vector]:
    if cls.arity != 3 or cls is SignatureClass.DEGENERATE_TRIPLE:
        raise ValueError(f"cannot sample a nondegenerate triple of class {cls.value}")
    x, y, z = draw_antiholomorphic(space, cls.signs, random.Random(seed))
    return x, y, z
