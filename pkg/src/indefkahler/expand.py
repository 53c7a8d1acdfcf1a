"""Formal multilinear expansion of curvature expressions.

Arguments are linear combinations of the symbols ``x, y, z`` and their images
``Jx, Jy, Jz`` with coefficients that are polynomials in a formal parameter
``alpha``.  Expansion produces an ``alpha``-polynomial per canonical monomial
``R(a, b, c, d)``; monomials are canonicalized under the relabelings that the
Kaehler symmetries allow (slot antisymmetries, pair swap, ``J`` on a slot pair).
The first Bianchi identity is not a relabeling, so equality modulo Bianchi is
decided separately by :func:`equivalent`, evaluating on a tensor-space basis.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Optional

from .curvature import CurvatureTensor, evaluate as eval_tensor
from .errors import KahlerError
from .linalg import Vector, apply_J, as_scalar

SYMBOLS = ("x", "y", "z")


class MissingSymbol(KahlerError, KeyError):
    pass


class Poly:
    """Polynomial in ``alpha`` with exact coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [as_scalar(v) for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    @classmethod
    def const(cls, value) -> "Poly":
        return cls([value])

    @classmethod
    def alpha(cls) -> "Poly":
        return cls([0, 1])

    @staticmethod
    def coerce(value) -> "Poly":
        return value if isinstance(value, Poly) else Poly.const(value)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = Poly.coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Poly(p + q for p, q in zip(a, b))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-Poly.coerce(other))

    def __rsub__(self, other):
        return Poly.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (SymbolVector, MonomialSum)):
            return NotImplemented
        other = Poly.coerce(other)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, p in enumerate(self.coeffs):
            if p:
                for j, q in enumerate(other.coeffs):
                    out[i + j] += p * q
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, alpha) -> Fraction:
        alpha = as_scalar(alpha)
        total = Fraction(0)
        for c in reversed(self.coeffs):
            total = total * alpha + c
        return total

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else ("a" if k == 1 else f"a^{k}")
            if mono and c == 1:
                term = mono
            elif mono and c == -1:
                term = "-" + mono
            elif mono:
                term = f"{c}*{mono}" if c.denominator == 1 else f"({c})*{mono}"
            else:
                term = str(c)
            parts.append(term)
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"Poly({[str(c) for c in self.coeffs]})"


ALPHA = Poly.alpha()

# A slot symbol is (name, j) meaning J^j applied to the named vector, j in {0, 1}.
Slot = tuple[str, int]


def slot_label(s: Slot) -> str:
    return ("J" if s[1] else "") + s[0]


def parse_slot(label: str) -> Slot:
    if label.startswith("J") and label[1:] in SYMBOLS:
        return (label[1:], 1)
    if label in SYMBOLS:
        return (label, 0)
    raise ValueError(f"unknown symbol {label!r}")


def _apply_j_slot(s: Slot) -> tuple[Slot, int]:
    name, j = s
    return ((name, 1), 1) if j == 0 else ((name, 0), -1)


class SymbolVector:
    """Formal combination ``sum c_k(alpha) * s_k`` over the six slot symbols."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Slot, Poly] | None = None):
        clean = {}
        for s, c in (terms or {}).items():
            c = Poly.coerce(c)
            if c:
                clean[s] = c
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("SymbolVector is immutable")

    @classmethod
    def symbol(cls, label: str) -> "SymbolVector":
        return cls({parse_slot(label): Poly.const(1)})

    def J(self) -> "SymbolVector":
        out: dict[Slot, Poly] = {}
        for s, c in self.terms.items():
            t, sign = _apply_j_slot(s)
            out[t] = out.get(t, Poly()) + c * sign
        return SymbolVector(out)

    def __add__(self, other):
        if not isinstance(other, SymbolVector):
            return NotImplemented
        out = dict(self.terms)
        for s, c in other.terms.items():
            out[s] = out.get(s, Poly()) + c
        return SymbolVector(out)

    def __neg__(self):
        return SymbolVector({s: -c for s, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, SymbolVector):
            return NotImplemented
        c = Poly.coerce(scalar)
        return SymbolVector({s: v * c for s, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, SymbolVector) and self.terms == other.terms

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})*{slot_label(s)}" for s, c in sorted(self.terms.items()))


X, Y, Z = (SymbolVector.symbol(s) for s in SYMBOLS)

Monomial = tuple[Slot, Slot, Slot, Slot]


def _sort_key(mono: Monomial):
    # Reading order 1, 2, 4, 3 makes R(a, b, b, a) the representative of its orbit.
    return (mono[0], mono[1], mono[3], mono[2])


def _neighbours(mono: Monomial):
    a, b, c, d = mono
    yield (b, a, c, d), -1
    yield (a, b, d, c), -1
    yield (c, d, a, b), 1
    (ja, sa), (jb, sb) = _apply_j_slot(a), _apply_j_slot(b)
    yield (ja, jb, c, d), sa * sb
    (jc, sc), (jd, sd) = _apply_j_slot(c), _apply_j_slot(d)
    yield (a, b, jc, jd), sc * sd


@lru_cache(maxsize=None)
def canonical(mono: Monomial) -> Optional[tuple[Monomial, int]]:
    """Orbit representative and sign, or ``None`` when the monomial vanishes identically."""
    signs = {mono: 1}
    queue = deque([mono])
    while queue:
        cur = queue.popleft()
        for nxt, s in _neighbours(cur):
            sign = signs[cur] * s
            if nxt in signs:
                if signs[nxt] != sign:
                    return None
                continue
            signs[nxt] = sign
            queue.append(nxt)
    rep = min(signs, key=_sort_key)
    return rep, signs[rep]


def monomial_label(mono: Monomial) -> str:
    return "R(" + ",".join(slot_label(s) for s in mono) + ")"


class MonomialSum:
    """Mapping canonical monomial -> ``alpha``-polynomial coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Poly] | None = None):
        object.__setattr__(self, "terms", {})
        for mono, c in (terms or {}).items():
            self._accumulate(mono, Poly.coerce(c))

    def __setattr__(self, name, value):
        raise AttributeError("MonomialSum is immutable")

    def _accumulate(self, mono: Monomial, coeff: Poly):
        canon = canonical(mono)
        if canon is None or not coeff:
            return
        rep, sign = canon
        total = self.terms.get(rep, Poly()) + coeff * sign
        if total:
            self.terms[rep] = total
        else:
            self.terms.pop(rep, None)

    @classmethod
    def monomial(cls, *labels: str, coeff=1) -> "MonomialSum":
        if len(labels) != 4:
            raise ValueError("a curvature monomial has four slots")
        return cls({tuple(parse_slot(s) for s in labels): Poly.coerce(coeff)})

    def canonicalized(self) -> "MonomialSum":
        return MonomialSum(self.terms)

    def coefficient(self, mono: Monomial | "MonomialSum") -> Poly:
        """Coefficient of the canonical form of a single monomial (sign-adjusted)."""
        if isinstance(mono, MonomialSum):
            if len(mono.terms) != 1:
                raise ValueError("expected a single monomial")
            (rep, c), = mono.terms.items()
            (unit,) = c.coeffs
            return self.terms.get(rep, Poly()) * (1 / unit)
        canon = canonical(mono)
        if canon is None:
            return Poly()
        rep, sign = canon
        return self.terms.get(rep, Poly()) * sign

    def without(self, *monos: "MonomialSum") -> "MonomialSum":
        drop = {rep for m in monos for rep in m.terms}
        return MonomialSum({k: v for k, v in self.terms.items() if k not in drop})

    def __add__(self, other):
        if not isinstance(other, MonomialSum):
            return NotImplemented
        out = MonomialSum(self.terms)
        for mono, c in other.terms.items():
            out._accumulate(mono, c)
        return out

    def __neg__(self):
        return MonomialSum({k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, MonomialSum):
            return NotImplemented
        c = Poly.coerce(scalar)
        return MonomialSum({k: v * c for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, MonomialSum) and self.terms == other.terms

    def __len__(self):
        return len(self.terms)

    @property
    def degree(self) -> int:
        return max((c.degree for c in self.terms.values()), default=-1)

    def symbols(self) -> set[str]:
        return {s[0] for mono in self.terms for s in mono}

    def items(self):
        return sorted(self.terms.items(), key=lambda kv: _sort_key(kv[0]))

    def table(self) -> list[tuple[str, str]]:
        return [(monomial_label(m), str(c)) for m, c in self.items()]

    def __str__(self):
        if not self.terms:
            return "0"
        return "\n".join(f"{label}: {coeff}" for label, coeff in self.table())


def expand(a: SymbolVector, b: SymbolVector, c: SymbolVector, d: SymbolVector) -> MonomialSum:
    """Full quadrilinear expansion of ``R(a, b, c, d)`` with canonicalized monomials."""
    raw: dict[Monomial, Poly] = {}
    for sa, ca in a.terms.items():
        for sb, cb in b.terms.items():
            cab = ca * cb
            for sc, cc in c.terms.items():
                cabc = cab * cc
                for sd, cd in d.terms.items():
                    key = (sa, sb, sc, sd)
                    raw[key] = raw.get(key, Poly()) + cabc * cd
    return MonomialSum(raw)


def _slot_vectors(assignment: Mapping[str, Vector], needed: set[str], space):
    vecs = {}
    for name in needed:
        if name not in assignment:
            raise MissingSymbol(f"no vector assigned to symbol {name!r}")
        v = assignment[name]
        vecs[(name, 0)] = v
        vecs[(name, 1)] = apply_J(space, v)
    return vecs


def evaluate(ms: MonomialSum, R: CurvatureTensor, assignment: Mapping[str, Vector], alpha) -> Fraction:
    """Substitute vectors and ``alpha`` and evaluate each monomial on ``R``."""
    vecs = _slot_vectors(assignment, ms.symbols(), R.space)
    total = Fraction(0)
    for mono, coeff in ms.terms.items():
        c = coeff(alpha)
        if c:
            total += c * eval_tensor(R, *(vecs[s] for s in mono))
    return total


def equivalent(
    a: MonomialSum,
    b: MonomialSum,
    tensors: Iterable[CurvatureTensor],
    trials: int = 2,
    seed: int = 0,
) -> bool:
    """Decide ``a == b`` modulo the first Bianchi identity.

    Both sides are linear in R, so agreement on a basis of the Kaehler tensor
    space is complete in R.  In the vectors and ``alpha`` the check samples
    random rational assignments and an ``alpha`` grid exceeding the degree.
    """
    diff = a - b
    if not diff.terms:
        return True
    rng = random.Random(seed)
    grid = [Fraction(k, 3) for k in range(-(diff.degree // 2) - 2, diff.degree + 3)]
    for R in tensors:
        n = R.space.dim
        for _ in range(trials):
            assignment = {
                s: Vector(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n))
                for s in SYMBOLS
            }
            for alpha in grid:
                if evaluate(diff, R, assignment, alpha) != 0:
                    return False
    return True


# --- the expressions appearing in the rigidity arguments ----------------------


def _k(a: str, b: str, signs: Mapping[str, int]) -> MonomialSum:
    """``K(a, b)`` for an orthonormal antiholomorphic pair, as a monomial."""
    return MonomialSum.monomial(a, b, b, a, coeff=Fraction(1, signs[a.lstrip("J")] * signs[b.lstrip("J")]))


def _h(a: str) -> MonomialSum:
    # g(a, a)^2 = 1 for unit vectors of either sign
    return MonomialSum.monomial(a, "J" + a, "J" + a, a)


@dataclass(frozen=True)
class ProofIdentity:
    """``lhs == rhs`` modulo Bianchi, valid for unit antiholomorphic vectors with ``signs``."""

    name: str
    lhs: MonomialSum
    rhs: MonomialSum
    signs: tuple[tuple[str, int], ...]


def prop1_expression() -> MonomialSum:
    u = X + ALPHA * Y
    return expand(u, u.J(), u.J(), ALPHA * X + Y)


def thm1_expression() -> MonomialSum:
    v = X + ALPHA * Y
    return expand(v, v.J(), v.J(), v)


def thm2_expression() -> MonomialSum:
    v = X + ALPHA * Y
    return expand(v, Z, Z, v)


PROP1_DROPPED = ("x", "Jx", "Jx", "y")


def prop1_dropped_coefficient() -> Poly:
    """Coefficient of ``R(x,Jx,Jx,y)`` in R(u,Ju,Ju,w) with ``u = x + a y``, ``w = a x + y``."""
    return prop1_expression().coefficient(MonomialSum.monomial(*PROP1_DROPPED))


def prop1_grouped(eps_x: int = 1, eps_y: int = -1) -> MonomialSum:
    """alpha{H(x)-K(x,y)-3K(x,Jy)} + alpha^3{H(y)-K(x,y)-3K(x,Jy)} + (3+alpha^2)alpha^2 R(y,Jy,Jy,x)."""
    signs = {"x": eps_x, "y": eps_y}
    ks = _k("x", "y", signs) + 3 * _k("x", "Jy", signs)
    return (
        (_h("x") - ks) * ALPHA
        + (_h("y") - ks) * ALPHA**3
        + MonomialSum.monomial("y", "Jy", "Jy", "x") * ((3 + ALPHA**2) * ALPHA**2)
    )


def thm1_grouped(eps_x: int = 1, eps_y: int = -1) -> MonomialSum:
    """H(x) + 4a R(x,Jx,Jx,y) - 2a^2{K(x,y)+3K(x,Jy)} + 4a^3 R(x,Jy,Jy,y) + a^4 H(y)."""
    signs = {"x": eps_x, "y": eps_y}
    ks = _k("x", "y", signs) + 3 * _k("x", "Jy", signs)
    return (
        _h("x")
        + MonomialSum.monomial("x", "Jx", "Jx", "y") * (4 * ALPHA)
        - ks * (2 * ALPHA**2)
        + MonomialSum.monomial("x", "Jy", "Jy", "y") * (4 * ALPHA**3)
        + _h("y") * ALPHA**4
    )


def thm2_grouped(eps_x: int = 1, eps_y: int = -1, eps_z: int = 1) -> MonomialSum:
    """K(x,z) + 2 eps a R(x,z,z,y) - a^2 K(y,z) with eps = g(z,z)."""
    signs = {"x": eps_x, "y": eps_y, "z": eps_z}
    return (
        _k("x", "z", signs)
        + MonomialSum.monomial("x", "z", "z", "y") * (2 * eps_z * ALPHA)
        - _k("y", "z", signs) * ALPHA**2
    )


def proof_identity(name: str, eps_z: int = 1) -> ProofIdentity:
    """The expansion identity behind each grouped display, for an (x, y) pair of signs (+, -)."""
    if name == "prop1":
        lhs = prop1_expression()
        dropped = MonomialSum.monomial(*PROP1_DROPPED) * prop1_dropped_coefficient()
        return ProofIdentity(name, lhs, prop1_grouped() + dropped, (("x", 1), ("y", -1)))
    if name == "thm1":
        return ProofIdentity(name, thm1_expression(), thm1_grouped(), (("x", 1), ("y", -1)))
    if name == "thm2":
        lhs = thm2_expression() * eps_z
        return ProofIdentity(name, lhs, thm2_grouped(eps_z=eps_z), (("x", 1), ("y", -1), ("z", eps_z)))
    raise ValueError(f"unknown expression {name!r}; expected prop1, thm1 or thm2")
