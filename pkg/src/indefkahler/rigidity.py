"""Executable versions of the rigidity statements.

Pointwise, each hypothesis "R(...) = 0 for every antiholomorphic pair (triple)
of a given signature" is a linear condition on R.  Sampling finitely many
generic pairs gives a constraint matrix in Kaehler-basis coordinates whose
nullspace is the set of tensors satisfying the hypothesis; the rigidity
statements say that this nullspace is the line through ``pi1 + pi2``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import expand
from .curvature import (
    CurvatureTensor,
    evaluate,
    holomorphic_sectional,
    require_valid,
    sectional,
)
from .errors import DegeneratePlane, PreconditionError, RankNotStabilized, UnrealizableSignature
from .linalg import (
    SignatureClass,
    Space,
    Vector,
    apply_J,
    check_antiholomorphic_realizable,
    draw_antiholomorphic,
    inner,
    is_antiholomorphic_pair,
    is_antiholomorphic_triple,
)
from .tensor_space import Echelon, TensorBasis, coordinates, kaehler_basis, model_coordinates


@dataclass(frozen=True)
class Hypothesis:
    """``prop1``: R(x,Jx,Jx,y) = 0; ``prop3``: R(x,y,y,z) = 0 on antiholomorphic families.

    For ``prop3`` the pair class fixes the signs of ``x, y``; the triple class,
    when given, fixes the sign of ``z`` as well.  With only a triple class the
    roles are assigned by a random ordering of its signs for each sample, and
    with only a pair class ``z`` takes either realizable sign.
    """

    kind: str
    pair_class: Optional[SignatureClass] = None
    triple_class: Optional[SignatureClass] = None

    def __post_init__(self):
        if self.kind not in ("prop1", "prop3"):
            raise ValueError(f"unknown hypothesis {self.kind!r}")
        if self.pair_class is not None and (
            self.pair_class.arity != 2 or self.pair_class is SignatureClass.DEGENERATE
        ):
            raise ValueError(f"{self.pair_class.value} is not a nondegenerate pair class")
        if self.triple_class is not None and (
            self.triple_class.arity != 3 or self.triple_class is SignatureClass.DEGENERATE_TRIPLE
        ):
            raise ValueError(f"{self.triple_class.value} is not a nondegenerate triple class")
        if self.kind == "prop1" and self.pair_class is None:
            raise ValueError("prop1 needs a pair class")
        if self.kind == "prop3":
            if self.pair_class is None and self.triple_class is None:
                raise ValueError("prop3 needs a pair class, a triple class, or both")
            if self.pair_class is not None and self.triple_class is not None:
                self._z_sign_from_classes()

    def _z_sign_from_classes(self) -> int:
        rest = list(self.triple_class.signs)
        for s in self.pair_class.signs:
            if s not in rest:
                raise ValueError(
                    f"pair {self.pair_class.value} does not fit in triple {self.triple_class.value}"
                )
            rest.remove(s)
        return rest[0]

    def __str__(self):
        parts = [self.kind]
        if self.pair_class is not None:
            parts.append(f"pair={self.pair_class.value}")
        if self.triple_class is not None:
            parts.append(f"triple={self.triple_class.value}")
        return "(" + ", ".join(parts) + ")"

    def sign_options(self, space: Space) -> list[tuple[int, ...]]:
        """Ordered sign patterns a sample may use, restricted to realizable ones."""
        if self.kind == "prop1":
            options = [self.pair_class.signs]
        elif self.pair_class is not None and self.triple_class is not None:
            options = [self.pair_class.signs + (self._z_sign_from_classes(),)]
        elif self.pair_class is not None:
            options = [self.pair_class.signs + (s,) for s in (1, -1)]
        else:
            signs = self.triple_class.signs
            options = sorted({(signs[i], signs[j], signs[k]) for i, j, k in _perms3()})
        good = []
        for signs in options:
            try:
                check_antiholomorphic_realizable(space, signs)
            except UnrealizableSignature:
                continue
            good.append(signs)
        if not good:
            raise UnrealizableSignature(
                f"hypothesis {self} cannot be realized in signature {space.signature}"
            )
        return good

    def draw(self, space: Space, rng: random.Random, options=None) -> list[Vector]:
        options = options or self.sign_options(space)
        signs = options[0] if len(options) == 1 else rng.choice(options)
        return draw_antiholomorphic(space, signs, rng)

    def arguments(self, space: Space, vectors: Sequence[Vector]):
        if self.kind == "prop1":
            x, y = vectors
            Jx = apply_J(space, x)
            return x, Jx, Jx, y
        x, y, z = vectors
        return x, y, y, z


def _perms3():
    return [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)]


@dataclass
class ConstraintSystem:
    matrix: list[list[Fraction]]
    samples: list[list[Vector]]
    rank: int
    half_rank: int
    echelon: Echelon = field(repr=False)

    @property
    def stabilized(self) -> bool:
        return self.rank == self.half_rank


def hypothesis_constraints(
    space: Space, basis: TensorBasis, hyp: Hypothesis, n_samples: int, seed: int = 0
) -> ConstraintSystem:
    """One row per sampled family; entry ``i`` is the hypothesis functional on basis element ``i``."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    options = hyp.sign_options(space)
    rng = random.Random(seed)
    half = math.ceil(n_samples / 2)
    ech = Echelon(basis.dimension)
    rows, samples = [], []
    half_rank = 0
    for j in range(n_samples):
        vecs = hyp.draw(space, rng, options)
        args = hyp.arguments(space, vecs)
        row = [evaluate(B, *args) for B in basis.elements]
        rows.append(row)
        samples.append(vecs)
        ech.add(row)
        if j + 1 == half:
            half_rank = ech.rank
    return ConstraintSystem(rows, samples, ech.rank, half_rank, ech)


VERDICT_SPAN = "SpanOfModel"
VERDICT_LARGER = "Larger"
VERDICT_EMPTY = "Empty"


@dataclass
class RigidityReport:
    space: Space
    hypothesis: Hypothesis
    n_samples: int
    seed: int
    kaehler_dimension: int
    rank: int
    half_rank: int
    stabilized: bool
    surviving_dimension: int
    verdict: str
    survivors: list[CurvatureTensor]
    model_in_nullspace: bool

    def summary(self) -> dict:
        return {
            "m": self.space.m,
            "signature": self.space.signature,
            "hypothesis": self.hypothesis.kind,
            "pair_class": self.hypothesis.pair_class.value if self.hypothesis.pair_class else "",
            "triple_class": self.hypothesis.triple_class.value if self.hypothesis.triple_class else "",
            "samples": self.n_samples,
            "seed": self.seed,
            "kaehler_dimension": self.kaehler_dimension,
            "constraint_rank": self.rank,
            "half_sample_rank": self.half_rank,
            "rank_stabilized": self.stabilized,
            "surviving_dimension": self.surviving_dimension,
            "model_in_nullspace": self.model_in_nullspace,
            "verdict": self.verdict,
        }


def rigidity_verdict(
    space: Space, hyp: Hypothesis, n_samples: Optional[int] = None, seed: int = 0
) -> RigidityReport:
    hyp.sign_options(space)  # fail fast on unrealizable hypotheses
    basis = kaehler_basis(space)
    if n_samples is None:
        n_samples = 3 * basis.dimension
    system = hypothesis_constraints(space, basis, hyp, n_samples, seed)
    if not system.stabilized:
        raise RankNotStabilized(
            f"constraint rank {system.half_rank} at {math.ceil(n_samples / 2)} samples "
            f"grew to {system.rank} at {n_samples}; increase n_samples",
            rank=system.rank,
            half_rank=system.half_rank,
        )
    model = model_coordinates(basis)
    model_ok = all(sum(r * c for r, c in zip(row, model)) == 0 for row in system.matrix)
    null = system.echelon.nullspace()
    survivors = [basis.combine(v) for v in null]
    if not null:
        verdict = VERDICT_EMPTY
    elif len(null) == 1 and _proportional(null[0], model):
        verdict = VERDICT_SPAN
    else:
        verdict = VERDICT_LARGER
    return RigidityReport(
        space=space,
        hypothesis=hyp,
        n_samples=n_samples,
        seed=seed,
        kaehler_dimension=basis.dimension,
        rank=system.rank,
        half_rank=system.half_rank,
        stabilized=system.stabilized,
        surviving_dimension=len(null),
        verdict=verdict,
        survivors=survivors,
        model_in_nullspace=model_ok,
    )


def _proportional(u: Sequence[Fraction], v: Sequence[Fraction]) -> bool:
    ratio = None
    for a, b in zip(u, v):
        if (a == 0) != (b == 0):
            return False
        if a:
            r = a / b
            if ratio is None:
                ratio = r
            elif r != ratio:
                return False
    return ratio is not None


def same_subspace(basis: TensorBasis, a: Sequence[CurvatureTensor], b: Sequence[CurvatureTensor]) -> bool:
    """Compare two spans of tensors via their Kaehler coordinates."""
    ea, eb, eab = Echelon(basis.dimension), Echelon(basis.dimension), Echelon(basis.dimension)
    for T in a:
        c = coordinates(basis, T)
        ea.add(c)
        eab.add(c)
    for T in b:
        c = coordinates(basis, T)
        eb.add(c)
        eab.add(c)
    return ea.rank == eb.rank == eab.rank


# --- identities satisfied on survivors --------------------------------------


SURVIVOR_IDENTITIES = (
    "R(y,Jy,Jy,x)=0",
    "K(x,y)=K(x,Jy)",
    "H(x)=4K(x,y)",
    "H(x)=H(y)",
    "R(x,Jx,Jx,y)+R(x,Jy,Jy,y)=0",
)


def survivor_identity_residuals(R: CurvatureTensor, n_pairs: int = 100, seed: int = 0) -> dict[str, list]:
    """Evaluate the consequences of R(x,Jx,Jx,y) = 0 on sampled antiholomorphic pairs.

    Returns, per identity, the list of pairs (by sample index) where it fails.
    """
    space = R.space
    options = []
    for signs in [(1, -1), (-1, 1), (1, 1), (-1, -1)]:
        try:
            check_antiholomorphic_realizable(space, signs)
            options.append(signs)
        except UnrealizableSignature:
            pass
    if not options:
        raise UnrealizableSignature(f"no antiholomorphic pairs in signature {space.signature}")
    rng = random.Random(seed)
    failures: dict[str, list] = {k: [] for k in SURVIVOR_IDENTITIES}
    for j in range(n_pairs):
        x, y = draw_antiholomorphic(space, options[j % len(options)], rng)
        Jx, Jy = apply_J(space, x), apply_J(space, y)
        checks = {
            "R(y,Jy,Jy,x)=0": evaluate(R, y, Jy, Jy, x) == 0,
            "K(x,y)=K(x,Jy)": sectional(R, x, y) == sectional(R, x, Jy),
            "H(x)=4K(x,y)": holomorphic_sectional(R, x) == 4 * sectional(R, x, y),
            "H(x)=H(y)": holomorphic_sectional(R, x) == holomorphic_sectional(R, y),
            "R(x,Jx,Jx,y)+R(x,Jy,Jy,y)=0": evaluate(R, x, Jx, Jx, y) + evaluate(R, x, Jy, Jy, y) == 0,
        }
        for name, ok in checks.items():
            if not ok:
                failures[name].append(j)
    return failures


# --- polarization identities --------------------------------------------------


@dataclass
class ExpansionReport:
    name: str
    alphas: list[Fraction]
    residuals: list[Fraction]
    normalized_residuals: list[Optional[Fraction]] = field(default_factory=list)

    @property
    def holds(self) -> bool:
        return all(r == 0 for r in self.residuals) and all(
            r == 0 for r in self.normalized_residuals if r is not None
        )


def _require_unit_pair(space: Space, x: Vector, y: Vector, what: str) -> None:
    if not is_antiholomorphic_pair(space, x, y):
        raise PreconditionError(f"{what}: the pair must be antiholomorphic")
    if inner(space, x, x) != 1 or inner(space, y, y) != -1:
        raise PreconditionError(f"{what}: need g(x,x) = 1 and g(y,y) = -1")


def prop1_expansion_check(R: CurvatureTensor, x: Vector, y: Vector, alphas) -> ExpansionReport:
    """Compare R(x+ay, Jx+aJy, Jx+aJy, ax+y) with its grouped polynomial form."""
    space = R.space
    _require_unit_pair(space, x, y, "prop1 expansion")
    Jx, Jy = apply_J(space, x), apply_J(space, y)
    kxy, kxjy = sectional(R, x, y), sectional(R, x, Jy)
    A = holomorphic_sectional(R, x) - kxy - 3 * kxjy
    B = holomorphic_sectional(R, y) - kxy - 3 * kxjy
    C = evaluate(R, y, Jy, Jy, x)
    P = evaluate(R, x, Jx, Jx, y)
    dropped = expand.prop1_dropped_coefficient()
    alphas = [Fraction(a) for a in alphas]
    residuals = []
    for a in alphas:
        u, Ju = x + a * y, Jx + a * Jy
        direct = evaluate(R, u, Ju, Ju, a * x + y)
        grouped = a * A + a**3 * B + (3 + a * a) * a * a * C + dropped(a) * P
        residuals.append(direct - grouped)
    return ExpansionReport("prop1", alphas, residuals)


def thm1_numerator(R: CurvatureTensor, x: Vector, y: Vector) -> expand.Poly:
    """Coefficients of N(a) = R(v,Jv,Jv,v), v = x + a y, from the grouped display."""
    space = R.space
    Jx, Jy = apply_J(space, x), apply_J(space, y)
    return expand.Poly(
        [
            holomorphic_sectional(R, x),
            4 * evaluate(R, x, Jx, Jx, y),
            -2 * (sectional(R, x, y) + 3 * sectional(R, x, Jy)),
            4 * evaluate(R, x, Jy, Jy, y),
            holomorphic_sectional(R, y),
        ]
    )


def theorem1_expansion_check(R: CurvatureTensor, x: Vector, y: Vector, alphas) -> ExpansionReport:
    space = R.space
    if not (inner(space, x, y) == 0 and inner(space, x, apply_J(space, y)) == 0):
        raise PreconditionError("theorem1 expansion: need g(x,y) = g(x,Jy) = 0")
    if {inner(space, x, x), inner(space, y, y)} != {1, -1}:
        raise PreconditionError("theorem1 expansion: need an orthonormal pair of signature (+,-)")
    N = thm1_numerator(R, x, y)
    gxx = inner(space, x, x)
    alphas = [Fraction(a) for a in alphas]
    residuals, normalized = [], []
    for a in alphas:
        v = x + a * y
        Jv = apply_J(space, v)
        residuals.append(evaluate(R, v, Jv, Jv, v) - N(a))
        gvv = gxx * (1 - a * a)
        normalized.append(holomorphic_sectional(R, v) - N(a) / (gvv * gvv) if gvv else None)
    return ExpansionReport("thm1", alphas, residuals, normalized)


def theorem2_expansion_check(R: CurvatureTensor, x: Vector, y: Vector, z: Vector, alphas) -> ExpansionReport:
    """Check K(x,z) + 2 eps a R(x,z,z,y) - a^2 K(y,z) against K(span{x+ay, z}).

    ``residuals`` hold the unnormalized identity (valid at every alpha);
    ``normalized_residuals`` compare with (1 - a^2) K(span{x+ay, z}) and are
    ``None`` at a = +-1 where that plane degenerates.
    """
    space = R.space
    _require_unit_pair(space, x, y, "theorem2 expansion")
    if not is_antiholomorphic_triple(space, x, y, z):
        raise PreconditionError("theorem2 expansion: span{x, y, z} must be antiholomorphic")
    eps = inner(space, z, z)
    if eps not in (1, -1):
        raise PreconditionError("theorem2 expansion: z must be a unit vector")
    kxz, kyz = sectional(R, x, z), sectional(R, y, z)
    rxzzy = evaluate(R, x, z, z, y)
    alphas = [Fraction(a) for a in alphas]
    residuals, normalized = [], []
    for a in alphas:
        v = x + a * y
        numerator = evaluate(R, v, z, z, v)
        grouped = kxz + 2 * eps * a * rxzzy - a * a * kyz
        residuals.append(grouped - eps * numerator)
        try:
            normalized.append(grouped - (1 - a * a) * sectional(R, v, z))
        except DegeneratePlane:
            normalized.append(None)
    return ExpansionReport("thm2", alphas, residuals, normalized)


# --- unboundedness witnesses ------------------------------------------------------


@dataclass
class Witness:
    trial: int
    orientation: str
    x: Vector
    y: Vector
    alpha: Fraction
    h_value: Fraction
    limit_plus: Fraction
    limit_minus: Fraction

    @property
    def vector(self) -> Vector:
        """Unnormalized ``x + alpha y``; the unit vector divides by sqrt|1 - alpha^2|."""
        return self.x + self.alpha * self.y


WITNESS_STEPS = 64
_DOUBLE_NULL = (1, 0, -2, 0, 1)  # (1 - a^2)^2


def _constant_quotient(N: expand.Poly) -> Optional[Fraction]:
    """``q`` when ``N == q (1 - a^2)^2`` (H constant along the family), else ``None``."""
    coeffs = N.coeffs + (Fraction(0),) * (5 - len(N.coeffs))
    q = coeffs[0]
    if all(c == q * d for c, d in zip(coeffs, _DOUBLE_NULL)):
        return q
    return None


def theorem1_witness(
    R: CurvatureTensor, bound, max_trials: int = 500, seed: int = 0
) -> Optional[Witness]:
    """Search ``(x + a y)/sqrt|1 - a^2|`` families for ``|H| > bound``; ``None`` if none found.

    Pairs are orthonormal antiholomorphic of signature (+, -) and are tried in
    both orientations, so witnesses may be space- or timelike.  Along each
    family ``H = N(a) / (1 - a^2)^2`` with N the quartic numerator; the
    schedule ``a = +-(1 - 2^-k)`` approaches the null directions.
    """
    require_valid(R)
    space = R.space
    if not space.is_indefinite:
        raise UnrealizableSignature("witness search needs an indefinite signature")
    bound = Fraction(bound)
    rng = random.Random(seed)
    schedule = [1 - Fraction(1, 2**k) for k in range(1, WITNESS_STEPS + 1)]
    for trial in range(max_trials):
        x, y = draw_antiholomorphic(space, (1, -1), rng)
        for orientation, (b, c) in (("spacelike", (x, y)), ("timelike", (y, x))):
            N = thm1_numerator(R, b, c)
            limits = N(1), N(-1)
            constant = _constant_quotient(N)
            if constant is not None and abs(constant) <= bound:
                continue
            for sign in (1, -1):
                for a0 in schedule:
                    a = sign * a0
                    d = 1 - a * a
                    h = N(a) / (d * d)
                    if abs(h) > bound:
                        return Witness(trial, orientation, b, c, a, h, *limits)
    return None
