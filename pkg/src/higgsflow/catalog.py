"""Named example Higgs bundles on the torus with exact slope data.

Every entry lives on the trivial smooth bundle, so its degree is 0 and the
slope constant ``c`` is 0.  Stability status is declared together with the
phi-invariant holomorphic subobjects that certify it; the consistency check
below verifies the declaration in exact rational arithmetic.

No unstable entry is shipped.  An unstable degree-0 bundle on the trivial
smooth bundle needs a destabilizing sub line bundle of positive degree, whose
transition data is a theta function and has no closed-form ``alpha`` on a
single global frame.  The gap is documented rather than filled with a
fabricated example.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .bundle import HolomorphicStructure, slope
from .errors import InconsistentSequence, UnknownEntry
from .geometry import TorusGeometry
from .higgs import HiggsBundle
from .matfield import HermitianMetric

STATUSES = ("stable", "semistable_not_stable", "polystable", "unstable")


@dataclass(frozen=True)
class Subobject:
    """A phi-invariant holomorphic subbundle, given by ``(degree, rank)``.

    ``summand`` marks a subbundle that splits off holomorphically together
    with a phi-invariant complement.
    """

    degree: Fraction
    rank: int
    description: str
    summand: bool = False

    @property
    def slope(self) -> Fraction:
        return slope(self.degree, self.rank)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    rank: int
    status: str
    justification: str
    builder: Callable[[TorusGeometry], tuple[HiggsBundle, HermitianMetric]] = field(repr=False)
    subobjects: tuple[Subobject, ...] = ()
    degree: Fraction = Fraction(0)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")

    @property
    def slope(self) -> Fraction:
        return slope(self.degree, self.rank)

    def sequences(self):
        """``(F, E, G)`` as ``(degree, rank)`` pairs for ``0 -> F -> E -> G -> 0``."""
        E = (self.degree, self.rank)
        for sub in self.subobjects:
            yield (sub.degree, sub.rank), E, (self.degree - sub.degree, self.rank - sub.rank)

    def status_consistent(self) -> bool:
        """Check the declared status against the listed subobjects, exactly."""
        mu = self.slope
        subs = [s for s in self.subobjects if 0 < s.rank < self.rank]
        if len(subs) != len(self.subobjects):
            return False
        if self.status == "unstable":
            return any(s.slope > mu for s in subs)
        if any(s.slope > mu for s in subs):
            return False
        if self.status == "stable":
            return all(s.slope < mu for s in subs)
        if self.status == "semistable_not_stable":
            return any(s.slope == mu for s in subs)
        # Polystable: stable, or split into equal-slope summands of full rank.
        summands = [s for s in subs if s.summand and s.slope == mu]
        if not summands:
            return all(s.slope < mu for s in subs)
        return sum(s.rank for s in summands) == self.rank


def check_sequence_balance(F, E, G) -> Fraction:
    """``rk F (mu E - mu F) + rk G (mu E - mu G)`` for ``0 -> F -> E -> G -> 0``.

    Arguments are ``(degree, rank)`` pairs.  The result is exact and vanishes
    whenever degree and rank are additive.
    """
    (dF, rF), (dE, rE), (dG, rG) = ((Fraction(d), int(r)) for d, r in (F, E, G))
    if min(rF, rE, rG) < 1:
        raise InconsistentSequence("ranks must be positive")
    if rE != rF + rG or dE != dF + dG:
        raise InconsistentSequence(f"rank or degree not additive: F={F}, E={E}, G={G}")
    muE = slope(dE, rE)
    return rF * (muE - slope(dF, rF)) + rG * (muE - slope(dG, rG))


def _constant(geom: TorusGeometry, m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    return np.broadcast_to(m, (geom.grid_size, geom.grid_size) + m.shape).copy()


def _e12(geom):
    return _constant(geom, [[0, 1], [0, 0]])


def _flat_unitary_r2(geom):
    return (HiggsBundle(HolomorphicStructure.trivial(geom, 2), geom.zeros(2, 2), "flat_unitary_r2"),
            HermitianMetric.identity(geom, 2))


def _nilpotent_higgs_r2(geom):
    return (HiggsBundle(HolomorphicStructure.trivial(geom, 2), _e12(geom), "nilpotent_higgs_r2"),
            HermitianMetric.identity(geom, 2))


def _conformal_line(geom):
    x, _ = geom.coords
    H = np.exp(np.cos(x))[..., None, None].astype(complex)
    return (HiggsBundle(HolomorphicStructure.trivial(geom, 1), geom.zeros(1, 1), "conformal_line"),
            HermitianMetric(H))


def _twisted_line(geom):
    alpha = _constant(geom, [[0.25 - 0.5j]])
    return (HiggsBundle(HolomorphicStructure(alpha), geom.zeros(1, 1), "twisted_line"),
            HermitianMetric.identity(geom, 1))


def _diagonal_higgs_r2(geom):
    phi = _constant(geom, np.diag([1.0, -1.0]))
    return (HiggsBundle(HolomorphicStructure.trivial(geom, 2), phi, "diagonal_higgs_r2"),
            HermitianMetric.identity(geom, 2))


def _atiyah_extension_r2(geom):
    return (HiggsBundle(HolomorphicStructure(_e12(geom)), geom.zeros(2, 2), "atiyah_extension_r2"),
            HermitianMetric.identity(geom, 2))


def _nilpotent_higgs_bumped(geom):
    x, y = geom.coords
    f = 0.3 * np.cos(x) + 0.2 * np.sin(y)
    H = np.zeros(f.shape + (2, 2), dtype=complex)
    H[..., 0, 0] = np.exp(f)
    H[..., 1, 1] = np.exp(-f)
    return (HiggsBundle(HolomorphicStructure.trivial(geom, 2), _e12(geom), "nilpotent_higgs_bumped"),
            HermitianMetric(H))


_ZERO = Fraction(0)

_ENTRIES = (
    CatalogEntry(
        "flat_unitary_r2", 2, "polystable",
        "O + O with zero Higgs field; both coordinate lines are degree-0 summands.",
        _flat_unitary_r2,
        (Subobject(_ZERO, 1, "span(e1)", summand=True), Subobject(_ZERO, 1, "span(e2)", summand=True)),
    ),
    CatalogEntry(
        "nilpotent_higgs_r2", 2, "semistable_not_stable",
        "Phi = e12 kills e1, so span(e1) is a phi-invariant degree-0 line of slope equal to mu(E) = 0; "
        "it has no phi-invariant complement.",
        _nilpotent_higgs_r2,
        (Subobject(_ZERO, 1, "span(e1) = ker Phi"),),
    ),
    CatalogEntry(
        "conformal_line", 1, "stable",
        "Line bundles have no proper subobjects. Initial metric exp(cos x) is weak HYM with gamma = cos(x)/2.",
        _conformal_line,
    ),
    CatalogEntry(
        "twisted_line", 1, "stable",
        "Degree-0 line bundle with constant dbar-perturbation; no proper subobjects.",
        _twisted_line,
    ),
    CatalogEntry(
        "diagonal_higgs_r2", 2, "polystable",
        "Phi = diag(1, -1) preserves both coordinate lines, each a degree-0 summand.",
        _diagonal_higgs_r2,
        (Subobject(_ZERO, 1, "span(e1)", summand=True), Subobject(_ZERO, 1, "span(e2)", summand=True)),
    ),
    CatalogEntry(
        "atiyah_extension_r2", 2, "semistable_not_stable",
        "alpha = e12 makes span(e1) holomorphic with quotient O; the extension class [dzbar] is nonzero, "
        "so the degree-0 sub does not split.",
        _atiyah_extension_r2,
        (Subobject(_ZERO, 1, "span(e1)"),),
    ),
    CatalogEntry(
        "nilpotent_higgs_bumped", 2, "semistable_not_stable",
        "Same Higgs bundle as nilpotent_higgs_r2 with a non-constant unimodular initial metric.",
        _nilpotent_higgs_bumped,
        (Subobject(_ZERO, 1, "span(e1) = ker Phi"),),
    ),
)

CATALOG: dict[str, CatalogEntry] = {e.name: e for e in _ENTRIES}


def names() -> list[str]:
    return list(CATALOG)


def get(name: str) -> CatalogEntry:
    try:
        return CATALOG[name]
    except KeyError:
        raise UnknownEntry(name) from None


def build(name: str, geom: TorusGeometry | None = None) -> tuple[HiggsBundle, HermitianMetric]:
    """Grid objects ``(bundle, initial metric)`` for a registered entry."""
    entry = get(name)
    return entry.builder(geom or TorusGeometry(32))
