"""Exact linear-form arithmetic over canonical phase-space variables.

Observables are stored as real linear combinations of per-particle canonical
coordinates and momenta (``x1``, ``x2``, ``p1``, ``p2``) plus a constant
offset.  For such forms the commutator is always a pure scalar multiple of
``i*hbar``, fixed entirely by the canonical pairing

    [x_i^(a), p_j^(b)] = i*hbar * delta_ij * delta_ab,

with coordinates commuting among themselves and momenta commuting among
themselves.  No operator-ordering ambiguity can appear at linear order, so
double precision coefficients are exact up to ordinary rounding.

Coefficients are kept in canonical sparse form: terms with an exactly zero
coefficient are dropped, so two forms built along different routes compare
equal whenever their coefficients match.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

from .errors import ConfigError, DomainError

#: Recognised canonical variable kinds: two coordinates and two momenta.
KINDS = ("x1", "x2", "p1", "p2")


@dataclass(frozen=True)
class CanonicalVar:
    """One canonical variable (coordinate or momentum component) of one particle."""

    particle_id: int
    kind: str

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ConfigError(f"unknown canonical variable kind {self.kind!r}; expected one of {KINDS}")
        if self.particle_id < 0:
            raise ConfigError(f"particle_id must be nonnegative, got {self.particle_id}")

    @property
    def component(self) -> int:
        """Spatial component index, 1 or 2."""
        return int(self.kind[1])

    @property
    def is_coordinate(self) -> bool:
        return self.kind[0] == "x"

    @property
    def conjugate(self) -> "CanonicalVar":
        """The canonically paired variable of the same particle and component."""
        partner = ("p" if self.is_coordinate else "x") + self.kind[1]
        return CanonicalVar(self.particle_id, partner)

    def __str__(self) -> str:
        return f"{self.kind}[{self.particle_id}]"


class LinearForm:
    """An affine combination ``constant + sum(coeff * variable)``.

    Instances are immutable; all arithmetic returns new forms.  Supported
    operations are addition and subtraction of forms and real constants,
    negation, and multiplication/division by real scalars.
    """

    __slots__ = ("_terms", "constant")

    def __init__(self, terms: Mapping[CanonicalVar, float] | None = None, constant: float = 0.0) -> None:
        clean = {}
        if terms:
            for var, coeff in terms.items():
                if not isinstance(var, CanonicalVar):
                    raise TypeError(f"term keys must be CanonicalVar, got {type(var).__name__}")
                c = float(coeff)
                if c != 0.0:
                    clean[var] = c
        object.__setattr__(self, "_terms", clean)
        object.__setattr__(self, "constant", float(constant))

    def __setattr__(self, name: str, value) -> None:
        raise AttributeError("LinearForm is immutable")

    @property
    def terms(self) -> Mapping[CanonicalVar, float]:
        """Read-only view of the nonzero coefficients."""
        return MappingProxyType(self._terms)

    def coefficient(self, var: CanonicalVar) -> float:
        """Coefficient of ``var`` (0.0 when absent)."""
        return self._terms.get(var, 0.0)

    @property
    def particle_ids(self) -> frozenset[int]:
        return frozenset(v.particle_id for v in self._terms)

    def __add__(self, other):
        if isinstance(other, LinearForm):
            merged = dict(self._terms)
            for var, coeff in other._terms.items():
                merged[var] = merged.get(var, 0.0) + coeff
            return LinearForm(merged, self.constant + other.constant)
        if isinstance(other, (int, float)):
            return LinearForm(self._terms, self.constant + other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return LinearForm({v: -c for v, c in self._terms.items()}, -self.constant)

    def __sub__(self, other):
        if isinstance(other, (LinearForm, int, float)):
            return self + (-other if isinstance(other, LinearForm) else -float(other))
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, (int, float)):
            return (-self) + float(other)
        return NotImplemented

    def __mul__(self, scale):
        if isinstance(scale, (int, float)):
            s = float(scale)
            return LinearForm({v: s * c for v, c in self._terms.items()}, s * self.constant)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, scale):
        if isinstance(scale, (int, float)):
            return self * (1.0 / float(scale))
        return NotImplemented

    def __repr__(self) -> str:
        if not self._terms and self.constant == 0.0:
            return "LinearForm(0)"
        parts = []
        if self.constant != 0.0:
            parts.append(f"{self.constant:.6g}")
        for var in sorted(self._terms, key=lambda v: (v.particle_id, KINDS.index(v.kind))):
            parts.append(f"{self._terms[var]:+.6g}*{var}")
        return "LinearForm(" + " ".join(parts) + ")"


def variable(kind: str, particle_id: int = 0) -> LinearForm:
    """A form consisting of a single canonical variable with unit coefficient."""
    return LinearForm({CanonicalVar(particle_id, kind): 1.0})


def x1(particle_id: int = 0) -> LinearForm:
    return variable("x1", particle_id)


def x2(particle_id: int = 0) -> LinearForm:
    return variable("x2", particle_id)


def p1(particle_id: int = 0) -> LinearForm:
    return variable("p1", particle_id)


def p2(particle_id: int = 0) -> LinearForm:
    return variable("p2", particle_id)


@dataclass(frozen=True)
class CommutatorResult:
    """The scalar ``c`` in ``[A, B] = i*hbar*c`` together with the hbar used."""

    scalar: float
    hbar: float


def commutator(a: LinearForm, b: LinearForm, hbar: float = 1.0) -> CommutatorResult:
    """Commutator of two linear forms under the canonical algebra.

    Returns the real scalar ``c`` with ``[A, B] = i*hbar*c``.  The result is
    deliberately *not* a ``LinearForm``: commutators of linear forms are
    central, so nesting them inside further commutators is a type error
    rather than a silent zero.

    The sum is accumulated in a fixed order over (particle, component)
    pairs, which makes antisymmetry exact in floating point:
    ``commutator(a, b).scalar == -commutator(b, a).scalar`` bit for bit.
    """
    if not isinstance(a, LinearForm) or not isinstance(b, LinearForm):
        raise TypeError("commutator expects two LinearForm operands; nested commutators are scalars and cannot be commuted again")
    if hbar <= 0:
        raise DomainError(f"hbar must be positive, got {hbar}")

    pairs = {(v.particle_id, v.component) for v in a._terms}
    pairs |= {(v.particle_id, v.component) for v in b._terms}
    scalar = 0.0
    for pid, comp in sorted(pairs):
        xv = CanonicalVar(pid, f"x{comp}")
        pv = CanonicalVar(pid, f"p{comp}")
        scalar += a.coefficient(xv) * b.coefficient(pv) - a.coefficient(pv) * b.coefficient(xv)
    return CommutatorResult(scalar=scalar, hbar=float(hbar))


def form_distance(a: LinearForm, b: LinearForm) -> float:
    """Sup-norm distance between two forms over coefficients and constants."""
    if not isinstance(a, LinearForm) or not isinstance(b, LinearForm):
        raise TypeError("form_distance expects two LinearForm operands")
    dist = abs(a.constant - b.constant)
    for var in a._terms.keys() | b._terms.keys():
        dist = max(dist, abs(a.coefficient(var) - b.coefficient(var)))
    return dist


def form_equal(a: LinearForm, b: LinearForm, tol: float = 0.0) -> bool:
    """Whether all coefficients and constants agree within ``tol``.

    With the default ``tol=0`` this is exact comparison of the canonical
    sparse representations.
    """
    if tol < 0:
        raise ConfigError(f"tolerance must be nonnegative, got {tol}")
    return form_distance(a, b) <= tol
