"""Canonical-variable representations of the noncommutative plane algebra.

The target algebra for one particle of mass ``m`` is

    [X1, X2] = i*hbar*theta,   [P1, P2] = i*hbar*eta,
    [Xi, Pj] = i*hbar*delta_ij            (general family)
    [Xi, Pj] = i*hbar_eff*delta_ij        (simple family),

realised by linear forms over ordinary canonical variables.  Three
constructions are provided:

* ``build_epsilon_rep`` -- the scaled shift with free auxiliary parameters
  (theta', eta') and overall factor eps = 1/sqrt(1 + theta'*eta'/4);
* ``build_branch_rep`` -- the two closed-form solutions ("plus"/"minus"
  branch) obtained by matching (theta', eta') to the target (theta, eta);
* ``build_simple_rep`` -- the unscaled shift, which keeps the coordinate
  and momentum tables exact at the price of a rescaled diagonal
  hbar_eff = hbar*(1 + theta*eta/4).

The minus branch is the physical default: it reduces to the identity map
when both parameters vanish.  The plus branch survives the same limit only
as a fixed symplectic swap of coordinates and momenta.

Mass-independent kinematics enter through :class:`MassConditions`: tying
theta = gamma/m and eta = alpha*m makes theta*eta = alpha*gamma for every
mass, so all mass dependence of the representations is explicit and the
coordinate forms become universal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .algebra import LinearForm, commutator, form_distance, p1, p2, x1, x2
from .errors import ConfigError, DegenerateError, DomainError
from .reports import CheckRecord, CheckReport

FAMILIES = ("epsilon_general", "branch", "simple")
BRANCHES = ("plus", "minus")

#: Default coefficient-wise tolerance for verification routines.
DEFAULT_TOL = 1e-12


@dataclass(frozen=True)
class NCParams:
    """Noncommutativity parameters for one particle.

    ``theta`` is the coordinate-coordinate parameter, ``eta`` the
    momentum-momentum one.  Either may be negative or zero; the product
    ``theta*eta`` governs which representations exist.
    """

    theta: float
    eta: float
    hbar: float = 1.0
    mass: float = 1.0

    def __post_init__(self) -> None:
        if not self.hbar > 0:
            raise DomainError(f"hbar must be positive, got {self.hbar}")
        if not self.mass > 0:
            raise DomainError(f"mass must be positive, got {self.mass}")

    @property
    def product(self) -> float:
        return self.theta * self.eta


@dataclass(frozen=True)
class MassConditions:
    """Mass-coupling constants gamma (theta = gamma/m) and eta = alpha*m."""

    gamma: float
    alpha: float

    @property
    def product(self) -> float:
        """alpha*gamma == theta*eta for every mass tied to these constants."""
        return self.alpha * self.gamma


@dataclass(frozen=True)
class Representation:
    """Four linear forms realising the noncommutative algebra.

    ``particle_id`` is the canonical-variable index the forms live on for
    single-particle constructions, or ``None`` for centre-of-mass forms
    spanning several particles.
    """

    X1: LinearForm
    X2: LinearForm
    P1: LinearForm
    P2: LinearForm
    family: str
    params: NCParams
    branch: str | None = None
    particle_id: int | None = 0

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ConfigError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.branch is not None and self.branch not in BRANCHES:
            raise ConfigError(f"unknown branch {self.branch!r}; expected one of {BRANCHES}")

    def forms(self) -> tuple[LinearForm, LinearForm, LinearForm, LinearForm]:
        return (self.X1, self.X2, self.P1, self.P2)

    def form_names(self) -> tuple[str, str, str, str]:
        return ("X1", "X2", "P1", "P2")

    def expected_table(self) -> tuple[float, float, float]:
        """Expected (coordinate, momentum, diagonal) commutator scalars."""
        diag = 1.0 + self.params.product / 4.0 if self.family == "simple" else 1.0
        return (self.params.theta, self.params.eta, diag)


def branch_sign(branch: str) -> float:
    if branch == "plus":
        return 1.0
    if branch == "minus":
        return -1.0
    raise ConfigError(f"unknown branch {branch!r}; expected one of {BRANCHES}")


def epsilon_factor(theta_prime: float, eta_prime: float) -> float:
    """Overall scale eps = 1/sqrt(1 + theta'*eta'/4) of the scaled shift."""
    radicand = 1.0 + theta_prime * eta_prime / 4.0
    if radicand <= 0.0:
        raise DomainError(
            f"1 + theta'*eta'/4 = {radicand} is not positive; no real scale factor exists"
        )
    return 1.0 / math.sqrt(radicand)


def primed_params(p: NCParams, branch: str) -> tuple[float, float]:
    """Auxiliary (theta', eta') reproducing the target (theta, eta).

    Inverts theta = theta'/(1 + theta'*eta'/4) and its eta twin.  Writing
    s = sqrt(1 - theta*eta), the two solutions are

        minus: theta' = 2*theta/(1 + s),   eta' = 2*eta/(1 + s)
        plus:  theta' = (2/eta)*(1 + s),   eta' = (2/theta)*(1 + s)

    The minus form shown here is the algebraic rewrite of
    (2/eta)*(1 - s); it is exact, avoids cancellation for small
    theta*eta, and extends continuously to theta*eta = 0.  The plus
    branch diverges there.
    """
    sign = branch_sign(branch)
    product = p.product
    if product > 1.0:
        raise DomainError(
            f"theta*eta = {product} exceeds 1; sqrt(1 - theta*eta) is not real"
        )
    s = math.sqrt(1.0 - product)
    if sign < 0:
        return 2.0 * p.theta / (1.0 + s), 2.0 * p.eta / (1.0 + s)
    if p.theta == 0.0 or p.eta == 0.0:
        raise DegenerateError(
            "plus-branch auxiliary parameters diverge when theta or eta vanishes"
        )
    return (2.0 / p.eta) * (1.0 + s), (2.0 / p.theta) * (1.0 + s)


def build_epsilon_rep(
    p: NCParams,
    theta_prime: float,
    eta_prime: float,
    particle_id: int = 0,
) -> Representation:
    """Scaled-shift representation with explicit auxiliary parameters.

    X1 = eps*(x1 - theta'/2 * p2),  X2 = eps*(x2 + theta'/2 * p1),
    P1 = eps*(p1 + eta'/2 * x2),    P2 = eps*(p2 - eta'/2 * x1),

    with eps chosen so the diagonal commutators come out at exactly hbar.
    The coordinate and momentum tables then read eps^2*theta' and
    eps^2*eta'.
    """
    eps = epsilon_factor(theta_prime, eta_prime)
    i = particle_id
    return Representation(
        X1=eps * (x1(i) - 0.5 * theta_prime * p2(i)),
        X2=eps * (x2(i) + 0.5 * theta_prime * p1(i)),
        P1=eps * (p1(i) + 0.5 * eta_prime * x2(i)),
        P2=eps * (p2(i) - 0.5 * eta_prime * x1(i)),
        family="epsilon_general",
        params=p,
        branch=None,
        particle_id=i,
    )


def build_branch_rep(p: NCParams, branch: str, particle_id: int = 0) -> Representation:
    """Closed-form representation for a target (theta, eta), either branch.

    With s = sqrt(1 - theta*eta) the prefactor is sqrt(theta*eta/(2*(1 -+ s)))
    and the shift coefficients are (1 -+ s)/eta for coordinates and
    (1 -+ s)/theta for momenta (upper sign: minus branch).  The minus-branch
    radicand is rewritten exactly as (1 + s)/2 and its shifts as
    theta/(1 + s), eta/(1 + s), which stay finite and correct through
    theta*eta = 0 (where the map degenerates gracefully to the identity).
    The plus branch has radicand (1 - s)/2, which vanishes at theta*eta = 0
    and turns negative for theta*eta < 0; both cases are rejected.
    """
    sign = branch_sign(branch)
    product = p.product
    if product > 1.0:
        raise DomainError(
            f"theta*eta = {product} exceeds 1; sqrt(1 - theta*eta) is not real"
        )
    s = math.sqrt(1.0 - product)
    i = particle_id
    if sign < 0:
        prefactor = math.sqrt((1.0 + s) / 2.0)
        coord_shift = p.theta / (1.0 + s)
        mom_shift = p.eta / (1.0 + s)
    else:
        if product == 0.0:
            raise DegenerateError(
                "plus branch is undefined at theta*eta = 0: its prefactor vanishes "
                "while the shift coefficients diverge"
            )
        if product < 0.0:
            raise DomainError(
                f"plus branch needs theta*eta > 0; the radicand (1 - s)/2 is negative "
                f"for theta*eta = {product}"
            )
        # 1 - s rewritten as product/(1 + s): exact, and immune to the
        # catastrophic cancellation of 1 - sqrt(1 - q) for small q.
        prefactor = math.sqrt(product / (2.0 * (1.0 + s)))
        coord_shift = (1.0 + s) / p.eta
        mom_shift = (1.0 + s) / p.theta
    return Representation(
        X1=prefactor * (x1(i) - coord_shift * p2(i)),
        X2=prefactor * (x2(i) + coord_shift * p1(i)),
        P1=prefactor * (p1(i) + mom_shift * x2(i)),
        P2=prefactor * (p2(i) - mom_shift * x1(i)),
        family="branch",
        params=p,
        branch=branch,
        particle_id=i,
    )


def build_simple_rep(p: NCParams, particle_id: int = 0) -> Representation:
    """Unscaled shift: exact (theta, eta) tables, rescaled diagonal.

    X1 = x1 - theta/2 * p2, X2 = x2 + theta/2 * p1, P1 = p1 + eta/2 * x2,
    P2 = p2 - eta/2 * x1.  The diagonal commutators come out at
    hbar_eff = hbar*(1 + theta*eta/4) instead of hbar.  No restriction on
    theta*eta.
    """
    i = particle_id
    return Representation(
        X1=x1(i) - 0.5 * p.theta * p2(i),
        X2=x2(i) + 0.5 * p.theta * p1(i),
        P1=p1(i) + 0.5 * p.eta * x2(i),
        P2=p2(i) - 0.5 * p.eta * x1(i),
        family="simple",
        params=p,
        branch=None,
        particle_id=i,
    )


def build_representation(
    p: NCParams,
    family: str,
    branch: str | None = None,
    particle_id: int = 0,
) -> Representation:
    """Dispatch on family name; ``branch`` defaults to the physical minus."""
    if family == "branch":
        return build_branch_rep(p, branch or "minus", particle_id)
    if family == "simple":
        return build_simple_rep(p, particle_id)
    if family == "epsilon_general":
        tp, ep = primed_params(p, branch or "minus")
        return build_epsilon_rep(p, tp, ep, particle_id)
    raise ConfigError(f"unknown family {family!r}; expected one of {FAMILIES}")


def effective_planck(p: NCParams) -> float:
    """hbar_eff = hbar*(1 + theta*eta/4): the simple family's diagonal scale."""
    return p.hbar * (1.0 + p.product / 4.0)


def params_from_conditions(c: MassConditions, mass: float, hbar: float = 1.0) -> NCParams:
    """Parameters theta = gamma/m, eta = alpha*m for one particle.

    The product theta*eta = alpha*gamma is then the same for every mass,
    which is what makes the resulting kinematics mass-independent.
    """
    if not mass > 0:
        raise DomainError(f"mass must be positive, got {mass}")
    if c.product >= 1.0:
        raise DomainError(
            f"alpha*gamma = {c.product} must stay below 1 so that theta*eta < 1 for every mass"
        )
    return NCParams(theta=c.gamma / mass, eta=c.alpha * mass, hbar=hbar, mass=mass)


# ---------------------------------------------------------------------------
# verification


def _six_commutators(rep: Representation) -> dict[str, float]:
    hbar = rep.params.hbar
    X1f, X2f, P1f, P2f = rep.forms()
    return {
        "[X1,X2]": commutator(X1f, X2f, hbar).scalar,
        "[P1,P2]": commutator(P1f, P2f, hbar).scalar,
        "[X1,P1]": commutator(X1f, P1f, hbar).scalar,
        "[X2,P2]": commutator(X2f, P2f, hbar).scalar,
        "[X1,P2]": commutator(X1f, P2f, hbar).scalar,
        "[X2,P1]": commutator(X2f, P1f, hbar).scalar,
    }


def verify_nc_algebra(
    rep: Representation,
    expect_theta: float | None = None,
    expect_eta: float | None = None,
    expect_diag: float | None = None,
    tol: float = DEFAULT_TOL,
) -> CheckReport:
    """Measure all six independent commutators and compare to expectations.

    Expectations default to the representation's own family table.  The
    off-diagonal coordinate-momentum commutators are always expected to
    vanish.
    """
    if tol < 0:
        raise ConfigError(f"tolerance must be nonnegative, got {tol}")
    table_theta, table_eta, table_diag = rep.expected_table()
    exp = {
        "[X1,X2]": table_theta if expect_theta is None else expect_theta,
        "[P1,P2]": table_eta if expect_eta is None else expect_eta,
        "[X1,P1]": table_diag if expect_diag is None else expect_diag,
        "[X2,P2]": table_diag if expect_diag is None else expect_diag,
        "[X1,P2]": 0.0,
        "[X2,P1]": 0.0,
    }
    measured = _six_commutators(rep)
    checks = tuple(
        CheckRecord(
            name=name,
            expected=exp[name],
            measured=measured[name],
            tol=tol,
            passed=abs(measured[name] - exp[name]) <= tol,
        )
        for name in measured
    )
    meta = {
        "family": rep.family,
        "branch": rep.branch,
        "theta": rep.params.theta,
        "eta": rep.params.eta,
        "hbar": rep.params.hbar,
    }
    return CheckReport(kind="verification", checks=checks, meta=meta)


def branch_transform_duality(p: NCParams) -> dict[str, tuple[LinearForm, LinearForm]]:
    """The symplectic map sending the plus-branch forms onto the minus ones.

    Returns, for each minus-branch form, the pair (minus form, mapped plus
    form) where the map is

        X1- = -r * P2+,   X2- = +r * P1+,
        P1- = +X2+ / r,   P2- = -X1+ / r,

    with scale r = sign(theta)*sqrt(theta/eta).  For positive parameters
    this is the plain root sqrt(theta/eta); when both parameters are
    negative (the ratio is still positive) the scale must inherit their
    sign, because the plus-branch prefactor sqrt(theta*eta/(2(1-s))) stays
    positive while the minus-branch shift coefficients flip with theta.

    Requires theta/eta > 0 (a real scale exists) and both branches, i.e.
    0 < theta*eta <= 1.
    """
    if p.eta == 0.0 or p.theta / p.eta <= 0.0:
        raise DomainError(
            f"branch duality needs theta/eta > 0, got theta = {p.theta}, eta = {p.eta}; "
            "no real scaling connects the branches for opposite-sign parameters"
        )
    minus = build_branch_rep(p, "minus")
    plus = build_branch_rep(p, "plus")
    ratio = math.copysign(math.sqrt(p.theta / p.eta), p.theta)
    return {
        "X1": (minus.X1, -ratio * plus.P2),
        "X2": (minus.X2, ratio * plus.P1),
        "P1": (minus.P1, (1.0 / ratio) * plus.X2),
        "P2": (minus.P2, -(1.0 / ratio) * plus.X1),
    }


def branch_transform_residual(p: NCParams) -> float:
    """Largest coefficient-wise mismatch of the branch duality map."""
    pairs = branch_transform_duality(p)
    return max(form_distance(a, b) for a, b in pairs.values())


def check_branch_transform(p: NCParams, tol: float = DEFAULT_TOL) -> bool:
    """Whether the plus branch maps onto the minus branch within ``tol``."""
    if tol < 0:
        raise ConfigError(f"tolerance must be nonnegative, got {tol}")
    return branch_transform_residual(p) <= tol


def _identity_rep_forms(particle_id: int) -> tuple[LinearForm, ...]:
    i = particle_id
    return (x1(i), x2(i), p1(i), p2(i))


def _swap_map_forms(scale: float, particle_id: int) -> tuple[LinearForm, ...]:
    # The commutative limit of the plus branch: coordinates become scaled
    # momenta and vice versa.  The scale is sign(theta)*sqrt(theta/eta) so
    # the target stays correct when both parameters are negative.
    i = particle_id
    r = scale
    return (-r * p2(i), r * p1(i), (1.0 / r) * x2(i), -(1.0 / r) * x1(i))


def check_commutative_limit(
    scales: Sequence[float],
    p0: NCParams,
    tols: Sequence[float],
) -> CheckReport:
    """Track both branches along (scale*theta0, scale*eta0) as scale -> 0.

    The minus branch must approach the identity map and the plus branch the
    fixed swap map of the ratio theta0/eta0; each scale's sup-norm distance
    is compared against the matching entry of ``tols``.  Branch failures at
    a degenerate scale (e.g. exactly zero) are recorded, not raised.
    """
    if len(scales) != len(tols):
        raise ConfigError(
            f"need one tolerance per scale, got {len(scales)} scales and {len(tols)} tolerances"
        )
    if p0.eta == 0.0 or p0.theta / p0.eta <= 0.0:
        raise DomainError(
            f"commutative limit tracking needs theta0/eta0 > 0, got theta0 = {p0.theta}, eta0 = {p0.eta}"
        )
    swap_scale = math.copysign(math.sqrt(p0.theta / p0.eta), p0.theta)
    checks: list[CheckRecord] = []
    distances: dict[str, list[float | None]] = {"minus": [], "plus": []}
    for scale, tol in zip(scales, tols):
        p = NCParams(
            theta=scale * p0.theta, eta=scale * p0.eta, hbar=p0.hbar, mass=p0.mass
        )
        targets = {
            "minus": _identity_rep_forms(0),
            "plus": _swap_map_forms(swap_scale, 0),
        }
        for branch, target in targets.items():
            name = f"limit.{branch}.scale={scale:g}"
            try:
                rep = build_branch_rep(p, branch)
            except (DomainError, DegenerateError) as exc:
                distances[branch].append(None)
                checks.append(
                    CheckRecord(
                        name=name,
                        expected=0.0,
                        measured=None,
                        tol=tol,
                        passed=False,
                        detail=f"{type(exc).__name__}: {exc}",
                    )
                )
                continue
            dist = max(form_distance(f, t) for f, t in zip(rep.forms(), target))
            distances[branch].append(dist)
            checks.append(
                CheckRecord(
                    name=name, expected=0.0, measured=dist, tol=tol, passed=dist <= tol
                )
            )
    for branch, seq in distances.items():
        clean = [d for d in seq if d is not None]
        monotone = all(b < a for a, b in zip(clean, clean[1:]))
        checks.append(
            CheckRecord(
                name=f"limit.{branch}.monotone",
                expected=None,
                measured=None,
                tol=0.0,
                passed=monotone and len(clean) == len(seq),
                detail="distances must decrease strictly along the scale sequence",
            )
        )
    meta = {
        "scales": list(scales),
        "theta0": p0.theta,
        "eta0": p0.eta,
        "minus_distances": distances["minus"],
        "plus_distances": distances["plus"],
    }
    return CheckReport(kind="limit", checks=tuple(checks), meta=meta)


# ---------------------------------------------------------------------------
# mass invariance


def kinematic_invariance(
    reps_by_mass: Sequence[tuple[float, Representation]],
    tol: float = DEFAULT_TOL,
) -> CheckReport:
    """Compare kinematic structure of representations across masses.

    For each coordinate form X_i the coefficients on canonical coordinates
    must agree across masses, and the coefficients on canonical momenta
    must agree after multiplication by the particle mass.  For each
    momentum form P_i the roles swap: momentum coefficients agree as-is,
    coordinate coefficients agree after division by the mass.  The spread
    (max minus min over masses) of each rescaled coefficient group is
    compared against ``tol``.
    """
    if len(reps_by_mass) < 2:
        raise ConfigError("need at least two masses to compare invariance")
    names = ("X1", "X2", "P1", "P2")
    groups: dict[str, list[float]] = {}
    for mass, rep in reps_by_mass:
        for name, form in zip(names, rep.forms()):
            coordinate_like = name.startswith("X")
            for var, coeff in form.terms.items():
                if var.is_coordinate:
                    scaled = coeff if coordinate_like else coeff / mass
                    part = "coordinate"
                else:
                    scaled = coeff * mass if coordinate_like else coeff
                    part = "momentum"
                groups.setdefault(f"{name}.{part}.{var.kind}", []).append(scaled)
    checks = []
    for key in sorted(groups):
        values = groups[key]
        spread = max(values) - min(values)
        complete = len(values) == len(reps_by_mass)
        checks.append(
            CheckRecord(
                name=key,
                expected=0.0,
                measured=spread,
                tol=tol,
                passed=complete and spread <= tol,
                detail="" if complete else "coefficient missing for some masses",
            )
        )
    meta = {"masses": [m for m, _ in reps_by_mass]}
    return CheckReport(kind="invariance", checks=tuple(checks), meta=meta)


def mass_invariance_report(
    c: MassConditions,
    masses: Sequence[float],
    family: str = "branch",
    branch: str | None = "minus",
    tol: float = DEFAULT_TOL,
    hbar: float = 1.0,
) -> CheckReport:
    """Kinematic invariance of conditioned representations across masses."""
    reps = [
        (m, build_representation(params_from_conditions(c, m, hbar), family, branch))
        for m in masses
    ]
    report = kinematic_invariance(reps, tol)
    meta = dict(report.meta)
    meta.update({"gamma": c.gamma, "alpha": c.alpha, "family": family, "branch": branch})
    return CheckReport(kind=report.kind, checks=report.checks, meta=meta)
