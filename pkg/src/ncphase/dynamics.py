"""Classical dynamics of quadratic Hamiltonians in noncommutative observables.

A Hamiltonian given in the noncommutative observables (X, P) of a
representation becomes, after substituting the linear forms, an ordinary
quadratic Hamiltonian

    H(z) = z.Q.z/2 + L.z + c,    z = (x1, x2, p1, p2),

over the canonical variables.  Hamilton's equations are then the linear
system dz/dt = J(Qz + L) with the standard symplectic J, which this module
integrates with the exact matrix exponential of the augmented drift over
one fixed step, so the only error sources are rounding and the exponential
itself.

The weak-equivalence check evolves the *same* noncommutative initial data
(X1, X2, dX1/dt, dX2/dt) for several masses and measures how far the
noncommutative coordinate trajectories spread.  Under shared mass
conditions the spread sits at rounding level; for mass-independent fixed
(theta, eta) it does not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import expm

from .algebra import CanonicalVar, LinearForm
from .errors import ConfigError, SingularMapError, StepError
from .representation import (
    MassConditions,
    NCParams,
    Representation,
    build_representation,
    params_from_conditions,
)

HAMILTONIAN_KINDS = ("free", "uniform_gravity", "harmonic")

#: Canonical state ordering used throughout this module.
STATE_ORDER = ("x1", "x2", "p1", "p2")

_J = np.array(
    [
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, -1.0, 0.0, 0.0],
    ]
)


def _form_vector(form: LinearForm, particle_id: int) -> np.ndarray:
    vec = np.zeros(4)
    for var, coeff in form.terms.items():
        if var.particle_id != particle_id:
            raise ConfigError(
                f"dynamics needs single-particle forms; found variable {var} "
                f"outside particle {particle_id}"
            )
        vec[STATE_ORDER.index(var.kind)] = coeff
    return vec


@dataclass(frozen=True)
class QuadraticHamiltonian:
    """H(z) = z.quad.z/2 + linear.z + const over (x1, x2, p1, p2)."""

    kind: str
    rep: Representation
    quad: np.ndarray
    linear: np.ndarray
    const: float
    g: float = 0.0
    omega: float = 0.0

    def value(self, z: np.ndarray) -> float:
        z = np.asarray(z, dtype=float)
        return float(0.5 * z @ self.quad @ z + self.linear @ z + self.const)

    def drift(self) -> tuple[np.ndarray, np.ndarray]:
        """(A, b) of dz/dt = A z + b."""
        return _J @ self.quad, _J @ self.linear


def build_hamiltonian(
    kind: str,
    rep: Representation,
    g: float = 0.0,
    omega: float = 0.0,
) -> QuadraticHamiltonian:
    """Kinetic term plus the requested potential, in the rep's observables.

    free:            H = (P1^2 + P2^2)/(2m)
    uniform_gravity: H = (P1^2 + P2^2)/(2m) + m*g*X2
    harmonic:        H = (P1^2 + P2^2)/(2m) + m*omega^2*(X1^2 + X2^2)/2
    """
    if kind not in HAMILTONIAN_KINDS:
        raise ConfigError(f"unknown Hamiltonian kind {kind!r}; expected one of {HAMILTONIAN_KINDS}")
    if rep.particle_id is None:
        raise ConfigError("dynamics expects a single-particle representation")
    mass = rep.params.mass
    pid = rep.particle_id
    vecs = {name: _form_vector(f, pid) for name, f in zip(rep.form_names(), rep.forms())}
    consts = {name: f.constant for name, f in zip(rep.form_names(), rep.forms())}

    quad = np.zeros((4, 4))
    linear = np.zeros(4)
    const = 0.0
    for name in ("P1", "P2"):
        r, c0 = vecs[name], consts[name]
        quad += np.outer(r, r) / mass
        linear += (c0 / mass) * r
        const += c0 * c0 / (2.0 * mass)
    if kind == "uniform_gravity":
        r, c0 = vecs["X2"], consts["X2"]
        linear += mass * g * r
        const += mass * g * c0
    elif kind == "harmonic":
        for name in ("X1", "X2"):
            r, c0 = vecs[name], consts[name]
            quad += mass * omega * omega * np.outer(r, r)
            linear += mass * omega * omega * c0 * r
            const += 0.5 * mass * omega * omega * c0 * c0
    return QuadraticHamiltonian(
        kind=kind, rep=rep, quad=quad, linear=linear, const=const, g=g, omega=omega
    )


@dataclass(frozen=True)
class Trajectory:
    """Sampled states and noncommutative observables at uniform times."""

    times: np.ndarray
    canonical_states: np.ndarray  # shape (n, 4), columns x1 x2 p1 p2
    nc_observables: np.ndarray  # shape (n, 4), columns X1 X2 P1 P2

    def __len__(self) -> int:
        return len(self.times)


def _step_count(t_end: float, dt: float) -> int:
    if dt <= 0:
        raise StepError(f"dt must be positive, got {dt}")
    if t_end < 0:
        raise StepError(f"t_end must be nonnegative, got {t_end}")
    n = round(t_end / dt)
    if abs(n * dt - t_end) <= 1e-9 * max(1.0, abs(t_end)):
        return int(n)
    return int(math.ceil(t_end / dt))


def evolve(h: QuadraticHamiltonian, initial: Sequence[float], t_end: float, dt: float) -> Trajectory:
    """Propagate with the exact one-step exponential of the affine drift.

    The drift is time-independent, so a single exponential of the augmented
    5x5 matrix is reused for every step.  The trajectory covers t = 0 to
    n*dt where n*dt is t_end (or the first multiple of dt past it when
    t_end is not a multiple).
    """
    z0 = np.asarray(initial, dtype=float)
    if z0.shape != (4,):
        raise ConfigError(f"initial state must have 4 components (x1, x2, p1, p2), got shape {z0.shape}")
    n = _step_count(t_end, dt)
    A, b = h.drift()
    aug = np.zeros((5, 5))
    aug[:4, :4] = A * dt
    aug[:4, 4] = b * dt
    prop = expm(aug)
    E, f = prop[:4, :4], prop[:4, 4]

    states = np.empty((n + 1, 4))
    states[0] = z0
    for k in range(n):
        states[k + 1] = E @ states[k] + f
    times = np.arange(n + 1) * dt

    pid = h.rep.particle_id
    coeff_matrix = np.stack([_form_vector(f_, pid) for f_ in h.rep.forms()])
    offsets = np.array([f_.constant for f_ in h.rep.forms()])
    observables = states @ coeff_matrix.T + offsets
    return Trajectory(times=times, canonical_states=states, nc_observables=observables)


def energy_drift(h: QuadraticHamiltonian, traj: Trajectory) -> float:
    """Max |H(t) - H(0)| along the trajectory, relative to max(1, |H(0)|)."""
    energies = np.array([h.value(z) for z in traj.canonical_states])
    scale = max(1.0, abs(energies[0]))
    return float(np.max(np.abs(energies - energies[0])) / scale)


def nc_initial_state(h: QuadraticHamiltonian, nc_data: Sequence[float]) -> np.ndarray:
    """Canonical state realising given (X1, X2, dX1/dt, dX2/dt) at t = 0.

    The map z -> (X1, X2, dX1/dt, dX2/dt) is affine because the observables
    are linear and the drift is affine; it is inverted with a dense solve.
    """
    vals = np.asarray(nc_data, dtype=float)
    if vals.shape != (4,):
        raise ConfigError(
            f"need 4 values (X1, X2, dX1/dt, dX2/dt), got shape {vals.shape}"
        )
    pid = h.rep.particle_id
    r1 = _form_vector(h.rep.X1, pid)
    r2 = _form_vector(h.rep.X2, pid)
    A, b = h.drift()
    m = np.stack([r1, r2, r1 @ A, r2 @ A])
    rhs = np.array(
        [
            vals[0] - h.rep.X1.constant,
            vals[1] - h.rep.X2.constant,
            vals[2] - r1 @ b,
            vals[3] - r2 @ b,
        ]
    )
    cond = np.linalg.cond(m)
    if not np.isfinite(cond) or cond > 1e12:
        raise SingularMapError(
            "observable-to-state map is singular; the chosen representation does not "
            f"determine a unique canonical state (condition number {cond:.3g})"
        )
    return np.linalg.solve(m, rhs)


def wep_trajectories(
    reps: Sequence[Representation],
    nc_data: Sequence[float],
    g: float,
    t_end: float,
    dt: float,
) -> list[tuple[QuadraticHamiltonian, Trajectory]]:
    """Evolve identical noncommutative initial data under uniform gravity."""
    out = []
    for rep in reps:
        h = build_hamiltonian("uniform_gravity", rep, g=g)
        z0 = nc_initial_state(h, nc_data)
        out.append((h, evolve(h, z0, t_end, dt)))
    return out


def coordinate_spread(runs: Sequence[tuple[QuadraticHamiltonian, Trajectory]]) -> float:
    """Largest pointwise spread of the noncommutative coordinates across runs."""
    coords = np.stack([traj.nc_observables[:, :2] for _, traj in runs])
    return float(np.max(coords.max(axis=0) - coords.min(axis=0)))


def wep_deviation(
    c: MassConditions,
    masses: Sequence[float],
    family: str = "branch",
    branch: str | None = "minus",
    g: float = 1.0,
    nc_data: Sequence[float] = (0.0, 0.0, 1.0, 0.0),
    t_end: float = 10.0,
    dt: float = 0.01,
    hbar: float = 1.0,
) -> float:
    """Trajectory spread across masses under shared mass conditions.

    Builds one conditioned representation per mass, launches all of them
    from the same (X1, X2, dX1/dt, dX2/dt), and returns the largest
    pointwise spread of the noncommutative coordinates.  Mass independence
    of the conditioned kinematics makes this vanish to rounding.
    """
    if len(masses) < 2:
        raise ConfigError("need at least two masses to compare free fall")
    reps = [
        build_representation(params_from_conditions(c, m, hbar), family, branch)
        for m in masses
    ]
    return coordinate_spread(wep_trajectories(reps, nc_data, g, t_end, dt))


def wep_deviation_fixed(
    theta: float,
    eta: float,
    masses: Sequence[float],
    family: str = "branch",
    branch: str | None = "minus",
    g: float = 1.0,
    nc_data: Sequence[float] = (0.0, 0.0, 1.0, 0.0),
    t_end: float = 10.0,
    dt: float = 0.01,
    hbar: float = 1.0,
) -> float:
    """Same comparison with one fixed (theta, eta) shared by all masses.

    This is the counterfactual to :func:`wep_deviation`: without the mass
    conditions the noncommutative shifts enter the dynamics mass-weighted,
    and equal initial data no longer yields equal coordinate histories.
    """
    if len(masses) < 2:
        raise ConfigError("need at least two masses to compare free fall")
    reps = [
        build_representation(
            NCParams(theta=theta, eta=eta, hbar=hbar, mass=m), family, branch
        )
        for m in masses
    ]
    return coordinate_spread(wep_trajectories(reps, nc_data, g, t_end, dt))
