"""Time marching and structure-preservation diagnostics.

The march starts from rest at the mesh reference configuration and advances
by solving one optimization step per interval, warm-starting each solve
from the previous converged state.  Diagnostics per record: one-sided
discrete momenta of the interval behind the record's time node, the
constraint residual norm and the Newton report of the producing solve.

Momentum conventions.  For one interval (q_a, q_b) with midpoint stress
stack s and step dt, the two one-sided nodal momentum vectors are

    leaving a:   M (q_b - q_a)/dt + (dt/2) B(q_mid)^T s
    arriving b:  M (q_b - q_a)/dt - (dt/2) B(q_mid)^T s

Constraint-force contributions live in the range of the constraint
Jacobian transpose and vanish under every reduction used here (null-space
projection, translation filter, blockwise cross products), so they are
omitted throughout.  The discrete balance equation makes the momentum
arriving at a node match the momentum leaving it, in the projected sense;
translational and rotational reductions are then single-valued and
conserved while the loads are off.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .beam_model import BeamMesh, Configuration, LoadCase, constraints
from .constitutive import ConstitutiveLaw
from .step_solver import (
    NewtonOptions,
    NewtonReport,
    PrimalDualState,
    SolverError,
    StepProblem,
    StepWeights,
    newton_solve,
)


class SimulationError(Exception):
    """Step failure during a march; carries the partial trajectory."""

    def __init__(self, message, step_index, time, trajectory, cause):
        super().__init__(message)
        self.step_index = step_index
        self.time = time
        self.trajectory = trajectory
        self.cause = cause


@dataclass(frozen=True)
class TimeGrid:
    """Equidistant partition of a time interval."""

    t_start: float
    t_end: float
    dt: float

    def __post_init__(self):
        if not self.dt > 0.0:
            raise ValueError("time step must be positive")
        if not self.t_end > self.t_start:
            raise ValueError("end time must exceed start time")
        n = (self.t_end - self.t_start) / self.dt
        if abs(n - round(n)) > 1e-12 * max(1.0, n):
            raise ValueError(
                f"interval length {self.t_end - self.t_start} is not an integer "
                f"multiple of dt={self.dt}"
            )

    @property
    def n_steps(self) -> int:
        return int(round((self.t_end - self.t_start) / self.dt))

    def time(self, index: int) -> float:
        return self.t_start + index * self.dt

    def times(self) -> np.ndarray:
        return self.t_start + self.dt * np.arange(self.n_steps + 1)


# ---------------------------------------------------------------------------
# discrete momenta
# ---------------------------------------------------------------------------


def interval_momenta(mesh: BeamMesh, q_start, q_end, s_mid, dt: float):
    """One-sided nodal momenta (leaving start, arriving end) of one interval."""
    q_start = np.asarray(q_start, dtype=float)
    q_end = np.asarray(q_end, dtype=float)
    s_mid = np.asarray(s_mid, dtype=float)
    inertia = mesh.mass_matrix @ (q_end - q_start) / dt
    b_mid = mesh.strain_jacobian(0.5 * (q_start + q_end))
    internal = 0.5 * dt * (b_mid.T @ s_mid)
    return inertia + internal, inertia - internal


def discrete_momenta(mesh: BeamMesh, q_prev, q_curr, q_next, s_prev, s_next, dt: float):
    """Both one-sided momenta at the middle time node: (arriving, leaving).

    At a converged step, their difference is orthogonal to the null space of
    the constraint Jacobian at the middle configuration (up to the load
    impulse of the two half-intervals).
    """
    _, arriving = interval_momenta(mesh, q_prev, q_curr, s_prev, dt)
    leaving, _ = interval_momenta(mesh, q_curr, q_next, s_next, dt)
    return arriving, leaving


def translational_sum(p) -> np.ndarray:
    """Sum of the position-block components over all nodes."""
    p = np.asarray(p, dtype=float)
    return p.reshape(-1, 12)[:, 0:3].sum(axis=0)


def blockwise_cross_sum(q, p) -> np.ndarray:
    """Sum over nodes of blockwise cross products of configuration and momentum.

    Per node: position x translational momentum plus each director crossed
    with its conjugate momentum block.
    """
    qb = np.asarray(q, dtype=float).reshape(-1, 4, 3)
    pb = np.asarray(p, dtype=float).reshape(-1, 4, 3)
    return np.cross(qb, pb).sum(axis=(0, 1))


def linear_momentum(mesh: BeamMesh, q_start, q_end, s_mid, dt: float) -> np.ndarray:
    """Translational reduction of the interval momentum (single-valued).

    The internal-force term sums to zero exactly under the translation
    filter, so both one-sided variants coincide identically.
    """
    leaving, _ = interval_momenta(mesh, q_start, q_end, s_mid, dt)
    return translational_sum(leaving)


@dataclass(frozen=True)
class AngularMomenta:
    """Both one-sided rotational reductions of one interval and their gap."""

    minus: np.ndarray
    plus: np.ndarray

    @property
    def gap(self) -> float:
        return float(np.max(np.abs(self.minus - self.plus)))


def angular_momentum(mesh: BeamMesh, q_start, q_end, s_mid, dt: float) -> AngularMomenta:
    """Rotational reductions pairing each end with its one-sided momentum.

    ``minus`` pairs the interval start configuration with the momentum
    leaving it; ``plus`` pairs the end configuration with the momentum
    arriving there.  At converged force-free steps both variants agree and
    are conserved; ``minus`` is the variant used by the conservation
    acceptance checks.
    """
    leaving, arriving = interval_momenta(mesh, q_start, q_end, s_mid, dt)
    return AngularMomenta(
        minus=blockwise_cross_sum(q_start, leaving),
        plus=blockwise_cross_sum(q_end, arriving),
    )


# ---------------------------------------------------------------------------
# trajectory
# ---------------------------------------------------------------------------


@dataclass
class StepRecord:
    """State and diagnostics at one time node.

    ``strain``/``stress`` are the mid-interval stacks of the interval that
    produced this node; momenta belong to the same interval.  The first
    record carries zeros there (rest start).
    """

    index: int
    t: float
    q: np.ndarray
    strain: np.ndarray
    stress: np.ndarray
    linear_momentum: np.ndarray
    angular_momentum_minus: np.ndarray
    angular_momentum_plus: np.ndarray
    constraint_norm: float
    newton_iterations: int
    newton_residual: float

    def configuration(self) -> Configuration:
        return Configuration(self.q)


@dataclass
class Trajectory:
    mesh: BeamMesh
    grid: TimeGrid
    records: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def final(self) -> StepRecord:
        return self.records[-1]

    def times(self) -> np.ndarray:
        return np.array([r.t for r in self.records])

    def node_positions(self, node: int) -> np.ndarray:
        return np.array([r.q[12 * node : 12 * node + 3] for r in self.records])

    def linear_momenta(self) -> np.ndarray:
        return np.array([r.linear_momentum for r in self.records])

    def angular_momenta_minus(self) -> np.ndarray:
        return np.array([r.angular_momentum_minus for r in self.records])

    def angular_momenta_plus(self) -> np.ndarray:
        return np.array([r.angular_momentum_plus for r in self.records])

    def constraint_norms(self) -> np.ndarray:
        return np.array([r.constraint_norm for r in self.records])

    def newton_iteration_counts(self) -> np.ndarray:
        return np.array([r.newton_iterations for r in self.records[1:]], dtype=int)

    def mean_newton_iterations(self) -> float:
        counts = self.newton_iteration_counts()
        return float(counts.mean()) if counts.size else 0.0


# ---------------------------------------------------------------------------
# marching
# ---------------------------------------------------------------------------


def initialize(mesh: BeamMesh, feasibility_tol: float = 1e-10):
    """Rest start at the reference configuration.

    Returns the two seed configurations and the zero stress stack of the
    half-interval behind the start.  The reference must satisfy the nodal
    constraints to the given tolerance.
    """
    violation = float(np.max(np.abs(constraints(mesh.reference))))
    if violation > feasibility_tol:
        raise ValueError(
            f"reference configuration violates the nodal constraints "
            f"({violation:.3e} > {feasibility_tol:.3e})"
        )
    q0 = mesh.reference.copy()
    return q0.copy(), q0, np.zeros(mesh.n_strain)


class Simulation:
    """March one scenario over its time grid with warm-started step solves."""

    def __init__(
        self,
        mesh: BeamMesh,
        grid: TimeGrid,
        loads: LoadCase,
        law: ConstitutiveLaw,
        weights: StepWeights = None,
        options: NewtonOptions = None,
        feasibility_tol: float = 1e-10,
    ):
        if loads.n_nodes != mesh.n_nodes:
            raise ValueError("load case node count does not match the mesh")
        self.mesh = mesh
        self.grid = grid
        self.loads = loads
        self.law = law
        self.weights = weights if weights is not None else StepWeights.identity(mesh)
        self.options = options or NewtonOptions()
        q_prev, q_curr, s_prev = initialize(mesh, feasibility_tol)
        self.q_prev = q_prev
        self.q_curr = q_curr
        self.s_prev = s_prev
        self.step_index = 0
        self.last_state: PrimalDualState = None
        self.trajectory = Trajectory(mesh, grid)
        self.trajectory.records.append(
            StepRecord(
                index=0,
                t=grid.t_start,
                q=q_curr.copy(),
                strain=np.zeros(mesh.n_strain),
                stress=np.zeros(mesh.n_strain),
                linear_momentum=np.zeros(3),
                angular_momentum_minus=np.zeros(3),
                angular_momentum_plus=np.zeros(3),
                constraint_norm=float(np.max(np.abs(constraints(q_curr)))),
                newton_iterations=0,
                newton_residual=0.0,
            )
        )

    def _build_problem(self) -> StepProblem:
        t = self.grid.time(self.step_index)
        return StepProblem(
            mesh=self.mesh,
            q_prev=self.q_prev,
            q_curr=self.q_curr,
            s_prev=self.s_prev,
            f_prev=self.loads(t - 0.5 * self.grid.dt),
            f_next=self.loads(t + 0.5 * self.grid.dt),
            dt=self.grid.dt,
            weights=self.weights,
            law=self.law,
        )

    def _warm_state(self) -> PrimalDualState:
        if self.last_state is None:
            return PrimalDualState.rest(self._problem, manifold=True)
        state = self.last_state.copy()
        state.q_next = self.q_curr + (self.q_curr - self.q_prev)
        return state

    def advance(self) -> StepRecord:
        """Solve one step, append and return its record."""
        if self.step_index >= self.grid.n_steps:
            raise RuntimeError("time grid exhausted")
        self._problem = self._build_problem()
        warm = self._warm_state()
        try:
            state, report = newton_solve(self._problem, warm, options=self.options)
        except SolverError as exc:
            t = self.grid.time(self.step_index)
            raise SimulationError(
                f"step {self.step_index} at t={t:.6g} failed: {exc}",
                self.step_index,
                t,
                self.trajectory,
                exc,
            ) from exc

        dt = self.grid.dt
        t_next = self.grid.time(self.step_index + 1)
        l_d = linear_momentum(self.mesh, self.q_curr, state.q_next, state.s, dt)
        j_d = angular_momentum(self.mesh, self.q_curr, state.q_next, state.s, dt)
        record = StepRecord(
            index=self.step_index + 1,
            t=t_next,
            q=state.q_next.copy(),
            strain=state.e.copy(),
            stress=state.s.copy(),
            linear_momentum=l_d,
            angular_momentum_minus=j_d.minus,
            angular_momentum_plus=j_d.plus,
            constraint_norm=float(np.max(np.abs(constraints(state.q_next)))),
            newton_iterations=report.iterations,
            newton_residual=report.final_residual,
        )
        self.trajectory.records.append(record)

        self.q_prev = self.q_curr
        self.q_curr = state.q_next.copy()
        self.s_prev = state.s.copy()
        self.last_state = state
        self.step_index += 1
        return record

    def run(self, on_record=None) -> Trajectory:
        """March to the end of the grid; stream records to ``on_record``.

        On a step failure the partial trajectory is preserved on the raised
        :class:`SimulationError` (records already streamed stay written).
        """
        if on_record is not None and len(self.trajectory.records) == 1:
            on_record(self.trajectory.records[0])
        while self.step_index < self.grid.n_steps:
            record = self.advance()
            if on_record is not None:
                on_record(record)
        return self.trajectory


def run_simulation(
    mesh: BeamMesh,
    grid: TimeGrid,
    loads: LoadCase,
    law: ConstitutiveLaw,
    weights: StepWeights = None,
    options: NewtonOptions = None,
    on_record=None,
) -> Trajectory:
    sim = Simulation(mesh, grid, loads, law, weights, options)
    return sim.run(on_record=on_record)
