"""Per-step optimization: KKT systems, Newton iteration, data enumeration.

Each time step poses an equality-constrained least-distance problem in the
strain-stress variables of all elements, subject to three mechanical
constraints: midpoint compatibility, the null-space-projected discrete
balance equation, and the nodal director constraints at the new time node.
Two formulations share the machinery:

* ``data_point``: the target strain-stress pair of every element is a fixed
  measurement; the smooth problem is solved for one candidate assignment at
  a time and the discrete search over assignments is done by enumeration
  (:func:`solve_by_enumeration`).
* ``manifold``: the target is a point on an implicit constitutive manifold
  ``h = 0`` and becomes part of the unknowns, with one extra multiplier
  block enforcing the manifold residual.

Newton iterates on the stacked first-order optimality conditions with the
exact symmetric KKT matrix.  Because the strain operators are quadratic in
the configuration and the built-in laws are at most quadratic, every
residual entry is a polynomial of degree two in the unknowns, which makes
the KKT matrices exact (central differences reproduce them to rounding).

Per-element quadratic forms of the distance objective are scaled by the
element reference length (one-point quadrature of a per-unit-length
density) so the objective is consistent under mesh refinement.  The
strain-side and stress-side weights are therefore two independent SPD
matrices; they coincide with a matrix and its inverse only on unit-length
elements.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

import numpy as np
import scipy.linalg
import scipy.sparse
import scipy.sparse.linalg

from .beam_model import (
    BeamMesh,
    constraint_curvature,
    constraint_jacobian,
    constraints,
    nullspace_basis,
)
from .constitutive import ConstitutiveLaw, MeasurementDataSet

#: Unknown-count threshold above which the "auto" linear solver goes sparse.
SPARSE_THRESHOLD = 400


class SolverError(Exception):
    """Base class for step-solver failures."""


class KktFactorizationError(SolverError):
    """The KKT matrix could not be factorized (singular or non-finite)."""

    def __init__(self, message, iteration=None):
        super().__init__(message)
        self.iteration = iteration


class NewtonConvergenceError(SolverError):
    """Newton ran out of iterations; carries the residual history."""

    def __init__(self, message, residual_norms):
        super().__init__(message)
        self.residual_norms = list(residual_norms)


class EnumerationError(SolverError):
    """Every candidate sub-solve of an enumeration failed."""

    def __init__(self, message, failures):
        super().__init__(message)
        self.failures = failures


# ---------------------------------------------------------------------------
# weights
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StepWeights:
    """Assembled strain-side and stress-side objective weights.

    Both are block diagonal with one 6x6 block per element, scaled by the
    element reference length.  Built from a single SPD component matrix via
    :meth:`from_component_matrix`; the raw constructor performs no checks so
    defective weights can be injected deliberately in tests.
    """

    strain_weight: np.ndarray
    stress_weight: np.ndarray

    @classmethod
    def from_component_matrix(cls, mesh: BeamMesh, component) -> "StepWeights":
        c = np.asarray(component, dtype=float)
        if c.ndim == 1:
            c = np.diag(c)
        if c.shape != (6, 6):
            raise ValueError("weight component must be a 6-vector or a 6x6 matrix")
        if not np.allclose(c, c.T, rtol=0.0, atol=1e-14):
            raise ValueError("weight component matrix must be symmetric")
        eigs = np.linalg.eigvalsh(c)
        if eigs.min() <= 0.0:
            raise ValueError(f"weight component matrix must be positive definite, eigs {eigs}")
        c_inv = np.linalg.inv(c)
        n = 6 * mesh.n_elements
        strain_w = np.zeros((n, n))
        stress_w = np.zeros((n, n))
        for e in range(mesh.n_elements):
            sl = slice(6 * e, 6 * e + 6)
            strain_w[sl, sl] = mesh.lengths[e] * c
            stress_w[sl, sl] = mesh.lengths[e] * c_inv
        return cls(strain_w, stress_w)

    @classmethod
    def identity(cls, mesh: BeamMesh) -> "StepWeights":
        return cls.from_component_matrix(mesh, np.ones(6))


# ---------------------------------------------------------------------------
# step problem and primal-dual state
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class StepProblem:
    """Frozen data of one time step.

    Holds the two known configurations, the stress stack of the previous
    half-interval, the midpoint load vectors of both half-intervals, the
    step size, the objective weights and (for the manifold formulation) the
    constitutive law.  Derived quantities that stay constant during a solve
    are cached here: the null-space basis at the current configuration, the
    strain Jacobian of the previous midpoint and the constant part of the
    balance equation.
    """

    mesh: BeamMesh
    q_prev: np.ndarray
    q_curr: np.ndarray
    s_prev: np.ndarray
    f_prev: np.ndarray
    f_next: np.ndarray
    dt: float
    weights: StepWeights
    law: ConstitutiveLaw = None
    nullspace: np.ndarray = field(init=False)
    balance_const: np.ndarray = field(init=False)

    def __post_init__(self):
        n, m = self.mesh.n_dof, self.mesh.n_strain
        for name, size in (("q_prev", n), ("q_curr", n), ("s_prev", m),
                           ("f_prev", n), ("f_next", n)):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (size,):
                raise ValueError(f"{name} must have shape ({size},), got {arr.shape}")
            setattr(self, name, arr)
        if not self.dt > 0.0:
            raise ValueError("time step must be positive")
        self.nullspace = nullspace_basis(self.q_curr)
        b_prev = self.mesh.strain_jacobian(0.5 * (self.q_prev + self.q_curr))
        self.balance_const = (
            self.mesh.mass_matrix @ (self.q_prev - 2.0 * self.q_curr) / self.dt
            + 0.5 * self.dt * (b_prev.T @ self.s_prev)
            - 0.5 * self.dt * (self.f_prev + self.f_next)
        )

    @property
    def n_reduced(self) -> int:
        return 6 * self.mesh.n_nodes


@dataclass
class PrimalDualState:
    """Primal and dual unknowns of one step problem.

    The manifold fields are ``None`` for the data-point formulation.
    Multiplier blocks: ``lam`` for compatibility (one per strain entry),
    ``mu`` for the projected balance (six per node), ``nu`` for the nodal
    constraints (six per node), ``xi`` for the manifold residual.
    """

    q_next: np.ndarray
    e: np.ndarray
    s: np.ndarray
    lam: np.ndarray
    mu: np.ndarray
    nu: np.ndarray
    e_check: np.ndarray = None
    s_check: np.ndarray = None
    xi: np.ndarray = None

    @classmethod
    def rest(cls, problem: StepProblem, manifold: bool) -> "PrimalDualState":
        """Cold start: new configuration at the current one, all else zero."""
        m = problem.mesh.n_strain
        r = problem.n_reduced
        zeros6 = lambda: np.zeros(m)
        state = cls(
            q_next=problem.q_curr.copy(),
            e=zeros6(), s=zeros6(), lam=zeros6(),
            mu=np.zeros(r), nu=np.zeros(r),
        )
        if manifold:
            state.e_check = zeros6()
            state.s_check = zeros6()
            state.xi = zeros6()
        return state

    @property
    def is_manifold(self) -> bool:
        return self.e_check is not None

    def copy(self) -> "PrimalDualState":
        dup = lambda v: None if v is None else v.copy()
        return PrimalDualState(
            self.q_next.copy(), self.e.copy(), self.s.copy(), self.lam.copy(),
            self.mu.copy(), self.nu.copy(),
            dup(self.e_check), dup(self.s_check), dup(self.xi),
        )

    def block_names(self):
        if self.is_manifold:
            return ("e_check", "s_check", "q_next", "e", "s", "lam", "mu", "nu", "xi")
        return ("q_next", "e", "s", "lam", "mu", "nu")

    def to_vector(self) -> np.ndarray:
        return np.concatenate([getattr(self, name) for name in self.block_names()])

    @classmethod
    def from_vector(cls, vector, mesh: BeamMesh, manifold: bool) -> "PrimalDualState":
        vector = np.asarray(vector, dtype=float)
        sizes = state_layout(mesh, manifold)
        expected = sum(sizes.values())
        if vector.shape != (expected,):
            raise ValueError(f"state vector must have {expected} entries, got {vector.shape}")
        parts = {}
        offset = 0
        for name, size in sizes.items():
            parts[name] = vector[offset : offset + size].copy()
            offset += size
        return cls(**parts)


def state_layout(mesh: BeamMesh, manifold: bool) -> dict:
    """Ordered block sizes of the stacked primal-dual vector."""
    m, r = mesh.n_strain, 6 * mesh.n_nodes
    layout = {}
    if manifold:
        layout["e_check"] = m
        layout["s_check"] = m
    layout.update({"q_next": mesh.n_dof, "e": m, "s": m, "lam": m, "mu": r, "nu": r})
    if manifold:
        layout["xi"] = m
    return layout


def _slices(layout: dict) -> dict:
    out = {}
    offset = 0
    for name, size in layout.items():
        out[name] = slice(offset, offset + size)
        offset += size
    return out


# ---------------------------------------------------------------------------
# balance equation
# ---------------------------------------------------------------------------


def reduced_balance_residual(problem: StepProblem, q_next, s) -> np.ndarray:
    """Null-space-projected discrete balance at the current time node.

    Second-difference inertia term plus trapezoidal internal-force and load
    terms of both adjacent half-intervals, projected by the kernel basis of
    the constraint Jacobian at the current configuration.
    """
    q_next = np.asarray(q_next, dtype=float)
    s = np.asarray(s, dtype=float)
    b_mid = problem.mesh.strain_jacobian(0.5 * (problem.q_curr + q_next))
    full = (
        problem.mesh.mass_matrix @ q_next / problem.dt
        + 0.5 * problem.dt * (b_mid.T @ s)
        + problem.balance_const
    )
    return problem.nullspace.T @ full


def balance_jacobian(problem: StepProblem, s) -> np.ndarray:
    """Derivative of the projected balance w.r.t. the new configuration.

    Constant mass part plus a term linear in the midpoint stress stack.
    """
    s = np.asarray(s, dtype=float)
    inner = problem.mesh.mass_matrix / problem.dt + 0.25 * problem.dt * (
        problem.mesh.internal_force_jacobian(s)
    )
    return problem.nullspace.T @ inner


# ---------------------------------------------------------------------------
# KKT residuals
# ---------------------------------------------------------------------------


def kkt_residual_data_point(problem: StepProblem, state: PrimalDualState,
                            target_strain, target_stress) -> np.ndarray:
    """Stacked first-order optimality residual for a fixed data target.

    Blocks in order: stationarity in the new configuration, in the strain
    and stress stacks, then feasibility of compatibility, balance and nodal
    constraints.
    """
    te = np.asarray(target_strain, dtype=float)
    ts = np.asarray(target_stress, dtype=float)
    mesh, dt = problem.mesh, problem.dt
    q_mid = 0.5 * (problem.q_curr + state.q_next)
    b_mid = mesh.strain_jacobian(q_mid)
    g_next = constraint_jacobian(state.q_next)
    n_mu = problem.nullspace @ state.mu

    r_q = (
        -0.5 * (b_mid.T @ state.lam)
        + mesh.mass_matrix @ n_mu / dt
        + 0.25 * dt * mesh.internal_force_jacobian_product(state.s, n_mu)
        + g_next.T @ state.nu
    )
    r_e = problem.weights.strain_weight @ (state.e - te) + state.lam
    r_s = problem.weights.stress_weight @ (state.s - ts) + 0.5 * dt * (b_mid @ n_mu)
    r_lam = state.e - mesh.strain(q_mid)
    r_mu = reduced_balance_residual(problem, state.q_next, state.s)
    r_nu = constraints(state.q_next)
    return np.concatenate([r_q, r_e, r_s, r_lam, r_mu, r_nu])


def kkt_residual_manifold(problem: StepProblem, state: PrimalDualState) -> np.ndarray:
    """Stacked optimality residual with the manifold point among the unknowns.

    The manifold target replaces the fixed data point inside the strain and
    stress stationarity blocks; two extra stationarity blocks for the
    manifold point and the manifold feasibility block are appended.
    """
    law = _require_law(problem)
    mesh = problem.mesh
    n_el = mesh.n_elements
    eh = state.e_check.reshape(n_el, 6)
    sh = state.s_check.reshape(n_el, 6)
    xi = state.xi.reshape(n_el, 6)
    dh_de, dh_ds = law.derivatives(eh, sh)
    r_echeck = (
        problem.weights.strain_weight @ (state.e_check - state.e)
        + np.einsum("eij,ei->ej", dh_de, xi).ravel()
    )
    r_scheck = (
        problem.weights.stress_weight @ (state.s_check - state.s)
        + np.einsum("eij,ei->ej", dh_ds, xi).ravel()
    )
    core = kkt_residual_data_point(problem, state, state.e_check, state.s_check)
    r_xi = law.residual(eh, sh).ravel()
    return np.concatenate([r_echeck, r_scheck, core, r_xi])


def kkt_residual(problem: StepProblem, state: PrimalDualState,
                 target_strain=None, target_stress=None) -> np.ndarray:
    if state.is_manifold:
        return kkt_residual_manifold(problem, state)
    return kkt_residual_data_point(problem, state, target_strain, target_stress)


# ---------------------------------------------------------------------------
# KKT matrices
# ---------------------------------------------------------------------------


def kkt_matrix_data_point(problem: StepProblem, state: PrimalDualState) -> np.ndarray:
    """Symmetric KKT matrix of the data-point formulation.

    Upper blocks are assembled once and mirrored, so symmetry is exact.
    The configuration-configuration block collects the compatibility
    curvature (through the constant strain Hessians contracted with the
    compatibility multipliers) and the constraint curvature; the fixed data
    target does not enter.
    """
    mesh, dt = problem.mesh, problem.dt
    layout = state_layout(mesh, manifold=False)
    sl = _slices(layout)
    n = sum(layout.values())
    S = np.zeros((n, n))

    def put(a, b, block):
        S[sl[a], sl[b]] = block
        if a != b:
            S[sl[b], sl[a]] = block.T

    q_mid = 0.5 * (problem.q_curr + state.q_next)
    b_mid = mesh.strain_jacobian(q_mid)
    n_mu = problem.nullspace @ state.mu
    m_eye = np.eye(mesh.n_strain)

    put("q_next", "q_next",
        -0.25 * mesh.internal_force_jacobian(state.lam) + constraint_curvature(state.nu))
    put("q_next", "s", 0.25 * dt * mesh.strain_jacobian_derivative(n_mu).T)
    put("q_next", "lam", -0.5 * b_mid.T)
    put("q_next", "mu", balance_jacobian(problem, state.s).T)
    put("q_next", "nu", constraint_jacobian(state.q_next).T)
    put("e", "e", problem.weights.strain_weight)
    put("e", "lam", m_eye)
    put("s", "s", problem.weights.stress_weight)
    put("s", "mu", 0.5 * dt * (b_mid @ problem.nullspace))
    return S


def kkt_matrix_manifold(problem: StepProblem, state: PrimalDualState) -> np.ndarray:
    """Symmetric KKT matrix of the manifold formulation.

    Borders the data-point matrix with the manifold blocks: objective
    couplings to the strain/stress stacks, first derivatives of the
    manifold residual against its multiplier, and the multiplier-contracted
    curvature on the diagonal.
    """
    law = _require_law(problem)
    mesh = problem.mesh
    n_el = mesh.n_elements
    layout = state_layout(mesh, manifold=True)
    sl = _slices(layout)
    n = sum(layout.values())
    S = np.zeros((n, n))

    core = kkt_matrix_data_point(problem, state)
    fix_slice = slice(sl["q_next"].start, sl["nu"].stop)
    S[fix_slice, fix_slice] = core

    def put(a, b, block):
        S[sl[a], sl[b]] = block
        if a != b:
            S[sl[b], sl[a]] = block.T

    eh = state.e_check.reshape(n_el, 6)
    sh = state.s_check.reshape(n_el, 6)
    xi = state.xi.reshape(n_el, 6)
    dh_de, dh_ds = law.derivatives(eh, sh)
    cur_ee, cur_se, cur_ss = law.curvature(xi)

    put("e_check", "e_check", problem.weights.strain_weight + _block_diag(cur_ee))
    put("s_check", "e_check", _block_diag(cur_se).T)
    put("s_check", "s_check", problem.weights.stress_weight + _block_diag(cur_ss))
    put("e_check", "e", -problem.weights.strain_weight)
    put("s_check", "s", -problem.weights.stress_weight)
    put("e_check", "xi", _block_diag_transpose(dh_de))
    put("s_check", "xi", _block_diag_transpose(dh_ds))
    return S


def kkt_matrix(problem: StepProblem, state: PrimalDualState) -> np.ndarray:
    if state.is_manifold:
        return kkt_matrix_manifold(problem, state)
    return kkt_matrix_data_point(problem, state)


def _block_diag(blocks) -> np.ndarray:
    blocks = np.asarray(blocks, dtype=float)
    n_el, k, _ = blocks.shape
    out = np.zeros((n_el * k, n_el * k))
    for e in range(n_el):
        out[k * e : k * e + k, k * e : k * e + k] = blocks[e]
    return out


def _block_diag_transpose(blocks) -> np.ndarray:
    return _block_diag(np.transpose(np.asarray(blocks, dtype=float), (0, 2, 1)))


def _require_law(problem: StepProblem) -> ConstitutiveLaw:
    if problem.law is None:
        raise ValueError("manifold formulation requires a constitutive law on the problem")
    return problem.law


# ---------------------------------------------------------------------------
# objective
# ---------------------------------------------------------------------------


def distance_cost(problem: StepProblem, state: PrimalDualState,
                  target_strain, target_stress) -> float:
    """Weighted squared distance of the step state to a data target."""
    de = state.e - np.asarray(target_strain, dtype=float)
    ds = state.s - np.asarray(target_stress, dtype=float)
    return float(
        0.5 * de @ (problem.weights.strain_weight @ de)
        + 0.5 * ds @ (problem.weights.stress_weight @ ds)
    )


# ---------------------------------------------------------------------------
# Newton iteration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NewtonOptions:
    """Options of the full-step Newton iteration.

    The residual max-norm is driven below ``tolerance * (1 + initial)``;
    there is no globalization, warm starts are the robustness mechanism.
    ``linear_solver`` is ``dense`` (symmetric-indefinite LAPACK), ``sparse``
    (SuperLU on the same matrix) or ``auto`` (sparse above
    ``SPARSE_THRESHOLD`` unknowns).
    """

    tolerance: float = 1e-12
    max_iterations: int = 25
    linear_solver: str = "auto"

    def __post_init__(self):
        if self.tolerance <= 0.0:
            raise ValueError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.linear_solver not in ("auto", "dense", "sparse"):
            raise ValueError("linear_solver must be auto, dense or sparse")


@dataclass
class NewtonReport:
    converged: bool
    iterations: int
    residual_norms: list
    final_residual: float


def _solve_kkt(S: np.ndarray, rhs: np.ndarray, options: NewtonOptions, iteration: int) -> np.ndarray:
    if not np.all(np.isfinite(S)):
        raise KktFactorizationError(
            f"KKT matrix contains non-finite entries at iteration {iteration}", iteration
        )
    use_sparse = options.linear_solver == "sparse" or (
        options.linear_solver == "auto" and S.shape[0] > SPARSE_THRESHOLD
    )
    if use_sparse:
        try:
            lu = scipy.sparse.linalg.splu(scipy.sparse.csc_matrix(S))
            step = lu.solve(rhs)
        except RuntimeError as exc:
            raise KktFactorizationError(
                f"sparse KKT factorization failed at iteration {iteration}: {exc}", iteration
            ) from exc
    else:
        ldu, piv, step, info = scipy.linalg.lapack.dsysv(S, rhs, lower=1)
        if info != 0:
            raise KktFactorizationError(
                f"symmetric-indefinite factorization failed at iteration {iteration} (info={info})",
                iteration,
            )
    if not np.all(np.isfinite(step)):
        raise KktFactorizationError(
            f"KKT solve produced non-finite step at iteration {iteration}", iteration
        )
    return step


def newton_solve(
    problem: StepProblem,
    initial: PrimalDualState,
    target_strain=None,
    target_stress=None,
    options: NewtonOptions = None,
):
    """Full-space Newton on the KKT conditions, full steps, warm-startable.

    The formulation follows the initial state: states carrying manifold
    fields are solved against the problem's constitutive law, plain states
    against the given data target.  Returns the converged state and a
    report with the residual history.
    """
    options = options or NewtonOptions()
    state = initial.copy()
    if not state.is_manifold and (target_strain is None or target_stress is None):
        raise ValueError("data-point solve needs target strain and stress stacks")
    vec = state.to_vector()
    if not np.all(np.isfinite(vec)):
        raise ValueError("initial state must be finite")

    residual_norms = []
    r = kkt_residual(problem, state, target_strain, target_stress)
    norm0 = float(np.max(np.abs(r)))
    residual_norms.append(norm0)
    threshold = options.tolerance * (1.0 + norm0)

    iterations = 0
    while residual_norms[-1] > threshold:
        if iterations >= options.max_iterations:
            raise NewtonConvergenceError(
                f"no convergence within {options.max_iterations} iterations "
                f"(residual {residual_norms[-1]:.3e}, threshold {threshold:.3e})",
                residual_norms,
            )
        S = kkt_matrix(problem, state)
        step = _solve_kkt(S, -r, options, iterations)
        vec = vec + step
        state = PrimalDualState.from_vector(vec, problem.mesh, state.is_manifold)
        r = kkt_residual(problem, state, target_strain, target_stress)
        residual_norms.append(float(np.max(np.abs(r))))
        iterations += 1

    report = NewtonReport(
        converged=True,
        iterations=iterations,
        residual_norms=residual_norms,
        final_residual=residual_norms[-1],
    )
    return state, report


# ---------------------------------------------------------------------------
# enumeration over measurement assignments
# ---------------------------------------------------------------------------

#: Hard caps for exhaustive per-element enumeration (cost grows as |D|^E).
EXHAUSTIVE_MAX_ELEMENTS = 3
EXHAUSTIVE_MAX_POINTS = 10


@dataclass
class EnumerationResult:
    """Best assignment of measurement points found by a discrete search."""

    state: PrimalDualState
    report: NewtonReport
    assignment: np.ndarray
    cost: float
    candidate_costs: dict
    failures: list
    solves: int


def _targets_for_assignment(data: MeasurementDataSet, assignment) -> tuple:
    te = np.concatenate([data.strains[i] for i in assignment])
    ts = np.concatenate([data.stresses[i] for i in assignment])
    return te, ts


def solve_by_enumeration(
    problem: StepProblem,
    data: MeasurementDataSet,
    mode: str = "shared",
    initial: PrimalDualState = None,
    options: NewtonOptions = None,
) -> EnumerationResult:
    """Discrete-continuous step solve over raw measurement assignments.

    Modes:

    * ``shared``: one data point for all elements; exact enumeration over
      the data set.
    * ``exhaustive``: independent per-element assignments, exact enumeration
      over all |D|^E combinations; guarded to tiny meshes and data sets.
    * ``coordinate_descent``: per-element assignments improved by
      single-element swaps until no swap lowers the cost (local optimum).

    Ties are broken toward the lexicographically smallest assignment by
    scanning candidates in ascending index order and accepting only strict
    improvements.  Failed sub-solves are recorded and skipped.
    """
    if mode not in ("shared", "exhaustive", "coordinate_descent"):
        raise ValueError("mode must be shared, exhaustive or coordinate_descent")
    n_el = problem.mesh.n_elements
    m = len(data)
    if initial is None:
        initial = PrimalDualState.rest(problem, manifold=False)
    if initial.is_manifold:
        raise ValueError("enumeration requires a data-point (plain) initial state")

    failures = []
    solves = 0
    candidate_costs = {}

    def try_assignment(assignment):
        nonlocal solves
        te, ts = _targets_for_assignment(data, assignment)
        solves += 1
        try:
            state, report = newton_solve(problem, initial, te, ts, options)
        except SolverError as exc:
            failures.append((tuple(assignment), str(exc)))
            return None
        cost = distance_cost(problem, state, te, ts)
        candidate_costs[tuple(assignment)] = cost
        return state, report, cost

    best = None

    def consider(assignment):
        nonlocal best
        result = try_assignment(assignment)
        if result is None:
            return
        state, report, cost = result
        if best is None or cost < best[2]:
            best = (state, report, cost, tuple(assignment))

    if mode == "shared":
        for i in range(m):
            consider([i] * n_el)
    elif mode == "exhaustive":
        if n_el > EXHAUSTIVE_MAX_ELEMENTS or m > EXHAUSTIVE_MAX_POINTS:
            raise ValueError(
                f"exhaustive enumeration limited to {EXHAUSTIVE_MAX_ELEMENTS} elements "
                f"and {EXHAUSTIVE_MAX_POINTS} points (got {n_el} elements, {m} points)"
            )
        for assignment in itertools.product(range(m), repeat=n_el):
            consider(list(assignment))
    else:
        # coordinate descent from the best shared assignment
        for i in range(m):
            consider([i] * n_el)
        if best is not None:
            current = list(best[3])
            improved = True
            while improved:
                improved = False
                for e in range(n_el):
                    for i in range(m):
                        if i == current[e]:
                            continue
                        trial = current.copy()
                        trial[e] = i
                        key = tuple(trial)
                        if key in candidate_costs:
                            cost = candidate_costs[key]
                            if cost < best[2]:
                                # solved earlier; re-solve to recover the state
                                result = try_assignment(trial)
                                if result is not None and result[2] < best[2]:
                                    best = (result[0], result[1], result[2], key)
                                    current = trial
                                    improved = True
                            continue
                        result = try_assignment(trial)
                        if result is not None and result[2] < best[2]:
                            best = (result[0], result[1], result[2], key)
                            current = trial
                            improved = True

    if best is None:
        raise EnumerationError(
            f"all {solves} candidate solves failed", failures
        )
    state, report, cost, assignment = best
    return EnumerationResult(
        state=state,
        report=report,
        assignment=np.asarray(assignment, dtype=int),
        cost=cost,
        candidate_costs=candidate_costs,
        failures=failures,
        solves=solves,
    )
