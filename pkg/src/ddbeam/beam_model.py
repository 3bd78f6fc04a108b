"""Geometrically exact director beam: kinematics, operators, mesh, loads.

A node carries a centroid position and three directors spanning the cross
section frame, 12 scalars per node.  Orthonormality of the directors is not
built into the coordinates; it is enforced through the nodal constraint
vector of :func:`node_constraints`, whose kernel basis
:func:`node_nullspace_basis` is used by the step solver to eliminate the
constraint forces.

Two-node elements with a single midpoint quadrature point are used for all
internal terms: field values at the quadrature point are nodal averages and
arc-length derivatives are nodal differences divided by the element
reference length.  With first-order interpolation every strain measure is an
exact quadratic form of the element coordinates, so the strain Jacobian is
exactly linear in the coordinates and its derivatives are constant.  The
step solver exploits this: second derivatives are assembled from the
constant per-element strain Hessians of :func:`element_strain_hessians`.

Strain ordering: entries 0-1 shear, 2 elongation, 3-4 bending, 5 torsion.
Stress stacks are conjugate (force resultants first, then moments).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache, cached_property

import numpy as np

N_NODE_DOF = 12
N_ELEMENT_DOF = 24
N_STRAIN = 6
N_NODE_CONSTRAINTS = 6

#: Default tolerance for accepting a director triad as orthonormal.
TRIAD_TOL = 1e-10


def hat(v: np.ndarray) -> np.ndarray:
    """Skew matrix of a 3-vector: ``hat(v) @ w == cross(v, w)``."""
    return np.array(
        [
            [0.0, -v[2], v[1]],
            [v[2], 0.0, -v[0]],
            [-v[1], v[0], 0.0],
        ]
    )


# ---------------------------------------------------------------------------
# configurations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NodeState:
    """Position and director triad of one node."""

    phi0: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    d3: np.ndarray

    def to_vector(self) -> np.ndarray:
        return np.concatenate([self.phi0, self.d1, self.d2, self.d3])

    @classmethod
    def from_vector(cls, v) -> "NodeState":
        v = np.asarray(v, dtype=float)
        if v.shape != (N_NODE_DOF,):
            raise ValueError(f"node vector must have 12 entries, got shape {v.shape}")
        return cls(v[0:3].copy(), v[3:6].copy(), v[6:9].copy(), v[9:12].copy())

    def constraint_violation(self) -> float:
        """Max-norm of the orthonormality residual of the triad."""
        return float(np.max(np.abs(node_constraints(self.to_vector()))))

    def is_feasible(self, tol: float = TRIAD_TOL) -> bool:
        return self.constraint_violation() <= tol


class Configuration:
    """Structured view of a flat configuration vector (12 entries per node).

    The flat vector and the per-node view are bijective; round trips are
    exact copies of the same floats.
    """

    __slots__ = ("q",)

    def __init__(self, q):
        q = np.asarray(q, dtype=float)
        if q.ndim != 1 or q.size % N_NODE_DOF != 0:
            raise ValueError(f"configuration vector length must be a multiple of 12, got {q.shape}")
        self.q = q

    @property
    def n_nodes(self) -> int:
        return self.q.size // N_NODE_DOF

    def node(self, a: int) -> NodeState:
        return NodeState.from_vector(self.q[N_NODE_DOF * a : N_NODE_DOF * (a + 1)])

    def nodes(self):
        return [self.node(a) for a in range(self.n_nodes)]

    @classmethod
    def from_nodes(cls, nodes) -> "Configuration":
        return cls(np.concatenate([n.to_vector() for n in nodes]))

    def max_constraint_violation(self) -> float:
        return float(np.max(np.abs(constraints(self.q))))

    def copy(self) -> "Configuration":
        return Configuration(self.q.copy())


# ---------------------------------------------------------------------------
# element kernels
# ---------------------------------------------------------------------------


def _split_element(x):
    """Nodal blocks (phi1, d1_1, d2_1, d3_1, phi2, d1_2, d2_2, d3_2)."""
    x = np.asarray(x, dtype=float)
    if x.shape != (N_ELEMENT_DOF,):
        raise ValueError(f"element vector must have 24 entries, got shape {x.shape}")
    return tuple(x[3 * k : 3 * (k + 1)] for k in range(8))


def element_strain(x, length: float, reference=None) -> np.ndarray:
    """Strain measures of a two-node element at the midpoint quadrature point.

    Entries: two shear measures (director 1, 2 against the axis derivative),
    elongation, two bending measures and torsion.  ``reference`` holds the raw
    measures of the stress-free configuration and is subtracted when given.
    """
    p1, a1, b1, c1, p2, a2, b2, c2 = _split_element(x)
    dphi = (p2 - p1) / length
    two_l = 2.0 * length
    e = np.array(
        [
            0.5 * (a1 + a2) @ dphi,
            0.5 * (b1 + b2) @ dphi,
            0.5 * (c1 + c2) @ dphi,
            (b2 @ c1 - b1 @ c2) / two_l,
            (a1 @ c2 - a2 @ c1) / two_l,
            (a2 @ b1 - a1 @ b2) / two_l,
        ]
    )
    if reference is not None:
        e = e - reference
    return e


def element_strain_jacobian(x, length: float) -> np.ndarray:
    """Jacobian of :func:`element_strain` w.r.t. the 24 element coordinates.

    Exactly linear (homogeneous) in ``x``.
    """
    p1, a1, b1, c1, p2, a2, b2, c2 = _split_element(x)
    dphi = (p2 - p1) / length
    inv_l = 1.0 / length
    inv_2l = 0.5 / length
    B = np.zeros((N_STRAIN, N_ELEMENT_DOF))
    # shear / elongation rows
    for row, (da, db) in enumerate(((a1, a2), (b1, b2), (c1, c2))):
        dmean = 0.5 * (da + db)
        B[row, 0:3] = -dmean * inv_l
        B[row, 12:15] = dmean * inv_l
        col = 3 * (row + 1)
        B[row, col : col + 3] = 0.5 * dphi
        B[row, col + 12 : col + 15] = 0.5 * dphi
    # bending rows and torsion row
    B[3, 6:9] = -c2 * inv_2l   # d2 node 1
    B[3, 18:21] = c1 * inv_2l  # d2 node 2
    B[3, 9:12] = b2 * inv_2l   # d3 node 1
    B[3, 21:24] = -b1 * inv_2l
    B[4, 3:6] = c2 * inv_2l    # d1 node 1
    B[4, 15:18] = -c1 * inv_2l
    B[4, 9:12] = -a2 * inv_2l  # d3 node 1
    B[4, 21:24] = a1 * inv_2l
    B[5, 3:6] = -b2 * inv_2l   # d1 node 1
    B[5, 15:18] = b1 * inv_2l
    B[5, 6:9] = a2 * inv_2l    # d2 node 1
    B[5, 18:21] = -a1 * inv_2l
    return B


def _set_block_pair(H, i, j, value):
    """Write value*I3 into 3x3 block (i, j) and its mirror of a 24x24 matrix."""
    ri, rj = 3 * i, 3 * j
    for k in range(3):
        H[ri + k, rj + k] = value
        H[rj + k, ri + k] = value


@lru_cache(maxsize=None)
def element_strain_hessians(length: float) -> np.ndarray:
    """Constant Hessians of the six element strain measures, shape (6, 24, 24).

    Each strain measure is a homogeneous quadratic form ``e_i = q.H_i.q / 2``
    of the element coordinates, so ``H_i`` is exactly symmetric and constant.
    Blocks are indexed 0..7 in the order phi1, d1_1, d2_1, d3_1, phi2, d1_2,
    d2_2, d3_2.  The returned array is cached and read-only.
    """
    c = 0.5 / length
    H = np.zeros((N_STRAIN, N_ELEMENT_DOF, N_ELEMENT_DOF))
    for row in range(3):
        d_n1, d_n2 = row + 1, row + 5
        _set_block_pair(H[row], d_n1, 0, -c)
        _set_block_pair(H[row], d_n1, 4, c)
        _set_block_pair(H[row], d_n2, 0, -c)
        _set_block_pair(H[row], d_n2, 4, c)
    # bending about director 1: d2/d3 cross coupling
    _set_block_pair(H[3], 6, 3, c)   # d2_2 . d3_1
    _set_block_pair(H[3], 2, 7, -c)  # d2_1 . d3_2
    # bending about director 2: d1/d3 coupling
    _set_block_pair(H[4], 1, 7, c)   # d1_1 . d3_2
    _set_block_pair(H[4], 5, 3, -c)  # d1_2 . d3_1
    # torsion: d1/d2 coupling
    _set_block_pair(H[5], 5, 2, c)   # d1_2 . d2_1
    _set_block_pair(H[5], 1, 6, -c)  # d1_1 . d2_2
    H.setflags(write=False)
    return H


def element_internal_force_jacobian(stress, length: float) -> np.ndarray:
    """Derivative of the element internal force ``B(x)^T s`` w.r.t. ``x``.

    Constant in the element coordinates and exactly symmetric; linear in the
    stress argument.
    """
    H = element_strain_hessians(length)
    return np.einsum("i,ijk->jk", np.asarray(stress, dtype=float), H)


def element_strain_jacobian_derivative(direction, length: float) -> np.ndarray:
    """Derivative of ``B(x) a`` w.r.t. ``x`` for a fixed 24-vector ``a``.

    Since the strain measures are quadratic forms this equals the strain
    Jacobian evaluated at ``direction``; it is computed here independently
    from the constant strain Hessians.
    """
    H = element_strain_hessians(length)
    return np.einsum("ijk,k->ij", H, np.asarray(direction, dtype=float))


# ---------------------------------------------------------------------------
# nodal constraints and null-space basis
# ---------------------------------------------------------------------------


def node_constraints(x) -> np.ndarray:
    """Orthonormality residual of one node's director triad (6 entries).

    Unit-norm defects of the three directors first, then the pairwise
    orthogonality defects (2-3, 1-3, 1-2), each scaled by one half.
    """
    x = np.asarray(x, dtype=float)
    d1, d2, d3 = x[3:6], x[6:9], x[9:12]
    return 0.5 * np.array(
        [
            d1 @ d1 - 1.0,
            d2 @ d2 - 1.0,
            d3 @ d3 - 1.0,
            2.0 * (d2 @ d3),
            2.0 * (d1 @ d3),
            2.0 * (d1 @ d2),
        ]
    )


def node_constraint_jacobian(x) -> np.ndarray:
    """Jacobian of :func:`node_constraints`; exactly linear in the node vector."""
    x = np.asarray(x, dtype=float)
    d1, d2, d3 = x[3:6], x[6:9], x[9:12]
    G = np.zeros((N_NODE_CONSTRAINTS, N_NODE_DOF))
    G[0, 3:6] = d1
    G[1, 6:9] = d2
    G[2, 9:12] = d3
    G[3, 6:9] = d3
    G[3, 9:12] = d2
    G[4, 3:6] = d3
    G[4, 9:12] = d1
    G[5, 3:6] = d2
    G[5, 6:9] = d1
    return G


def node_constraint_curvature(multiplier) -> np.ndarray:
    """Constant symmetric second derivative of ``g(x)^T nu`` for one node."""
    nu = np.asarray(multiplier, dtype=float)
    V = np.zeros((N_NODE_DOF, N_NODE_DOF))
    eye = np.eye(3)
    blocks = [
        (1, 1, nu[0]),
        (2, 2, nu[1]),
        (3, 3, nu[2]),
        (2, 3, nu[3]),
        (1, 3, nu[4]),
        (1, 2, nu[5]),
    ]
    for i, j, val in blocks:
        V[3 * i : 3 * i + 3, 3 * j : 3 * j + 3] += val * eye
        if i != j:
            V[3 * j : 3 * j + 3, 3 * i : 3 * i + 3] += val * eye
    return V


def node_nullspace_basis(x) -> np.ndarray:
    """Kernel basis of the nodal constraint Jacobian, shape (12, 6).

    The first three columns move the position, the last three act on the
    directors as an infinitesimal rotation: ``N @ (0, w)`` stacks
    ``(0, w x d1, w x d2, w x d3)``.  ``G(x) @ N(x) = 0`` holds identically,
    for any director values.
    """
    x = np.asarray(x, dtype=float)
    N = np.zeros((N_NODE_DOF, 6))
    N[0:3, 0:3] = np.eye(3)
    for k, dk in enumerate((x[3:6], x[6:9], x[9:12])):
        N[3 * (k + 1) : 3 * (k + 2), 3:6] = -hat(dk)
    return N


def _n_nodes(q) -> int:
    q = np.asarray(q, dtype=float)
    if q.ndim != 1 or q.size % N_NODE_DOF != 0:
        raise ValueError(f"configuration vector length must be a multiple of 12, got {q.shape}")
    return q.size // N_NODE_DOF


def constraints(q) -> np.ndarray:
    """Stacked nodal constraint residuals, shape (6 n_nodes,)."""
    q = np.asarray(q, dtype=float)
    n = _n_nodes(q)
    return np.concatenate([node_constraints(q[12 * a : 12 * a + 12]) for a in range(n)])


def constraint_jacobian(q) -> np.ndarray:
    """Block-diagonal constraint Jacobian, shape (6 n_nodes, 12 n_nodes)."""
    q = np.asarray(q, dtype=float)
    n = _n_nodes(q)
    G = np.zeros((6 * n, 12 * n))
    for a in range(n):
        G[6 * a : 6 * a + 6, 12 * a : 12 * a + 12] = node_constraint_jacobian(q[12 * a : 12 * a + 12])
    return G


def constraint_curvature(multipliers) -> np.ndarray:
    """Block-diagonal curvature of ``g(q)^T nu``, shape (12 n, 12 n)."""
    nu = np.asarray(multipliers, dtype=float)
    if nu.size % N_NODE_CONSTRAINTS != 0:
        raise ValueError("multiplier vector length must be a multiple of 6")
    n = nu.size // N_NODE_CONSTRAINTS
    V = np.zeros((12 * n, 12 * n))
    for a in range(n):
        V[12 * a : 12 * a + 12, 12 * a : 12 * a + 12] = node_constraint_curvature(
            nu[6 * a : 6 * a + 6]
        )
    return V


def nullspace_basis(q) -> np.ndarray:
    """Block-diagonal kernel basis of the constraint Jacobian, (12 n, 6 n)."""
    q = np.asarray(q, dtype=float)
    n = _n_nodes(q)
    N = np.zeros((12 * n, 6 * n))
    for a in range(n):
        N[12 * a : 12 * a + 12, 6 * a : 6 * a + 6] = node_nullspace_basis(q[12 * a : 12 * a + 12])
    return N


# ---------------------------------------------------------------------------
# inertia
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class InertiaCoefficients:
    """Cross-section inertia moments per unit length.

    ``e00`` is mass per length (kg/m); ``e11``, ``e22`` are second moments
    against the two in-section directors (kg m); the mixed terms are first
    and cross moments (kg).  The third director carries no inertia because
    the position field does not depend on it.
    """

    e00: float
    e11: float
    e22: float
    e01: float = 0.0
    e02: float = 0.0
    e12: float = 0.0

    def coefficient_matrix(self) -> np.ndarray:
        """Symmetric 3x3 matrix of the (phi, d1, d2) inertia couplings."""
        return np.array(
            [
                [self.e00, self.e01, self.e02],
                [self.e01, self.e11, self.e12],
                [self.e02, self.e12, self.e22],
            ]
        )

    def unit_length_matrix(self) -> np.ndarray:
        """Mass matrix per unit length, shape (12, 12); d3 rows/cols are zero."""
        coeff = np.zeros((4, 4))
        coeff[:3, :3] = self.coefficient_matrix()
        return np.kron(coeff, np.eye(3))

    def validate(self) -> None:
        c = self.coefficient_matrix()
        if not np.all(np.isfinite(c)):
            raise ValueError("inertia coefficients must be finite")
        eigs = np.linalg.eigvalsh(c)
        if eigs.min() < -1e-12 * max(1.0, eigs.max()):
            raise ValueError(f"inertia coefficient matrix is not positive semidefinite: {eigs}")


def element_mass_matrix(inertia: InertiaCoefficients, length: float) -> np.ndarray:
    """Consistent element mass from linear shape functions, shape (24, 24)."""
    m_bar = inertia.unit_length_matrix()
    shape = np.array([[1.0 / 3.0, 1.0 / 6.0], [1.0 / 6.0, 1.0 / 3.0]])
    return length * np.kron(shape, m_bar)


# ---------------------------------------------------------------------------
# mesh
# ---------------------------------------------------------------------------


@dataclass(eq=False)
class BeamMesh:
    """Reference geometry and constant element data of one beam.

    ``lengths`` are the element reference lengths along the beam axis; the
    reference strain measures are evaluated from the reference configuration
    itself, so the strain of the reference configuration is exactly zero.
    """

    reference: np.ndarray
    elements: np.ndarray
    lengths: np.ndarray
    inertia: InertiaCoefficients
    reference_measures: np.ndarray = field(init=False)
    element_dofs: np.ndarray = field(init=False)

    def __post_init__(self):
        self.reference = np.asarray(self.reference, dtype=float)
        self.elements = np.asarray(self.elements, dtype=int)
        self.lengths = np.asarray(self.lengths, dtype=float)
        n = _n_nodes(self.reference)
        if self.elements.ndim != 2 or self.elements.shape[1] != 2:
            raise ValueError("elements must be an (n_elements, 2) index array")
        if np.any(self.elements < 0) or np.any(self.elements >= n):
            raise ValueError("element node index out of range")
        if self.lengths.shape != (self.elements.shape[0],):
            raise ValueError("one reference length per element required")
        if np.any(self.lengths <= 0.0):
            raise ValueError("element reference lengths must be positive")
        self.inertia.validate()
        dofs = np.empty((self.n_elements, N_ELEMENT_DOF), dtype=int)
        for e, (a, b) in enumerate(self.elements):
            dofs[e, :12] = np.arange(12 * a, 12 * a + 12)
            dofs[e, 12:] = np.arange(12 * b, 12 * b + 12)
        self.element_dofs = dofs
        self.reference_measures = np.vstack(
            [
                element_strain(self.reference[dofs[e]], self.lengths[e])
                for e in range(self.n_elements)
            ]
        )

    @property
    def n_nodes(self) -> int:
        return self.reference.size // N_NODE_DOF

    @property
    def n_elements(self) -> int:
        return self.elements.shape[0]

    @property
    def n_dof(self) -> int:
        return self.reference.size

    @property
    def n_strain(self) -> int:
        return N_STRAIN * self.n_elements

    def element_vector(self, values, e: int) -> np.ndarray:
        """Restriction of a global 12n vector to element ``e`` (24 entries)."""
        return np.asarray(values, dtype=float)[self.element_dofs[e]]

    def strain(self, q) -> np.ndarray:
        """Stacked element strains relative to the reference, shape (6 E,)."""
        q = np.asarray(q, dtype=float)
        out = np.empty(self.n_strain)
        for e in range(self.n_elements):
            out[6 * e : 6 * e + 6] = element_strain(
                q[self.element_dofs[e]], self.lengths[e], self.reference_measures[e]
            )
        return out

    def strain_jacobian(self, q) -> np.ndarray:
        """Global strain Jacobian, shape (6 E, 12 n); exactly linear in q."""
        q = np.asarray(q, dtype=float)
        B = np.zeros((self.n_strain, self.n_dof))
        for e in range(self.n_elements):
            B[6 * e : 6 * e + 6, self.element_dofs[e]] = element_strain_jacobian(
                q[self.element_dofs[e]], self.lengths[e]
            )
        return B

    def internal_force_jacobian(self, stress) -> np.ndarray:
        """Assembled derivative of B(q)^T s w.r.t. q, (12 n, 12 n), symmetric."""
        s = np.asarray(stress, dtype=float)
        U = np.zeros((self.n_dof, self.n_dof))
        for e in range(self.n_elements):
            dofs = self.element_dofs[e]
            U[np.ix_(dofs, dofs)] += element_internal_force_jacobian(
                s[6 * e : 6 * e + 6], self.lengths[e]
            )
        return U

    def internal_force_jacobian_product(self, stress, vector) -> np.ndarray:
        """Matrix-free evaluation of ``internal_force_jacobian(stress) @ vector``."""
        s = np.asarray(stress, dtype=float)
        v = np.asarray(vector, dtype=float)
        out = np.zeros(self.n_dof)
        for e in range(self.n_elements):
            dofs = self.element_dofs[e]
            H = element_strain_hessians(self.lengths[e])
            out[dofs] += np.einsum("i,ijk,k->j", s[6 * e : 6 * e + 6], H, v[dofs])
        return out

    def strain_jacobian_derivative(self, direction) -> np.ndarray:
        """Assembled derivative of ``B(q) a`` w.r.t. q for fixed ``a``, (6 E, 12 n)."""
        a = np.asarray(direction, dtype=float)
        out = np.zeros((self.n_strain, self.n_dof))
        for e in range(self.n_elements):
            dofs = self.element_dofs[e]
            out[6 * e : 6 * e + 6, dofs] = element_strain_jacobian_derivative(
                a[dofs], self.lengths[e]
            )
        return out

    @cached_property
    def mass_matrix(self) -> np.ndarray:
        """Constant assembled mass matrix, shape (12 n, 12 n)."""
        M = np.zeros((self.n_dof, self.n_dof))
        for e in range(self.n_elements):
            dofs = self.element_dofs[e]
            M[np.ix_(dofs, dofs)] += element_mass_matrix(self.inertia, self.lengths[e])
        M.setflags(write=False)
        return M


# ---------------------------------------------------------------------------
# external loads
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TriangularPulse:
    """Piecewise linear load amplitude: ramp up to 1, ramp down to 0, then off.

    Zero for negative times and for all times at or beyond ``end_time``.
    """

    peak_time: float = 0.5
    end_time: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.peak_time < self.end_time:
            raise ValueError("need 0 < peak_time < end_time")

    def __call__(self, t: float) -> float:
        if t < 0.0 or t >= self.end_time:
            return 0.0
        if t < self.peak_time:
            return t / self.peak_time
        return (self.end_time - t) / (self.end_time - self.peak_time)

    def impulse(self) -> float:
        """Time integral of the amplitude (1/2 of the support length)."""
        return 0.5 * self.end_time


@dataclass(frozen=True)
class LoadCase:
    """Static nodal force pattern scaled by a time amplitude.

    Forces act on the nodal positions only; director components carry no
    load.  ``forces`` has one row of (fx, fy, fz) per node.
    """

    forces: np.ndarray
    amplitude: TriangularPulse

    def __post_init__(self):
        object.__setattr__(self, "forces", np.asarray(self.forces, dtype=float))
        if self.forces.ndim != 2 or self.forces.shape[1] != 3:
            raise ValueError("forces must be an (n_nodes, 3) array")

    @classmethod
    def from_groups(cls, n_nodes: int, groups, amplitude: TriangularPulse) -> "LoadCase":
        """Accumulate (node_indices, force) groups into a nodal pattern.

        Node indices are zero based; several groups may hit the same node.
        """
        forces = np.zeros((n_nodes, 3))
        for nodes, force in groups:
            force = np.asarray(force, dtype=float)
            for a in nodes:
                if not 0 <= a < n_nodes:
                    raise ValueError(f"load node index {a} out of range")
                forces[a] += force
        return cls(forces, amplitude)

    @property
    def n_nodes(self) -> int:
        return self.forces.shape[0]

    def total_static_force(self) -> np.ndarray:
        return self.forces.sum(axis=0)

    def static_vector(self) -> np.ndarray:
        """Static pattern as a flat 12n load vector (positions only)."""
        out = np.zeros(N_NODE_DOF * self.n_nodes)
        for a in range(self.n_nodes):
            out[12 * a : 12 * a + 3] = self.forces[a]
        return out

    def __call__(self, t: float) -> np.ndarray:
        """Load vector at time t; amplitude is clamped to zero for t < 0."""
        if not np.isfinite(t):
            raise ValueError("load evaluation time must be finite")
        a = self.amplitude(t) if t >= 0.0 else 0.0
        return a * self.static_vector()


def zero_load_case(n_nodes: int) -> LoadCase:
    return LoadCase(np.zeros((n_nodes, 3)), TriangularPulse())


# ---------------------------------------------------------------------------
# quarter-arc geometry
# ---------------------------------------------------------------------------

QUARTER_ARC_RADIUS = 2.0 / np.pi


def quarter_arc_mesh(
    n_elements: int,
    inertia: InertiaCoefficients,
    radius: float = QUARTER_ARC_RADIUS,
) -> BeamMesh:
    """Uniform mesh of a quarter circular arc in the x-y plane.

    The first node sits at the origin, the arc ends at (radius, radius, 0).
    Director 3 is the unit tangent, director 1 the in-plane normal pointing
    to the arc center, director 2 completes the right-handed triad (out of
    plane).  Element reference lengths are exact arc lengths.
    """
    if n_elements < 1:
        raise ValueError("need at least one element")
    if radius <= 0.0:
        raise ValueError("radius must be positive")
    n_nodes = n_elements + 1
    nodes = []
    for k in range(n_nodes):
        theta = 0.5 * np.pi * k / n_elements
        sin, cos = np.sin(theta), np.cos(theta)
        nodes.append(
            NodeState(
                phi0=radius * np.array([sin, 1.0 - cos, 0.0]),
                d1=np.array([-sin, cos, 0.0]),
                d2=np.array([0.0, 0.0, 1.0]),
                d3=np.array([cos, sin, 0.0]),
            )
        )
    elements = np.column_stack([np.arange(n_elements), np.arange(1, n_nodes)])
    arc_length = 0.5 * np.pi * radius
    lengths = np.full(n_elements, arc_length / n_elements)
    return BeamMesh(Configuration.from_nodes(nodes).q, elements, lengths, inertia)


def arc_mirror_configuration(q, radius: float = QUARTER_ARC_RADIUS) -> np.ndarray:
    """Image of an arc configuration under the mesh's mirror symmetry.

    The quarter arc maps onto itself under reflection across the plane
    through the chord midpoint with normal (1, 1, 0)/sqrt(2), combined with
    node-order reversal.  Positions map affinely, directors by the linear
    part; the tangent director picks up a sign because the arc-length
    direction flips with the node order.
    """
    q = np.asarray(q, dtype=float)
    n = _n_nodes(q)
    out = np.empty_like(q)

    def reflect(v):
        return np.array([-v[1], -v[0], v[2]])

    for a in range(n):
        src = q[12 * (n - 1 - a) : 12 * (n - a)]
        phi, d1, d2, d3 = src[0:3], src[3:6], src[6:9], src[9:12]
        blk = out[12 * a : 12 * a + 12]
        blk[0:3] = reflect(phi) + np.array([radius, radius, 0.0])
        blk[3:6] = reflect(d1)
        blk[6:9] = reflect(d2)
        blk[9:12] = -reflect(d3)
    return out


def arc_symmetry_defect(q, radius: float = QUARTER_ARC_RADIUS) -> float:
    """Max-norm distance of a configuration from its own mirror image."""
    q = np.asarray(q, dtype=float)
    return float(np.max(np.abs(q - arc_mirror_configuration(q, radius))))
