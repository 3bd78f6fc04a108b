"""Constitutive manifolds: implicit strain-stress residuals and data sets.

A constitutive law is kept as an implicit residual ``h(e, s)`` whose zero
set is the admissible strain-stress manifold.  The step solver only needs
``h``, its first derivatives and the multiplier-contracted second
derivatives, so non-diagonal laws can be added later without touching the
solver.  The three built-in families are component-wise (diagonal):

* ``linear``:             h_i = s_i - a_i e_i
* ``explicit_quadratic``: h_i = s_i - a_i e_i - (b_i / 2) e_i^2
* ``implicit_quadratic``: h_i = e_i - s_i / a_i - (b_i / 2) s_i^2

``a`` always stores the stiffness-like diagonal (units N and N m^2); the
implicit family divides by it internally.  Strain/stress index convention
follows the beam model: two shears, elongation, two bendings, torsion, with
conjugate stress resultants.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

LAW_KINDS = ("linear", "explicit_quadratic", "implicit_quadratic")

N_COMPONENTS = 6

DATASET_HEADER = ["e1", "e2", "e3", "e4", "e5", "e6", "s1", "s2", "s3", "s4", "s5", "s6"]


@dataclass(frozen=True)
class ConstitutiveLaw:
    """Diagonal constitutive manifold residual with quadratic variants."""

    kind: str
    a: np.ndarray
    b: np.ndarray = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.kind not in LAW_KINDS:
            raise ValueError(f"unknown law kind {self.kind!r}; expected one of {LAW_KINDS}")
        a = np.asarray(self.a, dtype=float)
        if a.shape != (N_COMPONENTS,):
            raise ValueError("law needs 6 diagonal coefficients")
        if np.any(a <= 0.0) or not np.all(np.isfinite(a)):
            raise ValueError("diagonal coefficients must be positive and finite")
        b = np.zeros(N_COMPONENTS) if self.b is None else np.asarray(self.b, dtype=float)
        if b.shape != (N_COMPONENTS,):
            raise ValueError("quadratic coefficients must have 6 entries")
        if self.kind == "linear" and np.any(b != 0.0):
            raise ValueError("linear law cannot carry quadratic coefficients")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    # -- residual and derivatives -------------------------------------------------

    def residual(self, strain, stress) -> np.ndarray:
        """Manifold residual h; broadcasts over leading axes of (..., 6) inputs."""
        e = np.asarray(strain, dtype=float)
        s = np.asarray(stress, dtype=float)
        if self.kind == "linear":
            return s - self.a * e
        if self.kind == "explicit_quadratic":
            return s - self.a * e - 0.5 * self.b * e**2
        return e - s / self.a - 0.5 * self.b * s**2

    def derivatives(self, strain, stress):
        """Pair (dh/de, dh/ds) as (..., 6, 6) diagonal matrices."""
        e = np.asarray(strain, dtype=float)
        s = np.asarray(stress, dtype=float)
        shape = np.broadcast_shapes(e.shape, s.shape)
        e = np.broadcast_to(e, shape)
        s = np.broadcast_to(s, shape)
        if self.kind == "linear":
            de = np.broadcast_to(-self.a, shape)
            ds = np.ones(shape)
        elif self.kind == "explicit_quadratic":
            de = -(self.a + self.b * e)
            ds = np.ones(shape)
        else:
            de = np.ones(shape)
            ds = -(1.0 / self.a + self.b * s)
        return _as_diag(de), _as_diag(ds)

    def curvature(self, multiplier):
        """Second derivatives of ``h^T xi``: (d_e d_e, d_s d_e, d_s d_s) blocks.

        Constant in the strain-stress point for every built-in family; the
        quadratic term sits entirely in one block.
        """
        xi = np.asarray(multiplier, dtype=float)
        zero = _as_diag(np.zeros_like(xi))
        if self.kind == "linear":
            return zero, zero.copy(), zero.copy()
        curved = _as_diag(-self.b * xi)
        if self.kind == "explicit_quadratic":
            return curved, zero, zero.copy()
        return zero, zero.copy(), curved

    # -- explicit parameterizations (used for sampling and equilibria) -------------

    def stress_from_strain(self, strain) -> np.ndarray:
        """Solve h(e, s) = 0 for the stress branch through the origin."""
        e = np.asarray(strain, dtype=float)
        if self.kind == "linear":
            return self.a * e
        if self.kind == "explicit_quadratic":
            return self.a * e + 0.5 * self.b * e**2
        # implicit: (b/2) s^2 + s/a - e = 0 per component
        s = np.empty_like(e, dtype=float)
        for i in range(N_COMPONENTS):
            bi, inv_a = self.b[i], 1.0 / self.a[i]
            ei = e[..., i]
            if bi == 0.0:
                s[..., i] = self.a[i] * ei
                continue
            disc = inv_a**2 + 2.0 * bi * ei
            if np.any(disc < 0.0):
                raise ValueError("no real stress on the implicit manifold for the given strain")
            s[..., i] = (-inv_a + np.sqrt(disc)) / bi
        return s

    # -- diagnostics ----------------------------------------------------------------

    def consistency_check(self) -> "ConsistencyReport":
        """Verify that zero strain and zero stress pin each other to zero.

        The scalar residual equations are solved analytically.  Quadratic
        families own one spurious nonzero root per component; it is reported
        with its location so the caller can judge whether the operating range
        stays clear of it.
        """
        strain_roots = np.full(N_COMPONENTS, np.nan)
        stress_roots = np.full(N_COMPONENTS, np.nan)
        if self.kind == "explicit_quadratic":
            nz = self.b != 0.0
            strain_roots[nz] = -2.0 * self.a[nz] / self.b[nz]
        elif self.kind == "implicit_quadratic":
            nz = self.b != 0.0
            stress_roots[nz] = -2.0 / (self.a[nz] * self.b[nz])
        finite_roots = np.concatenate([strain_roots[np.isfinite(strain_roots)],
                                       stress_roots[np.isfinite(stress_roots)]])
        passed = bool(np.all(np.abs(finite_roots) > 0.0)) if finite_roots.size else True
        return ConsistencyReport(
            passed=passed,
            spurious_strain_roots=strain_roots,
            spurious_stress_roots=stress_roots,
        )


@dataclass(frozen=True)
class ConsistencyReport:
    passed: bool
    spurious_strain_roots: np.ndarray
    spurious_stress_roots: np.ndarray

    def describe(self) -> str:
        parts = ["pass" if self.passed else "FAIL"]
        for name, roots in (
            ("strain", self.spurious_strain_roots),
            ("stress", self.spurious_stress_roots),
        ):
            if np.any(np.isfinite(roots)):
                vals = ", ".join(f"{r:.6g}" for r in roots if np.isfinite(r))
                parts.append(f"spurious {name} roots at [{vals}]")
        return "; ".join(parts)


def _as_diag(values) -> np.ndarray:
    """Diagonal (..., 6, 6) matrices from (..., 6) diagonals."""
    v = np.asarray(values, dtype=float)
    out = np.zeros(v.shape + (v.shape[-1],))
    idx = np.arange(v.shape[-1])
    out[..., idx, idx] = v
    return out


# ---------------------------------------------------------------------------
# measurement data sets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MeasurementDataSet:
    """Finite set of strain-stress measurement pairs."""

    strains: np.ndarray
    stresses: np.ndarray
    label: str = ""

    def __post_init__(self):
        e = np.atleast_2d(np.asarray(self.strains, dtype=float))
        s = np.atleast_2d(np.asarray(self.stresses, dtype=float))
        if e.shape != s.shape or e.ndim != 2 or e.shape[1] != N_COMPONENTS:
            raise ValueError("strains and stresses must both be (n, 6) arrays")
        if e.shape[0] == 0:
            raise ValueError("measurement data set must not be empty")
        if not (np.all(np.isfinite(e)) and np.all(np.isfinite(s))):
            raise ValueError("measurement data must be finite")
        object.__setattr__(self, "strains", e)
        object.__setattr__(self, "stresses", s)

    def __len__(self) -> int:
        return self.strains.shape[0]

    def point(self, i: int):
        return self.strains[i], self.stresses[i]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(DATASET_HEADER)
            for e, s in zip(self.strains, self.stresses):
                writer.writerow([f"{v:.17g}" for v in np.concatenate([e, s])])

    @classmethod
    def from_csv(cls, path, label: str = "") -> "MeasurementDataSet":
        """Load from CSV with 12 numeric columns (strains then stresses).

        A header row is required; rows must carry exactly 12 values.
        """
        path = Path(path)
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise ValueError(f"{path}: empty data file") from None
            if len(header) != 12:
                raise ValueError(f"{path}: expected 12 columns, header has {len(header)}")
            if _row_is_numeric(header):
                raise ValueError(f"{path}: header row is required")
            rows = []
            for lineno, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != 12:
                    raise ValueError(f"{path}:{lineno}: expected 12 values, got {len(row)}")
                try:
                    rows.append([float(v) for v in row])
                except ValueError as exc:
                    raise ValueError(f"{path}:{lineno}: non-numeric value") from exc
        if not rows:
            raise ValueError(f"{path}: no data rows")
        data = np.asarray(rows, dtype=float)
        return cls(data[:, :6], data[:, 6:], label or path.name)


def _row_is_numeric(row) -> bool:
    try:
        [float(v) for v in row]
    except ValueError:
        return False
    return True


def validate_manifold(law: ConstitutiveLaw, data: MeasurementDataSet, eps: float):
    """Max manifold residual over a data set and whether it is within eps."""
    if data is None or len(data) == 0:
        raise ValueError("cannot validate an empty data set")
    if eps <= 0.0:
        raise ValueError("accuracy eps must be positive")
    residuals = law.residual(data.strains, data.stresses)
    max_residual = float(np.max(np.abs(residuals)))
    return max_residual, max_residual <= eps


def sample_data_set(
    law: ConstitutiveLaw,
    strain_box,
    count: int,
    noise: float = 0.0,
    seed: int = 0,
    label: str = "",
) -> MeasurementDataSet:
    """Synthetic measurements near the manifold: uniform strains in a box.

    Stresses are taken on the manifold, then both channels are perturbed
    uniformly within ``noise``.  Perturbations are shrunk where necessary so
    every emitted point satisfies the advertised consistency bound
    ``|h| <= noise * (1 + max(a))``; for the linear family the raw bound
    already holds.  Deterministic for a fixed seed.
    """
    lo, hi = (np.asarray(side, dtype=float) for side in strain_box)
    if lo.shape != (N_COMPONENTS,) or hi.shape != (N_COMPONENTS,):
        raise ValueError("strain box must be a pair of 6-vectors")
    if np.any(hi < lo) or not (np.all(np.isfinite(lo)) and np.all(np.isfinite(hi))):
        raise ValueError("degenerate strain box")
    if count < 1:
        raise ValueError("need at least one sample")
    if noise < 0.0:
        raise ValueError("noise amplitude must be nonnegative")

    rng = np.random.default_rng(seed)
    strains = rng.uniform(lo, hi, size=(count, N_COMPONENTS))
    stresses = law.stress_from_strain(strains)
    if noise > 0.0:
        bound = noise * (1.0 + float(np.max(law.a)))
        de = rng.uniform(-noise, noise, size=strains.shape)
        ds = rng.uniform(-noise, noise, size=strains.shape)
        for i in range(count):
            scale = 1.0
            for _ in range(60):
                r = law.residual(strains[i] + scale * de[i], stresses[i] + scale * ds[i])
                if np.max(np.abs(r)) <= bound:
                    break
                scale *= 0.5
            strains[i] += scale * de[i]
            stresses[i] += scale * ds[i]
    return MeasurementDataSet(strains, stresses, label or f"sampled-{law.kind}-seed{seed}")
