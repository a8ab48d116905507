"""Joint quaternionic spectrum of commuting real pairs and the two-variable
surface-integral calculus.

Membership of a point ``z = (z1, z2)`` in the joint resolvent is decided by
the real pencil ``L(z, T) = T1^2 + T2^2 - 2 Re(z1) T1 - 2 Re(z2) T2 +
(|z1|^2 + |z2|^2) I``; the block operator ``[[T1, T2], [-T2, T1]] - Q(z)``
is invertible exactly when ``L(z, T)`` is.  The calculus integrates
``f(z) L^-2`` against the two-variable Cauchy kernel over a Euclidean
3-sphere.

The sphere ``z1 = c1 + R cos(eta) e^(i th1), z2 = c2 + R sin(eta) e^(i th2)``
is swept by ``eta in [0, pi/2]`` and two full angles.  Pulling the kernel
back gives the density

    (R^3 / (2 pi^2)) * f(z) * L^-2 * [ (conj(z1) - T1) e^(i th1) sin(eta) cos(eta)^2
                                     + (conj(z2) - T2) e^(i th2) sin(eta)^2 cos(eta) ]

integrated with uniform trapezoid nodes in the two periodic angles (which
is spectrally accurate there) and Gauss-Legendre nodes in ``eta``, where
the integrand is analytic but not periodic, so plain trapezoid would drop
to second order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    AccuracyError,
    GeometryError,
    InvalidArgumentError,
    NumericError,
)
from .func_model import AnalyticScalar
from .quat_core import cvec_star
from .real_op import as_real_operator, op_norm, smallest_singular_value


@dataclass(frozen=True)
class CommutingPair:
    """Pair of same-size commuting real matrices."""

    t1: np.ndarray
    t2: np.ndarray

    def __post_init__(self):
        t1 = as_real_operator(self.t1)
        t2 = as_real_operator(self.t2)
        if t1.shape != t2.shape:
            raise InvalidArgumentError("pair members must have equal shape")
        scale = max(1.0, op_norm(t1) * op_norm(t2))
        if op_norm(t1 @ t2 - t2 @ t1) > 1e-12 * scale:
            raise InvalidArgumentError("matrices do not commute within tolerance")
        object.__setattr__(self, "t1", t1)
        object.__setattr__(self, "t2", t2)

    @property
    def dim(self):
        return self.t1.shape[0]


def pair_q_matrix(pair):
    """Block operator ``[[T1, T2], [-T2, T1]]`` on the doubled complexification."""
    t1 = pair.t1.astype(complex)
    t2 = pair.t2.astype(complex)
    return np.block([[t1, t2], [-t2, t1]])


def joint_pencil(pair, z):
    """The real pencil ``L(z, T)`` whose invertibility defines the joint resolvent."""
    z1, z2 = complex(z[0]), complex(z[1])
    n = pair.dim
    return (
        pair.t1 @ pair.t1
        + pair.t2 @ pair.t2
        - (2.0 * z1.real) * pair.t1
        - (2.0 * z2.real) * pair.t2
        + (abs(z1) ** 2 + abs(z2) ** 2) * np.eye(n)
    )


def _pair_scale(pair):
    return max(1.0, op_norm(pair.t1) ** 2 + op_norm(pair.t2) ** 2)


def joint_resolvent_margin(pair, z):
    """Normalized smallest singular value of the joint pencil at ``z``.

    Depends on ``z`` only through ``Re z1``, ``Re z2`` and ``|z1|^2 + |z2|^2``,
    so it is invariant under conjugating either coordinate.
    """
    return smallest_singular_value(joint_pencil(pair, z)) / _pair_scale(pair)


def joint_membership_margin(pair, z):
    """Margin for membership of ``Q(z)`` in the quaternionic joint resolvent.

    Takes the minimum of the pencil margins at ``z`` and at its adjoint
    image ``z* = (conj(z1), -z2)``: the block operators at ``z`` and ``z*``
    are both invertible exactly when both pencils are, and the resulting
    membership set is adjoint invariant.
    """
    return min(joint_resolvent_margin(pair, z), joint_resolvent_margin(pair, cvec_star(z)))


def joint_block_pencil(pair, z):
    """The 2n x 2n block operator ``[[T1, T2], [-T2, T1]] - Q(z)``."""
    z1, z2 = complex(z[0]), complex(z[1])
    n = pair.dim
    eye = np.eye(n, dtype=complex)
    t1 = pair.t1.astype(complex)
    t2 = pair.t2.astype(complex)
    return np.block(
        [
            [t1 - z1 * eye, t2 - z2 * eye],
            [-t2 + z2.conjugate() * eye, t1 - z1.conjugate() * eye],
        ]
    )


def joint_spectrum_points(pair, tol=1e-8, retries=8, seed=7):
    """Joint eigenvalue pairs of a simultaneously diagonalizable pair.

    Diagonalizes a random combination ``T1 + mu T2``, reads both eigenvalues
    off each shared eigenvector by Rayleigh quotients, and verifies the
    residuals; a fresh ``mu`` is drawn on collisions, up to ``retries``
    attempts.  Returned points are deduplicated and sorted, and each lies in
    the zero set of the joint resolvent margin.
    """
    rng = np.random.default_rng(seed)
    t1 = pair.t1.astype(complex)
    t2 = pair.t2.astype(complex)
    n = pair.dim
    scale = max(1.0, op_norm(t1), op_norm(t2))
    last_err = None
    for _ in range(retries):
        mu = complex(rng.standard_normal(), rng.standard_normal())
        try:
            _, vecs = np.linalg.eig(t1 + mu * t2)
        except np.linalg.LinAlgError as exc:
            last_err = str(exc)
            continue
        points = []
        ok = True
        for k in range(n):
            v = vecs[:, k]
            nv = np.linalg.norm(v)
            lam1 = complex(v.conj() @ (t1 @ v) / (nv * nv))
            lam2 = complex(v.conj() @ (t2 @ v) / (nv * nv))
            r1 = np.linalg.norm(t1 @ v - lam1 * v) / (scale * nv)
            r2 = np.linalg.norm(t2 @ v - lam2 * v) / (scale * nv)
            if max(r1, r2) > tol:
                ok = False
                last_err = f"shared-eigenvector residual {max(r1, r2):.3e}"
                break
            points.append((lam1, lam2))
        if not ok:
            continue
        unique = []
        for p in sorted(points, key=lambda w: (w[0].real, w[0].imag, w[1].real, w[1].imag)):
            if not unique or abs(p[0] - unique[-1][0]) + abs(p[1] - unique[-1][1]) > 10 * tol * scale:
                unique.append(p)
        for p in unique:
            if joint_resolvent_margin(pair, p) > tol:
                raise NumericError(f"candidate joint eigenvalue {p} misses the pencil zero set")
        return unique
    raise NumericError(f"could not separate joint eigenvalues: {last_err}")


# ---------------------------------------------------------------------------
# two-variable analytic functions


class TwoVariableFunction:
    """Analytic map C^2 -> C from a small closed family."""

    def __call__(self, z1, z2):
        raise NotImplementedError


class TwoVariablePolynomial(TwoVariableFunction):
    """Polynomial ``sum c[a, b] z1^a z2^b`` with coefficient grid ``c``."""

    def __init__(self, coeffs):
        coeffs = np.atleast_2d(np.asarray(coeffs, dtype=complex))
        if coeffs.ndim != 2:
            raise InvalidArgumentError("coefficients must form a 2-D grid")
        if not np.all(np.isfinite(coeffs)):
            raise InvalidArgumentError("non-finite coefficient")
        self.coeffs = coeffs

    @classmethod
    def monomial(cls, a, b, scale=1.0):
        c = np.zeros((a + 1, b + 1), dtype=complex)
        c[a, b] = scale
        return cls(c)

    def __call__(self, z1, z2):
        z1 = np.asarray(z1, dtype=complex)
        z2 = np.asarray(z2, dtype=complex)
        out = np.zeros(np.broadcast(z1, z2).shape, dtype=complex)
        for row in self.coeffs[::-1]:
            inner = np.zeros_like(out)
            for c in row[::-1]:
                inner = inner * z2 + c
            out = out * z1 + inner
        return out


class SeparableProduct(TwoVariableFunction):
    """Product ``g(z1) * h(z2)`` of one-variable closed-union scalars."""

    def __init__(self, g, h):
        if not isinstance(g, AnalyticScalar) or not isinstance(h, AnalyticScalar):
            raise InvalidArgumentError("factors must be AnalyticScalar")
        self.g = g
        self.h = h

    def __call__(self, z1, z2):
        return np.asarray(self.g(z1), dtype=complex) * np.asarray(self.h(z2), dtype=complex)


# ---------------------------------------------------------------------------
# surface grid and the integral


@dataclass(frozen=True)
class SphereGrid:
    """Product-angle grid on a Euclidean 3-sphere with a real center.

    ``resolution`` counts nodes per angle; even counts (>= 4) keep the
    periodic grids closed under the reflections that pair conjugate nodes.
    """

    center: tuple
    radius: float
    resolution: int = 48

    def __post_init__(self):
        c1, c2 = float(self.center[0]), float(self.center[1])
        if not (math.isfinite(c1) and math.isfinite(c2)):
            raise InvalidArgumentError("non-finite sphere center")
        object.__setattr__(self, "center", (c1, c2))
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise InvalidArgumentError("sphere radius must be positive")
        if self.resolution < 4 or self.resolution % 2:
            raise InvalidArgumentError("resolution must be an even integer >= 4")

    def with_resolution(self, resolution):
        return SphereGrid(self.center, self.radius, resolution)


def enclosing_sphere_grid(pair, resolution=48, margin=1.0):
    """Sphere grid enclosing the joint spectral set with the given margin.

    The singular set of the joint pencil is a union of 2-spheres, one per
    joint eigenvalue ``(a, b)``: centered at the real-part pair with radius
    ``|(Im a, Im b)|``.  The returned sphere covers all of them.
    """
    points = joint_spectrum_points(pair)
    c1 = (min(p[0].real for p in points) + max(p[0].real for p in points)) / 2.0
    c2 = (min(p[1].real for p in points) + max(p[1].real for p in points)) / 2.0
    reach = max(
        math.hypot(p[0].real - c1, p[1].real - c2) + math.hypot(p[0].imag, p[1].imag)
        for p in points
    )
    return SphereGrid((c1, c2), reach + margin, resolution)


def _check_enclosure(pair, grid, margin_floor=1e-10):
    try:
        points = joint_spectrum_points(pair)
    except NumericError:
        points = None
    c1, c2 = grid.center
    if points is not None:
        for p in points:
            need = math.hypot(p[0].real - c1, p[1].real - c2) + math.hypot(
                p[0].imag, p[1].imag
            )
            if need >= grid.radius:
                raise GeometryError(
                    f"joint spectral sphere of {p} reaches {need:g}, "
                    f"outside the surface radius {grid.radius:g}"
                )
    # coarse singular-value sweep guards the defective / fallback cases
    coarse = 8
    eta = (np.arange(1, coarse) * (math.pi / 2.0)) / coarse
    th = 2.0 * np.pi * np.arange(coarse) / coarse
    ee, a1, a2 = np.meshgrid(eta, th, th, indexing="ij")
    z1 = c1 + grid.radius * np.cos(ee) * np.exp(1j * a1)
    z2 = c2 + grid.radius * np.sin(ee) * np.exp(1j * a2)
    worst = math.inf
    for w1, w2 in zip(z1.ravel(), z2.ravel()):
        worst = min(worst, joint_resolvent_margin(pair, (w1, w2)))
        if worst < margin_floor:
            raise GeometryError("joint pencil is nearly singular on the surface")
    return worst


def martinelli_calculus(
    f,
    pair,
    grid,
    imag_tol=1e-6,
    chunk=65536,
    return_diagnostics=False,
):
    """Two-variable calculus ``f(T1, T2)`` by surface quadrature.

    Evaluates the kernel density on the sphere grid, solving the pencil
    twice per node for the squared inverse, and returns the real restriction
    of the sum.  Polynomials reproduce ``sum c[a,b] T1^a T2^b`` up to grid
    error.  Raises GeometryError for insufficient enclosure and
    AccuracyError when the imaginary residue exceeds ``imag_tol`` relative
    to scale.
    """
    if not isinstance(f, TwoVariableFunction):
        raise InvalidArgumentError("f must be a TwoVariableFunction")
    min_margin = _check_enclosure(pair, grid)

    n = pair.dim
    c1, c2 = grid.center
    radius = grid.radius
    res = grid.resolution
    t1 = pair.t1.astype(complex)
    t2 = pair.t2.astype(complex)
    t_sq = pair.t1 @ pair.t1 + pair.t2 @ pair.t2
    eye = np.eye(n)

    gl_nodes, gl_weights = np.polynomial.legendre.leggauss(res)
    eta = (math.pi / 4.0) * (gl_nodes + 1.0)
    w_eta = (math.pi / 4.0) * gl_weights
    w_th = 2.0 * math.pi / res
    th = 2.0 * np.pi * np.arange(res) / res

    ee, a1, a2 = np.meshgrid(eta, th, th, indexing="ij")
    ww = np.broadcast_to(w_eta[:, None, None], ee.shape).ravel() * (w_th * w_th)
    ee = ee.ravel()
    a1 = a1.ravel()
    a2 = a2.ravel()
    total_nodes = ee.size

    acc = np.zeros((n, n), dtype=complex)
    for start in range(0, total_nodes, chunk):
        sl = slice(start, min(start + chunk, total_nodes))
        ce, se = np.cos(ee[sl]), np.sin(ee[sl])
        u1 = np.exp(1j * a1[sl])
        u2 = np.exp(1j * a2[sl])
        z1 = c1 + radius * ce * u1
        z2 = c2 + radius * se * u2

        pencil = (
            t_sq
            - 2.0 * z1.real[:, None, None] * pair.t1
            - 2.0 * z2.real[:, None, None] * pair.t2
            + (np.abs(z1) ** 2 + np.abs(z2) ** 2)[:, None, None] * eye
        ).astype(complex)

        phi1 = (u1 * se * ce * ce)[:, None, None]
        phi2 = (u2 * se * se * ce)[:, None, None]
        rhs = (z1.conjugate()[:, None, None] * eye - t1) * phi1 + (
            z2.conjugate()[:, None, None] * eye - t2
        ) * phi2
        rhs = rhs * (np.asarray(f(z1, z2), dtype=complex) * ww[sl])[:, None, None]

        once = np.linalg.solve(pencil, rhs)
        twice = np.linalg.solve(pencil, once)
        acc = acc + twice.sum(axis=0)

    value = acc * (radius**3 / (2.0 * math.pi**2))

    scale = max(1.0, float(np.linalg.norm(value.real)))
    imag_defect = float(np.linalg.norm(value.imag))
    if imag_defect > imag_tol * scale:
        raise AccuracyError(
            f"imaginary residue {imag_defect:.3e} exceeds {imag_tol:g} x scale; "
            "refine the grid or check the symmetry of f"
        )
    result = value.real.copy()
    if return_diagnostics:
        diagnostics = {
            "nodes": int(total_nodes),
            "imag_defect": imag_defect,
            "min_margin": float(min_margin),
        }
        return result, diagnostics
    return result
