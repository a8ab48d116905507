"""Quaternionic spectrum and conjugation-compatible calculus for real matrices.

A real n x n matrix T acts on the complexification entrywise; the flat
conjugation of a complex operator is entrywise conjugation in the real
basis.  Membership of a quaternion q in the resolvent is decided by the
invertibility of the real pencil ``T^2 - 2 Re(q) T + norm(q)^2``, reported
as a normalized smallest singular value so callers pick their own
thresholds.  The analytic calculus integrates ``F(z)(z - T)^-1`` over
conjugate-symmetric circles and restricts to the real subspace after a
flat-invariance check.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .contour_calc import (
    Contour,
    QuadratureConfig,
    QuadratureDiagnostics,
    enclosing_circles,
    kahan_sum,
)
from .errors import (
    AccuracyWarning,
    ContractViolationError,
    GeometryError,
    InvalidArgumentError,
    NumericError,
)
from .func_model import AnalyticScalar
from .quat_core import Quaternion, left_mult_matrix

#: Normalized smallest singular value above which a point counts as resolvent.
RESOLVENT_REL_THRESHOLD = 1e-10

_DEFAULT_EIG_CAP = 64


def as_real_operator(T):
    """Validate and return a finite real square matrix as float array."""
    T = np.asarray(T, dtype=float)
    if T.ndim != 2 or T.shape[0] != T.shape[1]:
        raise InvalidArgumentError("expected a square matrix")
    if not np.all(np.isfinite(T)):
        raise InvalidArgumentError("non-finite matrix entry")
    return T


def complexify(T):
    """Extension of a real matrix to the complexified space (same entries)."""
    return as_real_operator(T).astype(complex)


def flat(S):
    """Conjugation of a complex operator by the canonical real-basis conjugation.

    In the standard basis this is entrywise conjugation; real operators are
    exactly its fixed points.
    """
    S = np.asarray(S, dtype=complex)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise InvalidArgumentError("expected a square matrix")
    return S.conj()


def op_norm(T):
    return float(np.linalg.norm(np.asarray(T), 2))


def smallest_singular_value(M):
    return float(np.linalg.svd(np.asarray(M), compute_uv=False)[-1])


def q_resolvent_margin(T, q):
    """Normalized smallest singular value of ``T^2 - 2 Re(q) T + norm(q)^2 I``.

    Positive margins certify membership of ``q`` in the quaternionic
    resolvent; the value depends on ``q`` only through its spectrum.
    """
    T = as_real_operator(T)
    if not isinstance(q, Quaternion):
        raise InvalidArgumentError("expected a Quaternion")
    n = T.shape[0]
    pencil = T @ T - (2.0 * q.re) * T + (q.norm() ** 2) * np.eye(n)
    return smallest_singular_value(pencil) / max(1.0, op_norm(T) ** 2)


def in_q_resolvent(T, q, threshold=RESOLVENT_REL_THRESHOLD):
    """Threshold form of the membership query; prefer the margin directly."""
    return q_resolvent_margin(T, q) > threshold


def q_block_pencil(T, q):
    """The 2n x 2n block operator ``diag(T_C, T_C) - Q(z)`` for ``q = Q(z)``."""
    T = complexify(T)
    n = T.shape[0]
    eye = np.eye(n, dtype=complex)
    z1, z2 = q.coords
    return np.block(
        [[T - z1 * eye, -z2 * eye], [z2.conjugate() * eye, T - z1.conjugate() * eye]]
    )


@dataclass(frozen=True)
class SpectrumReport:
    """Eigenvalues of the complexified operator with conjugate pairing.

    ``pairs`` lists ``(representative, multiplicity)`` with representatives
    in the closed upper half-plane; the circularization of the listed set is
    the quaternionic spectrum.
    """

    eigenvalues: np.ndarray
    pairs: tuple

    def contains_quaternion_spectrum(self, q, tol=1e-8):
        """Whether both eigenvalues of ``q`` match reported eigenvalues.

        This is the eigenvalue route to quaternionic spectrum membership;
        it agrees with a small ``q_resolvent_margin`` up to tolerance bands.
        """
        from .quat_core import spectrum

        sp = spectrum(q)
        return all(
            float(np.min(np.abs(self.eigenvalues - s))) <= tol
            for s in (sp.s_plus, sp.s_minus)
        )


def _conjugate_pairs(eigs, tol):
    real = sorted(float(v.real) for v in eigs if abs(v.imag) <= tol)
    upper = sorted((v for v in eigs if v.imag > tol), key=lambda v: (v.real, v.imag))
    lower = sorted((v for v in eigs if v.imag < -tol), key=lambda v: (v.real, -v.imag))
    if len(upper) != len(lower):
        raise NumericError("complex eigenvalues failed to pair under conjugation")
    pairs = []
    for u, w in zip(upper, lower):
        if abs(u - w.conjugate()) > 2.0 * tol:
            raise NumericError("complex eigenvalues failed to pair under conjugation")
        pairs.append(complex((u.real + w.real) / 2.0, (u.imag - w.imag) / 2.0))
    reps = [complex(r) for r in real] + pairs
    out = []
    for r in sorted(reps, key=lambda v: (v.real, v.imag)):
        if out and abs(out[-1][0] - r) <= tol:
            out[-1] = (out[-1][0], out[-1][1] + 1)
        else:
            out.append((r, 1))
    return tuple(out)


def complex_spectrum(T, cap=_DEFAULT_EIG_CAP, pair_tol=1e-8):
    """Eigenvalues of the complexified operator, conjugate-paired.

    The spectrum is conjugate symmetric for real input; pairing failures
    beyond ``pair_tol`` (relative to the spectral radius) raise NumericError.
    """
    T = as_real_operator(T)
    if T.shape[0] > cap:
        raise InvalidArgumentError(f"dimension {T.shape[0]} exceeds the cap {cap}")
    try:
        eigs = np.linalg.eigvals(T)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigenvalue computation failed: {exc}") from exc
    eigs = np.sort_complex(eigs)
    scale = max(1.0, float(np.max(np.abs(eigs))) if eigs.size else 1.0)
    return SpectrumReport(eigs, _conjugate_pairs(eigs, pair_tol * scale))


# ---------------------------------------------------------------------------
# operator-valued functions with flat symmetry


class OperatorFunction:
    """Analytic map into complex n x n matrices with ``F(conj z) = flat(F(z))``."""

    def __call__(self, z):
        raise NotImplementedError

    @property
    def dim(self):
        raise NotImplementedError


class MatrixCoefficientFunction(OperatorFunction):
    """Sum of real matrix coefficients times symmetric scalar functions."""

    def __init__(self, terms):
        terms = [(as_real_operator(A), g) for A, g in terms]
        if not terms:
            raise InvalidArgumentError("need at least one term")
        n = terms[0][0].shape[0]
        for A, g in terms:
            if A.shape[0] != n:
                raise InvalidArgumentError("coefficient dimensions differ")
            if not isinstance(g, AnalyticScalar) or not g.symmetric:
                raise ContractViolationError("scalar factors must be symmetric")
        self.terms = terms
        self._dim = n

    @classmethod
    def from_polynomial(cls, coeff_matrices):
        """Polynomial ``sum A_k z^k`` with real matrix coefficients."""
        from .func_model import Polynomial

        terms = []
        for k, A in enumerate(coeff_matrices):
            mono = np.zeros(k + 1)
            mono[k] = 1.0
            terms.append((A, Polynomial(mono)))
        return cls(terms)

    @classmethod
    def from_scalar(cls, f, dim):
        """Scalar symmetric function acting as ``f * identity``."""
        return cls([(np.eye(dim), f)])

    @property
    def dim(self):
        return self._dim

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        n = self._dim
        out = np.zeros(z.shape + (n, n), dtype=complex)
        for A, g in self.terms:
            out += np.asarray(g(z), dtype=complex)[..., None, None] * A
        return out


class OpaqueOperatorFunction(OperatorFunction):
    """Caller-supplied operator-valued map with asserted flat symmetry.

    The symmetry is spot-checked at 32 conjugate pairs on the contour before
    any integration uses it.
    """

    def __init__(self, fn, dim):
        self.fn = fn
        self._dim = int(dim)

    @property
    def dim(self):
        return self._dim

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        if z.shape == ():
            return np.asarray(self.fn(complex(z)), dtype=complex)
        flat_vals = [np.asarray(self.fn(complex(w)), dtype=complex) for w in z.ravel()]
        return np.asarray(flat_vals).reshape(z.shape + (self._dim, self._dim))


def _spot_check_flat_symmetry(F, circles):
    c = circles[0]
    ang = 2.0 * np.pi * (np.arange(32) + 0.41) / 32.0
    z = c.center + c.radius * np.exp(1j * ang)
    vals = F(z)
    refl = F(z.conjugate())
    defect = float(np.max(np.abs(refl - vals.conj())))
    scale = max(1.0, float(np.max(np.abs(vals))))
    if defect > 1e-8 * scale:
        raise ContractViolationError(
            f"operator function breaks flat symmetry on the contour (defect {defect:.3e})"
        )


def operator_contour(T, clearance=None):
    """Real-centered circles covering the eigenvalue clusters of ``T``."""
    report = complex_spectrum(T)
    eigs = [complex(v) for v in report.eigenvalues]
    spectral_radius = max(abs(v) for v in eigs)
    if clearance is None:
        clearance = max(0.1, 0.05 * spectral_radius)
    circles = enclosing_circles(eigs, clearance, real_centers=True)
    return Contour(tuple(circles), conjugate_symmetric=True)


def _operator_total(F, T_c, circles, nodes):
    n = T_c.shape[0]
    eye = np.eye(n, dtype=complex)
    acc = np.zeros((n, n), dtype=complex)
    for c in circles:
        theta = 2.0 * np.pi * np.arange(nodes) / nodes
        unit = np.exp(1j * theta)
        z = c.center + c.radius * unit
        vals = F(z)
        shifted = z[:, None, None] * eye - T_c
        # F(z) (z - T)^-1 via a transposed batched solve
        prod = np.swapaxes(
            np.linalg.solve(np.swapaxes(shifted, -1, -2), np.swapaxes(vals, -1, -2)),
            -1,
            -2,
        )
        integrand = prod * ((c.radius / nodes) * unit)[:, None, None]
        acc = acc + kahan_sum(integrand)
    return acc


def op_calculus(F, T, cfg=None, contour=None, return_diagnostics=False, flat_tol=1e-8):
    """Analytic calculus ``F(T)`` for a flat-symmetric operator function.

    Integrates ``F(z)(z - T_C)^-1`` over real-centered circles around the
    spectrum with node doubling, checks flat invariance of the value to
    ``flat_tol`` times its scale, and returns the real restriction.
    """
    T = as_real_operator(T)
    n = T.shape[0]
    if F.dim != n:
        raise InvalidArgumentError("operator function dimension mismatch")
    cfg = cfg if cfg is not None else QuadratureConfig()
    gamma = contour if contour is not None else operator_contour(T)
    report = complex_spectrum(T)
    for v in report.eigenvalues:
        if max(c.radius - abs(complex(v) - c.center) for c in gamma.circles) <= 0.0:
            raise GeometryError(f"eigenvalue {v} is not strictly inside the contour")
    if isinstance(F, OpaqueOperatorFunction):
        _spot_check_flat_symmetry(F, gamma.circles)

    T_c = T.astype(complex)
    nodes = cfg.nodes_per_circle
    prev = _operator_total(F, T_c, gamma.circles, nodes)
    diff = math.inf
    converged = False
    while nodes * 2 <= cfg.max_nodes:
        nodes *= 2
        cur = _operator_total(F, T_c, gamma.circles, nodes)
        diff = float(np.linalg.norm(cur - prev))
        prev = cur
        if diff <= cfg.rel_tol * max(1.0, float(np.linalg.norm(cur))):
            converged = True
            break
    if not converged:
        warnings.warn(
            f"operator quadrature stalled at {nodes} nodes/circle (last change {diff:.3e})",
            AccuracyWarning,
            stacklevel=2,
        )

    value = prev
    scale = max(1.0, float(np.linalg.norm(value)))
    flat_defect = float(np.linalg.norm(value - flat(value)))
    if flat_defect > flat_tol * scale:
        raise ContractViolationError(
            f"result breaks flat invariance (defect {flat_defect:.3e}); "
            "input is outside the conjugation-symmetric class"
        )
    result = value.real.copy()
    if return_diagnostics:
        return result, QuadratureDiagnostics(nodes, diff, converged), flat_defect
    return result


def discrete_mult_op(thetas):
    """Block-diagonal real operator of pointwise left multiplication.

    Each quaternion contributes its 4 x 4 left-multiplication block on the
    real coordinates along (I, J, K, L); the complex spectrum is the union
    of the quaternion spectra, each eigenvalue twice per block.
    """
    thetas = list(thetas)
    if not thetas:
        raise InvalidArgumentError("need at least one quaternion")
    if not all(isinstance(t, Quaternion) for t in thetas):
        raise InvalidArgumentError("entries must be Quaternions")
    m = len(thetas)
    out = np.zeros((4 * m, 4 * m))
    for i, t in enumerate(thetas):
        out[4 * i : 4 * i + 4, 4 * i : 4 * i + 4] = left_mult_matrix(t)
    return out
