import numpy as np
import pytest

from quatcalc import CommutingPair, QuaternionPolynomial, make_quaternion


def random_quaternion(rng, scale=1.0):
    x = scale * rng.standard_normal(4)
    return make_quaternion(*x)


def random_hpoly(rng, degree, scale=1.0):
    return QuaternionPolynomial(
        [random_quaternion(rng, scale) for _ in range(degree + 1)]
    )


def random_commuting_pair(rng, n=2, scale=1.0):
    """Simultaneously diagonalizable real pair sharing a well-conditioned basis."""
    while True:
        S = rng.standard_normal((n, n))
        if abs(np.linalg.det(S)) > 0.2:
            break
    d1 = np.diag(scale * rng.standard_normal(n))
    d2 = np.diag(scale * rng.standard_normal(n))
    inv = np.linalg.inv(S)
    return CommutingPair(S @ d1 @ inv, S @ d2 @ inv), (np.diag(d1), np.diag(d2))


def quat_close(p, q, tol=1e-12):
    return (p - q).norm() <= tol * max(1.0, p.norm(), q.norm())


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
