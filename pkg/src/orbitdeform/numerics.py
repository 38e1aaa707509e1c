"""Deterministic dense linear-algebra substrate with an explicit tolerance policy.

Everything downstream (algebra construction, orbit sampling, form checks)
goes through these routines so that rank / nullspace / eigenspace decisions
are made with one consistent rule.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg


class DimensionError(ValueError):
    """Shape mismatch between operands."""


class StructureError(ValueError):
    """Input violates a structural precondition (e.g. non-commuting family)."""


@dataclass(frozen=True)
class Tolerance:
    """Comparison rule: |a - b| <= abs_eps + rel_eps * max(|a|, |b|)."""

    abs_eps: float = 1e-9
    rel_eps: float = 1e-7

    def __post_init__(self):
        if self.abs_eps < 0 or self.rel_eps < 0:
            raise ValueError("tolerances must be nonnegative")

    def close(self, a, b) -> bool:
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        return bool(
            np.all(np.abs(a - b) <= self.abs_eps + self.rel_eps * np.maximum(np.abs(a), np.abs(b)))
        )

    def scale(self, *arrays) -> float:
        m = max((float(np.max(np.abs(a))) if np.asarray(a).size else 0.0) for a in arrays)
        return self.abs_eps + self.rel_eps * m


def _require_square(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def matrix_exp(a: np.ndarray) -> np.ndarray:
    """exp(A) by scaling-and-squaring (scipy's Pade implementation); exp(0) = I exactly."""
    a = _require_square(a)
    if not a.any():
        return np.eye(a.shape[0], dtype=a.dtype)
    return scipy.linalg.expm(a)


def nullspace(a: np.ndarray, tol: Tolerance = Tolerance()) -> np.ndarray:
    """Orthonormal basis (columns) of the numerical nullspace of A.

    A singular value sigma is treated as zero when
    sigma <= abs_eps + rel_eps * sigma_max.  Returns a (cols, k) array,
    k = 0 when A has full column rank.
    """
    a = np.asarray(a)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-d array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    if a.size == 0:
        return np.eye(a.shape[1])
    _, s, vh = np.linalg.svd(a)
    cutoff = tol.abs_eps + tol.rel_eps * (s[0] if s.size else 0.0)
    rank = int(np.sum(s > cutoff))
    return vh[rank:].conj().T


def rank(a: np.ndarray, tol: Tolerance = Tolerance()) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    cutoff = tol.abs_eps + tol.rel_eps * (s[0] if s.size else 0.0)
    return int(np.sum(s > cutoff))


def orthonormal_range(a: np.ndarray, tol: Tolerance = Tolerance()) -> np.ndarray:
    """Orthonormal basis (columns) for the column span of A."""
    a = np.asarray(a, dtype=float)
    if a.size == 0:
        return a.reshape(a.shape[0], 0)
    u, s, _ = np.linalg.svd(a, full_matrices=False)
    cutoff = tol.abs_eps + tol.rel_eps * (s[0] if s.size else 0.0)
    return u[:, s > cutoff]


def _cluster(values: np.ndarray, eps: float) -> list[np.ndarray]:
    """Group sorted indices of `values` into clusters with gaps > eps."""
    order = np.argsort(values)
    groups: list[list[int]] = [[order[0]]]
    for idx in order[1:]:
        if values[idx] - values[groups[-1][-1]] <= eps:
            groups[-1].append(idx)
        else:
            groups.append([idx])
    return [np.array(g) for g in groups]


def simultaneous_eigenspaces(
    ops: list[np.ndarray], tol: Tolerance = Tolerance()
) -> list[tuple[np.ndarray, np.ndarray]]:
    """Joint eigenspace decomposition of a commuting, real-diagonalizable family.

    Returns a list of (eigenvalue_vector, orthonormal_basis) pairs; the
    eigenvalue vector collects one eigenvalue per operator.  Nearby
    eigenvalues (within abs_eps) are merged into a single cluster.
    Raises StructureError when the operators fail to commute.
    """
    ops = [_require_square(op) for op in ops]
    if not ops:
        raise ValueError("need at least one operator")
    n = ops[0].shape[0]
    scale = max(1.0, *(float(np.linalg.norm(op)) for op in ops))
    for i, a in enumerate(ops):
        if a.shape[0] != n:
            raise DimensionError("operators act on different spaces")
        for b in ops[i + 1 :]:
            if np.linalg.norm(a @ b - b @ a) > tol.scale(a, b) * scale * 10:
                raise StructureError("operators do not commute within tolerance")

    blocks: list[tuple[tuple[float, ...], np.ndarray]] = [((), np.eye(n))]
    for op in ops:
        refined = []
        for vals, basis in blocks:
            restricted = basis.T @ op @ basis
            eigvals = np.linalg.eigvals(restricted)
            if np.max(np.abs(eigvals.imag)) > 1e-6 * scale:
                raise StructureError("operator is not real-diagonalizable on a joint block")
            eigvals = eigvals.real
            for group in _cluster(eigvals, max(tol.abs_eps, 1e-10)):
                lam = float(np.mean(eigvals[group]))
                sub = nullspace(
                    restricted - lam * np.eye(restricted.shape[0]),
                    Tolerance(abs_eps=max(tol.abs_eps, 1e-8) * max(1.0, scale), rel_eps=0.0),
                )
                if sub.shape[1] != len(group):
                    raise StructureError(
                        "eigenspace dimension mismatch; operator may not be diagonalizable"
                    )
                refined.append((vals + (lam,), basis @ sub))
        blocks = refined
    total = sum(b.shape[1] for _, b in blocks)
    if total != n:
        raise StructureError(f"eigenspace dimensions sum to {total}, expected {n}")
    return [(np.array(vals), basis) for vals, basis in blocks]
