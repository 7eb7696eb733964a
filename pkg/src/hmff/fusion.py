"""Truncated eigendecomposition of similarity matrices and feature fusion."""
import logging
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, DataError, DimensionMismatch, InvalidConfig, NotSymmetric
from .matrix import SOURCES, write_table, read_table
from .rng import SplitMix64

log = logging.getLogger(__name__)

RITZ_TOL = 1e-10
RESIDUAL_TOL = 1e-8
JACOBI_MAX_N = 64


@dataclass
class EigenPairs:
    values: np.ndarray   # k, descending
    vectors: np.ndarray  # n x k, unit columns


@dataclass
class FusedFeatures:
    matrix: np.ndarray
    columns: list  # (source, eigen index starting at 1)
    doc_ids: list

    @property
    def h(self):
        return self.matrix.shape[1]


def fix_signs(vectors):
    """Flip each column so its largest-magnitude entry (first on ties) is >= 0."""
    vectors = np.array(vectors, dtype=np.float64)
    for j in range(vectors.shape[1]):
        i = int(np.argmax(np.abs(vectors[:, j])))
        if vectors[i, j] < 0:
            vectors[:, j] = -vectors[:, j]
    return vectors


def _random_unit(gen, n):
    v = np.array([gen.random() - 0.5 for _ in range(n)])
    return v / np.linalg.norm(v)


def _fresh_direction(basis, n, gen):
    """Unit vector orthogonal to ``basis``.

    A pseudo-random draw keeps the restart generic, so it cannot land inside
    one eigenspace; the most orthogonal unit axis is the fallback.
    """
    Q = np.array(basis).T
    v = _random_unit(gen, n)
    for _ in range(2):
        v = v - Q @ (Q.T @ v)
    norm = np.linalg.norm(v)
    if norm > 1e-8:
        return v / norm
    E = np.eye(n) - Q @ (Q.T @ np.eye(n))
    E = E - Q @ (Q.T @ E)
    j = int(np.argmax(np.linalg.norm(E, axis=0)))
    return E[:, j] / np.linalg.norm(E[:, j])


def lanczos(A, k, tol=RITZ_TOL, max_iter=None):
    """Top-k eigenpairs of symmetric ``A`` by Lanczos with full reorthogonalization.

    Breakdowns (invariant subspaces) restart from a fresh orthogonal
    direction, so repeated eigenvalues are all recovered.  Convergence is
    never declared at a breakdown short of a full basis, since the
    unexplored complement may still hold larger eigenvalues.  Returns
    ``(values, vectors, converged)`` unsorted by sign convention.
    """
    n = A.shape[0]
    max_steps = min(n, max_iter if max_iter is not None else 10 * n)
    scale = max(1.0, float(np.abs(A).max()))
    gen = SplitMix64(0)
    basis = [_random_unit(gen, n)]
    alphas, betas = [], []
    converged = False
    while True:
        m = len(basis)
        v = basis[-1]
        w = A @ v
        a = float(v @ w)
        alphas.append(a)
        Q = np.array(basis).T
        w = w - Q @ (Q.T @ w)
        w = w - Q @ (Q.T @ w)
        b = float(np.linalg.norm(w))
        T = np.diag(alphas) + np.diag(betas, 1) + np.diag(betas, -1)
        breakdown = b <= 1e-12 * scale
        if m >= k:
            theta, S = np.linalg.eigh(T)
            order = np.argsort(-theta, kind="stable")[:k]
            resid = np.abs(b * S[-1, order])
            if m == n or (not breakdown and np.all(resid <= tol * np.maximum(1.0, np.abs(theta[order])))):
                converged = True
                break
        if m >= max_steps:
            break
        if breakdown:
            basis.append(_fresh_direction(basis, n, gen))
            betas.append(0.0)
        else:
            basis.append(w / b)
            betas.append(b)
    Q = np.array(basis).T
    vectors = Q @ S[:, order]
    vectors /= np.linalg.norm(vectors, axis=0)
    return theta[order], vectors, converged


def jacobi_eigh(A, tol=1e-15, max_sweeps=100):
    """All eigenpairs of a small symmetric matrix by cyclic Jacobi rotations."""
    A = np.array(A, dtype=np.float64)
    n = A.shape[0]
    V = np.eye(n)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(np.tril(A, -1) ** 2))
        if off <= tol * max(1.0, np.linalg.norm(A)):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if A[p, q] == 0.0:
                    continue
                tau = (A[q, q] - A[p, p]) / (2.0 * A[p, q])
                t = np.sign(tau) / (abs(tau) + np.sqrt(1.0 + tau * tau)) if tau != 0 else 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                ap, aq = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * ap - s * aq
                A[:, q] = s * ap + c * aq
                ap, aq = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * ap - s * aq
                A[q, :] = s * ap + c * aq
                vp, vq = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vp - s * vq
                V[:, q] = s * vp + c * vq
    else:
        raise ConvergenceFailure("Jacobi sweeps exhausted")
    return np.diag(A).copy(), V


def truncated_eig(sim, k):
    """Top-k eigenpairs (algebraically largest) of a symmetric matrix.

    ``sim`` may be a SimilarityMatrix or a plain array.
    """
    A = np.asarray(getattr(sim, "values", sim), dtype=np.float64)
    n = A.shape[0]
    if A.ndim != 2 or A.shape[1] != n:
        raise DimensionMismatch(f"expected square matrix, got {A.shape}")
    if not 1 <= k <= n:
        raise InvalidConfig(f"need 1 <= k <= n, got k={k}, n={n}")
    if np.abs(A - A.T).max() > 1e-12 * max(1.0, float(np.abs(A).max())):
        raise NotSymmetric("matrix is not symmetric")
    A = (A + A.T) / 2.0
    values, vectors, ok = lanczos(A, k)
    resid = np.linalg.norm(A @ vectors - vectors * values, axis=0)
    if not ok or np.any(resid > RESIDUAL_TOL * np.maximum(1.0, np.abs(values))):
        if n > JACOBI_MAX_N:
            raise ConvergenceFailure(f"Lanczos did not converge (max residual {resid.max():.3g})")
        log.info("Lanczos residual %.3g; falling back to Jacobi", resid.max())
        w, V = jacobi_eigh(A)
        order = np.argsort(-w, kind="stable")[:k]
        values, vectors = w[order], V[:, order]
    return EigenPairs(values.copy(), fix_signs(vectors))


def fuse(eigs, doc_ids, order=SOURCES):
    """Concatenate eigenvalue-weighted eigenvectors per source, in ``order``.

    ``eigs`` maps source name -> EigenPairs; absent sources are skipped.
    """
    blocks, columns = [], []
    n = None
    sources = [s for s in order if s in eigs]
    ks = {eigs[s].vectors.shape[1] for s in sources}
    if not sources:
        raise InvalidConfig("no sources to fuse")
    if len(ks) != 1:
        raise DimensionMismatch("sources disagree on k")
    for s in sources:
        ep = eigs[s]
        if n is None:
            n = ep.vectors.shape[0]
        elif ep.vectors.shape[0] != n:
            raise DimensionMismatch(f"source {s} has {ep.vectors.shape[0]} rows, expected {n}")
        blocks.append(ep.vectors * ep.values)
        columns.extend((s, j + 1) for j in range(len(ep.values)))
    if len(doc_ids) != n:
        raise DimensionMismatch("doc_ids length does not match eigenvectors")
    return FusedFeatures(np.hstack(blocks), columns, list(doc_ids))


def write_fused(ff, path):
    write_table(path, {"kind": "fused", "n": ff.matrix.shape[0], "h": ff.h},
                [f"{s}:{j}" for s, j in ff.columns], ff.doc_ids, ff.matrix)


def read_fused(path):
    header, columns, ids, values = read_table(path)
    if header.get("kind") != "fused":
        raise DataError(f"{path}: not a fused feature file")
    cols = [(c.split(":")[0], int(c.split(":")[1])) for c in columns]
    return FusedFeatures(values, cols, ids)
