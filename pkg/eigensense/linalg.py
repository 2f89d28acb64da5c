"""
Gram matrices and a cyclic Jacobi eigensolver for complex Hermitian matrices.

The solver applies complex plane rotations until the off-diagonal Frobenius
mass falls below `tol` times the Frobenius norm of the input. Each rotation
first removes the phase of the pivot so the classic real rotation of the
symmetric Jacobi method can zero it.
"""
from typing import Tuple, Union

import logging
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, MatrixError, SolverError

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-12
DEFAULT_MAX_SWEEPS = 100
HERMITIAN_TOL = 1e-12
SOLVERS = ('jacobi', 'lapack')


def as_complex_matrix(Y) -> np.ndarray:
    """ Validates `Y` as a 2-D complex matrix with at least one entry """
    Y = np.asarray(Y, dtype=np.complex128)
    if Y.ndim != 2:
        raise DimensionError(f'Expected a 2-D matrix, got {Y.ndim} dimensions')
    if Y.shape[0] < 1 or Y.shape[1] < 1:
        raise DimensionError(f'Matrix must have rows >= 1 and cols >= 1, got {Y.shape}')
    return Y


class HermitianMatrix:
    """ A square complex matrix validated to be Hermitian on construction """

    def __init__(self, entries) -> None:
        M = np.asarray(entries, dtype=np.complex128)
        if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
            raise DimensionError(f'Hermitian matrix must be square and non-empty, got {M.shape}')

        scale = max(1.0, float(np.max(np.abs(M))))
        asymmetry = float(np.max(np.abs(M - M.conj().T)))
        if asymmetry > HERMITIAN_TOL * scale:
            raise MatrixError(f'Matrix is not Hermitian, {asymmetry=}')

        # Upper triangle is authoritative
        upper = np.triu(M)
        M = upper + np.triu(M, 1).conj().T
        M[np.diag_indices_from(M)] = M.diagonal().real
        M.setflags(write=False)
        self._entries = M

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def dim(self) -> int:
        return self._entries.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self._entries).real)

    def scaled(self, c: float) -> 'HermitianMatrix':
        return HermitianMatrix(self._entries * c)

    def __repr__(self) -> str:
        return f'HermitianMatrix(dim={self.dim})'


@dataclass(frozen=True)
class EigenSpectrum:
    """ Eigenvalues sorted ascending, with the trace of the source matrix """
    values: Tuple[float, ...]
    trace: float
    iterations: int = 0

    @property
    def lambda_min(self) -> float:
        return self.values[0]

    @property
    def lambda_max(self) -> float:
        return self.values[-1]

    @property
    def dim(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=float)

    def scaled(self, c: float) -> 'EigenSpectrum':
        return EigenSpectrum(tuple(v * c for v in self.values), self.trace * c,
                             self.iterations)


def gram(Y) -> HermitianMatrix:
    """ The sample covariance (1/N) Y Y^H of a K x N matrix """
    Y = as_complex_matrix(Y)
    N = Y.shape[1]

    # einsum keeps the summation order independent of BLAS threading
    G = np.einsum('ik,jk->ij', Y, Y.conj()) / N
    G = 0.5 * (G + G.conj().T)
    return HermitianMatrix(G)


def _as_hermitian(G: Union[HermitianMatrix, np.ndarray]) -> HermitianMatrix:
    return G if isinstance(G, HermitianMatrix) else HermitianMatrix(G)


def _jacobi(
    G: HermitianMatrix,
    tol: float,
    max_sweeps: int,
    with_vectors: bool,
) -> Tuple[np.ndarray, np.ndarray, int]:
    A = np.array(G.entries, dtype=np.complex128)
    n = A.shape[0]
    V = np.eye(n, dtype=np.complex128) if with_vectors else None

    total = float(np.linalg.norm(A))
    if n == 1 or total == 0.0:
        return A.diagonal().real.copy(), V, 0

    sweeps = 0
    while True:
        off = float(np.linalg.norm(A - np.diag(A.diagonal())))
        if off <= tol * total:
            break

        if sweeps >= max_sweeps:
            raise SolverError(f'Jacobi did not converge after {sweeps} sweeps,'
                              + f' off-diagonal norm {off:.3e}', iterations=sweeps)
        sweeps += 1

        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                r = abs(apq)
                if r == 0.0:
                    continue

                # Phase rotation makes the pivot real, then a real rotation
                # zeroes it: J = diag(.., conj(phase) at q, ..) @ R(c, s)
                phase = apq / r
                theta = (A[q, q].real - A[p, p].real) / (2.0 * r)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c

                J = np.array([[c, s],
                              [-s * phase.conjugate(), c * phase.conjugate()]])
                idx = [p, q]
                A[:, idx] = A[:, idx] @ J
                A[idx, :] = J.conj().T @ A[idx, :]
                A[p, q] = A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real

                if V is not None:
                    V[:, idx] = V[:, idx] @ J

    logger.debug(f'jacobi converged, dim={n} {sweeps=}')
    return A.diagonal().real.copy(), V, sweeps


def eigh(
    G: Union[HermitianMatrix, np.ndarray],
    tol: float = DEFAULT_TOL,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
    solver: str = 'jacobi',
) -> EigenSpectrum:
    """ All eigenvalues of a Hermitian matrix, sorted ascending

    Params
    ======
    G: HermitianMatrix
        The matrix to decompose.

    tol: float
        Convergence target for the off-diagonal Frobenius norm relative to
        the Frobenius norm of G.

    max_sweeps: int
        Sweep budget before a SolverError is raised.

    solver: str
        'jacobi' (default) or 'lapack', which defers to numpy.linalg.eigvalsh.

    Returns
    =======
    EigenSpectrum
    """
    if tol <= 0:
        raise ValueError(f'tol must be > 0, got {tol=}')
    G = _as_hermitian(G)

    if solver == 'jacobi':
        values, _, sweeps = _jacobi(G, tol, max_sweeps, with_vectors=False)
    elif solver == 'lapack':
        values, sweeps = np.linalg.eigvalsh(G.entries), 0
    else:
        raise ValueError(f'Unknown solver {solver!r}, expected one of {SOLVERS}')

    values = np.sort(values)
    return EigenSpectrum(tuple(float(v) for v in values), G.trace, sweeps)


def eigh_vectors(
    G: Union[HermitianMatrix, np.ndarray],
    tol: float = DEFAULT_TOL,
    max_sweeps: int = DEFAULT_MAX_SWEEPS,
) -> Tuple[EigenSpectrum, np.ndarray]:
    """ Jacobi eigendecomposition returning the unitary V as well.

    Columns of V are ordered like the spectrum values, so
    G ~= V @ diag(values) @ V^H.
    """
    G = _as_hermitian(G)
    values, V, sweeps = _jacobi(G, tol, max_sweeps, with_vectors=True)
    order = np.argsort(values, kind='stable')
    spectrum = EigenSpectrum(tuple(float(v) for v in values[order]), G.trace, sweeps)
    return spectrum, V[:, order]


def extreme_eigs(
    G: Union[HermitianMatrix, np.ndarray],
    solver: str = 'jacobi',
) -> Tuple[float, float]:
    """ (lambda_min, lambda_max) of a Hermitian matrix """
    spectrum = eigh(G, solver=solver)
    return spectrum.lambda_min, spectrum.lambda_max
