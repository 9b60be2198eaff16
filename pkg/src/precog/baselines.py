"""Classical preconditioners and the condition-ratio metric.

Two families share one scoring rule: unitary split preconditioners are
scored by the condition number of the power-normalized congruence
U^T A U, left preconditioners by the general condition number of M^{-1} A.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    IluBreakdownError,
    InvalidInputError,
    NumericallySingularError,
)
from .spectral import (
    ORTHONORMALITY_TOL,
    cond_general,
    cond_spd,
    orthonormality_error,
    power_normalize,
    split_preconditioned_cond,
)

DEFAULT_OMEGA = 1.5

METHOD_NAMES = (
    "precog",
    "dct",
    "dft",
    "jacobi",
    "gauss-seidel",
    "sor",
    "ssor",
    "ilu0",
    "none",
)


@dataclass(frozen=True)
class Preconditioner:
    """Tagged preconditioner: unitary-split (orthonormal U) or left (invertible M).

    Left preconditioners may carry (L, U) factors so that applying M^{-1}
    goes through two triangular solves instead of a dense inverse.
    """

    kind: str  # "unitary-split" | "left"
    payload: np.ndarray
    label: str
    factors: tuple[np.ndarray, np.ndarray] | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("unitary-split", "left"):
            raise InvalidInputError(f"unknown preconditioner kind {self.kind!r}")
        if self.kind == "unitary-split":
            if orthonormality_error(self.payload) > ORTHONORMALITY_TOL:
                raise InvalidInputError(f"{self.label}: payload is not orthonormal")
        else:
            cond_general(self.payload)  # raises NumericallySingularError if singular

    def apply_inverse(self, A: np.ndarray) -> np.ndarray:
        """M^{-1} A for a left preconditioner."""
        if self.kind != "left":
            raise InvalidInputError("apply_inverse is defined for left preconditioners")
        if self.factors is not None:
            Lf, Uf = self.factors
            return _backward_solve(Uf, _forward_solve(Lf, A))
        if np.allclose(self.payload, np.tril(self.payload)):
            return _forward_solve(self.payload, A)
        return np.linalg.solve(self.payload, A)

    def preconditioned_cond(self, A: np.ndarray) -> float:
        """Condition number of A after applying this preconditioner."""
        if self.kind == "unitary-split":
            return split_preconditioned_cond(A, self.payload)
        return cond_general(self.apply_inverse(A))


def _forward_solve(L: np.ndarray, B: np.ndarray) -> np.ndarray:
    n = L.shape[0]
    X = np.array(B, dtype=float, copy=True)
    if X.ndim == 1:
        X = X[:, None]
    for i in range(n):
        if i:
            X[i] -= L[i, :i] @ X[:i]
        X[i] /= L[i, i]
    return X


def _backward_solve(U: np.ndarray, B: np.ndarray) -> np.ndarray:
    n = U.shape[0]
    X = np.array(B, dtype=float, copy=True)
    if X.ndim == 1:
        X = X[:, None]
    for i in range(n - 1, -1, -1):
        if i < n - 1:
            X[i] -= U[i, i + 1:] @ X[i + 1:]
        X[i] /= U[i, i]
    return X


def dct_matrix(n: int) -> np.ndarray:
    """Orthonormal DCT-II matrix with basis vectors as rows.

    Row 0 is 1/sqrt(n); row k entry j is sqrt(2/n) cos(pi (2j+1) k / (2n)).
    To score it as a split preconditioner pass the transpose, so the basis
    vectors become columns (the U^T A U convention).
    """
    if n < 1:
        raise InvalidInputError(f"n must be positive, got {n}")
    C = np.empty((n, n))
    j = np.arange(n)
    C[0, :] = 1.0 / np.sqrt(n)
    for k in range(1, n):
        C[k, :] = np.sqrt(2.0 / n) * np.cos(np.pi * (2 * j + 1) * k / (2 * n))
    return C


def dct_split_precond(n: int) -> Preconditioner:
    """DCT-II as a unitary split preconditioner (basis vectors as columns)."""
    return Preconditioner(kind="unitary-split", payload=dct_matrix(n).T, label="dct")


def dft_matrix(n: int) -> np.ndarray:
    """Unitary DFT matrix with entries exp(-2 pi i jk / n) / sqrt(n)."""
    if n < 1:
        raise InvalidInputError(f"n must be positive, got {n}")
    jk = np.outer(np.arange(n), np.arange(n))
    return np.exp(-2j * np.pi * jk / n) / np.sqrt(n)


def dft_split_cond(R: np.ndarray) -> float:
    """Split-preconditioned condition number under the unitary DFT.

    Complex arithmetic stays internal: the Hermitian congruence F^H R F is
    power-normalized with its real positive diagonal and the extreme
    eigenvalue ratio is returned.
    """
    R = np.asarray(R, dtype=float)
    n = R.shape[0]
    F = dft_matrix(n)
    Rt = F.conj().T @ R @ F
    d = np.real(np.diag(Rt))
    if np.any(d <= 0.0):
        raise NumericallySingularError("transformed diagonal is not positive; R not SPD?")
    inv_sqrt = 1.0 / np.sqrt(d)
    S = Rt * np.outer(inv_sqrt, inv_sqrt)
    ev = np.linalg.eigvalsh(S)
    return float(ev[-1] / ev[0])


def _check_diag(A: np.ndarray, label: str) -> np.ndarray:
    A = np.asarray(A, dtype=float)
    d = np.diag(A)
    if np.any(d == 0.0):
        bad = int(np.argmin(np.abs(d)))
        raise NumericallySingularError(f"{label}: zero diagonal entry at index {bad}")
    return A


def jacobi_precond(A: np.ndarray) -> Preconditioner:
    """Diagonal (Jacobi) preconditioner M = diag(A)."""
    A = _check_diag(A, "jacobi")
    return Preconditioner(kind="left", payload=np.diag(np.diag(A)), label="jacobi")


def gauss_seidel_precond(A: np.ndarray) -> Preconditioner:
    """Gauss-Seidel preconditioner M = D + L (diagonal plus strict lower part)."""
    A = _check_diag(A, "gauss-seidel")
    return Preconditioner(kind="left", payload=np.tril(A), label="gauss-seidel")


def sor_precond(A: np.ndarray, omega: float = DEFAULT_OMEGA) -> Preconditioner:
    """Successive over-relaxation preconditioner M = D/omega + L."""
    if not 0.0 < omega < 2.0:
        raise InvalidInputError(f"omega must be in (0, 2), got {omega}")
    A = _check_diag(A, "sor")
    M = np.tril(A, -1) + np.diag(np.diag(A)) / omega
    return Preconditioner(kind="left", payload=M, label="sor")


def ssor_precond(A: np.ndarray, omega: float = DEFAULT_OMEGA) -> Preconditioner:
    """Symmetric SOR: M = omega/(2-omega) (D/omega + L) D^{-1} (D/omega + L^T)."""
    if not 0.0 < omega < 2.0:
        raise InvalidInputError(f"omega must be in (0, 2), got {omega}")
    A = _check_diag(A, "ssor")
    D = np.diag(A)
    K = np.tril(A, -1) + np.diag(D) / omega
    M = (omega / (2.0 - omega)) * K @ np.diag(1.0 / D) @ K.T
    return Preconditioner(kind="left", payload=M, label="ssor")


def ilu0_precond(A: np.ndarray) -> Preconditioner:
    """Incomplete LU with zero fill-in on the sparsity pattern of A.

    The factors are restricted to positions where A itself is nonzero.
    For a dense A this reproduces the full LU factorization.
    """
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    pattern = A != 0.0
    LU = A.copy()
    for i in range(n):
        for k in range(i):
            if not pattern[i, k]:
                continue
            if LU[k, k] == 0.0:
                raise IluBreakdownError(f"zero pivot at index {k}")
            LU[i, k] /= LU[k, k]
            for j in range(k + 1, n):
                if pattern[i, j]:
                    LU[i, j] -= LU[i, k] * LU[k, j]
        if LU[i, i] == 0.0:
            raise IluBreakdownError(f"zero pivot at index {i}")
    Lf = np.tril(LU, -1) + np.eye(n)
    Uf = np.triu(LU)
    return Preconditioner(kind="left", payload=Lf @ Uf, label="ilu0", factors=(Lf, Uf))


def none_cond(R: np.ndarray) -> float:
    """Condition number of the power-normalized matrix itself (no transform)."""
    return cond_spd(power_normalize(R).S)


def condition_ratio(cond_method: float, cond_precog: float, log10: bool = False) -> float:
    """cond_method / cond_precog; values above 1 favor the learned transform."""
    if cond_method <= 0.0 or cond_precog <= 0.0:
        raise InvalidInputError("condition numbers must be positive")
    ratio = cond_method / cond_precog
    return float(np.log10(ratio)) if log10 else float(ratio)
