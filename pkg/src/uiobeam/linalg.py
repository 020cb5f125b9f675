"""Small dense linear-algebra kernel used by the observer design and the
beamformer: symmetric eigenvalue bounds, definiteness verdicts, the
normal-equation pseudo-inverse and Hermitian positive-definite solves.

Every tolerance that the certificate checks and the tests share is a named
constant here, so the solver and its verification cannot drift apart.
Everything is a pure function over immutable inputs, safe to call from
parallel workers.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError, SingularMatrixError

# Maximum tolerated asymmetry |M - M^T|, relative to max(1, max|M|).
SYMMETRY_TOL = 1e-12
# Maximum tolerated deviation from M = M^H for Hermitian solves.
HERMITIAN_TOL = 1e-10
# Smallest eigenvalue of G^T G still treated as full column rank.
RANK_TOL = 1e-12
# Default tolerance at which semidefiniteness verdicts are issued.
DEFINITENESS_TOL = 1e-8
# Contract of solve_hermitian: ||m x - rhs||_inf <= SOLVE_RESIDUAL_TOL * ||rhs||_inf.
SOLVE_RESIDUAL_TOL = 1e-9
# Contract of pinv_full_col_rank: ||pinv(G) G - I||_inf below this.
PINV_IDENTITY_TOL = 1e-10


def _as_square(m, name="matrix"):
    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ShapeError(f"{name} contains non-finite entries")
    return m


def symmetrize_checked(m, name="matrix"):
    """Average m with its transpose if the asymmetry is within SYMMETRY_TOL,
    otherwise raise. Guards against silently mis-assembled certificate blocks."""
    m = _as_square(m, name)
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    asym = float(np.max(np.abs(m - m.T))) if m.size else 0.0
    if asym > SYMMETRY_TOL * scale:
        raise ShapeError(
            f"{name} is asymmetric beyond tolerance: max |M - M^T| = {asym:.3e} "
            f"(allowed {SYMMETRY_TOL * scale:.3e})"
        )
    return 0.5 * (m + m.T)


def eig_sym_bounds(m):
    """Extreme eigenvalues (min, max) of a symmetric real matrix."""
    sym = symmetrize_checked(m)
    w = np.linalg.eigvalsh(sym)
    return float(w[0]), float(w[-1])


@dataclass(frozen=True)
class DefinitenessReport:
    """Eigenvalue bounds plus a verdict ('PSD', 'NSD' or 'indefinite') issued
    at a stated tolerance."""

    min_eigenvalue: float
    max_eigenvalue: float
    verdict: str
    tol: float


def check_definiteness(m, sense, tol=DEFINITENESS_TOL):
    """Classify a symmetric matrix as PSD/NSD/indefinite at tolerance ``tol``.

    ``sense`` ('PSD' or 'NSD') states which verdict the caller is testing for;
    a matrix satisfying both (e.g. the zero matrix) is reported in the
    requested sense.
    """
    if sense not in ("PSD", "NSD"):
        raise ValueError(f"sense must be 'PSD' or 'NSD', got {sense!r}")
    if not tol > 0:
        raise ValueError("tol must be positive")
    lo, hi = eig_sym_bounds(m)
    is_psd = lo >= -tol
    is_nsd = hi <= tol
    if sense == "PSD":
        verdict = "PSD" if is_psd else ("NSD" if is_nsd else "indefinite")
    else:
        verdict = "NSD" if is_nsd else ("PSD" if is_psd else "indefinite")
    return DefinitenessReport(lo, hi, verdict, tol)


def pinv_full_col_rank(g):
    """Moore-Penrose pseudo-inverse (G^T G)^{-1} G^T of a full-column-rank G.

    Normal equations are adequate here: every G in this package is a
    well-conditioned block matrix built from the diagonal sampling-time
    matrix. Rank deficiency (smallest eigenvalue of G^T G at or below
    RANK_TOL) raises with the offending condition number.
    """
    g = np.asarray(g, dtype=float)
    if g.ndim != 2:
        raise ShapeError(f"expected a 2-D matrix, got shape {g.shape}")
    if not np.all(np.isfinite(g)):
        raise ShapeError("matrix contains non-finite entries")
    gram = g.T @ g
    w = np.linalg.eigvalsh(0.5 * (gram + gram.T))
    if w[0] <= RANK_TOL:
        cond = float(w[-1] / w[0]) if w[0] > 0 else np.inf
        raise SingularMatrixError(
            f"matrix is not full column rank: smallest eigenvalue of G^T G is "
            f"{w[0]:.3e} <= {RANK_TOL:.0e} (condition number {cond:.3e})"
        )
    return np.linalg.solve(gram, g.T)


def solve_hermitian(m, rhs):
    """Solve m @ x = rhs for Hermitian positive-definite m.

    Residual contract: ||m x - rhs||_inf <= SOLVE_RESIDUAL_TOL * ||rhs||_inf
    for well-conditioned m.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeError(f"matrix must be square, got shape {m.shape}")
    rhs = np.asarray(rhs, dtype=complex)
    if rhs.shape[0] != m.shape[0]:
        raise ShapeError(f"rhs leading dimension {rhs.shape[0]} != matrix size {m.shape[0]}")
    scale = max(1.0, float(np.max(np.abs(m))))
    gap = float(np.max(np.abs(m - m.conj().T)))
    if gap > HERMITIAN_TOL * scale:
        raise ShapeError(
            f"matrix is not Hermitian: max |M - M^H| = {gap:.3e} "
            f"(allowed {HERMITIAN_TOL * scale:.3e})"
        )
    herm = 0.5 * (m + m.conj().T)
    try:
        np.linalg.cholesky(herm)
    except np.linalg.LinAlgError:
        raise SingularMatrixError("matrix is not positive definite") from None
    return np.linalg.solve(herm, rhs)
