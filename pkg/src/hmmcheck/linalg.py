"""Dense linear solves for until-probabilities."""
import numpy as np

from . import kernels


class SingularSystemError(ArithmeticError):
    pass


def solve_linear_system(M, b) -> np.ndarray:
    """Solve ``M x = b`` by Gaussian elimination with partial pivoting.

    Raises SingularSystemError when a pivot falls below 1e-12.
    """
    M = np.ascontiguousarray(M, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or b.shape != (M.shape[0],):
        raise ValueError(f"incompatible shapes {M.shape} and {b.shape}")
    if b.size == 0:
        return b.copy()
    x, ok = kernels.gauss_solve(M, b)
    if not ok:
        raise SingularSystemError("matrix is singular to working precision")
    return x
