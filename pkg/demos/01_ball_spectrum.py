"""Robin eigenvalues of the unit disk as β runs from Neumann to Dirichlet."""

import math

from robinspec.ballspec import gap_functions, gap_identity_residual, second_eigenvalue_check
from robinspec.ballspec import robin_eigenvalue_ball

print(f"{'beta':>10} {'lambda1':>12} {'lambda2':>12} {'ratio':>8} {'gap id. resid':>14}")
for beta in (0.01, 0.1, 1.0, 10.0, 100.0, math.inf):
    lam1 = robin_eigenvalue_ball(2, 1.0, beta).eigenvalue
    lam2, ell1 = second_eigenvalue_check(2, 1.0, beta)
    resid = gap_identity_residual(gap_functions(2, 1.0, beta))
    print(f"{beta:>10g} {lam1:12.6f} {lam2:12.6f} {lam2 / lam1:8.4f} {resid:14.1e}"
          + ("" if ell1 else "  (second eigenvalue not from ell=1)"))
