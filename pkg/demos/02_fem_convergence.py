"""Mesh convergence of the P1 solver on the disk and on the L-shape."""

import math

from robinspec.ballspec import robin_eigenvalue_ball
from robinspec.cli import convergence

exact = robin_eigenvalue_ball(2, 1.0, math.inf).eigenvalue
for spec, beta in (("disk(m=512)", math.inf), ("disk(m=512)", 1.0), ("lshape", 1.0)):
    t = convergence(spec, beta, [0.08, 0.04, 0.02])
    print(f"{spec}, beta={beta}")
    for h, l1, l2 in zip(t.h, t.lambda1, t.lambda2):
        print(f"  h={h:<5} lambda1={l1:.8f} lambda2={l2:.8f}")
    print(f"  orders {t.order1:.2f}, {t.order2:.2f}; extrapolated lambda1 {t.lambda1_extrapolated:.8f}")
    if math.isinf(beta):
        print(f"  j01^2 = {exact:.8f}")
