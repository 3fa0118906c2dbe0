"""Quasi-reversibility on a manufactured problem: error versus data perturbation."""

# %%
import numpy as np

from freqcip.grid import SpatialGrid, sobolev_norm
from freqcip.qrm import QrmProblem, qrm_solve

grid = SpatialGrid()
x = grid.x
w_star = x**2 - (2 / 3) * x**3          # w'' = 2 - 4x, w(0) = w'(0) = w'(1) = 0

# %% perturb w(0) by delta and pick alpha = delta**2
rows = []
for delta in (1e-2, 1e-3, 1e-4):
    sol = qrm_solve(QrmProblem(grid, 0.0, 0.0, 2 - 4 * x, delta, 0.0, delta**2))
    err = sobolev_norm(sol.w.values - w_star, 2, grid)
    rows.append((delta, err))
    print(f"delta={delta:.0e}  H2 error={err:.3e}  residual={sol.residual_l2:.2e}")

# %% the log-log slope should sit near one
d, e = np.array(rows).T
print("slope:", np.polyfit(np.log(d), np.log(e), 1)[0])
