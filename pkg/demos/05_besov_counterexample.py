# coding: utf-8
# # Local versus global thresholding: a sparse counterexample
#
# Global (block) thresholding is good on its own class of functions, but
# that class is strictly smaller than the one local thresholding handles.
# A sparse coefficient sequence shows the gap: its local weak-Besov
# functional settles down as the truncation level grows, while the global
# one keeps growing without bound.

# %%
from wavecopula.besov import (
    sparse_counterexample,
    strong_besov_functional,
    weak_besov_global,
    weak_besov_local,
)

d, s, alpha = 2, 1.0, 1.0
r = 2 * d / (2 * s + d)
s_strong = d * s / (2 * s + d)

# %%
print(f"{'J_max':>5} {'strong':>10} {'local':>10} {'global':>10}")
for J in (8, 10, 12, 14):
    seq = sparse_counterexample(alpha, s, d, J)
    print(f"{J:>5} {strong_besov_functional(seq, s_strong):10.4f} "
          f"{weak_besov_local(seq, r):10.4f} {weak_besov_global(seq, r):10.2f}")
