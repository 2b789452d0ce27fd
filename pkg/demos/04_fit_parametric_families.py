# coding: utf-8
# # Choosing a parametric family against a wavelet benchmark
#
# The nonparametric estimate serves as a benchmark. Each of five parametric
# classes is scanned over a parameter lattice, and the family closest to the
# benchmark in the grid norm wins.

# %%
import numpy as np

from wavecopula import CopulaModel, EstimatorConfig, estimate
from wavecopula.copulas import sample
from wavecopula.fitting import fit_table, fit_table_to_csv

# %%
u = sample(CopulaModel("clayton", (0.8,)), 5000, np.random.default_rng(3))
benchmark = estimate(u, EstimatorConfig(rule="global"))

# %%
# One row per family with its best parameter and distance for each contrast,
# then the overall winner with its relative error in percent.
print(fit_table_to_csv(fit_table(benchmark, (1, 2, np.inf))))
