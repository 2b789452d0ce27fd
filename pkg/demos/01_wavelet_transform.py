# coding: utf-8
# # Daubechies filters and the periodic 2D transform
#
# Everything the estimator does happens in wavelet coordinates, so we start
# with the building blocks: the filter taps, the scaling function from the
# cascade algorithm, and a round trip through the periodic 2D DWT.

# %%
import numpy as np

from wavecopula.wavelet import cascade_eval, daubechies_filter, dwt2_periodic, idwt2_periodic

np.set_printoptions(precision=4, suppress=True)

# %%
# The order-2 filter has four taps; they sum to sqrt(2) and are orthonormal
# to their own even shifts.
spec = daubechies_filter(2)
print("db2 taps:", spec.lowpass)
print("sum:", spec.lowpass.sum(), " sqrt(2):", np.sqrt(2))

# %%
# The cascade algorithm tabulates phi on the dyadic grid 2**-10. Integer
# translates of phi add up to one everywhere.
table = cascade_eval(spec, 10)
x = np.linspace(0, 1, 5, endpoint=False)
print("sum_k phi(x + k):", sum(table.phi(x + k) for k in range(4)))

# %%
# A random 32 x 32 matrix goes down to level 1 and back up again.
rng = np.random.default_rng(0)
m = rng.normal(size=(32, 32))
pyramid = dwt2_periodic(m, daubechies_filter(4), coarse=1)
for j, name, block in pyramid.blocks():
    print(f"level {j} {name}: {block.shape}")
print("round-trip error:", np.abs(idwt2_periodic(pyramid, daubechies_filter(4)) - m).max())
