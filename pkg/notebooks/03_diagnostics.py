# %% [markdown]
# # Unit roots, autocorrelation and lead/lag structure

# %%
import numpy as np

from policy_index.diagnostics import acf, adf_test, ccf, classify_ccf, ljung_box

rng = np.random.default_rng(3)
noise = rng.standard_normal(500)
walk = np.cumsum(rng.standard_normal(500))
for name, x in (("noise", noise), ("walk", walk)):
    row = [f"{s}: {adf_test(x, s).statistic:7.3f} ({adf_test(x, s).p_value:.2f})" for s in ("NC", "C", "CT")]
    print(f"{name:>6}", *row)

# %% [markdown]
# p-values are interpolated from Dickey-Fuller tables and clipped to
# [0.01, 0.99], so strongly stationary series print as 0.01.

# %%
print("acf lags 1-5:", acf(noise, 5)[1:].round(3))
print("Ljung-Box noise:", [round(v, 3) for v in ljung_box(noise, 10)])
print("Ljung-Box walk: ", [round(v, 3) for v in ljung_box(walk, 10)])

# %% [markdown]
# A follower series that echoes the leader ten days later shows its
# correlation mass at positive lags.

# %%
leader = rng.standard_normal(310)
follower = leader[:-10] + 0.5 * rng.standard_normal(300)
c = ccf(follower, leader[10:], 14)
for k in (-10, -3, 0, 3, 10):
    print(f"lag {k:>3}: {c.at(k):+.3f}")
print(classify_ccf(c))
