# %% [markdown]
# # End-to-end report on the demo corpus
#
# Equivalent to `policy-index report --demo --out <dir>`.

# %%
import tempfile
from pathlib import Path

import pandas as pd

from policy_index.pipeline import DEFAULT_DATA, load_config, run_pipeline
from policy_index.volatility import read_param_table

out = Path(tempfile.mkdtemp(prefix="policy-report-"))
bundle = run_pipeline(load_config(DEFAULT_DATA / "demo" / "config.txt"), out)
for name, path in bundle.items():
    print(f"{name:>18}  {path.name}")

# %%
print(pd.read_csv(out / "classify.csv").to_string(index=False))
print(pd.read_csv(out / "adf_table.csv").to_string(index=False))
print(read_param_table(out / "dcc_params.csv").round(4))

# %%
print(sorted(p.name for p in (out / "charts").glob("*.svg"))[:8])
