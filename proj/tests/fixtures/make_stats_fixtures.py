"""Regenerates anova_tukey.json with scipy as the reference implementation."""
import json
import pathlib

import numpy as np
import scipy
from scipy import stats

rng = np.random.default_rng(20240611)
fixtures = []
for i in range(10):
    n_groups = int(rng.integers(2, 6))
    groups = {}
    for g in range(n_groups):
        n = int(rng.integers(4, 15)) if i % 2 else 10
        loc = rng.normal(0.0, 0.8)
        scale = rng.uniform(0.5, 2.0)
        groups[f"g{g}"] = [float(x) for x in rng.normal(loc, scale, n)]
    names = sorted(groups)
    samples = [groups[n] for n in names]
    anova = stats.f_oneway(*samples)
    tukey = stats.tukey_hsd(*samples)
    pairs = []
    for a in range(n_groups):
        for b in range(a + 1, n_groups):
            pairs.append({"first": names[a], "second": names[b],
                          "p_value": float(tukey.pvalue[a, b])})
    fixtures.append({"groups": groups, "f_statistic": float(anova.statistic),
                     "p_value": float(anova.pvalue), "pairs": pairs})

sr = []
for q, k, df in [(0.5, 2, 10), (2.0, 3, 5), (3.0, 5, 245), (4.5, 4, 27), (1.2, 6, 60),
                 (6.0, 3, 12), (3.3, 2, 1000), (8.0, 5, 40)]:
    sr.append({"q": q, "k": k, "df": df, "sf": float(stats.studentized_range.sf(q, k, df))})

out = {"scipy_version": scipy.__version__, "anova_tukey": fixtures, "studentized_range_sf": sr}
path = pathlib.Path(__file__).with_name("stats_reference.json")
path.write_text(json.dumps(out, indent=1) + "\n")
