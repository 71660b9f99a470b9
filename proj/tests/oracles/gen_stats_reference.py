"""Freezes t-test and chi-square reference results from scipy into stats_reference.json."""
import json
from pathlib import Path

import numpy as np
from scipy import special, stats


def main() -> None:
    rng = np.random.default_rng(1729)
    t_cases = []
    for i in range(50):
        na, nb = int(rng.integers(2, 40)), int(rng.integers(2, 40))
        a = np.round(rng.normal(rng.uniform(-2, 2), rng.uniform(0.2, 3), na), 3)
        b = np.round(rng.normal(rng.uniform(-2, 2), rng.uniform(0.2, 3), nb), 3)
        pooled = i % 2 == 0
        r = stats.ttest_ind(a, b, equal_var=pooled)
        t_cases.append({
            "a": a.tolist(), "b": b.tolist(), "pooled": pooled,
            "statistic": float(r.statistic), "df": float(r.df), "p_value": float(r.pvalue),
        })
    t_cases.append({"a": [1, 2, 3, 4, 5], "b": [2, 3, 4, 5, 6], "pooled": True,
                     **dict(zip(["statistic", "p_value"], map(float, stats.ttest_ind([1, 2, 3, 4, 5], [2, 3, 4, 5, 6])))),
                     "df": 8.0})

    chi_cases = []
    for i in range(50):
        r, c = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        table = rng.integers(1, 60, size=(r, c))
        yates = (r, c) == (2, 2) and i % 3 == 0
        stat, p, dof, _ = stats.chi2_contingency(table, correction=yates)
        chi_cases.append({"table": table.tolist(), "yates": yates,
                          "statistic": float(stat), "df": float(dof), "p_value": float(p)})
    stat, p, dof, _ = stats.chi2_contingency([[10, 20], [20, 10]], correction=False)
    chi_cases.append({"table": [[10, 20], [20, 10]], "yates": False,
                      "statistic": float(stat), "df": float(dof), "p_value": float(p)})

    # special-function values on a grid
    beta_grid = []
    for a in [0.5, 1.0, 2.5, 7.0, 30.0]:
        for b in [0.5, 1.0, 3.0, 12.0]:
            for x in [0.01, 0.2, 0.5, 0.8, 0.99]:
                beta_grid.append({"a": a, "b": b, "x": x, "value": float(special.betainc(a, b, x))})
    gamma_grid = []
    for a in [0.5, 1.0, 2.0, 5.5, 20.0]:
        for x in [0.01, 0.5, 1.0, 3.0, 10.0, 40.0]:
            gamma_grid.append({"a": a, "x": x, "p": float(special.gammainc(a, x)),
                               "q": float(special.gammaincc(a, x))})

    out = Path(__file__).with_name("stats_reference.json")
    out.write_text(json.dumps({"t_test": t_cases, "chi_square": chi_cases,
                               "incomplete_beta": beta_grid, "incomplete_gamma": gamma_grid}, indent=1))


if __name__ == "__main__":
    main()
