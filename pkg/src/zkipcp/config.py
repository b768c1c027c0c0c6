"""Statistical acceptance thresholds, loadable from a JSON config file.

The protocols' guarantees are exact; statistics are the desk-scale proxy,
so every threshold is explicit and tunable rather than baked in.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass


@dataclass
class Thresholds:
    chi2_samples: int = 100_000     # N for two-sample view comparisons
    p_floor: float = 1e-3           # chi-square p-value acceptance floor
    slack_sigmas: float = 5.0       # Monte Carlo slack above theoretical bounds
    wilson_z: float = 1.96          # Wilson interval width for soundness CIs
    mc_trials: int = 10_000         # soundness Monte Carlo trial count
    completeness_trials: int = 1_000

    @staticmethod
    def load(path: str | None = None) -> "Thresholds":
        t = Thresholds()
        path = path or os.environ.get("ZKIPCP_CONFIG")
        if path and os.path.exists(path):
            with open(path) as fh:
                data = json.load(fh)
            for key, val in data.items():
                if hasattr(t, key):
                    setattr(t, key, val)
        return t

    def dump(self) -> str:
        return json.dumps(self.__dict__, indent=2, sort_keys=True)
