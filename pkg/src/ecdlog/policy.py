"""Runtime policy knobs: budgets, level constants, enumeration bounds."""

import json
from dataclasses import dataclass, asdict, fields


@dataclass
class Policy:
    c: int = 2                      # factor-base tower level
    trial_factor: int = 64          # sampling budget = trial_factor * q^3
    enum_bound: int = 1 << 16       # exhaustive-fallback size for E(k) / t0
    check_input_traps: bool = True
    check_output_traps: bool = True
    lift_e_margin: int = 1          # e = max(c, ceil(log2 n) + margin)
    lift_max_tries: int = 4096
    oracle_bound: int = 1 << 40     # generic-dlog size guard
    relation_batch: int = 96        # factor-base relations added per round
    max_relation_rounds: int = 64
    anchor_count: int = 2
    threads: int = 1

    def max_trials(self, q):
        return self.trial_factor * q ** 3

    def to_dict(self):
        return asdict(self)

    @classmethod
    def from_dict(cls, d):
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in d.items() if k in known})

    @classmethod
    def from_file(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))
