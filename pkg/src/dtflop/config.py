"""Run configuration: a line-based key=value file, overridable by command-line flags."""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field, fields

from .errors import DTError
from .fqcount import is_prime

# largest vertex dimension each route supports; towers (0,n) go further
MAX_VERTEX_DIM = 2
MAX_TOWER_DIM = 3


class ConfigError(DTError):
    """Invalid configuration value."""


def parse_dims(text: str):
    pairs = re.findall(r"\(\s*(\d+)\s*,\s*(\d+)\s*\)", text)
    if not pairs or re.sub(r"[\s,]", "", re.sub(r"\(\s*\d+\s*,\s*\d+\s*\)", "", text)):
        raise ConfigError(f"cannot parse dimension vectors from {text!r}; use \"(0,1),(1,1)\"")
    return [(int(a), int(b)) for a, b in pairs]


def parse_primes(text: str):
    try:
        return [int(x) for x in str(text).replace(" ", "").split(",") if x]
    except ValueError:
        raise ConfigError(f"cannot parse primes from {text!r}; use 5,13") from None


@dataclass
class RunConfig:
    d: int = 1
    sector: str = "all"
    primes: list = field(default_factory=lambda: [5, 13])
    dims: list = field(default_factory=lambda: [(0, 1), (1, 0), (0, 2), (2, 0), (1, 1),
                                                (1, 2), (2, 1), (2, 2)])
    floor: int = -40
    out: str = "reports"
    jobs: int = 1
    cache: str | None = None
    gamma: str | None = None
    steps: bool = False
    p: int | None = None
    n: tuple | None = None

    _conv = {
        "d": int, "floor": int, "jobs": int, "p": int,
        "primes": parse_primes, "dims": parse_dims,
        "n": lambda t: tuple(parse_dims(t)[0]),
        "steps": lambda t: str(t).lower() in ("1", "true", "yes"),
    }

    def update(self, key: str, value):
        names = {f.name for f in fields(self)}
        if key not in names:
            raise ConfigError(f"unknown config key {key!r}; known: {', '.join(sorted(names))}")
        conv = self._conv.get(key)
        if conv is not None and isinstance(value, str):
            try:
                value = conv(value)
            except ValueError:
                raise ConfigError(f"bad value {value!r} for {key}") from None
        setattr(self, key, value)

    @staticmethod
    def from_file(path) -> "RunConfig":
        cfg = RunConfig()
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key=value")
                k, v = (s.strip() for s in line.split("=", 1))
                cfg.update(k, v)
        return cfg

    def validate(self):
        if self.d < 1:
            raise ConfigError("d must be >= 1")
        if self.sector not in ("all", "nilpotent"):
            raise ConfigError("sector must be 'all' or 'nilpotent'")
        if self.jobs < 1:
            raise ConfigError("jobs must be >= 1")
        if self.steps:
            if self.p is None or self.n is None:
                raise ConfigError("--steps needs --p and --n")
            if not is_prime(self.p) or (self.d + 1) % self.p == 0:
                raise ConfigError(f"p = {self.p} must be a prime not dividing {self.d + 1}")
            return self
        m = math.lcm(4, self.d + 1)
        for p in self.primes:
            if not is_prime(p):
                raise ConfigError(f"{p} is not prime")
            if (p - 1) % m:
                raise ConfigError(f"{p} is not 1 mod {m} (needed for d = {self.d}: "
                                  f"mu_{self.d + 1} and L^(1/2) must be realizable)")
        if self.sector == "nilpotent":
            bad = [n for n in self.dims if n[0] and n[1]]
            if bad:
                raise ConfigError(f"nilpotent sector is realized on (0,n), (n,0) only; got {bad}")
        return self

    def oversize(self):
        """(n, estimate) for dimension vectors beyond every counting route."""
        out = []
        for n in self.dims:
            tower = not (n[0] and n[1])
            lim = MAX_TOWER_DIM if tower else MAX_VERTEX_DIM
            if max(n) > lim:
                ambient = 4 * n[0] * n[1] + n[0] ** 2 + n[1] ** 2
                out.append((n, max(self.primes) ** ambient))
        return out
