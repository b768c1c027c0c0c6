"""Deterministic randomness for protocol runs.

Two sources behind one interface:

* `RngStream` — hierarchical seeded randomness.  Streams derive child streams
  by label; the same (root seed, label path) always yields the same bytes,
  and distinct labels give independent streams.  Protocol code never touches
  a global RNG, so a transcript is a pure function of (parameters, seed).

* `TapeRng` — replays draws from a fixed tape of integers and raises
  `TapeExhausted` when the tape runs out.  The exhaustive-enumeration driver
  in `stats` uses it to walk every assignment of protocol randomness.
"""

from __future__ import annotations

import hashlib
import random

import numpy as np


class TapeExhausted(Exception):
    """Raised by TapeRng when a draw goes past the end of the tape.

    `domain` is the size of the needed draw's domain, so an enumerator can
    branch over all possible extensions.
    """

    def __init__(self, domain: int):
        super().__init__(f"tape exhausted; next draw has domain {domain}")
        self.domain = domain


def _derive_seed(*parts) -> int:
    h = hashlib.sha256("/".join(str(p) for p in parts).encode()).digest()
    return int.from_bytes(h[:8], "big")


class RngStream:
    """Labeled hierarchical RNG; same label path -> same bytes."""

    def __init__(self, root_seed, _path: str = ""):
        self.root_seed = root_seed
        self.path = _path
        self._seed = _derive_seed(root_seed, _path)
        self._py = random.Random(self._seed)
        self._np = None

    def child(self, *labels) -> "RngStream":
        return RngStream(self.root_seed, self.path + "/" + ".".join(str(l) for l in labels))

    @property
    def np_rng(self) -> np.random.Generator:
        if self._np is None:
            self._np = np.random.Generator(np.random.PCG64(self._seed ^ 0x9E3779B97F4A7C15))
        return self._np

    # draws -----------------------------------------------------------------

    def randrange(self, n: int) -> int:
        return self._py.randrange(n)

    def element(self, field) -> int:
        return self._py.randrange(field.order)

    def nonzero(self, field) -> int:
        return 1 + self._py.randrange(field.order - 1)

    def choice(self, seq):
        return seq[self._py.randrange(len(seq))]

    def coin(self) -> int:
        return self._py.randrange(2)

    def point(self, field, m: int) -> tuple:
        return tuple(self._py.randrange(field.order) for _ in range(m))

    def field_array(self, field, size) -> np.ndarray:
        return self.np_rng.integers(0, field.order, size=size, dtype=np.int64)

    def shuffle(self, lst):
        self._py.shuffle(lst)


class TapeRng:
    """Reads draws off a fixed integer tape; raises TapeExhausted past the end.

    Draw methods mirror RngStream.  Each tape entry is an index into the
    domain of the corresponding draw, so a run is a deterministic function of
    the tape and the enumeration driver can integrate over all tapes.
    """

    def __init__(self, tape):
        self.tape = list(tape)
        self.pos = 0
        self.domains: list[int] = []

    def _draw(self, n: int) -> int:
        if n <= 0:
            raise ValueError("empty draw domain")
        if n == 1:
            return 0  # deterministic draw consumes no tape
        if self.pos >= len(self.tape):
            raise TapeExhausted(n)
        v = self.tape[self.pos]
        if not 0 <= v < n:
            raise ValueError(f"tape value {v} out of domain {n}")
        self.pos += 1
        self.domains.append(n)
        return v

    def child(self, *labels) -> "TapeRng":
        return self  # one linear tape drives the whole run

    def randrange(self, n: int) -> int:
        return self._draw(n)

    def element(self, field) -> int:
        return self._draw(field.order)

    def nonzero(self, field) -> int:
        return 1 + self._draw(field.order - 1)

    def choice(self, seq):
        return seq[self._draw(len(seq))]

    def coin(self) -> int:
        return self._draw(2)

    def point(self, field, m: int) -> tuple:
        return tuple(self._draw(field.order) for _ in range(m))

    def field_array(self, field, size) -> np.ndarray:
        n = int(np.prod(size)) if not isinstance(size, int) else size
        flat = np.array([self._draw(field.order) for _ in range(n)], dtype=np.int64)
        return flat.reshape(size)

    def shuffle(self, lst):
        for i in range(len(lst) - 1, 0, -1):
            j = self._draw(i + 1)
            lst[i], lst[j] = lst[j], lst[i]
