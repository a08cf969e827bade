"""Domain types, seeded samplers and segmentation shared by both models.

Vertices are 1-based throughout: bottom vertices u_1..u_n, top vertices
v_1..v_k. An edge is the pair ``(i, j)`` joining u_i to v_j.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

RNG_ALGORITHM = "numpy-Philox4x64-10/SeedSequence(seed,spawn_key=(trial,))"

_SEED_MASK = (1 << 64) - 1


def make_rng(seed: int, trial: int | None = None) -> np.random.Generator:
    """Return a counter-based generator for ``seed`` or for one trial of it.

    Each trial stream is keyed by ``(seed, trial)`` alone, so the values a
    trial sees do not depend on how trials are scheduled across workers.
    """
    if not 0 <= seed <= _SEED_MASK:
        raise ValueError(f"seed must be a 64-bit unsigned integer, got {seed}")
    spawn_key = () if trial is None else (int(trial),)
    ss = np.random.SeedSequence(entropy=seed, spawn_key=spawn_key)
    return np.random.Generator(np.random.Philox(ss))


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return make_rng(int(seed))


@dataclass(frozen=True)
class ColourAssignment:
    """Colours of the n*n edges of K_{n,n}; ``colour[i-1, j-1]`` is edge (i, j)."""

    n: int
    r: int
    colour: np.ndarray

    def __post_init__(self):
        if self.n < 1 or self.r < 1:
            raise ValueError("n and r must be positive")
        arr = np.asarray(self.colour, dtype=np.int64)
        if arr.shape != (self.n, self.n):
            raise ValueError(f"colour grid must have shape ({self.n}, {self.n})")
        if arr.size and (arr.min() < 1 or arr.max() > self.r):
            raise ValueError(f"colour labels must lie in 1..{self.r}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "colour", arr)

    @property
    def alpha(self) -> float:
        return self.r / self.n

    def __call__(self, i: int, j: int) -> int:
        return int(self.colour[i - 1, j - 1])

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], r: int | None = None) -> "ColourAssignment":
        arr = np.asarray(rows, dtype=np.int64)
        return cls(n=arr.shape[0], r=int(arr.max()) if r is None else r, colour=arr)


@dataclass(frozen=True)
class Injection:
    """A 1-regular subgraph of K_{k,n}: bottom vertex u_i is joined to v_{pi[i-1]}."""

    n: int
    k: int
    pi: tuple[int, ...]

    def __post_init__(self):
        pi = tuple(int(v) for v in self.pi)
        object.__setattr__(self, "pi", pi)
        if self.n < 1 or self.k < self.n:
            raise ValueError(f"need 1 <= n <= k, got n={self.n}, k={self.k}")
        if len(pi) != self.n:
            raise ValueError(f"pi must have length n={self.n}")
        if any(v < 1 or v > self.k for v in pi):
            raise ValueError(f"pi values must lie in 1..{self.k}")
        if len(set(pi)) != self.n:
            raise ValueError("pi values must be pairwise distinct")

    @classmethod
    def of(cls, pi: Sequence[int], k: int | None = None) -> "Injection":
        pi = tuple(int(v) for v in pi)
        return cls(n=len(pi), k=max(pi) if k is None else k, pi=pi)


@dataclass(frozen=True)
class PlanarMatching:
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple((int(i), int(j)) for i, j in self.edges))

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)


def validate_planar(m: PlanarMatching | Iterable[tuple[int, int]],
                    n_bottom: int | None = None, n_top: int | None = None) -> bool:
    """True iff both coordinate sequences strictly increase and lie in range.

    Edges are taken in the given order; callers holding an unordered edge set
    should sort by bottom index first.
    """
    edges = m.edges if isinstance(m, PlanarMatching) else tuple(m)
    prev_i = prev_j = 0
    for i, j in edges:
        if i <= prev_i or j <= prev_j:
            return False
        if (n_bottom is not None and i > n_bottom) or (n_top is not None and j > n_top):
            return False
        prev_i, prev_j = i, j
    return True


def sample_colouring(n: int, r: int, seed) -> ColourAssignment:
    """Colour every edge of K_{n,n} independently and uniformly from 1..r."""
    if n < 1 or r < 1:
        raise ValueError(f"need n >= 1 and r >= 1, got n={n}, r={r}")
    rng = _as_rng(seed)
    return ColourAssignment(n=n, r=r, colour=rng.integers(1, r + 1, size=(n, n)))


def sample_injection_values(n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """Partial Fisher-Yates: the first n slots of a shuffle of 1..k, as int64."""
    if not 1 <= n <= k:
        raise ValueError(f"need 1 <= n <= k, got n={n}, k={k}")
    swaps = rng.integers(np.arange(n), k)
    if k <= 4 * n or k <= 1 << 16:
        pool = list(range(1, k + 1))
        for i, j in enumerate(swaps.tolist()):
            pool[i], pool[j] = pool[j], pool[i]
        return np.array(pool[:n], dtype=np.int64)
    # sparse pool for k >> n: only displaced slots are stored
    moved: dict[int, int] = {}
    out = np.empty(n, dtype=np.int64)
    for i, j in enumerate(swaps.tolist()):
        vi = moved.get(i, i + 1)
        vj = moved.get(j, j + 1)
        moved[j] = vi
        out[i] = vj
    return out


def sample_injection(n: int, k: int, seed) -> Injection:
    """Uniform injection of 1..n into 1..k (every ordered n-tuple equally likely)."""
    values = sample_injection_values(n, k, _as_rng(seed))
    return Injection(n=n, k=k, pi=tuple(values.tolist()))


@dataclass(frozen=True)
class Segmentation:
    n: int
    t: int
    k: int
    s: int
    blocks_bottom: tuple[range, ...]
    blocks_top: tuple[range, ...]

    @property
    def I(self) -> int:  # noqa: E743
        return len(self.blocks_bottom)

    @property
    def J(self) -> int:
        return len(self.blocks_top)


def _blocks(size: int, width: int) -> tuple[range, ...]:
    count = size // width
    blocks = [range((b - 1) * width + 1, b * width + 1) for b in range(1, count)]
    blocks.append(range((count - 1) * width + 1, size + 1))
    return tuple(blocks)


def segment(n: int, t: int, k: int, s: int) -> Segmentation:
    """Cut 1..n into floor(n/t) blocks of width t and 1..k into floor(k/s) of width s.

    The remainder of each cut is folded into its last block, which therefore
    holds between t and 2t-1 (resp. s and 2s-1) indices.
    """
    if not 1 <= t <= n:
        raise ValueError(f"need 1 <= t <= n, got t={t}, n={n}")
    if not 1 <= s <= k:
        raise ValueError(f"need 1 <= s <= k, got s={s}, k={k}")
    if s * n > t * k:
        raise ValueError(f"need s <= t*k/n, got s={s}, t*k/n={t * k / n:g}")
    return Segmentation(n=n, t=t, k=k, s=s,
                        blocks_bottom=_blocks(n, t), blocks_top=_blocks(k, s))
