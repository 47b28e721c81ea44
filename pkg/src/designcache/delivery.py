"""End-to-end placement and XOR delivery on real byte payloads.

The pipeline is: generate a library, fill every user's cache from the
caching matrix, turn each identity submatrix of the cover into one XOR
broadcast, and let every user decode from its own cache.  A user that would
need a subfile it does not hold raises :class:`MissingSideInformation`
instead of silently reading the library.

Pseudorandom bytes come from SplitMix64: state starts at ``seed``, each step
adds ``0x9E3779B97F4A7C15`` (mod 2**64) and mixes; every 64-bit output is
emitted as 8 little-endian bytes.  Libraries are drawn from a generator
seeded with ``seed`` (files in order, subfiles in column order), demands
from a generator seeded with ``seed ^ DEMAND_STREAM``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .caching import CachingMatrix, Cover, build_scheme, verify_cover
from .designs import Design, TransversalDesign
from .errors import InvalidMatrix, MissingSideInformation, SubpacketizationMismatch
from .metrics import scheme_metrics, scheme_parameters

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
DEMAND_STREAM = 0xD1B54A32D192ED03


class SplitMix64:
    """Portable 64-bit generator; identical output on every platform."""

    def __init__(self, seed: int):
        self.state = seed & MASK64

    @staticmethod
    def _mix(z: np.ndarray) -> np.ndarray:
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))

    def next_u64(self) -> int:
        return int(self.block(1)[0])

    def block(self, count: int) -> np.ndarray:
        """The next ``count`` outputs as a uint64 array."""
        steps = np.arange(1, count + 1, dtype=np.uint64)
        with np.errstate(over="ignore"):
            states = np.uint64(self.state) + steps * np.uint64(GAMMA)
            out = self._mix(states)
        self.state = (self.state + count * GAMMA) & MASK64
        return out

    def bytes(self, n: int) -> bytes:
        words = self.block((n + 7) // 8)
        return words.astype("<u8").tobytes()[:n]

    def below(self, bound: int) -> int:
        """Uniform integer in ``[0, bound)`` by rejection."""
        limit = (1 << 64) - (1 << 64) % bound
        while True:
            x = self.next_u64()
            if x < limit:
                return x % bound


# ---------------------------------------------------------------------------
# Library, caches, demands


@dataclass(frozen=True, eq=False)
class Library:
    """``N`` files of ``F * chunk`` bytes; ``data[i, f]`` is subfile ``(i, f)``."""

    N: int
    F: int
    chunk: int
    seed: int
    data: np.ndarray = field(repr=False)

    @property
    def files(self) -> list[bytes]:
        return [self.data[i].tobytes() for i in range(self.N)]

    def subfile(self, i: int, f: int) -> bytes:
        return self.data[i, f].tobytes()

    @property
    def file_bytes(self) -> int:
        return self.F * self.chunk


def make_library(N: int, F: int, chunk: int, seed: int) -> Library:
    if N < 1 or F < 1 or chunk < 1:
        raise ValueError(f"need N, F, chunk >= 1, got {N}, {F}, {chunk}")
    raw = SplitMix64(seed).bytes(N * F * chunk)
    data = np.frombuffer(raw, dtype=np.uint8).reshape(N, F, chunk)
    return Library(N, F, chunk, seed, data)


def random_demands(K: int, N: int, seed: int) -> tuple[int, ...]:
    """``K`` file indices drawn uniformly with replacement from ``[0, N)``."""
    rng = SplitMix64(seed ^ DEMAND_STREAM)
    return tuple(rng.below(N) for _ in range(K))


@dataclass(frozen=True, eq=False)
class CacheContents:
    """Every user's cache.

    User ``u`` holds subfile ``(i, f)`` of every file ``i`` exactly when
    ``cached[u, f]``.  Bytes are served from the shared library store, but
    only through the accessors below, which refuse anything not cached.
    """

    cached: np.ndarray
    library: Library = field(repr=False)

    @property
    def K(self) -> int:
        return self.cached.shape[0]

    def holds(self, u: int, f: int) -> bool:
        return bool(self.cached[u, f])

    def cached_columns(self, u: int) -> list[int]:
        return np.flatnonzero(self.cached[u]).tolist()

    def subfile(self, u: int, i: int, f: int) -> bytes:
        if not self.cached[u, f]:
            raise MissingSideInformation(f"user {u} does not cache subfile ({i}, {f})")
        return self.library.subfile(i, f)

    def file_part(self, u: int, i: int) -> tuple[np.ndarray, np.ndarray]:
        """Cached columns of file ``i`` at user ``u`` and their bytes."""
        cols = np.flatnonzero(self.cached[u])
        return cols, self.library.data[i, cols]

    def side_information(
        self, users: Sequence[int], files: Sequence[int], cols: Sequence[int]
    ) -> np.ndarray:
        """Subfiles ``(files[j], cols[j])`` as held by every other pivot user.

        Raises:
            MissingSideInformation: if some user ``users[i]`` lacks
                ``(files[j], cols[j])`` for some ``j != i``.
        """
        users, cols = np.asarray(users), np.asarray(cols)
        held = self.cached[np.ix_(users, cols)]
        np.fill_diagonal(held, True)
        if not held.all():
            i, j = np.argwhere(~held)[0]
            raise MissingSideInformation(
                f"user {users[i]} lacks subfile ({files[j]}, {cols[j]}) needed to decode"
            )
        return self.library.data[np.asarray(files), cols]

    def stored_bytes(self, u: int) -> int:
        return int(self.cached[u].sum()) * self.library.N * self.library.chunk

    def materialize(self, u: int) -> dict[tuple[int, int], bytes]:
        """Explicit ``{(file, column): bytes}`` copy of one user's cache."""
        return {
            (i, f): self.library.subfile(i, f)
            for i in range(self.library.N)
            for f in self.cached_columns(u)
        }


def place(matrix: CachingMatrix, lib: Library) -> CacheContents:
    """User ``u`` caches column ``f`` of every file iff the matrix entry is 0."""
    if lib.F != matrix.F:
        raise SubpacketizationMismatch(f"library has F={lib.F}, matrix has F={matrix.F}")
    cached = ~matrix.bits
    cached.setflags(write=False)
    return CacheContents(cached, lib)


# ---------------------------------------------------------------------------
# Delivery


@dataclass(frozen=True)
class TransmissionPlan:
    """``(user, demanded file, column)`` for each pivot of one submatrix."""

    pivots: tuple[tuple[int, int, int], ...]


@dataclass(frozen=True)
class Transmission:
    payload: bytes
    plan: TransmissionPlan


def schedule(cover: Cover, demands: Sequence[int]) -> list[TransmissionPlan]:
    """One plan per identity submatrix, in cover order."""
    return [
        TransmissionPlan(tuple((u, demands[u], f) for u, f in sub.pivots))
        for sub in cover
    ]


def encode(plans: Sequence[TransmissionPlan], lib: Library) -> list[Transmission]:
    """XOR of the demanded subfiles named by each plan."""
    out = []
    for plan in plans:
        files = [i for _, i, _ in plan.pivots]
        cols = [f for _, _, f in plan.pivots]
        payload = np.bitwise_xor.reduce(lib.data[files, cols], axis=0)
        out.append(Transmission(payload.tobytes(), plan))
    return out


@dataclass(frozen=True)
class SimulationReport:
    K: int
    F: int
    S: int
    chunk: int
    demands: tuple[int, ...]
    success: tuple[bool, ...]
    scheme: str | None = None
    expected_rate: Fraction | None = None
    seed: int | None = None

    @property
    def transmissions_count(self) -> int:
        return self.S

    @property
    def transmitted_bytes(self) -> int:
        return self.S * self.chunk

    @property
    def rate(self) -> Fraction:
        return Fraction(self.S, self.F)

    @property
    def match(self) -> bool:
        return self.expected_rate is not None and self.rate == self.expected_rate

    @property
    def failures(self) -> list[int]:
        return [u for u, ok in enumerate(self.success) if not ok]

    @property
    def all_decoded(self) -> bool:
        return all(self.success)


def decode_all(
    transmissions: Sequence[Transmission],
    caches: CacheContents,
    demands: Sequence[int],
    matrix: CachingMatrix,
    *,
    scheme: str | None = None,
    expected_rate: Fraction | None = None,
    seed: int | None = None,
) -> SimulationReport:
    """Decode at every user and compare with the library byte for byte.

    Each user uses only transmissions in which it is a pivot, one at a time:
    it XORs the payload with the other pivots' subfiles taken from its own
    cache.
    """
    lib = caches.library
    K, F = matrix.K, matrix.F
    recovered: list[list[tuple[int, np.ndarray]]] = [[] for _ in range(K)]
    for tx in transmissions:
        users = [u for u, _, _ in tx.plan.pivots]
        files = [i for _, i, _ in tx.plan.pivots]
        cols = [f for _, _, f in tx.plan.pivots]
        side = caches.side_information(users, files, cols)
        payload = np.frombuffer(tx.payload, dtype=np.uint8)
        zero = np.zeros_like(payload)
        # XOR of all rows except row i, from prefix and suffix XORs
        prefix = np.vstack([zero, np.bitwise_xor.accumulate(side, axis=0)])
        suffix = np.vstack([np.bitwise_xor.accumulate(side[::-1], axis=0)[::-1], zero])
        for i, u in enumerate(users):
            recovered[u].append((cols[i], payload ^ prefix[i] ^ suffix[i + 1]))

    success = []
    for u in range(K):
        want = demands[u]
        rebuilt = np.zeros((F, lib.chunk), dtype=np.uint8)
        have = np.zeros(F, dtype=bool)
        cols, data = caches.file_part(u, want)
        rebuilt[cols] = data
        have[cols] = True
        for f, chunk in recovered[u]:
            rebuilt[f] = chunk
            have[f] = True
        success.append(bool(have.all() and np.array_equal(rebuilt, lib.data[want])))
    return SimulationReport(
        K=K,
        F=F,
        S=len(transmissions),
        chunk=lib.chunk,
        demands=tuple(demands),
        success=tuple(success),
        scheme=scheme,
        expected_rate=expected_rate,
        seed=seed,
    )


def run_delivery(
    matrix: CachingMatrix,
    cover: Cover,
    lib: Library,
    demands: Sequence[int],
    *,
    scheme: str | None = None,
    expected_rate: Fraction | None = None,
    seed: int | None = None,
) -> SimulationReport:
    """Place, schedule, encode and decode for one demand vector."""
    if any(not 0 <= d < lib.N for d in demands) or len(demands) != matrix.K:
        raise ValueError(f"need {matrix.K} demands in [0, {lib.N})")
    caches = place(matrix, lib)
    transmissions = encode(schedule(cover, demands), lib)
    return decode_all(
        transmissions, caches, demands, matrix,
        scheme=scheme, expected_rate=expected_rate, seed=seed,
    )


def simulate(
    scheme: str,
    design: Design | TransversalDesign,
    n_files: int,
    chunk: int = 16,
    seed: int = 0,
    *,
    t: int | None = None,
    demands: Sequence[int] | None = None,
) -> SimulationReport:
    """Build the scheme for ``design``, verify its cover, and deliver.

    Demands default to a seeded uniform draw; pass ``demands`` to pin them.
    """
    if n_files < 1:
        raise ValueError("n_files must be at least 1")
    matrix, cover = build_scheme(scheme, design, t)
    report = verify_cover(matrix, cover)
    if not report.is_valid_cover:
        raise InvalidMatrix(f"constructed cover failed verification: {report}")
    expected = scheme_metrics(matrix, cover, scheme, scheme_parameters(scheme, design, t)).predicted["rate"]
    lib = make_library(n_files, matrix.F, chunk, seed)
    if demands is None:
        demands = random_demands(matrix.K, n_files, seed)
    return run_delivery(
        matrix, cover, lib, demands, scheme=scheme, expected_rate=expected, seed=seed
    )
