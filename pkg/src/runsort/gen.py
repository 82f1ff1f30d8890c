"""Deterministic, seeded input generators and run-profile utilities.

All generators emit numpy int64 permutations of {1..n}.  Randomness comes
from numpy's PCG64 stream seeded with the given 64-bit seed; one Generator
is created per call, so identical (generator, parameters, seed) yields a
bit-identical array on every platform.

The run profile of an array is its unique left-to-right decomposition into
maximal weakly increasing or strictly decreasing segments (the decreasing
branch is taken when the first pair of a segment descends).  Note that under
this convention an interior run of length 1 cannot exist: any descent pair
starts a decreasing segment of length at least 2, so a requested profile
with interior 1-runs is realized as the nearest attainable decomposition
(the 1-run fuses with the head of its successor).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence, Union

import numpy as np

__all__ = [
    "RunProfile",
    "random_permutation",
    "random_runs",
    "timsort_drag",
    "timsort_drag_lengths",
    "from_run_lengths",
    "run_profile",
    "save_array",
    "load_array",
]


@dataclass(frozen=True)
class RunProfile:
    """Lengths of the maximal runs of an array, left to right."""

    lengths: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(L < 1 for L in self.lengths):
            raise ValueError("run lengths must be positive")

    @property
    def n(self) -> int:
        return sum(self.lengths)

    @property
    def r(self) -> int:
        return len(self.lengths)

    def __iter__(self):
        return iter(self.lengths)

    def __len__(self) -> int:
        return len(self.lengths)


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def random_permutation(n: int, seed: int) -> np.ndarray:
    """Uniform permutation of keys 1..n (Fisher-Yates inside PCG64)."""
    if n < 0:
        raise ValueError("n must be >= 0")
    rng = _rng(seed)
    return (rng.permutation(n) + 1).astype(np.int64)


def random_runs(n: int, mean_len: int, seed: int) -> np.ndarray:
    """Random permutation with segments of geometric(1/mean_len) length sorted.

    Segment lengths are i.i.d. geometric with support {1, 2, ...} and mean
    ``mean_len`` (the last segment is truncated); each segment is sorted
    ascending in place.  The segment stream is drawn from the same PCG64
    stream as the base permutation, directly after it.
    """
    if mean_len < 1:
        raise ValueError("mean_len must be >= 1")
    rng = _rng(seed)
    a = (rng.permutation(n) + 1).astype(np.int64)
    if n == 0:
        return a
    pos = 0
    while pos < n:
        # draw segment lengths in batches until the array is covered
        batch = rng.geometric(1.0 / mean_len, size=max(16, n // mean_len + 1))
        for L in batch:
            end = min(n, pos + int(L))
            seg = a[pos:end]
            seg.sort()
            pos = end
            if pos >= n:
                break
    return a


def timsort_drag_lengths(n: int) -> list[int]:
    """Adversarial run-length sequence forcing unbalanced stack merges.

    Recursive halving profile: R(m) = R(m/2) ++ R(m/4) ++ [m/4] with
    R(m) = [m] for m <= 3.  Requires the quarters to stay integral, so n
    must be a power of two (or small).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > 3 and (n & (n - 1)) != 0:
        raise ValueError("drag profile needs a power-of-two length")
    out: list[int] = []

    def rec(m: int) -> None:
        if m <= 3:
            out.append(m)
            return
        rec(m // 2)
        rec(m // 4)
        out.append(m // 4)

    rec(n)
    return out


def timsort_drag(n: int, run_scale: int = 32,
                 lengths_path: Union[str, Path, None] = None) -> np.ndarray:
    """Input whose run profile is the drag sequence scaled by run_scale.

    ``lengths_path`` substitutes an externally supplied base profile (one
    decimal run length per line) for the built-in recursion; the scaled
    lengths must still sum to n.
    """
    if run_scale < 1:
        raise ValueError("run_scale must be >= 1")
    if n % run_scale != 0:
        raise ValueError("n must be a multiple of run_scale")
    if lengths_path is not None:
        with open(lengths_path) as fh:
            base = [int(line) for line in fh if line.strip()]
    else:
        base = timsort_drag_lengths(n // run_scale)
    lens = [L * run_scale for L in base]
    if sum(lens) != n:
        raise ValueError(
            f"scaled run lengths sum to {sum(lens)}, expected n={n}")
    return from_run_lengths(lens)


def from_run_lengths(lengths: Iterable[int], seed: int = 0) -> np.ndarray:
    """Permutation of 1..n realizing the given run decomposition.

    Run i is a block of consecutive values, blocks assigned from the top
    down so every boundary strictly descends while runs stay ascending.
    The construction is deterministic; ``seed`` is accepted for interface
    uniformity with the random generators.
    """
    lengths = [int(L) for L in lengths]
    if any(L < 1 for L in lengths):
        raise ValueError("run lengths must be >= 1")
    n = sum(lengths)
    out = np.empty(n, dtype=np.int64)
    pos = 0
    top = n
    for L in lengths:
        out[pos : pos + L] = np.arange(top - L + 1, top + 1)
        pos += L
        top -= L
    return out


def run_profile(a: Sequence[int]) -> RunProfile:
    """Maximal-run decomposition of ``a``, left to right.

    At each segment start the weakly increasing branch is preferred; a
    descent starts a strictly decreasing segment.  The array is not modified
    (decreasing segments contribute their length, reversal is the sorters'
    job).
    """
    a = np.asarray(a)
    n = len(a)
    if n == 0:
        return RunProfile(())
    asc = a[:-1] <= a[1:]
    lengths = []
    i = 0
    while i < n:
        if i == n - 1:
            lengths.append(1)
            break
        j = i
        if asc[i]:
            while j < n - 1 and asc[j]:
                j += 1
        else:
            while j < n - 1 and not asc[j]:
                j += 1
        lengths.append(j - i + 1)
        i = j + 1
    return RunProfile(tuple(lengths))


# ---------------------------------------------------------------------------
# Serialization: length-prefixed little-endian int64 (.bin) or decimal (.txt)


def save_array(path: Union[str, Path], a: Sequence[int]) -> None:
    path = Path(path)
    a = np.asarray(a, dtype=np.int64)
    if path.suffix == ".bin":
        with open(path, "wb") as fh:
            fh.write(struct.pack("<Q", len(a)))
            fh.write(a.astype("<i8").tobytes())
    elif path.suffix == ".txt":
        with open(path, "w") as fh:
            for x in a:
                fh.write(f"{int(x)}\n")
    else:
        raise ValueError(f"unsupported array format: {path.suffix!r}")


def load_array(path: Union[str, Path]) -> np.ndarray:
    path = Path(path)
    if path.suffix == ".bin":
        with open(path, "rb") as fh:
            (count,) = struct.unpack("<Q", fh.read(8))
            data = np.frombuffer(fh.read(8 * count), dtype="<i8", count=count)
        return data.astype(np.int64)
    if path.suffix == ".txt":
        with open(path) as fh:
            return np.array([int(line) for line in fh if line.strip()],
                            dtype=np.int64)
    raise ValueError(f"unsupported array format: {path.suffix!r}")
