"""Locality-sensitive matching of block vectors.

Complex sub-vectors are flattened to interleaved real vectors so the
Euclidean dot product equals the real part of the complex inner product.
Hash bits come from batches of two Gaussian hyperplanes orthonormalized
within each batch; a vector's code concatenates the sign bits of its
projections. Buckets that stay too crowded are refined with additional
batches, so matching only ever compares vectors whose codes agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

LSH_BATCH = 2          # hyperplanes per orthonormalized batch
REFINE_CAP = 32        # maximum refinement rounds for one bucket
DUPLICATE_TOL = 1e-12
_COLLINEAR = 1 - 1e-9


def realify(v: np.ndarray) -> np.ndarray:
    """Interleave real and imaginary parts: (re0, im0, re1, im1, ...)."""
    v = np.asarray(v, dtype=complex).ravel()
    out = np.empty(2 * v.size, dtype=float)
    out[0::2] = v.real
    out[1::2] = v.imag
    return out


def realify_rows(mat: np.ndarray) -> np.ndarray:
    """realify applied to every row at once."""
    mat = np.asarray(mat, dtype=complex)
    out = np.empty((mat.shape[0], 2 * mat.shape[1]), dtype=float)
    out[:, 0::2] = mat.real
    out[:, 1::2] = mat.imag
    return out


class HashFamily:
    """Seeded batches of orthonormal Gaussian hyperplanes in R**dimension."""

    def __init__(self, dimension: int, batch_count: int, seed: int):
        if dimension < LSH_BATCH:
            raise ValueError(f"dimension {dimension} below batch size {LSH_BATCH}")
        if batch_count < 1:
            raise ValueError("need at least one batch")
        self.dimension = dimension
        self.seed = seed
        self._rng = np.random.default_rng(seed)
        self.batches: list[np.ndarray] = []
        self.ensure(batch_count)

    def ensure(self, batch_count: int) -> None:
        """Extend to at least ``batch_count`` batches, deterministically."""
        while len(self.batches) < batch_count:
            first = self._rng.standard_normal(self.dimension)
            first /= np.linalg.norm(first)
            while True:
                second = self._rng.standard_normal(self.dimension)
                second /= np.linalg.norm(second)
                if abs(np.dot(first, second)) > _COLLINEAR:
                    continue
                second = second - np.dot(first, second) * first
                second /= np.linalg.norm(second)
                break
            self.batches.append(np.stack([first, second]))

    def planes(self, batch_count: int) -> np.ndarray:
        """The first ``batch_count`` batches stacked to a matrix."""
        self.ensure(batch_count)
        return np.concatenate(self.batches[:batch_count])


def build_family(dimension: int, batch_count: int, seed: int) -> HashFamily:
    return HashFamily(dimension, batch_count, seed)


def hash_code(family: HashFamily, v: np.ndarray) -> str:
    """Sign bits of v against every hyperplane; bit i is 1 iff dot >= 0."""
    proj = family.planes(len(family.batches)) @ np.asarray(v, dtype=float)
    return "".join("1" if p >= 0 else "0" for p in proj)


@dataclass(slots=True)
class Bucket:
    code: str
    members: list[int]
    children: list["Bucket"] | None = None


def _partition(mat: np.ndarray, seed: int) -> list[tuple[str, np.ndarray]]:
    """Leaf buckets of row indices, each at most ceil(sqrt(N)) rows.

    Starts from max(1, round(log2(N) / 2)) batches and appends one fresh
    batch pair to an overcrowded bucket's code until it splits, up to
    REFINE_CAP rounds. Buckets whose members are pairwise identical stay
    together. Returns (code, rows) leaves sorted by code.
    """
    total = mat.shape[0]
    if total == 0:
        return []
    if total == 1:
        return [("", np.zeros(1, dtype=np.int64))]
    cap = math.ceil(math.sqrt(total))
    init_batches = max(1, round(math.log2(total) / 2))
    family = HashFamily(mat.shape[1], init_batches, seed)
    bits = (mat @ family.planes(init_batches).T) >= 0
    width = bits.shape[1]
    codes = bits @ (1 << np.arange(width - 1, -1, -1, dtype=np.int64))
    order = np.argsort(codes, kind="stable")
    ordered_codes = codes[order]
    cuts = np.flatnonzero(np.diff(ordered_codes)) + 1
    starts = np.concatenate(([0], cuts))
    ends = np.concatenate((cuts, [total]))
    leaves: list[tuple[str, np.ndarray]] = []
    pending: list[tuple[str, np.ndarray, int]] = []
    for s, e in zip(starts, ends):
        pending.append((format(int(ordered_codes[s]), f"0{width}b"),
                        order[s:e], 0))
    while pending:
        code, rows, depth = pending.pop()
        if len(rows) <= cap or depth >= REFINE_CAP or _all_identical(mat, rows):
            leaves.append((code, rows))
            continue
        batch = init_batches + depth
        planes = family.planes(batch + 1)[LSH_BATCH * batch:]
        extra = (mat[rows] @ planes.T) >= 0
        sub = extra[:, 0] * 2 + extra[:, 1]
        for val in range(4):
            picked = rows[sub == val]
            if picked.size:
                pending.append((code + format(val, "02b"), picked, depth + 1))
    leaves.sort(key=lambda leaf: leaf[0])
    return leaves


def hierarchical_bucketize(vectors: dict[int, np.ndarray], seed: int) -> list[Bucket]:
    """Group vector ids into leaf buckets; see _partition for the policy."""
    ids = np.asarray(sorted(vectors))
    if ids.size == 0:
        return []
    mat = np.stack([np.asarray(vectors[int(i)], dtype=float) for i in ids])
    return [Bucket(code, [int(i) for i in ids[rows]])
            for code, rows in _partition(mat, seed)]


def _all_identical(mat: np.ndarray, rows: list[int]) -> bool:
    block = mat[rows]
    return bool(np.all(np.abs(block - block[0]) <= DUPLICATE_TOL))


def lsh_match_arrays(rmat: np.ndarray, rids: np.ndarray,
                     cmat: np.ndarray, cids: np.ndarray,
                     seed: int) -> tuple[dict[int, int], int]:
    """Bucket the union, then match within buckets.

    Rows of rmat/cmat carry the vectors for ids rids/cids; cids must be
    ascending so argmax ties resolve to the smallest candidate id.
    Returns (mapping, comparisons); replaced ids whose bucket holds no
    candidate are absent from the mapping.
    """
    if rmat.shape[1] != cmat.shape[1]:
        raise ValueError("vectors differ in dimension")
    if rids.size == 0 or cids.size == 0:
        return {}, 0
    split = rmat.shape[0]
    matched_r: list[np.ndarray] = []
    matched_c: list[np.ndarray] = []
    comparisons = 0
    for _, rows in _partition(np.vstack((rmat, cmat)), seed):
        rrows = rows[rows < split]
        crows = rows[rows >= split] - split
        if rrows.size == 0 or crows.size == 0:
            continue
        picks = np.argmax(rmat[rrows] @ cmat[crows].T, axis=1)
        matched_r.append(rids[rrows])
        matched_c.append(cids[crows[picks]])
        comparisons += rrows.size * crows.size
    if not matched_r:
        return {}, comparisons
    pairs = zip(np.concatenate(matched_r).tolist(),
                np.concatenate(matched_c).tolist())
    return dict(pairs), comparisons


def lsh_match_detail(replaced: dict[int, np.ndarray],
                     candidates: dict[int, np.ndarray],
                     seed: int) -> tuple[dict[int, int], int]:
    """lsh_match_arrays over id-keyed dicts; ties go to the smallest
    candidate id."""
    overlap = set(replaced) & set(candidates)
    if overlap:
        raise ValueError(f"ids on both sides: {sorted(overlap)[:3]}")
    if not replaced or not candidates:
        return {}, 0
    dims = {np.asarray(v).size for v in (*replaced.values(), *candidates.values())}
    if len(dims) != 1:
        raise ValueError("vectors differ in dimension")
    rids = sorted(replaced)
    cids = sorted(candidates)
    rmat = np.stack([np.asarray(replaced[i], dtype=float) for i in rids])
    cmat = np.stack([np.asarray(candidates[i], dtype=float) for i in cids])
    return lsh_match_arrays(rmat, np.asarray(rids), cmat, np.asarray(cids), seed)


def lsh_match(replaced: dict[int, np.ndarray],
              candidates: dict[int, np.ndarray],
              seed: int) -> dict[int, int]:
    """Partial map replaced id -> best same-bucket candidate id."""
    return lsh_match_detail(replaced, candidates, seed)[0]
