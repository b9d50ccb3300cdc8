"""Balanced and w-balanced block decompositions of the double fixed point.

The double sequence pairs ``u* = s^inf(0)`` (top) with ``v* = s^inf(1)``
(bottom).  A synchronisation point ``(i, j)`` is a pair of prefix lengths
with equal weighted letter counts; consecutive synchronisation points cut
the double sequence into irreducible blocks.  Decomposing the images of
blocks again yields the induced substitution on blocks.

Two identities of a block are supported: the word pair ``(top, bottom)``
alone, or the word pair together with its left slope (the offset ``i - j``
at which it starts).  Either way a block may be identified with its flip
``(bottom, top, -slope)``.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .core import FixedPoint, Substitution, SubstitutionError, apply, require_binary, symbols
from .exact import (SALEM, QuadVal, WeightVector, classify, eigenvalues, pf_weight_vector,
                    substitution_matrix)

BALANCED, WEIGHTED = "balanced", "weighted"
FINITE, CAP_EXCEEDED, EMPTY = "Finite", "CapExceeded", "Empty"
SEED_LENGTH = 1000


@dataclass(frozen=True, order=True)
class Block:
    """Double word ``top`` over ``bottom`` starting at offset ``left_slope``."""

    top: str
    bottom: str
    left_slope: int = 0

    @property
    def right_slope(self) -> int:
        return len(self.top) - len(self.bottom) + self.left_slope

    def flipped(self) -> "Block":
        return Block(self.bottom, self.top, -self.left_slope)

    def canonical(self) -> "Block":
        return min(self, self.flipped())

    @property
    def is_coincidence(self) -> bool:
        return self.left_slope == 0 and self.top == self.bottom

    def __str__(self):
        return f"({self.top}|{self.bottom},{self.left_slope})"


@dataclass(frozen=True)
class SyncPoint:
    i: int
    j: int
    weight: QuadVal


@dataclass(frozen=True)
class PlacedBlock:
    """A block together with the prefix lengths at which it starts."""

    i: int
    j: int
    block: Block


def _zero_counts(word: str) -> np.ndarray:
    return np.cumsum(np.frombuffer(word.encode("ascii"), dtype=np.uint8) == 48, dtype=np.int64)


def _weighted_keys(word: str, comps) -> tuple[np.ndarray, np.ndarray]:
    c0 = _zero_counts(word)
    c1 = np.arange(1, len(word) + 1, dtype=np.int64) - c0
    (a0, b0), (a1, b1) = comps
    return c0 * a0 + c1 * a1, c0 * b0 + c1 * b1


def sync_indices(top: str, bottom: str, w: WeightVector | None) -> list[tuple[int, int]]:
    """Nontrivial synchronisation points of two binary words, increasing.

    ``w=None`` means balanced mode: full Parikh vectors must agree.
    Equality is exact in every mode.
    """
    if not top or not bottom:
        return []
    if w is None:
        n = min(len(top), len(bottom))
        hits = np.flatnonzero(_zero_counts(top[:n]) == _zero_counts(bottom[:n])) + 1
        return [(int(k), int(k)) for k in hits]
    comps = w.integer_components()
    xt, yt = _weighted_keys(top, comps)
    xb, yb = _weighted_keys(bottom, comps)
    if comps[0][1] == 0 and comps[1][1] == 0:
        _, it, ib = np.intersect1d(xt, xb, assume_unique=True, return_indices=True)
    else:
        lo = min(yt.min(), yb.min())
        span = int(max(yt.max(), yb.max()) - lo) + 1
        bound = max(abs(int(xt.max())), abs(int(xb.max())), abs(int(xt.min())), abs(int(xb.min())))
        if (bound + 1) * span < 2 ** 62:
            kt, kb = xt * span + (yt - lo), xb * span + (yb - lo)
            _, it, ib = np.intersect1d(kt, kb, assume_unique=True, return_indices=True)
        else:
            where = {(int(x), int(y)): k for k, (x, y) in enumerate(zip(xb, yb))}
            found = [(k, where[(int(x), int(y))]) for k, (x, y) in enumerate(zip(xt, yt))
                     if (int(x), int(y)) in where]
            it = np.array([a for a, _ in found], dtype=np.int64)
            ib = np.array([b for _, b in found], dtype=np.int64)
    order = np.argsort(it)
    return [(int(a) + 1, int(b) + 1) for a, b in zip(it[order], ib[order])]


def split_blocks(top: str, bottom: str, w: WeightVector | None, left_slope: int = 0,
                 slope_of=None) -> list[PlacedBlock]:
    """Cut ``top``/``bottom`` into irreducible blocks; unsynchronised tails are dropped.

    ``slope_of(i, j)`` gives the left slope of a block starting at offsets
    ``(i, j)``; by default it is ``left_slope + i - j``.
    """
    out = []
    pi = pj = 0
    for i, j in sync_indices(top, bottom, w):
        s = left_slope + pi - pj if slope_of is None else slope_of(pi, pj)
        out.append(PlacedBlock(pi, pj, Block(top[pi:i], bottom[pj:j], s)))
        pi, pj = i, j
    return out


def _check_fixed_points(s: Substitution) -> None:
    require_binary(s)
    for a in "01":
        if s[a][0] != a or len(s[a]) < 2:
            raise SubstitutionError(f"no growing fixed point starting with {a}")


def double_prefix(s: Substitution, n: int) -> tuple[str, str]:
    _check_fixed_points(s)
    return FixedPoint(s, "0").prefix(n), FixedPoint(s, "1").prefix(n)


def _mode_weights(s: Substitution, w: WeightVector | None, mode: str) -> WeightVector | None:
    if mode == BALANCED:
        return None
    if mode != WEIGHTED:
        raise ValueError(f"unknown mode {mode!r}")
    return pf_weight_vector(s) if w is None else w


def sync_points(s: Substitution, w: WeightVector | None, N: int,
                mode: str = WEIGHTED) -> list[SyncPoint]:
    """Synchronisation points ``(i, j)``, ``i, j <= N``, of the double fixed point."""
    u, v = double_prefix(s, N)
    w = _mode_weights(s, w, mode)
    pts = sync_indices(u, v, w)
    if w is None:
        return [SyncPoint(i, j, QuadVal(i)) for i, j in pts]
    out = []
    c0u = _zero_counts(u)
    for i, j in pts:
        n0 = int(c0u[i - 1])
        out.append(SyncPoint(i, j, w.weight((n0, i - n0))))
    return out


def decompose(s: Substitution, w: WeightVector | None, N: int, mode: str = WEIGHTED) -> list[Block]:
    """Irreducible blocks of the first ``N`` positions of the double fixed point."""
    return [pb.block for pb in decompose_placed(s, w, N, mode)]


def decompose_placed(s: Substitution, w: WeightVector | None, N: int,
                     mode: str = WEIGHTED) -> list[PlacedBlock]:
    u, v = double_prefix(s, N)
    return split_blocks(u, v, _mode_weights(s, w, mode))


@dataclass(frozen=True)
class Caps:
    max_alphabet: int = 64
    max_block_len: int = 10_000


@dataclass
class InducedSub:
    """Induced substitution on (identified) irreducible blocks."""

    alphabet: tuple[Block, ...]
    images: dict[Block, tuple[Block, ...]]
    seed: Block
    track_slopes: bool
    identified: bool
    weights: WeightVector | None
    squared: bool = False
    occurrence_slopes: dict[Block, tuple[int, ...]] = field(default_factory=dict)

    def __len__(self):
        return len(self.alphabet)

    def key(self, block: Block) -> Block:
        return _letter_key(block, self.track_slopes, self.identified)

    def to_substitution(self) -> Substitution:
        """Encode onto single characters; ``names`` holds the block legend."""
        chars = symbols(len(self.alphabet))
        code = dict(zip(self.alphabet, chars))
        images = tuple("".join(code[b] for b in self.images[a]) for a in self.alphabet)
        return Substitution(tuple(chars), images, tuple(str(b) for b in self.alphabet))

    def legend(self) -> dict[str, str]:
        return dict(zip(symbols(len(self.alphabet)), (str(b) for b in self.alphabet)))

    def matrix(self) -> list[list[int]]:
        index = {b: k for k, b in enumerate(self.alphabet)}
        rows = []
        for b in self.alphabet:
            row = [0] * len(self.alphabet)
            for c in self.images[b]:
                row[index[c]] += 1
            rows.append(row)
        return rows


@dataclass
class BalanceOutcome:
    status: str
    induced: InducedSub | None = None
    reason: str = ""
    offending: Block | None = None
    observed_max_block_length: int = 0
    slope_growth_detected: bool = False
    squared: bool = False
    scan_bound: int = SEED_LENGTH

    @property
    def is_finite(self) -> bool:
        return self.status == FINITE


def _letter_key(block: Block, track_slopes: bool, identify: bool) -> Block:
    if not track_slopes:
        block = Block(block.top, block.bottom, 0)
    return block.canonical() if identify else block


def _slope_factor(s: Substitution):
    """Integer factor by which left slopes change under the substitution, if rational."""
    try:
        _, lam_o = eigenvalues(substitution_matrix(s))
    except ValueError:
        return None
    return int(lam_o.a) if lam_o.is_rational and lam_o.a.denominator == 1 else None


def _is_minus_one_salem(s: Substitution) -> bool:
    spec = classify(s)
    return spec.kind == SALEM and spec.lambda_o == -1


def block_image(s: Substitution, block: Block, w: WeightVector | None, factor) -> list[Block]:
    """Irreducible blocks of ``(s(top), s(bottom))``; slopes follow ``factor * left_slope``."""
    top, bottom = apply(s, block.top), apply(s, block.bottom)
    if block.left_slope and factor is None:
        raise ValueError("slopes are not tracked for irrational second eigenvalue")
    start = (factor or 0) * block.left_slope if block.left_slope else 0
    parts = split_blocks(top, bottom, w, start)
    if not parts or parts[-1].i + len(parts[-1].block.top) != len(top) \
            or parts[-1].j + len(parts[-1].block.bottom) != len(bottom):
        raise ValueError(f"image of {block} is not balanced; weights are not a PF eigenvector")
    return [pb.block for pb in parts]


def induced_substitution(s: Substitution, w: WeightVector | None = None, caps: Caps = Caps(),
                         mode: str = WEIGHTED, track_slopes: bool = True, identify: bool = True,
                         seed_length: int = SEED_LENGTH) -> BalanceOutcome:
    """Close the blocks of a prefix of the double fixed point under block images.

    Seeds come from the decomposition of the first ``seed_length``
    positions.  If the second eigenvalue is -1 the whole computation runs on
    the square of ``s``.
    """
    _check_fixed_points(s)
    squared = _is_minus_one_salem(s)
    work_s = s.power(2) if squared else s
    weights = _mode_weights(s, w, mode)
    factor = _slope_factor(work_s)
    u, v = FixedPoint(s, "0").prefix(seed_length), FixedPoint(s, "1").prefix(seed_length)
    placed = split_blocks(u, v, weights)
    if not placed:
        return BalanceOutcome(EMPTY, reason=f"no synchronisation point among the first "
                                            f"{seed_length} positions",
                              squared=squared, scan_bound=seed_length)

    def key(b):
        return _letter_key(b, track_slopes, identify)

    occurrences: dict[Block, set[int]] = {}
    for pb in placed:
        k = key(pb.block)
        oriented = pb.block if not identify or k.top == pb.block.top and \
            k.bottom == pb.block.bottom else pb.block.flipped()
        occurrences.setdefault(k, set()).add(oriented.left_slope)
    seeds = list(dict.fromkeys(key(pb.block) for pb in placed))
    seed_max_slope = max(abs(b.left_slope) for b in seeds)
    images: dict[Block, tuple[Block, ...]] = {}
    queue = deque(seeds)
    known = set(seeds)
    longest = max(max(len(b.top), len(b.bottom)) for b in seeds)

    def outcome(status, **kw):
        max_slope = max((abs(b.left_slope) for b in known), default=0)
        growth = factor is not None and abs(factor) > 1 and \
            max_slope >= abs(factor) * max(1, seed_max_slope)
        return BalanceOutcome(status, observed_max_block_length=longest,
                              slope_growth_detected=growth, squared=squared,
                              scan_bound=seed_length, **kw)

    if len(known) > caps.max_alphabet:
        return outcome(CAP_EXCEEDED, reason=f"alphabet exceeds {caps.max_alphabet} letters",
                       offending=seeds[caps.max_alphabet])
    while queue:
        b = queue.popleft()
        if max(len(b.top), len(b.bottom)) > caps.max_block_len:
            return outcome(CAP_EXCEEDED, reason=f"block length exceeds {caps.max_block_len}",
                           offending=b)
        img = tuple(key(c) for c in block_image(work_s, b, weights, factor))
        images[b] = img
        for c in img:
            if c not in known:
                known.add(c)
                longest = max(longest, len(c.top), len(c.bottom))
                if len(known) > caps.max_alphabet:
                    return outcome(CAP_EXCEEDED,
                                   reason=f"alphabet exceeds {caps.max_alphabet} letters",
                                   offending=c)
                queue.append(c)
    alphabet = tuple(sorted(images, key=lambda b: (len(b.top) + len(b.bottom), b)))
    induced = InducedSub(alphabet, images, key(placed[0].block), track_slopes, identify,
                         weights, squared,
                         {k: tuple(sorted(v)) for k, v in occurrences.items()})
    return outcome(FINITE, induced=induced)


@dataclass(frozen=True)
class SlopeCheck:
    block: Block
    top_growth: int
    bottom_growth: int

    @property
    def ok(self) -> bool:
        return self.top_growth == self.bottom_growth


@dataclass
class SlopeLawReport:
    checks: list[SlopeCheck]
    squared: bool

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def violations(self) -> list[SlopeCheck]:
        return [c for c in self.checks if not c.ok]


def verify_slope_law(s: Substitution, blocks) -> SlopeLawReport:
    """Check ``|s(A)| - |A| == |s(B)| - |B|`` on w-balanced blocks of a Salem substitution."""
    spec = classify(s)
    if spec.kind != SALEM:
        raise ValueError(f"slope law needs a Salem substitution, got {spec.kind}")
    squared = spec.lambda_o == -1
    t = s.power(2) if squared else s
    checks = [SlopeCheck(b, len(apply(t, b.top)) - len(b.top),
                         len(apply(t, b.bottom)) - len(b.bottom)) for b in blocks]
    return SlopeLawReport(checks, squared)


def is_w_balanced(block: Block, w: WeightVector | None) -> bool:
    if w is None:
        return all(block.top.count(a) == block.bottom.count(a) for a in "01")
    weight = lambda word: w.weight((word.count("0"), word.count("1")))  # noqa: E731
    return weight(block.top) == weight(block.bottom)
