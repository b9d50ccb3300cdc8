"""Coincidence densities of the double fixed point and related verdicts."""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import balance as bal
from .balance import Block, Caps
from .core import FixedPoint, Substitution, detect_periodicity, is_primitive, require_binary
from .exact import EXPANDING, SALEM, Matrix2, QuadVal, classify, letter_frequencies

EXISTS, DOES_NOT_EXIST, PERIODIC, INCONCLUSIVE = "Exists", "DoesNotExist", "Periodic", "Inconclusive"
EXPANDING_CONJECTURE = ("conjecture: the coincidence density is expected not to exist when both "
                        "eigenvalues exceed 1 in modulus")
ZERO_BLOCK = Block("0", "0", 0)


class PreconditionError(ValueError):
    """An operation's hypotheses do not hold for the given input."""


def _as_bytes(word: str) -> np.ndarray:
    return np.frombuffer(word.encode("ascii"), dtype=np.uint8)


def _double(s: Substitution, n: int, seed=("0", "1")) -> tuple[str, str]:
    return FixedPoint(s, seed[0]).prefix(n), FixedPoint(s, seed[1]).prefix(n)


def coincidence_count(u: str, v: str) -> int:
    n = min(len(u), len(v))
    return int(np.count_nonzero(_as_bytes(u[:n]) == _as_bytes(v[:n])))


def coincidence_prefix_density(s: Substitution, n: int, seed=("0", "1")) -> Fraction:
    """Exact fraction of the first ``n`` diagonal cells whose two letters agree."""
    if n < 1:
        raise ValueError("n must be positive")
    u, v = _double(s, n, seed)
    return Fraction(coincidence_count(u, v), n)


# subsequence rules ---------------------------------------------------------

@dataclass(frozen=True)
class PlainCheckpoints:
    start: int = 1000
    count: int = 11

    @property
    def tag(self) -> str:
        return f"plain:{self.start}*2^m"


@dataclass(frozen=True)
class AnchoredWindows:
    """Windows ``[n_k, n_k + t_k)`` grown from the first occurrence of ``anchor``."""

    anchor: Block
    max_length: int = 1 << 22

    @property
    def tag(self) -> str:
        return f"anchored:{self.anchor}"


@dataclass(frozen=True)
class FixedPositions:
    """Prefix statistics at fixed positions.

    With ``letter`` set the statistic is that letter's frequency in the fixed
    point from ``seed``; otherwise it is the coincidence density.
    """

    positions: tuple[int, ...]
    letter: str | None = None
    seed: str = "0"
    label: str = "positions"

    @property
    def tag(self) -> str:
        what = f"letter {self.letter}" if self.letter else "coincidence"
        return f"{self.label}:{what}"


def powers(base: int, kmax: int, factor: int = 1, kmin: int = 1) -> tuple[int, ...]:
    return tuple(factor * base ** k for k in range(kmin, kmax + 1))


@dataclass(frozen=True)
class DensitySeries:
    checkpoints: tuple[int, ...]
    ratios: tuple[Fraction, ...]
    subsequence_tag: str
    window_starts: tuple[int, ...] | None = None

    def __post_init__(self):
        if len(self.checkpoints) != len(self.ratios):
            raise ValueError("one ratio per checkpoint")
        if any(b <= a for a, b in zip(self.checkpoints, self.checkpoints[1:])):
            raise ValueError("checkpoints must increase strictly")

    @property
    def final(self) -> Fraction:
        return self.ratios[-1]

    def __len__(self):
        return len(self.ratios)


def _plain_series(s, rule: PlainCheckpoints, seed) -> DensitySeries:
    cps = tuple(rule.start * 2 ** m for m in range(rule.count))
    u, v = _double(s, cps[-1], seed)
    hits = np.cumsum(_as_bytes(u) == _as_bytes(v))
    return DensitySeries(cps, tuple(Fraction(int(hits[n - 1]), n) for n in cps), rule.tag)


def _positions_series(s, rule: FixedPositions, seed) -> DensitySeries:
    cps = tuple(rule.positions)
    if rule.letter is None:
        u, v = _double(s, cps[-1], seed)
        hits = np.cumsum(_as_bytes(u) == _as_bytes(v))
    else:
        x = FixedPoint(s, rule.seed).prefix(cps[-1])
        hits = np.cumsum(_as_bytes(x) == ord(rule.letter))
    return DensitySeries(cps, tuple(Fraction(int(hits[n - 1]), n) for n in cps), rule.tag)


def _find_anchor(s: Substitution, anchor: Block, scan: int) -> bal.PlacedBlock:
    target = anchor.canonical()
    for pb in bal.decompose_placed(s, None, scan):
        if pb.block.canonical() == target:
            return pb
    raise PreconditionError(f"anchor {anchor} not found among the first {scan} positions")


def _lengths_after(s: Substitution, word: str, k: int) -> int:
    """``|s^k(word)|`` via the count matrix."""
    counts = [word.count(a) for a in "01"]
    m = Matrix2((tuple(s["0"].count(a) for a in "01"), tuple(s["1"].count(a) for a in "01")))
    for _ in range(k):
        counts = [counts[0] * m.rows[0][0] + counts[1] * m.rows[1][0],
                  counts[0] * m.rows[0][1] + counts[1] * m.rows[1][1]]
    return counts[0] + counts[1]


def _anchored_series(s, rule: AnchoredWindows, scan: int = bal.SEED_LENGTH) -> DensitySeries:
    pb = _find_anchor(s, rule.anchor, scan)
    starts, lengths = [], []
    k = 0
    while True:
        n_k = _lengths_after(s, FixedPoint(s, "0").prefix(pb.i), k)
        t_k = _lengths_after(s, pb.block.top, k)
        if n_k + t_k > rule.max_length:
            break
        starts.append(n_k)
        lengths.append(t_k)
        k += 1
    if not starts:
        raise PreconditionError("anchor window exceeds max_length")
    end = starts[-1] + lengths[-1]
    u, v = _double(s, end)
    hits = np.concatenate([[0], np.cumsum(_as_bytes(u) == _as_bytes(v))])
    ratios = tuple(Fraction(int(hits[a + t] - hits[a]), t) for a, t in zip(starts, lengths))
    return DensitySeries(tuple(a + t for a, t in zip(starts, lengths)), ratios, rule.tag,
                         tuple(starts))


def density_series(s: Substitution, rule, seed=("0", "1")) -> DensitySeries:
    """Exact densities along the positions selected by ``rule``."""
    if isinstance(rule, PlainCheckpoints):
        return _plain_series(s, rule, seed)
    if isinstance(rule, FixedPositions):
        return _positions_series(s, rule, seed)
    if isinstance(rule, AnchoredWindows):
        outcome = bal.induced_substitution(s, track_slopes=False)
        if not outcome.is_finite:
            raise PreconditionError("anchored windows need a finite induced substitution")
        return _anchored_series(s, rule)
    raise TypeError(f"unknown rule {rule!r}")


# verdicts ----------------------------------------------------------------

@dataclass
class Verdict:
    kind: str
    value: Fraction | QuadVal | None = None
    witnesses: tuple = ()
    evidence: dict = field(default_factory=dict)
    note: str = ""

    def __str__(self):
        return f"{self.kind}({self.value})" if self.kind == EXISTS else self.kind


def generic_overlap(s: Substitution) -> QuadVal:
    """Sum of squared letter frequencies."""
    if not is_primitive(s):
        raise PreconditionError("generic overlap needs a primitive substitution")
    return sum((f * f for f in letter_frequencies(s)), QuadVal(0))


def _has_fixed_points(s: Substitution) -> bool:
    return all(s[a][0] == a and len(s[a]) > 1 for a in "01")


def _zero_slopes(s: Substitution, caps: Caps):
    """Slopes at which the block (0|0) occurs, and how they were established."""
    tracked = bal.induced_substitution(s, caps=caps)
    if tracked.is_finite:
        slopes = {b.left_slope for b in tracked.induced.alphabet
                  if b.top == "0" and b.bottom == "0"}
        return slopes, "slope-tracked closure", tracked
    pairs = bal.induced_substitution(s, caps=caps, track_slopes=False)
    if pairs.is_finite:
        slopes = set(pairs.induced.occurrence_slopes.get(ZERO_BLOCK, ()))
        slopes |= {-x for x in slopes}
        return slopes, "word-pair closure with observed slopes", pairs
    return None, pairs.reason, pairs


def theorem_main_check(s: Substitution, caps: Caps = Caps(), witnesses: bool = True) -> Verdict:
    """Certificate that the coincidence density does not exist, or a reason why not."""
    require_binary(s)
    evidence: dict = {}
    for seed in "01":
        if s[seed][0] == seed and len(s[seed]) > 1:
            per = detect_periodicity(s, seed)
            if per is not None and per.certified:
                return Verdict(PERIODIC, evidence={"period": per.period, "seed": seed,
                                                   "word": per.word})
    if not is_primitive(s):
        return Verdict(INCONCLUSIVE, note="not primitive")
    if not _has_fixed_points(s):
        return Verdict(INCONCLUSIVE, note="no fixed points starting with 0 and 1")
    spec = classify(s)
    evidence["classification"] = spec.kind
    n = 100_000
    evidence["empirical_density"] = coincidence_prefix_density(s, n)
    evidence["empirical_n"] = n
    note = EXPANDING_CONJECTURE if spec.kind == EXPANDING else ""
    if spec.kind != SALEM:
        return Verdict(INCONCLUSIVE, evidence=evidence, note=note or f"{spec.kind} type")
    slopes, how, outcome = _zero_slopes(s, caps)
    evidence["closure"] = how
    if outcome.squared:
        evidence["squared"] = True
    if slopes is None:
        return Verdict(INCONCLUSIVE, evidence=evidence, note=f"closure failed: {how}")
    evidence["zero_block_slopes"] = tuple(sorted(slopes))
    skew = sorted((x for x in slopes if x), key=lambda x: (abs(x), x))
    if 0 not in slopes or not skew:
        return Verdict(INCONCLUSIVE, evidence=evidence,
                       note="(0|0) does not occur both straight and skewed")
    wits = ()
    if witnesses:
        wits = tuple(density_series(s, AnchoredWindows(Block("0", "0", x))) for x in (0, skew[0]))
    return Verdict(DOES_NOT_EXIST, witnesses=wits, evidence=evidence,
                   note="finite block set contains (0|0) with slope 0 and with slope "
                        f"{skew[0]}")


# induced windows ---------------------------------------------------------

def _window_coincidences(blocks, center) -> int:
    b = blocks[center]
    bottom = "".join(x.bottom for x in blocks)
    offset = sum(len(x.bottom) for x in blocks[:center]) + b.left_slope
    if offset < 0 or offset + len(b.top) > len(bottom):
        raise RuntimeError("window context too small")
    return sum(a == bottom[offset + t] for t, a in enumerate(b.top))


@dataclass
class WindowSystem:
    """Sliding windows of blocks with enough context to count coincidences."""

    radius: int
    letters: list
    images: list
    lengths: np.ndarray
    coincidences: np.ndarray
    truncated: np.ndarray


def _window_system(s: Substitution, caps: Caps, max_windows: int) -> WindowSystem:
    outcome = bal.induced_substitution(s, caps=caps, identify=False)
    if not outcome.is_finite:
        raise PreconditionError(f"induced substitution not finite: {outcome.reason}")
    ind = outcome.induced
    work = s.power(2) if outcome.squared else s
    factor = bal._slope_factor(work)
    radius = max(max(b.right_slope, -b.left_slope, 0) for b in ind.alphabet)
    radius = max(radius, 1)
    seq = [pb.block for pb in bal.split_blocks(*bal.double_prefix(s, bal.SEED_LENGTH),
                                                ind.weights)]
    index: dict = {}
    letters, todo = [], []

    def intern(blocks, center):
        lo, hi = max(0, center - radius), center + radius + 1
        key = (tuple(blocks[lo:hi]), center - lo)
        if key not in index:
            if len(index) >= max_windows:
                raise PreconditionError(f"more than {max_windows} windows")
            index[key] = len(letters)
            letters.append(key)
            todo.append(key)
        return index[key]

    for c in range(len(seq) - radius):
        intern(seq, c)
    images: dict = {}
    while todo:
        key = todo.pop()
        blocks, center = key
        parts = [bal.block_image(work, b, ind.weights, factor) for b in blocks]
        flat = [x for p in parts for x in p]
        first = sum(len(p) for p in parts[:center])
        images[key] = [intern(flat, first + t) for t in range(len(parts[center]))]
    lengths = np.array([len(b[c].top) for b, c in letters], dtype=float)
    coinc = np.array([_window_coincidences(b, c) for b, c in letters], dtype=float)
    trunc = np.array([c < radius for b, c in letters])
    return WindowSystem(radius, letters, [images[k] for k in letters], lengths, coinc, trunc)


def _iterate_ratios(ws: WindowSystem, tol: float, max_steps: int):
    rows = np.repeat(np.arange(len(ws.letters)), [len(img) for img in ws.images])
    cols = np.fromiter(itertools.chain.from_iterable(ws.images), dtype=np.int64)
    L, C = ws.lengths.copy(), ws.coincidences.copy()
    prev = C / L
    trace = [prev]
    for step in range(1, max_steps + 1):
        L = np.bincount(rows, weights=L[cols], minlength=len(L))
        C = np.bincount(rows, weights=C[cols], minlength=len(C))
        scale = L.max()
        L, C = L / scale, C / scale
        cur = C / L
        trace.append(cur)
        if np.max(np.abs(cur - prev)) < tol:
            return trace, step
        prev = cur
    return trace, None


def _snap(x: float, cap: int = 10 ** 6) -> Fraction:
    return Fraction(x).limit_denominator(cap)


def coincidence_density_via_induced(s: Substitution, caps: Caps = Caps(), tol: float = 1e-12,
                                    max_steps: int = 4000, max_windows: int = 4096) -> Verdict:
    """Coincidence density from the growth of windows under the induced substitution.

    Every window letter gets the ratio coincidences/length of its ``k``-th
    image.  A common rational limit of all recurrent letters gives Exists;
    two distinct limits give DoesNotExist.
    """
    require_binary(s)
    if not _has_fixed_points(s):
        raise PreconditionError("no fixed points starting with 0 and 1")
    ws = _window_system(s, caps, max_windows)
    trace, steps = _iterate_ratios(ws, tol, max_steps)
    evidence = {"windows": len(ws.letters), "radius": ws.radius, "steps": steps or max_steps}
    if steps is None:
        return Verdict(INCONCLUSIVE, evidence=evidence, note="ratios did not settle")
    final = trace[-1]
    more = _iterate_ratios_from(ws, trace_len=len(trace) + 1)
    limits = {}
    for k, letter in enumerate(ws.letters):
        if ws.truncated[k]:
            continue
        v = _snap(final[k])
        if any(abs(float(v) - extra[k]) > 1e-9 for extra in more):
            return Verdict(INCONCLUSIVE, evidence=evidence, note="no rational limit identified")
        limits.setdefault(v, k)
    evidence["limits"] = tuple(sorted(limits))
    if len(limits) == 1:
        return Verdict(EXISTS, next(iter(limits)), evidence=evidence)
    lo, hi = min(limits), max(limits)
    evidence["witness_windows"] = tuple(_describe(ws.letters[limits[v]]) for v in (lo, hi))
    return Verdict(DOES_NOT_EXIST, evidence=evidence, note="window letters with distinct limits")


def _iterate_ratios_from(ws: WindowSystem, trace_len: int):
    """Ratios at the two steps after ``trace_len - 1`` (residual check)."""
    trace, _ = _iterate_ratios(ws, -1.0, trace_len + 1)
    return trace[-2:]


def _describe(key) -> str:
    blocks, center = key
    return " ".join(("*" if k == center else "") + str(b) for k, b in enumerate(blocks))


# survey ------------------------------------------------------------------

def _arrangements(first: str, counts: dict) -> list[str]:
    rest = []
    for a in "01":
        rest += [a] * (counts[a] - (a == first))
    return [first + "".join(p) for p in sorted(set(itertools.permutations(rest)))]


def enumerate_substitutions(matrix) -> list[Substitution]:
    """All binary substitutions with the given count rows and ``s(a)`` starting with ``a``."""
    rows = matrix.rows if isinstance(matrix, Matrix2) else tuple(map(tuple, matrix))
    if rows[0][0] < 1 or rows[1][1] < 1:
        raise PreconditionError("row a must contain letter a at least once")
    if sum(rows[0]) < 2 or sum(rows[1]) < 2:
        raise PreconditionError("images must have length at least 2")
    zeros = _arrangements("0", dict(zip("01", rows[0])))
    ones = _arrangements("1", dict(zip("01", rows[1])))
    return [Substitution(("0", "1"), (a, b)) for a in zeros for b in ones]


@dataclass
class SurveyRow:
    spec: str
    classification: str
    verdict: Verdict
    empirical: Fraction
    empirical_n: int


def analyze(s: Substitution, n: int = 1_000_000) -> SurveyRow:
    """Periodicity, Theorem main, the induced-window method, then Inconclusive."""
    verdict = theorem_main_check(s)
    if verdict.kind not in (DOES_NOT_EXIST, PERIODIC):
        try:
            via = coincidence_density_via_induced(s)
        except PreconditionError as exc:
            via = Verdict(INCONCLUSIVE, note=str(exc))
        if via.kind == EXISTS:
            via.evidence.update(verdict.evidence)
            verdict = via
        else:
            verdict.note = "; ".join(x for x in (verdict.note, via.note) if x)
    spec = classify(s).kind if is_primitive(s) else "Degenerate"
    return SurveyRow(str(s), spec, verdict, coincidence_prefix_density(s, n), n)


def survey(matrix, jobs: int = 1, n: int = 1_000_000) -> list[SurveyRow]:
    subs = enumerate_substitutions(matrix)
    if jobs <= 1:
        return [analyze(s, n) for s in subs]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(analyze, subs, itertools.repeat(n)))


def tally(rows) -> dict[str, int]:
    out: dict[str, int] = {}
    for r in rows:
        out[r.verdict.kind] = out.get(r.verdict.kind, 0) + 1
    return out


__all__ = [
    "EXISTS", "DOES_NOT_EXIST", "PERIODIC", "INCONCLUSIVE", "PreconditionError",
    "coincidence_prefix_density", "density_series", "PlainCheckpoints", "AnchoredWindows",
    "FixedPositions", "DensitySeries", "Verdict", "theorem_main_check", "generic_overlap",
    "coincidence_density_via_induced", "enumerate_substitutions", "survey", "analyze",
    "SurveyRow", "tally", "powers",
]
