"""Self-similar refinement of substitutions with an integer eigenvector.

When the dominant eigenvalue ``lam`` is an integer with integer right
eigenvector ``(p, q)``, tile 0 has length ``p`` and tile 1 length ``q``.
Slicing each tile into unit cells gives the refined letters
``a1..ap, b1..bq`` and a constant-length-``lam`` substitution on them; its
diagonal substitution generates the diagonal of the self-similar product.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import FixedPoint, Substitution, SubstitutionError, apply, is_primitive, require_binary, symbols
from .exact import QuadVal, WeightVector, eigenvalues, pf_weight_vector, rational_left_eigenvector, substitution_matrix
from .product import Pair, PairSubstitution, diagonal_substitution


@dataclass(frozen=True)
class RefinementData:
    lambda_: int
    p: int
    q: int
    refined_alphabet: tuple[str, ...]
    names: tuple[str, ...]
    gamma: dict

    @property
    def starts(self) -> frozenset[str]:
        """Refined letters that begin an original tile."""
        return frozenset((self.refined_alphabet[0], self.refined_alphabet[self.p]))

    def parent(self, letter: str) -> tuple[str, int]:
        """Original letter and 0-based cell offset of a refined letter."""
        k = self.refined_alphabet.index(letter)
        return ("0", k) if k < self.p else ("1", k - self.p)

    def name(self, letter: str) -> str:
        return self.names[self.refined_alphabet.index(letter)]


def refine(s: Substitution) -> RefinementData:
    require_binary(s)
    if not is_primitive(s):
        raise SubstitutionError("refinement needs a primitive substitution")
    lam, lam_o = eigenvalues(substitution_matrix(s))
    if not (lam.is_rational and lam_o.is_rational):
        raise SubstitutionError("eigenvalues are irrational; use the geometry module instead")
    if lam.a.denominator != 1:
        raise SubstitutionError("dominant eigenvalue is not an integer")
    w = pf_weight_vector(s)
    p, q = int(w.w0.a), int(w.w1.a)
    chars = symbols(p + q)
    names = tuple(f"a{k}" for k in range(1, p + 1)) + tuple(f"b{k}" for k in range(1, q + 1))
    return RefinementData(int(lam.a), p, q, tuple(chars), names,
                          {"0": chars[:p], "1": chars[p:]})


def gamma(r: RefinementData, w: str) -> str:
    return "".join(r.gamma[a] for a in w)


def dot_substitution(r: RefinementData, s: Substitution) -> Substitution:
    """Constant-length substitution slicing ``gamma(s(i))`` into pieces of length ``lam``."""
    lam = r.lambda_
    images = []
    for a in "01":
        g = gamma(r, s[a])
        n = len(r.gamma[a])
        if len(g) != lam * n:
            raise SubstitutionError("eigenvector equation fails; refinement is inconsistent")
        images += [g[k * lam:(k + 1) * lam] for k in range(n)]
    return Substitution(r.refined_alphabet, tuple(images), r.names)


def selfsim_diagonal(r: RefinementData, s: Substitution, seed: Pair = ("0", "1")) -> PairSubstitution:
    dot = dot_substitution(r, s)
    start = (r.gamma[seed[0]][0], r.gamma[seed[1]][0])
    return diagonal_substitution(dot, [start])


def is_isomorphic(s1: Substitution, s2: Substitution) -> dict[str, str] | None:
    """A letter bijection carrying images of ``s1`` onto images of ``s2``, if any."""
    if len(s1) != len(s2) or sorted(s1.lengths) != sorted(s2.lengths):
        return None
    img1, img2 = s1.as_dict(), s2.as_dict()

    def extend(phi, inv, x, y):
        phi, inv = dict(phi), dict(inv)
        todo = [(x, y)]
        while todo:
            a, b = todo.pop()
            if a in phi or b in inv:
                if phi.get(a) != b or inv.get(b) != a:
                    return None
                continue
            if len(img1[a]) != len(img2[b]):
                return None
            phi[a], inv[b] = b, a
            todo.extend(zip(img1[a], img2[b]))
        return phi, inv

    def search(phi, inv):
        free = [a for a in s1.alphabet if a not in phi]
        if not free:
            return phi
        a = free[0]
        for b in s2.alphabet:
            if b not in inv:
                got = extend(phi, inv, a, b)
                if got is not None:
                    found = search(*got)
                    if found is not None:
                        return found
        return None

    return search({}, {})


# frequencies -------------------------------------------------------------

def _count_matrix(sub: Substitution) -> np.ndarray:
    index = {a: k for k, a in enumerate(sub.alphabet)}
    m = np.zeros((len(sub), len(sub)), dtype=object)
    for i, img in enumerate(sub.images):
        for c in img:
            m[i, index[c]] += 1
    return m


def _final_classes(sub: Substitution) -> list[frozenset[str]]:
    """Closed strongly connected classes of the letter graph of ``sub``."""
    reach = {a: set(sub[a]) for a in sub.alphabet}
    changed = True
    while changed:
        changed = False
        for a in sub.alphabet:
            extra = set().union(*(reach[b] for b in reach[a])) - reach[a]
            if extra:
                reach[a] |= extra
                changed = True
    classes = []
    for a in sub.alphabet:
        if a in reach[a] and all(a in reach[b] for b in reach[a]):
            cls = frozenset(reach[a])
            if cls not in classes:
                classes.append(cls)
    return classes


def exact_frequencies(sub: Substitution, lam: int) -> dict[str, Fraction] | None:
    """Letter frequencies for a unique closed primitive class with eigenvalue ``lam``."""
    classes = _final_classes(sub)
    if len(classes) != 1:
        return None
    cls = [a for a in sub.alphabet if a in classes[0]]
    restricted = Substitution(tuple(cls), tuple("".join(c for c in sub[a] if c in classes[0])
                                                 for a in cls))
    if not is_primitive(restricted) or any(len(img) != lam for img in restricted.images):
        return None
    vec = rational_left_eigenvector(_count_matrix(restricted).tolist(), lam)
    total = sum(vec)
    freqs = {a: Fraction(0) for a in sub.alphabet}
    freqs.update({a: x / total for a, x in zip(cls, vec)})
    return freqs


@dataclass
class FrequencyReport:
    checkpoints: tuple[int, ...]
    empirical: dict[str, tuple[Fraction, ...]]
    exact: dict[str, Fraction] | None
    tile_counts: dict[str, Fraction]
    tile_cell_share: dict[str, Fraction]
    tile_exact: dict[str, Fraction] | None
    tile_cells: int
    legend: dict[str, str]
    discrepancy: dict[str, tuple[Fraction, Fraction]] = field(default_factory=dict)

    def steps(self) -> list[float]:
        """Max-norm differences between successive checkpoint frequency vectors."""
        rows = np.array([[float(x) for x in col] for col in self.empirical.values()])
        return list(np.abs(np.diff(rows, axis=1)).max(axis=0))


def checkpoint_counts(pair: PairSubstitution, seed_letter: str, base: int, kmax: int):
    """Letter counts of the diagonal prefixes of length ``base * lam^k``, exactly.

    For a constant-length substitution the prefix of length ``lam * n`` is the
    image of the prefix of length ``n``, so counts evolve by the count matrix.
    """
    sub = pair.substitution
    m = _count_matrix(sub)
    word = FixedPoint(sub, seed_letter).prefix(base)
    c = np.array([word.count(a) for a in sub.alphabet], dtype=object)
    out = [c]
    for _ in range(kmax):
        c = c.dot(m)
        out.append(c)
    return out


def tile_runs(r: RefinementData, x: str, y: str) -> tuple[np.ndarray, np.ndarray]:
    """Start indices and lengths of the original-tile crossings along the diagonal."""
    starts = [ord(a) for a in r.starts]
    bx = np.isin(np.frombuffer(x.encode("ascii"), np.uint8), starts)
    by = np.isin(np.frombuffer(y.encode("ascii"), np.uint8), starts)
    heads = np.flatnonzero(bx | by)
    lengths = np.diff(np.append(heads, len(x)))
    return heads, lengths


def tile_frequencies(r: RefinementData, dot: Substitution, seed: Pair, cells: int):
    """Crossing-type frequencies over the first ``cells`` diagonal cells.

    A crossing type is named by its first refined cell pair.  The last run
    may be cut off by the scan bound and is dropped.
    """
    x = FixedPoint(dot, r.gamma[seed[0]][0]).prefix(cells)
    y = FixedPoint(dot, r.gamma[seed[1]][0]).prefix(cells)
    heads, lengths = tile_runs(r, x, y)
    heads, lengths = heads[:-1], lengths[:-1]
    codes = np.frombuffer(x.encode("ascii"), np.uint8)[heads].astype(np.int64) * 256 + \
        np.frombuffer(y.encode("ascii"), np.uint8)[heads]
    kinds, inverse = np.unique(codes, return_inverse=True)
    counts = np.bincount(inverse)
    share = np.bincount(inverse, weights=lengths)
    total_runs, total_cells = int(counts.sum()), int(lengths.sum())
    by_count, by_cells = {}, {}
    for k, code in enumerate(kinds):
        key = f"({dot.name(chr(code // 256))},{dot.name(chr(code % 256))})"
        by_count[key] = Fraction(int(counts[k]), total_runs)
        by_cells[key] = Fraction(int(share[k]), total_cells)
    return by_count, by_cells


def _tile_exact(r: RefinementData, pair: PairSubstitution, exact: dict[str, Fraction]):
    heads = {c: f for c, f in exact.items()
             if f and (pair.pair(c)[0] in r.starts or pair.pair(c)[1] in r.starts)}
    total = sum(heads.values())
    return {pair.substitution.name(c): f / total for c, f in heads.items()}


def diagonal_frequencies(r: RefinementData, s: Substitution, seed: Pair = ("0", "1"),
                         base: int = 1000, kmax: int = 16, tile_cells: int = 10 ** 7,
                         expected_tiles: dict[str, Fraction] | None = None) -> FrequencyReport:
    """Diagonal letter frequencies at checkpoints ``base * lam^k`` plus crossing statistics.

    ``expected_tiles`` may hold externally claimed crossing frequencies;
    any that do not match the exact values are listed in ``discrepancy``.
    """
    pair = selfsim_diagonal(r, s, seed)
    sub = pair.substitution
    start = pair.letter((r.gamma[seed[0]][0], r.gamma[seed[1]][0]))
    counts = checkpoint_counts(pair, start, base, kmax)
    cps = tuple(base * r.lambda_ ** k for k in range(kmax + 1))
    empirical = {sub.name(a): tuple(Fraction(int(c[i]), n) for c, n in zip(counts, cps))
                 for i, a in enumerate(sub.alphabet)}
    exact = exact_frequencies(sub, r.lambda_)
    exact_named = None if exact is None else {sub.name(a): f for a, f in exact.items()}
    dot = dot_substitution(r, s)
    by_count, by_cells = tile_frequencies(r, dot, seed, tile_cells)
    tex = None if exact is None else _tile_exact(r, pair, exact)
    report = FrequencyReport(cps, empirical, exact_named, by_count, by_cells, tex, tile_cells,
                             dict(zip(sub.alphabet, sub.names)))
    if expected_tiles and tex is not None:
        report.discrepancy = {k: (v, tex.get(k, Fraction(0))) for k, v in expected_tiles.items()
                              if tex.get(k, Fraction(0)) != v}
    return report


def commutes(r: RefinementData, s: Substitution, w: str) -> bool:
    """``gamma(s(w)) == dot(gamma(w))``."""
    return gamma(r, apply(s, w)) == apply(dot_substitution(r, s), gamma(r, w))


def weight_vector(r: RefinementData) -> WeightVector:
    return WeightVector(QuadVal(r.p), QuadVal(r.q))
