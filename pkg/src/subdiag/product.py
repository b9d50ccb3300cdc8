"""Direct product substitutions, their 2D patches and diagonals."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .core import FixedPoint, Substitution, SubstitutionError, apply, symbols

Pair = tuple[str, str]


@dataclass(frozen=True)
class PatchGrid:
    """Cells ``cells[row][col]`` of a product patch, row 0 at the bottom."""

    width: int
    height: int
    cells: tuple[tuple[Pair, ...], ...]

    def __getitem__(self, colrow: tuple[int, int]) -> Pair:
        col, row = colrow
        return self.cells[row][col]

    def main_diagonal(self) -> list[Pair]:
        return [self.cells[k][k] for k in range(min(self.width, self.height))]


def product_patch(s: Substitution, seed: Pair, k: int) -> PatchGrid:
    """The ``k``-th iterate of the product substitution applied to ``seed``."""
    top, side = seed
    for _ in range(k):
        top, side = apply(s, top), apply(s, side)
    cells = tuple(tuple((x, y) for x in top) for y in side)
    return PatchGrid(len(top), len(side), cells)


def diagonal_words(s: Substitution, seed: Pair, n: int) -> tuple[str, str]:
    """First ``n`` letters of both coordinate fixed points along the diagonal."""
    return FixedPoint(s, seed[0]).prefix(n), FixedPoint(s, seed[1]).prefix(n)


def diagonal_sequence(s: Substitution, seed: Pair, n: int) -> list[Pair]:
    u, v = diagonal_words(s, seed, n)
    return list(zip(u, v))


@dataclass(frozen=True)
class PairSubstitution:
    """A substitution on pair letters, encoded onto single characters.

    ``pairs[k]`` is the pair carried by ``substitution.alphabet[k]``.
    """

    substitution: Substitution
    pairs: tuple[Pair, ...]

    def __len__(self):
        return len(self.pairs)

    def letter(self, pair: Pair) -> str:
        try:
            return self.substitution.alphabet[self.pairs.index(tuple(pair))]
        except ValueError:
            raise SubstitutionError(f"pair {pair} not in alphabet") from None

    def pair(self, letter: str) -> Pair:
        return self.pairs[self.substitution.alphabet.index(letter)]

    def decode(self, word: str) -> list[Pair]:
        lookup = dict(zip(self.substitution.alphabet, self.pairs))
        return [lookup[c] for c in word]

    def encode(self, pairs: Iterable[Pair]) -> str:
        lookup = dict(zip(self.pairs, self.substitution.alphabet))
        return "".join(lookup[tuple(p)] for p in pairs)

    def image(self, pair: Pair) -> list[Pair]:
        return self.decode(self.substitution[self.letter(pair)])

    def as_pair_dict(self) -> dict[Pair, list[Pair]]:
        return {p: self.image(p) for p in self.pairs}

    def fixed_point(self, seed: Pair, n: int) -> list[Pair]:
        return self.decode(FixedPoint(self.substitution, self.letter(seed)).prefix(n))

    def is_closed(self, subset: Iterable[Pair]) -> bool:
        subset = {tuple(p) for p in subset}
        return all(set(map(tuple, self.image(p))) <= subset for p in subset)


def _pair_image(s: Substitution, pair: Pair) -> list[Pair]:
    return list(zip(s[pair[0]], s[pair[1]]))


def diagonal_substitution(s: Substitution, seeds: Sequence[Pair] | None = None) -> PairSubstitution:
    """Substitution generating the diagonal of a constant-length product.

    With ``seeds`` the alphabet is restricted to the pairs reachable from
    them; otherwise every pair over ``s.alphabet`` is included.  Pairs are
    ordered lexicographically by their position in the base alphabet.
    """
    if not s.is_constant_length:
        raise SubstitutionError("diagonal substitution needs a constant-length substitution")
    order = {a: k for k, a in enumerate(s.alphabet)}
    if seeds is None:
        pairs = [(x, y) for x in s.alphabet for y in s.alphabet]
    else:
        seen: set[Pair] = set()
        todo = [tuple(p) for p in seeds]
        while todo:
            p = todo.pop()
            if p in seen:
                continue
            seen.add(p)
            todo.extend(q for q in _pair_image(s, p) if q not in seen)
        pairs = list(seen)
    pairs.sort(key=lambda p: (order[p[0]], order[p[1]]))
    chars = symbols(len(pairs))
    code = dict(zip(pairs, chars))
    images = tuple("".join(code[q] for q in _pair_image(s, p)) for p in pairs)
    names = tuple(f"({s.name(x)},{s.name(y)})" for x, y in pairs)
    return PairSubstitution(Substitution(tuple(chars), images, names), tuple(pairs))
