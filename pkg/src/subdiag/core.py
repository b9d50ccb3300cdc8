"""Alphabets, words, substitutions and their fixed points.

Words are plain Python strings whose characters are single-letter symbols
drawn from ``[0-9a-zA-Z]``.  Substitutions are immutable and hashable, so
they can be shared freely.  Larger derived alphabets (refinements, pair
alphabets, block alphabets) are encoded onto single characters, and the human
readable names travel along in :attr:`Substitution.names`.
"""
from __future__ import annotations

import re
import string
from dataclasses import dataclass, field
from typing import Iterator, Mapping, Sequence

SYMBOLS = string.digits + string.ascii_lowercase + string.ascii_uppercase
_RULE = re.compile(r"^([0-9a-zA-Z])->([0-9a-zA-Z]*)$")


class SubstitutionError(ValueError):
    """Raised for malformed substitutions or words outside the alphabet."""


class SubstitutionSyntaxError(SubstitutionError):
    """Raised when a substitution spec string does not parse."""


def symbols(n: int) -> str:
    """The first ``n`` single-character symbols, in canonical order."""
    if n > len(SYMBOLS):
        raise SubstitutionError(f"at most {len(SYMBOLS)} letters can be encoded, got {n}")
    return SYMBOLS[:n]


@dataclass(frozen=True)
class Substitution:
    """A morphism on a finite alphabet, one nonempty image word per letter.

    ``alphabet`` keeps its definition order; ``images[k]`` is the image of
    ``alphabet[k]``.  ``names`` optionally gives display names for generated
    alphabets and does not take part in equality.
    """

    alphabet: tuple[str, ...]
    images: tuple[str, ...]
    names: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.alphabet) != len(self.images):
            raise SubstitutionError("one image per letter is required")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise SubstitutionError("duplicate letter in alphabet")
        for a in self.alphabet:
            if len(a) != 1 or a not in SYMBOLS:
                raise SubstitutionError(f"invalid letter {a!r}")
        letters = set(self.alphabet)
        for a, img in zip(self.alphabet, self.images):
            if not img:
                raise SubstitutionError(f"empty image for letter {a!r}")
            bad = set(img) - letters
            if bad:
                raise SubstitutionError(
                    f"image of {a!r} uses undeclared letter(s) {''.join(sorted(bad))}")
        if self.names is not None and len(self.names) != len(self.alphabet):
            raise SubstitutionError("names must match the alphabet")
        object.__setattr__(self, "_table", str.maketrans(dict(zip(self.alphabet, self.images))))

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, str], names=None) -> "Substitution":
        return cls(tuple(mapping), tuple(mapping.values()), names)

    def __getitem__(self, letter: str) -> str:
        try:
            return self.images[self.alphabet.index(letter)]
        except ValueError:
            raise SubstitutionError(f"letter {letter!r} not in alphabet") from None

    def __len__(self) -> int:
        return len(self.alphabet)

    def __str__(self) -> str:
        return format_substitution(self)

    def as_dict(self) -> dict[str, str]:
        return dict(zip(self.alphabet, self.images))

    def name(self, letter: str) -> str:
        if self.names is None:
            return letter
        return self.names[self.alphabet.index(letter)]

    @property
    def lengths(self) -> tuple[int, ...]:
        return tuple(len(img) for img in self.images)

    @property
    def is_constant_length(self) -> bool:
        return len(set(self.lengths)) == 1

    def power(self, k: int) -> "Substitution":
        """The ``k``-fold composition of this substitution with itself."""
        if k < 1:
            raise SubstitutionError("power must be at least 1")
        imgs = list(self.alphabet)
        for _ in range(k):
            imgs = [apply(self, w) for w in imgs]
        return Substitution(self.alphabet, tuple(imgs), self.names)


def parse_substitution(text: str) -> Substitution:
    """Parse ``"0->01;1->10"`` style specs; whitespace is ignored."""
    text = "".join(text.split())
    if not text:
        raise SubstitutionSyntaxError("empty substitution spec")
    mapping: dict[str, str] = {}
    for rule in text.split(";"):
        m = _RULE.match(rule)
        if m is None:
            raise SubstitutionSyntaxError(f"cannot parse rule {rule!r}")
        letter, image = m.groups()
        if letter in mapping:
            raise SubstitutionSyntaxError(f"letter {letter!r} defined twice")
        if not image:
            raise SubstitutionSyntaxError(f"empty image for letter {letter!r}")
        mapping[letter] = image
    try:
        return Substitution.from_mapping(mapping)
    except SubstitutionError as exc:
        raise SubstitutionSyntaxError(str(exc)) from None


def format_substitution(s: Substitution) -> str:
    return ";".join(f"{a}->{img}" for a, img in zip(s.alphabet, s.images))


def check_word(s: Substitution, w: str) -> None:
    bad = set(w).difference(s.alphabet)
    if bad:
        raise SubstitutionError(f"letter(s) {''.join(sorted(bad))} not in alphabet")


def apply(s: Substitution, w: str) -> str:
    """Image of the word ``w`` under ``s``."""
    check_word(s, w)
    return w.translate(s._table)


class FixedPoint:
    """Lazy stream over the fixed point of ``s`` beginning with ``seed``.

    The stream reads its own prefix as the argument of the substitution, so
    producing ``n`` letters costs O(n) in total.  A stream is meant for a
    single consumer.
    """

    def __init__(self, s: Substitution, seed: str):
        img = s[seed]
        if img[0] != seed:
            raise SubstitutionError(f"image of {seed!r} does not start with {seed!r}")
        if len(img) < 2:
            raise SubstitutionError(f"image of {seed!r} does not grow")
        self.substitution = s
        self.seed = seed
        self._buf = img
        self._read = 1

    def _grow(self, n: int) -> None:
        while len(self._buf) < n:
            need = n - len(self._buf)
            chunk = self._buf[self._read:self._read + need]
            self._read += len(chunk)
            self._buf += chunk.translate(self.substitution._table)

    def prefix(self, n: int) -> str:
        self._grow(n)
        return self._buf[:n]

    def __getitem__(self, k: int) -> str:
        self._grow(k + 1)
        return self._buf[k]

    def __iter__(self) -> Iterator[str]:
        k = 0
        while True:
            self._grow(k + 1)
            end = len(self._buf)
            yield from self._buf[k:end]
            k = end
            # keep the buffer ahead geometrically
            self._grow(2 * end)


def fixed_point_prefix(s: Substitution, seed: str, n: int) -> str:
    """First ``n`` letters of the fixed point of ``s`` beginning with ``seed``."""
    return FixedPoint(s, seed).prefix(n)


def parikh(w: str, alphabet: Sequence[str]) -> tuple[int, ...]:
    return tuple(w.count(a) for a in alphabet)


_MIRROR = str.maketrans("01", "10")


def mirror(w: str) -> str:
    """Swap 0 and 1 letterwise."""
    if set(w) - {"0", "1"}:
        raise SubstitutionError("mirror is defined on binary words only")
    return w.translate(_MIRROR)


def require_binary(s: Substitution) -> None:
    if set(s.alphabet) != {"0", "1"}:
        raise SubstitutionError("binary alphabet {0,1} required")


def is_continuous(s: Substitution) -> bool:
    require_binary(s)
    return s["1"] == mirror(s["0"])


def incidence(s: Substitution) -> tuple[tuple[int, ...], ...]:
    """Square count matrix, entry ``[i][j]`` = occurrences of letter j in s(letter i)."""
    return tuple(parikh(img, s.alphabet) for img in s.images)


def is_primitive(s: Substitution) -> bool:
    d = len(s)
    base = [[c > 0 for c in row] for row in incidence(s)]
    power = base
    for _ in range((d - 1) ** 2 + 1):
        if all(all(row) for row in power):
            return True
        power = [[any(power[i][k] and base[k][j] for k in range(d)) for j in range(d)]
                 for i in range(d)]
    return False


@dataclass(frozen=True)
class Periodicity:
    period: int
    word: str
    certified: bool


def detect_periodicity(s: Substitution, seed: str, max_period: int = 64,
                       horizon: int = 10_000) -> Periodicity | None:
    """Smallest certified period of the fixed point from ``seed``.

    A period ``p`` is certified when the length-``horizon`` prefix is
    ``p``-periodic and ``s`` maps the period word onto a power of one of its
    rotations.  When some period is only empirically visible the smallest
    such one is returned with ``certified=False``.
    """
    x = fixed_point_prefix(s, seed, horizon)
    uncertified = None
    for p in range(1, min(max_period, horizon - 1) + 1):
        if x[p:] != x[:-p]:
            continue
        word = x[:p]
        img = apply(s, word)
        if len(img) % p == 0:
            reps = len(img) // p
            if any(img == (word[r:] + word[:r]) * reps for r in range(p)):
                return Periodicity(p, word, True)
        if uncertified is None:
            uncertified = Periodicity(p, word, False)
    return uncertified
