"""Abelianization paths and the full representation of a binary substitution.

``f(0) = (1, 0)`` and ``f(1) = (0, 1)``; the path ``K[w]`` runs through the
partial Parikh vectors of ``w``.  With ``L`` the transpose of the
substitution matrix, ``f(s(w)) = L f(w)``, and the contracted paths
``L^-n K[s^n(i)]`` approximate a limit curve.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core import FixedPoint, Substitution, apply, require_binary
from .exact import Matrix2, substitution_matrix

Point = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class Polyline:
    vertices: tuple[Point, ...]

    def __post_init__(self):
        if not self.vertices or self.vertices[0] != (0, 0):
            raise ValueError("a polyline starts at the origin")
        if any(a == b for a, b in zip(self.vertices, self.vertices[1:])):
            raise ValueError("consecutive vertices must differ")

    @property
    def end(self) -> Point:
        return self.vertices[-1]

    def __len__(self):
        return len(self.vertices)

    def as_float(self) -> np.ndarray:
        return np.array([[float(x), float(y)] for x, y in self.vertices])


def abelian_path(w: str) -> Polyline:
    if set(w) - {"0", "1"}:
        raise ValueError("abelian paths are defined for binary words")
    x = y = 0
    pts = [(Fraction(0), Fraction(0))]
    for c in w:
        if c == "0":
            x += 1
        else:
            y += 1
        pts.append((Fraction(x), Fraction(y)))
    return Polyline(tuple(pts))


def representation_matrix(s: Substitution) -> Matrix2:
    """``L`` with ``f(s(w)) = L f(w)``; its columns are the Parikh vectors of the images."""
    require_binary(s)
    return substitution_matrix(s).transpose()


def transform(path: Polyline, m) -> Polyline:
    """Apply a 2x2 matrix (rows of numbers) to every vertex."""
    (a, b), (c, d) = m
    return Polyline(tuple((a * x + b * y, c * x + d * y) for x, y in path.vertices))


def curve_approximant(s: Substitution, i: str, n: int) -> Polyline:
    """``L^-n K[s^n(i)]`` with exact rational vertices."""
    L = representation_matrix(s)
    if L.det == 0:
        raise ValueError("substitution matrix is singular")
    w = i
    for _ in range(n):
        w = apply(s, w)
    path = abelian_path(w)
    if n == 0:
        return path
    return transform(path, (L ** n).inverse())


def approximant_distances(s: Substitution, i: str, nmax: int) -> list[float]:
    """Hausdorff distances between vertex sets of consecutive approximants."""
    curves = [curve_approximant(s, i, n).as_float() for n in range(nmax + 1)]
    out = []
    for a, b in zip(curves, curves[1:]):
        d = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=2)
        out.append(float(max(d.min(axis=1).max(), d.min(axis=0).max())))
    return out


@dataclass(frozen=True)
class BalanceEvidence:
    N: int
    balanced_points: tuple[int, ...]
    min_separation: int
    separation_at: int

    @property
    def found(self) -> bool:
        return bool(self.balanced_points)


def no_balanced_evidence(s: Substitution, N: int, keep: int = 10) -> BalanceEvidence:
    """Search prefixes ``n <= N`` with equal Parikh vectors in both fixed points.

    The separation ``|N0(u[:n]) - N0(v[:n])|`` is the lattice distance between
    the two abelian paths after ``n`` steps; it is zero exactly at balanced points.
    """
    require_binary(s)
    u, v = FixedPoint(s, "0").prefix(N), FixedPoint(s, "1").prefix(N)
    cu = np.cumsum(np.frombuffer(u.encode("ascii"), np.uint8) == 48, dtype=np.int64)
    cv = np.cumsum(np.frombuffer(v.encode("ascii"), np.uint8) == 48, dtype=np.int64)
    gap = np.abs(cu - cv)
    hits = np.flatnonzero(gap == 0) + 1
    k = int(gap.argmin())
    return BalanceEvidence(N, tuple(int(h) for h in hits[:keep]), int(gap[k]), k + 1)
