"""Permutations of {0, ..., n-1}.

Points are 0-based internally and 1-based in every textual form. Products
compose left to right: ``(a * b)(x) == b(a(x))``, i.e. ``a`` is applied first.
"""

from __future__ import annotations

import math
import re
from functools import reduce
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Permutation",
    "CycleSyntaxError",
    "parse_cycles",
    "product",
    "inverse",
    "point_dtype",
]


def point_dtype(degree: int):
    """Smallest unsigned dtype that can hold the points of ``degree``."""
    if degree <= 1 << 8:
        return np.uint8
    if degree <= 1 << 16:
        return np.uint16
    return np.uint32


class CycleSyntaxError(ValueError):
    """Malformed cycle notation; ``position`` is the 0-based offset of the bad token."""

    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


class Permutation:
    """Immutable permutation stored as an image table."""

    __slots__ = ("_a", "_key", "_hash", "_tuple")

    def __init__(self, images: Iterable[int]):
        arr = np.asarray(list(images) if not isinstance(images, np.ndarray) else images)
        n = len(arr)
        if n == 0:
            raise ValueError("degree must be positive")
        if arr.ndim != 1 or not np.issubdtype(arr.dtype, np.integer):
            raise ValueError("images must be a flat sequence of integers")
        if arr.min() < 0 or arr.max() >= n:
            raise ValueError("image out of range")
        if np.bincount(arr, minlength=n).max() != 1:
            raise ValueError("images do not form a bijection")
        self._set(arr.astype(point_dtype(n)))

    def _set(self, arr: np.ndarray) -> None:
        arr.setflags(write=False)
        self._a = arr
        self._key = None
        self._hash = None
        self._tuple = None

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "Permutation":
        # trusted constructor: arr is already a bijection of the right dtype
        p = object.__new__(cls)
        p._set(arr)
        return p

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        if degree <= 0:
            raise ValueError("degree must be positive")
        return cls._wrap(np.arange(degree, dtype=point_dtype(degree)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        """Build from 0-based cycles, multiplied left to right."""
        result = cls.identity(degree)
        for cyc in cycles:
            img = np.arange(degree, dtype=point_dtype(degree))
            cyc = list(cyc)
            if len(set(cyc)) != len(cyc):
                raise ValueError(f"repeated point in cycle {cyc}")
            for i, p in enumerate(cyc):
                if not 0 <= p < degree:
                    raise ValueError(f"point {p} out of range for degree {degree}")
                img[p] = cyc[(i + 1) % len(cyc)]
            result = result * cls._wrap(img)
        return result

    # -- basic access ---------------------------------------------------
    @property
    def degree(self) -> int:
        return len(self._a)

    @property
    def array(self) -> np.ndarray:
        """Read-only numpy image table."""
        return self._a

    @property
    def images(self) -> tuple[int, ...]:
        if self._tuple is None:
            self._tuple = tuple(self._a.tolist())
        return self._tuple

    def __call__(self, point: int) -> int:
        return int(self._a[point])

    def __len__(self) -> int:
        return len(self._a)

    # -- arithmetic -----------------------------------------------------
    def __mul__(self, other: "Permutation") -> "Permutation":
        if not isinstance(other, Permutation):
            return NotImplemented
        if len(other._a) != len(self._a):
            raise ValueError(f"degree mismatch: {len(self._a)} vs {len(other._a)}")
        return Permutation._wrap(other._a[self._a])

    def inverse(self) -> "Permutation":
        inv = np.empty_like(self._a)
        inv[self._a] = np.arange(len(self._a), dtype=self._a.dtype)
        return Permutation._wrap(inv)

    def __invert__(self) -> "Permutation":
        return self.inverse()

    def __pow__(self, k: int) -> "Permutation":
        base = self if k >= 0 else self.inverse()
        k = abs(k)
        result = Permutation.identity(self.degree)
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self, g: "Permutation") -> "Permutation":
        """Return ``g^-1 * self * g``."""
        return g.inverse() * self * g

    def commutator(self, other: "Permutation") -> "Permutation":
        """Return ``self^-1 other^-1 self other``."""
        return self.inverse() * other.inverse() * self * other

    # -- comparison -----------------------------------------------------
    def key(self) -> bytes:
        if self._key is None:
            self._key = self._a.tobytes()
        return self._key

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return len(self._a) == len(other._a) and self.key() == other.key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((len(self._a), self.key()))
        return self._hash

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def is_identity(self) -> bool:
        return bool(np.array_equal(self._a, np.arange(len(self._a))))

    # -- structure ------------------------------------------------------
    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial disjoint cycles, 0-based, each starting at its smallest point."""
        img = self.images
        seen = bytearray(len(img))
        out = []
        for start in range(len(img)):
            if seen[start] or img[start] == start:
                continue
            cyc = [start]
            seen[start] = 1
            j = img[start]
            while j != start:
                seen[j] = 1
                cyc.append(j)
                j = img[j]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return reduce(math.lcm, (len(c) for c in self.cycles()), 1)

    def support(self) -> list[int]:
        return np.flatnonzero(self._a != np.arange(len(self._a))).tolist()

    def is_even(self) -> bool:
        return sum(len(c) - 1 for c in self.cycles()) % 2 == 0

    def __str__(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        return "".join("(" + ",".join(str(p + 1) for p in c) + ")" for c in cycles)

    def __repr__(self) -> str:
        return f"Permutation({self}, degree={self.degree})"

    def __reduce__(self):
        return (Permutation, (self._a.copy(),))


def product(a: Permutation, b: Permutation) -> Permutation:
    """Apply ``a`` then ``b``."""
    return a * b


def inverse(a: Permutation) -> Permutation:
    return a.inverse()


_TOKEN = re.compile(r"\s*(?:(\()|(\))|(,)|(\d+)|(\S))")


def parse_cycles(text: str, degree: int) -> Permutation:
    """Parse 1-based cycle notation such as ``"(1,2,3)(4,5)"``.

    Juxtaposed cycles are multiplied left to right; ``"()"`` is the identity.
    Points inside a cycle may also be separated by whitespace alone.
    """
    if degree <= 0:
        raise ValueError("degree must be positive")
    cycles: list[list[int]] = []
    current: list[int] | None = None
    expect_point = False  # right after "(" or ","
    pos = 0
    open_at = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        tok_pos = m.start(m.lastindex)
        if m.group(1):
            if current is not None:
                raise CycleSyntaxError("nested '('", text, tok_pos)
            current, expect_point, open_at = [], True, tok_pos
        elif m.group(2):
            if current is None:
                raise CycleSyntaxError("unmatched ')'", text, tok_pos)
            if expect_point and current:
                raise CycleSyntaxError("missing point before ')'", text, tok_pos)
            if len(set(current)) != len(current):
                raise CycleSyntaxError("repeated point in cycle", text, open_at)
            cycles.append(current)
            current = None
        elif m.group(3):
            if current is None or expect_point:
                raise CycleSyntaxError("unexpected ','", text, tok_pos)
            expect_point = True
        elif m.group(4):
            if current is None:
                raise CycleSyntaxError("point outside a cycle", text, tok_pos)
            p = int(m.group(4))
            if not 1 <= p <= degree:
                raise CycleSyntaxError(f"point {p} out of range 1..{degree}", text, tok_pos)
            current.append(p - 1)
            expect_point = False
        else:
            raise CycleSyntaxError(f"unexpected character {m.group(5)!r}", text, tok_pos)
        pos = m.end()
    if current is not None:
        raise CycleSyntaxError("unterminated cycle", text, open_at)
    return Permutation.from_cycles(cycles, degree)
