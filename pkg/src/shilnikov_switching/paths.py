"""Symbolic itineraries over the two homoclinic connections."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator


class Symbol(enum.IntEnum):
    """``G1`` follows the connection leaving through the top cap, ``G2`` its mirror."""

    G1 = 1
    G2 = 2

    @property
    def swapped(self) -> "Symbol":
        return Symbol.G2 if self is Symbol.G1 else Symbol.G1

    @property
    def sign(self) -> int:
        return 1 if self is Symbol.G1 else -1

    @classmethod
    def from_sign(cls, s: float) -> "Symbol":
        if s > 0:
            return cls.G1
        if s < 0:
            return cls.G2
        raise ValueError("points on the stable manifold emit no symbol")

    @classmethod
    def parse(cls, token) -> "Symbol":
        if isinstance(token, Symbol):
            return token
        t = str(token).strip().lower().replace("gamma", "").replace("γ", "")
        if t in ("1", "+", "g1"):
            return cls.G1
        if t in ("2", "-", "g2"):
            return cls.G2
        raise ValueError(f"not a symbol: {token!r}")


@dataclass(frozen=True)
class ItineraryPath:
    """A finite path ``(gamma_{s(1)}, ..., gamma_{s(k)})``."""

    symbols: tuple[Symbol, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(Symbol.parse(s) for s in self.symbols))

    @classmethod
    def parse(cls, text: str) -> "ItineraryPath":
        text = text.strip()
        if "," in text:
            return cls(tuple(t for t in text.split(",") if t.strip()))
        return cls(tuple(text))

    @property
    def order(self) -> int:
        return len(self.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def __iter__(self) -> Iterator[Symbol]:
        return iter(self.symbols)

    def __getitem__(self, i):
        return self.symbols[i]

    def __str__(self) -> str:
        return "".join(str(int(s)) for s in self.symbols)

    def precedes(self, other: "ItineraryPath") -> bool:
        """Prefix order: ``self`` is inside ``other``."""
        return len(self) <= len(other) and other.symbols[: len(self)] == self.symbols

    def prefix(self, k: int) -> "ItineraryPath":
        return ItineraryPath(self.symbols[:k])

    def extended(self, s: Symbol) -> "ItineraryPath":
        return ItineraryPath(self.symbols + (Symbol.parse(s),))

    def swapped(self) -> "ItineraryPath":
        return ItineraryPath(tuple(s.swapped for s in self.symbols))

    @property
    def switches(self) -> int:
        return sum(a != b for a, b in zip(self.symbols, self.symbols[1:]))


def all_paths(k: int) -> list[ItineraryPath]:
    return [ItineraryPath(p) for p in itertools.product((Symbol.G1, Symbol.G2), repeat=k)]


def take(stream: Iterable, k: int) -> ItineraryPath:
    return ItineraryPath(tuple(itertools.islice(stream, k)))


def constant_stream(s: Symbol = Symbol.G1) -> Iterator[Symbol]:
    return itertools.repeat(Symbol.parse(s))


def alternating_stream(first: Symbol = Symbol.G1) -> Iterator[Symbol]:
    first = Symbol.parse(first)
    return itertools.cycle((first, first.swapped))


def thue_morse_stream() -> Iterator[Symbol]:
    """Aperiodic stream: G1/G2 by parity of the binary digit sum of n."""
    for n in itertools.count():
        yield Symbol.G2 if bin(n).count("1") % 2 else Symbol.G1
