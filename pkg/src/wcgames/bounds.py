"""Closed-form bias bounds for the non-2-colourability and k-SAT games, and
reference constants from the random-structure literature.

``side="below"``: the player favoured by a small bias (Waiter in WC, Client
in CW) wins for every q up to the bound.  ``side="above"``: the other player
wins for every q at least the bound.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

LN2 = math.log(2)
GAMES = ("non2col", "ksat")
VERSIONS = ("WC", "CW")
SIDES = ("below", "above")


@dataclass(frozen=True)
class TheoremBound:
    game: str
    version: str
    side: str
    n: int
    k: int
    value: float
    strict: bool = False  # "q < value" rather than "q <= value"

    @property
    def formula(self) -> str:
        return f"{self.game}-{self.version.lower()}-{self.side}"

    @property
    def winner(self) -> str:
        low = "waiter" if self.version == "WC" else "client"
        high = "client" if self.version == "WC" else "waiter"
        return low if self.side == "below" else high

    def holds_at(self, q: int) -> bool:
        """Whether bias q lies in the regime this bound certifies."""
        if self.side == "above":
            return q >= self.value
        return q < self.value if self.strict else q <= self.value


def _ratio(n, k) -> Fraction:
    """C(n,k)/n as an exact rational."""
    return Fraction(math.comb(n, k), n)


def theorem_bound(game: str, version: str, side: str, n: int, k: int) -> TheoremBound:
    version = version.upper()
    if game not in GAMES or version not in VERSIONS or side not in SIDES:
        raise ValueError(f"invalid bound selector ({game!r}, {version!r}, {side!r})")
    if not 2 <= k <= n:
        raise ValueError("need n >= k >= 2")
    half = math.comb(-(-n // 2), k)
    strict = False
    if game == "non2col":
        if version == "WC" and side == "below":
            value = half * LN2 / (2 * ((1 + LN2) * n + LN2))
        elif version == "WC":
            value = 2 ** (k / 2) * math.exp(k / 2 + 1) * k * float(_ratio(n, k))
        elif side == "below":
            value = half * LN2 / ((1 + LN2) * n)
        else:
            value = float(Fraction(k ** 3 * 32, 2 ** k) * _ratio(n, k))
    else:
        if version == "WC" and side == "below":
            value = float(_ratio(n, k) / 2)
        elif version == "WC":
            value = 2 ** (3 * k / 2) * math.exp(k / 2 + 1) * k * float(_ratio(n, k))
        elif side == "below":
            value = float(_ratio(n, k))
            strict = True
        else:
            value = float(16 * k ** 3 * _ratio(n, k))
    return TheoremBound(game, version, side, n, k, value, strict)


def all_bounds(n: int, k: int) -> list[TheoremBound]:
    return [theorem_bound(g, v, s, n, k) for g in GAMES for v in VERSIONS for s in SIDES]


def gap_factor(game: str, version: str, k: int):
    """Ratio of the 'above' to the 'below' bound as n grows.

    Exact (an int) for the k-SAT Client-Waiter game.
    """
    version = version.upper()
    if game == "non2col" and version == "WC":
        return (1 + 1 / LN2) * k * 2 ** (3 * k / 2 + 1) * math.exp(k / 2 + 1)
    if game == "non2col" and version == "CW":
        return (1 + 1 / LN2) * 2 ** 5 * k ** 3
    if game == "ksat" and version == "WC":
        return k * 2 ** (3 * k / 2 + 1) * math.exp(k / 2 + 1)
    if game == "ksat" and version == "CW":
        return 16 * k ** 3
    raise ValueError(f"invalid selector ({game!r}, {version!r})")


def bound_ratio(game: str, version: str, n: int, k: int) -> float:
    return theorem_bound(game, version, "above", n, k).value / theorem_bound(game, version, "below", n, k).value


@dataclass(frozen=True)
class ReferenceConstants:
    """Edge/clause density thresholds (per vertex or variable) for random
    structures; annotation only, o_k(1) terms dropped."""

    k: int
    r: int
    c2k_lower: float  # 2-colourability, best known lower bound (large k)
    c2k_upper: float
    crk_lower: float  # r-colourability
    crk_upper: float
    crk_lower_large_r: float
    ksat_threshold: float

    def brackets_ordered(self) -> bool:
        return self.c2k_lower <= self.c2k_upper and self.crk_lower <= self.crk_upper


def reference_constants(k: int, r: int = 2, eps: float = 0.0) -> ReferenceConstants:
    if k < 2 or r < 2:
        raise ValueError("need k >= 2 and r >= 2")
    upper2 = 2 ** (k - 1) * LN2 - LN2 / 2
    lower2 = upper2 - (1 + eps) / 2 + (1 - LN2) / 2
    crk_upper = (r ** (k - 1) - 0.5) * math.log(r)
    crk_lower = (r - 1) ** (k - 1) * math.log(r - 1)
    crk_large = crk_upper - LN2 - 1.01 * math.log(r) / r
    ksat = 2 ** k * LN2 - (1 + LN2) / 2
    return ReferenceConstants(k, r, lower2, upper2, crk_lower, crk_upper, crk_large, ksat)


def intuition_bias(game: str, n: int, k: int) -> float:
    """|X| / m_F with m_F from the reference thresholds (the bias the
    random-play heuristic predicts)."""
    ref = reference_constants(k)
    if game == "non2col":
        return math.comb(n, k) / (ref.c2k_upper * n)
    if game == "ksat":
        return 2 ** k * math.comb(n, k) / (ref.ksat_threshold * n)
    raise ValueError(f"unknown game {game!r}")
