"""Exact spin-level model of the Rokhsar-Kivelson plaquette ladder.

A periodic ladder with N plaquettes carries one spin-1/2 per link, 3N links
in total (N bottom legs, N top legs, N rungs).  Ring exchange inverts the
four spins around a flippable plaquette; any plaquette whose spins do not
form one of the two circulating patterns is blocked and annihilated by the
operator.  This module is the ground-truth layer: everything the reduced
flip-configuration picture claims can be checked here by brute force.

Link bit layout: ``(bottom_1..bottom_N, top_1..top_N, rung_1..rung_N)``,
bit value 1 meaning spin-up (rendered as a right arrow on leg links).
Plaquette ``p`` reads clockwise from its top link:
``(top_p, rung_{p+1}, bottom_p, rung_p)``.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass

import numpy as np

__all__ = [
    "LadderGeometry",
    "SpinState",
    "PlaquetteClass",
    "GaussCharges",
    "build_reference_state",
    "classify_plaquette",
    "apply_ring_exchange",
    "gauss_charges",
    "flippable_count",
    "reachable_states",
    "flipped_plaquettes",
]

# Clockwise spin patterns (top, right rung, bottom, left rung); 1 = spin-up.
_VORTEX_PATTERN = (1, 0, 0, 1)
_ANTIVORTEX_PATTERN = (0, 1, 1, 0)


class PlaquetteClass(enum.Enum):
    VORTEX = "vortex"
    ANTIVORTEX = "antivortex"
    BLOCKED = "blocked"


@dataclass(frozen=True)
class LadderGeometry:
    """Periodic square ladder with ``n_plaquettes >= 2`` columns."""

    n_plaquettes: int

    def __post_init__(self) -> None:
        if self.n_plaquettes < 2:
            raise ValueError("ladder needs at least 2 plaquettes")

    @property
    def n_links(self) -> int:
        return 3 * self.n_plaquettes

    def bottom_link(self, p: int) -> int:
        return p - 1

    def top_link(self, p: int) -> int:
        return self.n_plaquettes + p - 1

    def rung_link(self, p: int) -> int:
        return 2 * self.n_plaquettes + p - 1

    def plaquette_links(self, p: int) -> tuple[int, int, int, int]:
        """Clockwise link indices of plaquette ``p``, starting at the top."""
        self._check_plaquette(p)
        n = self.n_plaquettes
        right = p % n + 1
        return (self.top_link(p), self.rung_link(right),
                self.bottom_link(p), self.rung_link(p))

    def _check_plaquette(self, p: int) -> None:
        if not 1 <= p <= self.n_plaquettes:
            raise IndexError(f"plaquette index {p} out of range 1..{self.n_plaquettes}")


@dataclass(frozen=True)
class SpinState:
    """Product state of the 3N link spins, packed into a bitmask."""

    bits: int
    geometry: LadderGeometry

    def __post_init__(self) -> None:
        if not 0 <= self.bits < 1 << self.geometry.n_links:
            raise ValueError("bitmask wider than the 3N links of the geometry")

    def bit(self, link: int) -> int:
        return self.bits >> link & 1

    def spin_z(self, link: int) -> float:
        """S^z eigenvalue of the spin on ``link`` (+1/2 up, -1/2 down)."""
        return 0.5 if self.bit(link) else -0.5


@dataclass(frozen=True)
class GaussCharges:
    """Gauss-law eigenvalues, one per vertex.

    ``charges`` holds the bottom-row vertices for columns 1..N followed by
    the top-row vertices for columns 1..N.
    """

    charges: np.ndarray

    @property
    def all_zero(self) -> bool:
        return bool(np.all(np.abs(self.charges) < 1e-12))


def build_reference_state(geometry: LadderGeometry) -> SpinState:
    """Alternating antivortex/vortex state with plaquette 1 an antivortex.

    The pattern closes around the periodic ladder only for an even number
    of plaquettes.
    """
    n = geometry.n_plaquettes
    if n % 2:
        raise ValueError("reference state requires even plaquette count")
    bits = 0
    for p in range(1, n + 1):
        if p % 2 == 1:
            bits |= 1 << geometry.bottom_link(p)
        else:
            bits |= 1 << geometry.top_link(p)
            bits |= 1 << geometry.rung_link(p)
    return SpinState(bits, geometry)


def classify_plaquette(state: SpinState, p: int) -> PlaquetteClass:
    """Classify plaquette ``p`` as vortex, antivortex, or blocked."""
    pattern = tuple(state.bit(link) for link in state.geometry.plaquette_links(p))
    if pattern == _VORTEX_PATTERN:
        return PlaquetteClass.VORTEX
    if pattern == _ANTIVORTEX_PATTERN:
        return PlaquetteClass.ANTIVORTEX
    return PlaquetteClass.BLOCKED


def apply_ring_exchange(state: SpinState, p: int) -> SpinState | None:
    """Invert the four spins of plaquette ``p``; ``None`` if it is blocked."""
    if classify_plaquette(state, p) is PlaquetteClass.BLOCKED:
        return None
    mask = 0
    for link in state.geometry.plaquette_links(p):
        mask |= 1 << link
    return SpinState(state.bits ^ mask, state.geometry)


def gauss_charges(state: SpinState) -> GaussCharges:
    """Evaluate the gauge generator at every vertex of the ladder.

    The generator at a vertex sums the outgoing minus incoming S^z of its
    leg links, plus (bottom row) or minus (top row) the rung S^z, plus a
    fixed +-1/2 from the virtual link outside the ladder.  The virtual
    spins are pinned to the staggered background that annihilates the
    alternating reference state, so every state reachable by ring
    exchanges is charge-free.
    """
    geo = state.geometry
    n = geo.n_plaquettes
    charges = np.empty(2 * n)
    for x in range(1, n + 1):
        left = (x - 2) % n + 1
        rung = state.spin_z(geo.rung_link(x))
        const = 0.5 if x % 2 == 0 else -0.5
        charges[x - 1] = (state.spin_z(geo.bottom_link(x))
                          - state.spin_z(geo.bottom_link(left)) + rung + const)
        charges[n + x - 1] = (state.spin_z(geo.top_link(x))
                              - state.spin_z(geo.top_link(left)) - rung - const)
    return GaussCharges(charges)


def flippable_count(state: SpinState) -> int:
    """Number of vortex or antivortex plaquettes (the F-operator eigenvalue)."""
    return sum(
        classify_plaquette(state, p) is not PlaquetteClass.BLOCKED
        for p in range(1, state.geometry.n_plaquettes + 1)
    )


def reachable_states(start: SpinState) -> set[SpinState]:
    """Breadth-first closure of ``start`` under ring exchange on all plaquettes."""
    n = start.geometry.n_plaquettes
    seen = {start}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        for p in range(1, n + 1):
            flipped = apply_ring_exchange(state, p)
            if flipped is not None and flipped not in seen:
                seen.add(flipped)
                queue.append(flipped)
    return seen


def flipped_plaquettes(state: SpinState, reference: SpinState) -> int:
    """Bitmask of plaquettes whose four spins are all inverted vs ``reference``.

    Bit ``p - 1`` is set when plaquette ``p`` has been ring-exchanged an odd
    number of times.  Partially disturbed (blocked) plaquettes do not count.
    """
    geo = state.geometry
    if reference.geometry != geo:
        raise ValueError("states live on different geometries")
    mask = 0
    diff = state.bits ^ reference.bits
    for p in range(1, geo.n_plaquettes + 1):
        links = geo.plaquette_links(p)
        if all(diff >> link & 1 for link in links):
            mask |= 1 << (p - 1)
    return mask
