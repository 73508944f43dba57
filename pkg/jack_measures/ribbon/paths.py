"""
Sliding paths, ribbon paths and their weights.

A sliding path of length ℓ is a height sequence j₀..j_ℓ with j₀ = j_ℓ = 0 and all heights nonnegative; a zero
step is a slide and a nonzero step is a jump. A Szegő path is a sliding path without slides. A ribbon path on n
sites is a tuple of sliding paths together with pairings, each matching a down jump −k with a later up jump +k.
"""

import logging
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from ..exceptions import DomainError
from ..partitions import Partition
from ..scalars import Scalar, ScalarField
from ..specializations import Specialization

logger = logging.getLogger(__name__)

Step = Tuple[int, int]
Pairing = Tuple[Step, Step]


@dataclass(frozen=True)
class SlidingPath:
    """
    Attributes:
        heights: j₀, ..., j_ℓ.
    """

    heights: Tuple[int, ...]

    def __post_init__(self) -> None:
        heights = tuple(int(h) for h in self.heights)
        object.__setattr__(self, "heights", heights)
        if len(heights) < 1 or heights[0] != 0 or heights[-1] != 0:
            raise DomainError(f"Sliding paths start and end at height 0, got {heights}.")
        if any(h < 0 for h in heights):
            raise DomainError(f"Sliding paths stay at nonnegative heights, got {heights}.")

    @property
    def length(self) -> int:
        return len(self.heights) - 1

    def degree(self, i: int) -> int:
        """The degree of step ``i`` (0-based): j_{i+1} − j_i."""
        return self.heights[i + 1] - self.heights[i]

    def degrees(self) -> List[int]:
        return [self.degree(i) for i in range(self.length)]

    def is_szego(self) -> bool:
        return all(d != 0 for d in self.degrees())

    def slides(self) -> List[int]:
        """Indices of the slides."""
        return [i for i in range(self.length) if self.degree(i) == 0]


@dataclass(frozen=True)
class Decoration:
    """
    An N-decoration (n₁, ..., n_N) of n: the first n₁ sites form the first group, and so on.
    """

    nu: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.nu or any(n < 1 for n in self.nu):
            raise DomainError(f"Decorations are nonempty sequences of positive integers, got {self.nu}.")

    @property
    def n(self) -> int:
        return sum(self.nu)

    def labels(self) -> Tuple[int, ...]:
        """The group index of every site."""
        return tuple(group for group, size in enumerate(self.nu) for _ in range(size))


@dataclass(frozen=True)
class RibbonPath:
    """
    Attributes:
        sites: The sliding paths, one per site.
        pairings: ``((a, i), (a2, i2))`` pairs matching the down jump at step ``i`` of site ``a`` with the up jump
            at step ``i2`` of site ``a2``.
    """

    sites: Tuple[SlidingPath, ...]
    pairings: Tuple[Pairing, ...] = ()

    def __post_init__(self) -> None:
        used = set()
        for down, up in self.pairings:
            (a, i), (b, j) = down, up
            k = -self.sites[a].degree(i)
            if k < 1 or self.sites[b].degree(j) != k:
                raise DomainError(f"Pairing {down}->{up} does not match a −k jump with a +k jump.")
            if not (a < b or (a == b and i < j)):
                raise DomainError(f"Pairing {down}->{up} violates the ordering condition.")
            if down in used or up in used:
                raise DomainError(f"Step used by two pairings in {self.pairings}.")
            used.update((down, up))
        minus, plus = unpaired_jump_profiles(self)
        if minus.size != plus.size:
            raise DomainError(f"Unpaired jump profiles {minus} and {plus} differ in size.")

    @property
    def n(self) -> int:
        return len(self.sites)

    def paired_steps(self) -> set:
        return {step for pairing in self.pairings for step in pairing}

    def unpaired_jumps(self) -> Iterator[Tuple[Step, int]]:
        paired = self.paired_steps()
        for a, path in enumerate(self.sites):
            for i, degree in enumerate(path.degrees()):
                if degree and (a, i) not in paired:
                    yield (a, i), degree


@dataclass(frozen=True)
class PathWeight:
    """
    The weight of a ribbon path with its grading.

    Attributes:
        value: Π size(pairing) · Π height(slide) · Π conj(V^out) · Π V^in.
        q: The number of pairings, the exponent of ℏ.
        m: The number of slides, the exponent of ε̄.
    """

    value: Scalar
    q: int
    m: int


def enumerate_sliding_paths(length: int, K: int, prune_zero_slides: bool = False) -> List[SlidingPath]:
    """
    All sliding paths of the given length with jump degrees in [−K, K].

    The order is colexicographic in the heights (compare the last height first).

    Args:
        length: ℓ ≥ 1.
        K: The largest jump magnitude.
        prune_zero_slides: Drop paths with a slide at height 0; such paths have weight 0.

    Returns:
        The paths.
    """
    if length < 1:
        raise DomainError(f"Path length must be positive, got {length}.")
    found: List[Tuple[int, ...]] = []

    def extend(heights: List[int]) -> None:
        remaining = length - (len(heights) - 1)
        h = heights[-1]
        if remaining == 0:
            if h == 0:
                found.append(tuple(heights))
            return
        for step in range(-min(K, h), K + 1):
            nxt = h + step
            if nxt > K * (remaining - 1):
                continue
            if step == 0 and h == 0 and prune_zero_slides:
                continue
            heights.append(nxt)
            extend(heights)
            heights.pop()

    extend([0])
    return [SlidingPath(heights) for heights in sorted(found, key=lambda hs: hs[::-1])]


def unpaired_jump_profiles(path: RibbonPath) -> Tuple[Partition, Partition]:
    """
    The unpaired jump profiles (μ⁻, μ⁺): degrees of the unpaired down jumps and of the unpaired up jumps.
    """
    minus, plus = [], []
    for _, degree in path.unpaired_jumps():
        (plus if degree > 0 else minus).append(abs(degree))
    return Partition.from_parts(minus), Partition.from_parts(plus)


def path_weight(
    path: RibbonPath, v_out: Specialization, v_in: Specialization, field: Optional[ScalarField] = None
) -> PathWeight:
    """
    The (v^out, v^in)-weight of a ribbon path.

    Unpaired jumps whose degree lies outside a support contribute a zero factor.

    Args:
        path: The ribbon path.
        v_out: Specialization weighting unpaired down jumps by conj(V^out_k).
        v_in: Specialization weighting unpaired up jumps by V^in_k.
        field: The scalar field, numeric by default.

    Returns:
        The weight and its (ℏ, ε̄) grading.
    """
    field = field or ScalarField()
    value = field.one
    for (a, i), (b, j) in path.pairings:
        value = value * field(-path.sites[a].degree(i))
    slides = 0
    for site in path.sites:
        for i in site.slides():
            slides += 1
            value = value * field(site.heights[i])
    for _, degree in path.unpaired_jumps():
        if degree > 0:
            value = value * v_in.value(degree, field)
        else:
            value = value * field.conj(v_out.value(-degree, field))
    return PathWeight(value=value, q=len(path.pairings), m=slides)


def _components(n: int, edges: Sequence[Tuple[int, int]], labels: Optional[Sequence[int]] = None) -> int:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> None:
        parent[find(x)] = find(y)

    if labels is not None:
        first: Dict[int, int] = {}
        for site, label in enumerate(labels):
            union(site, first.setdefault(label, site))
    for x, y in edges:
        union(x, y)
    return len({find(x) for x in range(n)})


def is_connected(path: RibbonPath) -> bool:
    """Whether the reduced graph (sites joined by pairings) is connected."""
    edges = [(a, b) for (a, _), (b, _) in path.pairings]
    return _components(path.n, edges) == 1


def is_connected_decorated(path: RibbonPath, decoration: Decoration) -> bool:
    """Whether the reduced graph along a decoration (sites grouped by ``decoration``) is connected."""
    if decoration.n != path.n:
        raise DomainError(f"Decoration {decoration.nu} does not cover {path.n} sites.")
    edges = [(a, b) for (a, _), (b, _) in path.pairings]
    return _components(path.n, edges, decoration.labels()) == 1


def reach(lengths: Sequence[int], K: int) -> int:
    """The height bound K·⌈Σℓ/2⌉ of ribbon paths whose unpaired jumps have degree at most K."""
    return K * ((sum(lengths) + 1) // 2)


def enumerate_ribbon_paths(lengths: Sequence[int], K: int) -> Iterator[RibbonPath]:
    """
    Brute-force enumeration of ribbon paths whose unpaired jumps have degree at most K.

    Intended for small cases; :mod:`jack_measures.ribbon.sums` computes the same sums by a transfer recursion.

    Args:
        lengths: ℓ₁, ..., ℓ_n.
        K: The largest unpaired jump degree.

    Yields:
        Every ribbon path once; pairings are generated by backtracking over the down steps in order.
    """
    bound = reach(lengths, K)
    per_site = [enumerate_sliding_paths(length, bound) for length in lengths]
    for sites in _product(per_site):
        if any(max(site.heights) > bound for site in sites):
            continue
        steps = [(a, i, d) for a, site in enumerate(sites) for i, d in enumerate(site.degrees()) if d]
        for pairings in _pairings(steps):
            candidate = tuple(sites)
            paired = {step for pairing in pairings for step in pairing}
            if any(abs(d) > K for a, i, d in steps if (a, i) not in paired):
                continue
            minus = sum(-d for a, i, d in steps if d < 0 and (a, i) not in paired)
            plus = sum(d for a, i, d in steps if d > 0 and (a, i) not in paired)
            if minus != plus:
                continue
            yield RibbonPath(candidate, tuple(pairings))


def _product(options: List[List[SlidingPath]]) -> Iterator[List[SlidingPath]]:
    if not options:
        yield []
        return
    for first in options[0]:
        for rest in _product(options[1:]):
            yield [first] + rest


def _pairings(steps: List[Tuple[int, int, int]]) -> Iterator[List[Pairing]]:
    downs = [index for index, (_, _, d) in enumerate(steps) if d < 0]

    def extend(position: int, used: frozenset, chosen: List[Pairing]) -> Iterator[List[Pairing]]:
        if position == len(downs):
            yield list(chosen)
            return
        index = downs[position]
        a, i, d = steps[index]
        yield from extend(position + 1, used, chosen)
        for later in range(index + 1, len(steps)):
            b, j, e = steps[later]
            if e == -d and later not in used:
                chosen.append(((a, i), (b, j)))
                yield from extend(position + 1, used | {later}, chosen)
                chosen.pop()

    yield from extend(0, frozenset(), [])
