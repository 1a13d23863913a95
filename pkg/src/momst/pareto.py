"""Non-dominated filtering and the tree archive."""

from __future__ import annotations

from typing import Iterable, Iterator

import numpy as np

from .graph import SpanningTree, dominates


def pareto_filter(points) -> list[tuple[float, float]]:
    """Distinct non-dominated cost vectors, ascending by ``c1``."""
    pts = np.asarray([tuple(p) for p in points], dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        return []
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    out = []
    best2 = np.inf
    for i in order:
        a, b = pts[i]
        if b < best2:
            out.append((float(a), float(b)))
            best2 = b
    return out


class ParetoArchive:
    """Mutually non-dominated (tree, cost) pairs.

    Distinct trees with identical cost vectors are all kept unless the archive
    was created with ``unique_costs=True``; :meth:`costs` always reports one
    entry per distinct vector.
    """

    def __init__(self, unique_costs: bool = False):
        self.unique_costs = unique_costs
        self._items: list[tuple[SpanningTree, tuple[float, float]]] = []

    def add(self, tree: SpanningTree, cost=None) -> bool:
        c = tuple(tree.cost) if cost is None else tuple(cost)
        for t, other in self._items:
            if dominates(other, c):
                return False
            if other == c and (self.unique_costs or t == tree):
                return False
        self._items = [(t, o) for t, o in self._items if not dominates(c, o)]
        self._items.append((tree, c))
        return True

    def extend(self, trees: Iterable[SpanningTree]) -> None:
        for t in trees:
            self.add(t)

    def costs(self) -> list[tuple[float, float]]:
        return pareto_filter(c for _, c in self._items)

    @property
    def trees(self) -> list[SpanningTree]:
        """Archive trees ordered by (c1, c2)."""
        return [t for t, _ in sorted(self._items, key=lambda item: item[1])]

    def items(self) -> list[tuple[SpanningTree, tuple[float, float]]]:
        return sorted(self._items, key=lambda item: item[1])

    def __len__(self) -> int:
        return len(self._items)

    def __iter__(self) -> Iterator[SpanningTree]:
        return iter(self.trees)
