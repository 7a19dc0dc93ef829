"""Finite B-trees over ordinal labels.

A B-tree is a finite set of nonempty label sequences closed under nonempty
initial segments.  The empty sequence is never a member; APIs that need the
virtual root use the empty tuple ``()`` as a sentinel.

The derivative ``T' = T minus its maximal nodes`` drives everything here:
``order`` is the number of derivations needed to empty the tree, and the
rank of a node is the last derivation stage it survives.
"""

from __future__ import annotations

import json
from typing import Callable, Dict, FrozenSet, Iterable, Iterator, List, Mapping, Tuple, Union

from .ordinal import Ordinal

__all__ = ["NodePath", "FiniteBTree", "verify_monotone_map", "path_from_text", "path_to_text"]

NodePath = Tuple[Ordinal, ...]


def path_from_text(text: str) -> NodePath:
    """Parse a comma-separated list of CNF strings into a path."""
    if not text:
        return ()
    return tuple(Ordinal(part) for part in text.split(","))


def path_to_text(path: NodePath) -> str:
    return ",".join(str(label) for label in path)


class FiniteBTree:
    """An immutable finite B-tree given by its explicit node set."""

    __slots__ = ("_nodes", "_children", "_ranks")

    def __init__(self, nodes: Iterable[NodePath] = ()):
        node_set = frozenset(tuple(n) for n in nodes)
        if () in node_set:
            raise ValueError("the empty sequence cannot be a member")
        object.__setattr__(self, "_nodes", node_set)
        object.__setattr__(self, "_children", None)
        object.__setattr__(self, "_ranks", None)

    def __setattr__(self, name, value):
        raise AttributeError("FiniteBTree is immutable")

    @classmethod
    def closure(cls, paths: Iterable[NodePath]) -> "FiniteBTree":
        """The smallest B-tree containing the given paths."""
        nodes = set()
        for p in paths:
            p = tuple(p)
            for i in range(1, len(p) + 1):
                nodes.add(p[:i])
        return cls(nodes)

    # -- basic queries -----------------------------------------------------

    @property
    def nodes(self) -> FrozenSet[NodePath]:
        return self._nodes

    def __contains__(self, path: NodePath) -> bool:
        return tuple(path) in self._nodes

    def __len__(self) -> int:
        return len(self._nodes)

    def __iter__(self) -> Iterator[NodePath]:
        return iter(sorted(self._nodes))

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteBTree) and self._nodes == other._nodes

    def __hash__(self) -> int:
        return hash(self._nodes)

    def __repr__(self) -> str:
        return f"FiniteBTree({len(self._nodes)} nodes)"

    def validate(self) -> bool:
        """True iff the node set is closed under nonempty initial segments."""
        return all(t[:-1] in self._nodes for t in self._nodes if len(t) > 1)

    def _child_index(self) -> Dict[NodePath, List[Ordinal]]:
        if self._children is None:
            index: Dict[NodePath, List[Ordinal]] = {}
            for t in self._nodes:
                index.setdefault(t[:-1], []).append(t[-1])
            for labels in index.values():
                labels.sort()
            object.__setattr__(self, "_children", index)
        return self._children

    def children_labels(self, path: NodePath = ()) -> List[Ordinal]:
        """Sorted labels extending ``path`` by one step (``()`` = virtual root)."""
        return list(self._child_index().get(tuple(path), []))

    def roots(self) -> List[Ordinal]:
        return self.children_labels(())

    def is_max(self, path: NodePath) -> bool:
        path = tuple(path)
        if path not in self._nodes:
            raise ValueError(f"{path_to_text(path)} is not a member")
        return not self._child_index().get(path)

    def max_nodes(self) -> FrozenSet[NodePath]:
        index = self._child_index()
        return frozenset(t for t in self._nodes if not index.get(t))

    # -- derivative calculus ------------------------------------------------

    def derive(self) -> "FiniteBTree":
        return FiniteBTree(self._nodes - self.max_nodes())

    def _rank_index(self) -> Dict[NodePath, int]:
        # heights of strict-extension subtrees, computed bottom-up
        if self._ranks is None:
            index = self._child_index()
            ranks: Dict[NodePath, int] = {}
            for t in sorted(self._nodes, key=len, reverse=True):
                kids = index.get(t)
                ranks[t] = 1 + max(ranks[t + (c,)] for c in kids) if kids else 0
            object.__setattr__(self, "_ranks", ranks)
        return self._ranks

    def rank(self, path: NodePath) -> int:
        """The largest k such that ``path`` survives k derivations."""
        path = tuple(path)
        ranks = self._rank_index()
        if path not in ranks:
            raise ValueError(f"{path_to_text(path)} is not a member")
        return ranks[path]

    def order(self) -> int:
        """Least k with the k-th derivative empty."""
        if not self._nodes:
            return 0
        return 1 + max(self._rank_index().values())

    def order_by_derivation(self) -> int:
        """Same as ``order`` but by literally iterating ``derive``."""
        tree, steps = self, 0
        while tree._nodes:
            tree = tree.derive()
            steps += 1
        return steps

    # -- serialization -------------------------------------------------------

    def to_json(self) -> dict:
        return {"nodes": [[str(label) for label in t] for t in sorted(self._nodes)]}

    @classmethod
    def from_json(cls, data: Union[dict, str]) -> "FiniteBTree":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(tuple(Ordinal(label) for label in t) for t in data["nodes"])


def verify_monotone_map(
    source: FiniteBTree,
    target: FiniteBTree,
    func: Union[Callable[[NodePath], NodePath], Mapping[NodePath, NodePath]],
) -> bool:
    """Check that ``func`` maps source into target, strictly preserving extension.

    Strict prefixes must map to strict prefixes; checking parent/child pairs
    suffices by transitivity.
    """
    if isinstance(func, Mapping):
        mapping = func
        func = mapping.__getitem__
    images = {}
    for t in source.nodes:
        image = tuple(func(t))
        if image not in target:
            return False
        images[t] = image
    for t, image in images.items():
        if len(t) > 1:
            parent_image = images[t[:-1]]
            if not (len(parent_image) < len(image) and image[: len(parent_image)] == parent_image):
                return False
    return True
