"""Prefix-tree builders: Huffman (binary and B-ary), balanced, fixed-length.

All builders return a :class:`PrefixTree` whose nodes already carry their
branch codes.  Construction is deterministic: priority ties are broken by
the smallest cell id contained in a node's subtree, and for the binary
builder the first-extracted node becomes the left child.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Iterator, Optional

from .errors import DimensionError, ParameterError
from .grid import ProbabilityGrid

# Branch symbols; caps the supported arity at len(_SYMBOLS).
_SYMBOLS = "0123456789abcdefghijklmnopqrstuvwxyz"


class TreeNode:
    """Prefix-tree node. Leaf nodes carry a cell id (dummies carry none)."""

    __slots__ = ("children", "parent", "weight", "code", "cell_id", "min_id", "dummy")

    def __init__(self, weight: float, cell_id: Optional[int] = None, min_id: Optional[int] = None):
        self.children: list[TreeNode] = []
        self.parent: Optional[TreeNode] = None
        self.weight = weight
        self.code = ""
        self.cell_id = cell_id
        self.min_id = min_id if min_id is not None else cell_id
        self.dummy = False

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def __repr__(self):
        tag = f"cell={self.cell_id}" if self.is_leaf else f"{len(self.children)} children"
        return f"TreeNode(code={self.code!r}, weight={self.weight}, {tag})"


@dataclass(frozen=True)
class PrefixTree:
    """A prefix tree with derived codes.

    ``rl`` is the reference length: the tree depth in symbols, which equals
    the maximum leaf-code length (defined as 1 for a single-cell grid so
    indexes never have zero width).  ``leaf_order`` lists non-dummy leaves
    left to right; ``merge_order`` lists internal nodes in creation order.
    """

    root: TreeNode
    arity: int
    rl: int
    leaf_order: tuple[TreeNode, ...]
    merge_order: tuple[TreeNode, ...]

    @property
    def n(self) -> int:
        return len(self.leaf_order)

    def iter_nodes(self) -> Iterator[TreeNode]:
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))


def _derive_codes(root: TreeNode):
    root.code = ""
    stack = [root]
    while stack:
        node = stack.pop()
        for i, child in enumerate(node.children):
            child.code = node.code + _SYMBOLS[i]
            stack.append(child)


def derive_node_codes(tree: PrefixTree) -> PrefixTree:
    """(Re)assign codes from the topology: root '' plus branch symbols."""
    _derive_codes(tree.root)
    return tree


def _finish(root: TreeNode, arity: int, merge_order: list[TreeNode]) -> PrefixTree:
    _derive_codes(root)
    leaves: list[TreeNode] = []
    stack = [root]
    while stack:
        node = stack.pop()
        if node.is_leaf:
            if not node.dummy:
                leaves.append(node)
        else:
            stack.extend(reversed(node.children))
    rl = max(1, max((len(leaf.code) for leaf in leaves), default=0))
    return PrefixTree(
        root=root,
        arity=arity,
        rl=rl,
        leaf_order=tuple(leaves),
        merge_order=tuple(merge_order),
    )


def _leaf_nodes(grid: ProbabilityGrid) -> list[TreeNode]:
    if grid.n < 1:
        raise DimensionError("grid has no cells")
    return [TreeNode(w, cell_id=c.id) for c, w in zip(grid.cells, grid.weights)]


def build_huffman_tree(grid: ProbabilityGrid) -> PrefixTree:
    """Binary Huffman tree: repeatedly merge the two lightest nodes.

    The heap is keyed by (weight, smallest contained cell id), which makes
    the construction reproducible; the first-extracted node becomes the
    left child.
    """
    nodes = _leaf_nodes(grid)
    if len(nodes) == 1:
        return _finish(nodes[0], 2, [])
    heap = [(node.weight, node.min_id, i, node) for i, node in enumerate(nodes)]
    seq = len(nodes)
    heapq.heapify(heap)
    merge_order = []
    while len(heap) > 1:
        _, _, _, left = heapq.heappop(heap)
        _, _, _, right = heapq.heappop(heap)
        parent = TreeNode(left.weight + right.weight, min_id=min(left.min_id, right.min_id))
        parent.children = [left, right]
        left.parent = right.parent = parent
        merge_order.append(parent)
        heapq.heappush(heap, (parent.weight, parent.min_id, seq, parent))
        seq += 1
    return _finish(heap[0][3], 2, merge_order)


def build_bary_huffman_tree(grid: ProbabilityGrid, b: int) -> PrefixTree:
    """B-ary Huffman tree: merge the B lightest nodes at each stage.

    When (n-1) mod (B-1) != 0, zero-weight dummy leaves are added so the
    final merge is full; dummies never receive cell ids and are excluded
    from the leaf order.  For B=2 this is exactly the binary builder.
    Children of a merge are ordered by their smallest contained cell id,
    dummies last.
    """
    if grid.n < 1:
        raise DimensionError("grid has no cells")
    if b < 2 or b > max(2, grid.n):
        raise ParameterError(f"arity must be in [2, {max(2, grid.n)}], got {b}")
    if b > len(_SYMBOLS):
        raise ParameterError(f"arity above {len(_SYMBOLS)} is not supported")
    if b == 2:
        return build_huffman_tree(grid)
    nodes = _leaf_nodes(grid)
    if len(nodes) == 1:
        return _finish(nodes[0], b, [])
    n_dummies = 0
    if (grid.n - 1) % (b - 1):
        n_dummies = (b - 1) - (grid.n - 1) % (b - 1)
    for k in range(n_dummies):
        dummy = TreeNode(0.0, min_id=grid.n + k)
        dummy.dummy = True
        nodes.append(dummy)
    heap = [(node.weight, node.min_id, i, node) for i, node in enumerate(nodes)]
    seq = len(nodes)
    heapq.heapify(heap)
    merge_order = []
    while len(heap) > 1:
        group = [heapq.heappop(heap)[3] for _ in range(b)]
        group.sort(key=lambda nd: nd.min_id)
        parent = TreeNode(
            math.fsum(nd.weight for nd in group),
            min_id=min(nd.min_id for nd in group),
        )
        parent.children = group
        for nd in group:
            nd.parent = parent
        merge_order.append(parent)
        heapq.heappush(heap, (parent.weight, parent.min_id, seq, parent))
        seq += 1
    return _finish(heap[0][3], b, merge_order)


def build_balanced_tree(grid: ProbabilityGrid) -> PrefixTree:
    """Balanced baseline: ascending-sorted leaves paired FIFO until one root.

    Each step pairs the front elements of the queue and appends the parents
    behind any unpaired leftover, yielding depth ceil(log2 n) for every
    leaf count.
    """
    nodes = _leaf_nodes(grid)
    if len(nodes) == 1:
        return _finish(nodes[0], 2, [])
    queue = sorted(nodes, key=lambda nd: (nd.weight, nd.min_id))
    merge_order = []
    while len(queue) > 1:
        pairs = len(queue) // 2
        leftover = queue[2 * pairs:]
        parents = []
        for i in range(pairs):
            left, right = queue[2 * i], queue[2 * i + 1]
            parent = TreeNode(left.weight + right.weight, min_id=min(left.min_id, right.min_id))
            parent.children = [left, right]
            left.parent = right.parent = parent
            merge_order.append(parent)
            parents.append(parent)
        queue = leftover + parents
    return _finish(queue[0], 2, merge_order)


def build_fixed_length_tree(grid: ProbabilityGrid) -> PrefixTree:
    """Fixed-length baseline: distinct ceil(log2 n)-bit codes in cell-id order."""
    if grid.n < 1:
        raise DimensionError("grid has no cells")
    if grid.n == 1:
        return _finish(_leaf_nodes(grid)[0], 2, [])
    width = fixed_code_width(grid.n)
    leaves = _leaf_nodes(grid)

    def build(prefix: int, depth: int) -> Optional[TreeNode]:
        lo = prefix << (width - depth)
        hi = min(grid.n, (prefix + 1) << (width - depth))
        if lo >= hi:
            return None
        if depth == width:
            return leaves[lo]
        node = TreeNode(0.0, min_id=lo)
        for branch in (0, 1):
            child = build(prefix * 2 + branch, depth + 1)
            if child is not None:
                child.parent = node
                node.children.append(child)
        node.weight = math.fsum(c.weight for c in node.children)
        return node

    return _finish(build(0, 0), 2, [])


def fixed_code_width(n: int) -> int:
    """Width of the fixed-length encoding: ceil(log2 n), at least 1."""
    if n < 1:
        raise DimensionError("n must be >= 1")
    return max(1, (n - 1).bit_length())


def average_code_length(tree: PrefixTree, grid: ProbabilityGrid) -> float:
    """Probability-weighted mean leaf-code length, in symbols."""
    total = math.fsum(grid.weights)
    if tree.n == 1:
        return 1.0
    by_cell = {leaf.cell_id: len(leaf.code) for leaf in tree.leaf_order}
    return math.fsum(w / total * by_cell[c.id] for c, w in zip(grid.cells, grid.weights))


def kraft_sum(tree: PrefixTree) -> float:
    """Kraft feasibility sum over non-dummy leaves: sum B^-len(code)."""
    return math.fsum(tree.arity ** -len(leaf.code) for leaf in tree.leaf_order)


def tree_to_json(tree: PrefixTree) -> dict:
    """Nested node mapping: {code, weight, cellId?, children:[...]}."""
    out: dict[int, dict] = {}
    order = list(tree.iter_nodes())
    for node in reversed(order):
        obj = {"code": node.code, "weight": node.weight}
        if node.cell_id is not None:
            obj["cellId"] = node.cell_id
        obj["children"] = [out[id(c)] for c in node.children]
        out[id(node)] = obj
    return out[id(tree.root)]
