"""Padded artifacts derived from a prefix tree: cell indexes and coding tree.

Two artifacts are produced from the same tree.  Cell *indexes* are leaf
codes right-padded with zeros to the reference length; they identify cells
and are what users encrypt.  The *coding tree* star-pads every node's code
to the same width; its codewords drive token minimization.

For arities above two, each symbol is additionally expanded to a B-bit
group: symbol i becomes the group with bit i+1 set and stars elsewhere,
star symbols become all-star groups, and padding zeros become all-zero
groups.  Indexes finally replace the remaining stars with zeros.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import ParameterError
from .grid import ProbabilityGrid
from .trees import _SYMBOLS, PrefixTree, TreeNode, build_fixed_length_tree


@dataclass(frozen=True)
class CellIndexMap:
    """Bijection cell id <-> fixed-width index string."""

    entries: dict[int, str]
    width: int

    def __post_init__(self):
        if any(len(ix) != self.width for ix in self.entries.values()):
            raise ParameterError("all indexes must share the same width")
        if len(set(self.entries.values())) != len(self.entries):
            raise ParameterError("indexes must be distinct per cell")

    def index_of(self, cell_id: int) -> str:
        return self.entries[cell_id]

    def items(self):
        return sorted(self.entries.items())


@dataclass(frozen=True)
class CodingTree:
    """Star-padded (and, for B>2, expanded) codewords with leaf bookkeeping.

    ``leaf_order`` lists leaf codewords left to right and ``leaf_cells``
    the cell id at each position.  ``parent_leaf_counts`` maps each
    internal node's codeword to its count of non-dummy descendant leaves.
    Symbol-level variants back the minimization for expanded arities.
    """

    width: int
    arity: int
    rl: int
    leaf_order: tuple[str, ...]
    leaf_cells: tuple[int, ...]
    parent_leaf_counts: dict[str, int]
    symbol_leaf_order: tuple[str, ...]
    symbol_parent_counts: dict[str, int]
    index_by_string: dict[str, int] = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.leaf_order)

    def index_of_leaf(self, position: int) -> str:
        """Reconstruct the cell index from the leaf codeword at ``position``."""
        return codeword_to_index(self.leaf_order[position], self.width)


def codeword_to_index(codeword: str, width: int) -> str:
    """Strip trailing star padding, re-pad with zeros, zero residual stars."""
    return codeword.rstrip("*").ljust(width, "0").replace("*", "0")


def expand_bary(symbol_string: str, b: int, padding_mask: Optional[Sequence[bool]] = None) -> str:
    """Expand each symbol of a B-ary string to a B-bit group.

    Symbol i maps to the group with the (i+1)-th bit set to '1' and stars
    elsewhere; '*' maps to an all-star group; positions flagged in
    ``padding_mask`` (zeros produced by index padding) map to all-zero
    groups.
    """
    if b < 2:
        raise ParameterError("arity must be >= 2")
    if padding_mask is not None and len(padding_mask) != len(symbol_string):
        raise ParameterError("padding mask length must match the string")
    groups = []
    for pos, ch in enumerate(symbol_string):
        if padding_mask is not None and padding_mask[pos]:
            if ch != "0":
                raise ParameterError("only '0' symbols can be padding")
            groups.append("0" * b)
            continue
        if ch == "*":
            groups.append("*" * b)
            continue
        value = _SYMBOLS.find(ch)
        if value < 0 or value >= b:
            raise ParameterError(f"symbol {ch!r} outside alphabet of size {b}")
        groups.append("*" * value + "1" + "*" * (b - 1 - value))
    return "".join(groups)


def make_cell_indexes(tree: PrefixTree) -> CellIndexMap:
    """Zero-pad every leaf code to the reference length, keyed by cell id."""
    entries = {}
    for leaf in tree.leaf_order:
        code = leaf.code if tree.n > 1 else "0"
        padded = code.ljust(tree.rl, "0")
        if tree.arity == 2:
            entries[leaf.cell_id] = padded
        else:
            mask = [False] * len(code) + [True] * (tree.rl - len(code))
            entries[leaf.cell_id] = expand_bary(padded, tree.arity, mask).replace("*", "0")
    width = tree.rl if tree.arity == 2 else tree.rl * tree.arity
    return CellIndexMap(entries=entries, width=width)


def _leaf_counts(tree: PrefixTree) -> dict[int, int]:
    counts: dict[int, int] = {}
    order = list(tree.iter_nodes())
    for node in reversed(order):
        if node.is_leaf:
            counts[id(node)] = 0 if node.dummy else 1
        else:
            counts[id(node)] = sum(counts[id(c)] for c in node.children)
    return counts


def make_coding_tree(tree: PrefixTree) -> CodingTree:
    """Star-pad all node codes to the reference length (expanding for B>2)."""
    counts = _leaf_counts(tree)

    def symbol_codeword(node: TreeNode) -> str:
        if tree.n == 1 and node.is_leaf:
            return "0" if tree.arity == 2 else "*" * tree.rl
        return node.code.ljust(tree.rl, "*")

    def final(codeword: str) -> str:
        if tree.arity == 2:
            return codeword
        return expand_bary(codeword, tree.arity)

    symbol_parent_counts = {}
    for node in tree.iter_nodes():
        if not node.is_leaf:
            symbol_parent_counts[symbol_codeword(node)] = counts[id(node)]
    if tree.n == 1:
        # Single-node tree: the root doubles as the only (countable) parent.
        symbol_parent_counts = {symbol_codeword(tree.root): 1}

    symbol_leaf_order = tuple(symbol_codeword(leaf) for leaf in tree.leaf_order)
    leaf_order = tuple(final(cw) for cw in symbol_leaf_order)
    parent_leaf_counts = {final(cw): c for cw, c in symbol_parent_counts.items()}
    width = tree.rl if tree.arity == 2 else tree.rl * tree.arity
    index_by_string = {codeword_to_index(cw, width): pos for pos, cw in enumerate(leaf_order)}
    return CodingTree(
        width=width,
        arity=tree.arity,
        rl=tree.rl,
        leaf_order=leaf_order,
        leaf_cells=tuple(leaf.cell_id for leaf in tree.leaf_order),
        parent_leaf_counts=parent_leaf_counts,
        symbol_leaf_order=symbol_leaf_order,
        symbol_parent_counts=symbol_parent_counts,
        index_by_string=index_by_string,
    )


def build_fixed_length(grid: ProbabilityGrid) -> tuple[PrefixTree, CellIndexMap]:
    """Fixed-length encoding: ceil(log2 n)-bit codes assigned in id order."""
    tree = build_fixed_length_tree(grid)
    return tree, make_cell_indexes(tree)


def index_refinement_pattern(tree: PrefixTree, cell_id: int) -> str:
    """Pattern whose star positions may later subdivide the cell.

    Expanded codes leave star bits inside each symbol group; a cell can be
    split into up to 2^(stars) finer cells by enumerating those bits while
    keeping the symbol markers and padding zeros, so existing indexes,
    tokens, and the coding tree stay valid.  Unexpanded binary indexes
    have no free bits (refinement is a feature of the expanded alphabet).
    """
    leaf = next((lf for lf in tree.leaf_order if lf.cell_id == cell_id), None)
    if leaf is None:
        raise ParameterError(f"no cell {cell_id} in the tree")
    code = leaf.code if tree.n > 1 else "0"
    padded = code.ljust(tree.rl, "0")
    if tree.arity == 2:
        return padded
    mask = [False] * len(code) + [True] * (tree.rl - len(code))
    return expand_bary(padded, tree.arity, mask)


def validate_refined_indexes(pattern: str, refined: Sequence[str]) -> None:
    """Check that refined indexes stay under the original placeholder.

    Each refined index must be a distinct binary string that agrees with
    ``pattern`` on every non-star position; at most 2^(stars) fit.

    The check is membership only.  The free star bits inside a symbol
    group coincide with sibling symbols' marker positions, so a refined
    index that sets them can additionally satisfy single-symbol tokens of
    sibling subtrees; callers refining a live grid must reissue such
    tokens with their zero bits made explicit.
    """
    capacity = 2 ** pattern.count("*")
    if not refined:
        raise ParameterError("no refined indexes given")
    if len(refined) > capacity:
        raise ParameterError(f"pattern admits only {capacity} refined indexes")
    if len(set(refined)) != len(refined):
        raise ParameterError("refined indexes must be distinct")
    for ix in refined:
        if len(ix) != len(pattern):
            raise ParameterError(f"refined index {ix!r} has wrong width")
        if any(ch not in "01" for ch in ix):
            raise ParameterError(f"refined index {ix!r} must be binary")
        for p, i in zip(pattern, ix):
            if p != "*" and p != i:
                raise ParameterError(
                    f"refined index {ix!r} leaves the placeholder of {pattern!r}"
                )


def coding_tree_to_json(tree: PrefixTree) -> dict:
    """Tree JSON augmented with padded codewords and descendant-leaf counts."""
    counts = _leaf_counts(tree)
    coding = make_coding_tree(tree)

    def codeword(node: TreeNode) -> str:
        if tree.n == 1 and node.is_leaf:
            return coding.leaf_order[0]
        cw = node.code.ljust(tree.rl, "*")
        return cw if tree.arity == 2 else expand_bary(cw, tree.arity)

    out: dict[int, dict] = {}
    order = list(tree.iter_nodes())
    for node in reversed(order):
        obj = {
            "code": node.code,
            "weight": node.weight,
            "codeword": codeword(node),
            "leafCount": counts[id(node)],
        }
        if node.cell_id is not None:
            obj["cellId"] = node.cell_id
        obj["children"] = [out[id(c)] for c in node.children]
        out[id(node)] = obj
    return out[id(tree.root)]


def index_map_to_csv(index_map: CellIndexMap) -> str:
    lines = ["cell_id,index"]
    lines += [f"{cid},{ix}" for cid, ix in index_map.items()]
    return "\n".join(lines) + "\n"
