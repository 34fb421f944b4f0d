"""Ciphertext-width overhead bounds and diagnostics for built trees.

Variable-length encoding pays for its shorter tokens with wider
ciphertexts: every index is padded to the tree depth.  The operations
here bound that extra width and evaluate the expected-overhead estimate,
for validating trees produced by the builders.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .errors import ParameterError
from .grid import ProbabilityGrid
from .trees import PrefixTree

GOLDEN_RATIO = (1 + math.sqrt(5)) / 2
EULER_MASCHERONI = 0.5772156649015329


def ceil_log(n: int, base: int) -> int:
    """Smallest k with base**k >= n, computed exactly."""
    if n < 1 or base < 2:
        raise ParameterError("need n >= 1 and base >= 2")
    k, power = 0, 1
    while power < n:
        power *= base
        k += 1
    return k


def depth_upper_bound(n: int, b: int) -> int:
    """Maximum possible B-ary Huffman depth: ceil((n-1)/(B-1)) merges."""
    if n < 1 or b < 2:
        raise ParameterError("need n >= 1 and B >= 2")
    return -((n - 1) // -(b - 1))


def golden_ratio_bound(p_min: float) -> float:
    """Depth bound log_phi(1/p) for the leaf with normalized probability p."""
    if not 0 < p_min <= 1:
        raise ParameterError("p_min must lie in (0, 1]")
    return math.log(1 / p_min) / math.log(GOLDEN_RATIO)


def fixed_width_symbols(n: int, b: int) -> int:
    """Symbols a fixed-length B-ary code needs: ceil(log_B n), at least 1."""
    return max(1, ceil_log(n, b))


def le_overhead(tree: PrefixTree, b: int) -> int:
    """Extra ciphertext bits of the tree vs fixed-length coding.

    Binary trees cost RL - ceil(log2 n) bits; B-ary trees pay the same
    difference at B bits per symbol after expansion.
    """
    if b != tree.arity:
        raise ParameterError(f"tree has arity {tree.arity}, not {b}")
    diff = tree.rl - fixed_width_symbols(tree.n, b)
    return diff if b == 2 else b * diff


def expected_le_estimate(n: int) -> float:
    """Exact evaluation of the expected-overhead upper-bound sum."""
    if n < 2:
        raise ParameterError("n must be >= 2")
    s_ratio = math.fsum(i * (n - 1) / (i - 1) for i in range(2, n + 1))
    s_linear = sum(range(2, n + 1))
    s_log = sum(i * ceil_log(n, i) for i in range(2, n + 1))
    return (s_ratio + s_linear - s_log) / (n - 1)


def expected_le_approximation(n: int) -> float:
    """Harmonic-number approximation of the same bound, for cross-checking.

    Uses sum_{i=2..n} i/(i-1) = (n-1) + H_{n-1} with the asymptotic
    expansion H_k ~ ln k + gamma + 1/(2k), and the closed form
    sum_{i=2..n} i = (n^2+n-2)/2.
    """
    if n < 2:
        raise ParameterError("n must be >= 2")
    harmonic = math.log(n - 1) + EULER_MASCHERONI + 1 / (2 * (n - 1))
    s_ratio = (n - 1) * (n - 1 + harmonic)
    s_linear = (n * n + n - 2) / 2
    s_log = sum(i * ceil_log(n, i) for i in range(2, n + 1))
    return (s_ratio + s_linear - s_log) / (n - 1)


@dataclass(frozen=True)
class OverheadReport:
    n: int
    b: int
    rl: int
    fixed_width: int
    l_e: int
    depth_bound: int
    golden_bound: float


def build_overhead_report(tree: PrefixTree, grid: ProbabilityGrid) -> OverheadReport:
    """Summarize a built tree against the depth and width bounds."""
    total = math.fsum(grid.weights)
    p_min = min(w for w in grid.weights if w > 0) / total
    return OverheadReport(
        n=tree.n,
        b=tree.arity,
        rl=tree.rl,
        fixed_width=fixed_width_symbols(tree.n, tree.arity),
        l_e=le_overhead(tree, tree.arity),
        depth_bound=depth_upper_bound(tree.n, tree.arity),
        golden_bound=golden_ratio_bound(p_min),
    )


def report_to_json(report: OverheadReport) -> dict:
    return asdict(report)
