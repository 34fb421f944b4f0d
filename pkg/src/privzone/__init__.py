"""Privacy-preserving location alert zones with probability-aware encoding.

Cells of a map grid are encoded with variable-length prefix codes tuned to
per-cell alert likelihoods; alert-zone search tokens are minimized over
the resulting coding tree, and their cost is measured in bilinear-pairing
operations through a functionally faithful (but insecure) mock of the
hidden-vector-encryption scheme.
"""

from .errors import (
    ConfigError,
    CsvParseError,
    DegenerateInputError,
    DimensionError,
    DuplicateCellError,
    ParameterError,
    PrivzoneError,
    UnknownIndexError,
)
from .grid import (
    AlertZone,
    Cell,
    ProbabilityGrid,
    generate_sigmoid_probabilities,
    grid_from_json,
    grid_to_json,
    load_probabilities_csv,
    make_grid,
    normalize,
    poisson_alert_pmf,
    sample_alert_zone,
    sigmoid,
)
from .trees import (
    PrefixTree,
    TreeNode,
    average_code_length,
    build_balanced_tree,
    build_bary_huffman_tree,
    build_fixed_length_tree,
    build_huffman_tree,
    derive_node_codes,
    fixed_code_width,
    kraft_sum,
    tree_to_json,
)
from .encoding import (
    CellIndexMap,
    CodingTree,
    build_fixed_length,
    coding_tree_to_json,
    codeword_to_index,
    expand_bary,
    index_map_to_csv,
    index_refinement_pattern,
    make_cell_indexes,
    make_coding_tree,
    validate_refined_indexes,
)
from .tokens import (
    TokenSet,
    coverage_oracle,
    fixed_length_minimize,
    index_to_codeword,
    minimize_tokens,
    pairing_cost,
    token_matches,
)

__version__ = "0.1.0"
