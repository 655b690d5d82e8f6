"""Sequential products on finite-dimensional quantum effects."""

from .effects import (
    Density,
    Effect,
    Projection,
    complement,
    partial_add,
    random_commuting_pair,
    random_density,
    random_effect,
    random_orthogonal_pair,
    random_summable_pair,
    validate_density,
    validate_effect,
    validate_projection,
)
from .equivalence import EquivalenceWitness, build_witness, verify_witness
from .matrix_core import SpectralDecomposition, apply_function, eig_hermitian, hermitize
from .properties import PropertyReport, PropertyResult, run_suite, run_theorem1_suite
from .sequential import (
    PhaseFamily,
    SeqProduct,
    luders_apply,
    parse_family,
    parse_product,
    phase_eval,
    post_state,
    seq_family,
    seq_standard,
    seq_twisted,
    sequential_prob_identity,
    sqrt_effect,
)

__version__ = "0.1.0"
