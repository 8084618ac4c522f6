"""Estimation-of-distribution algorithms with doubly stochastic matrix models."""

from .dsm import (
    DoublyStochasticMatrix,
    LearningConfig,
    learn_exact,
    learn_smoothed,
    uniform_dsm,
    validate_dsm,
)
from .eda import EdaConfig, EdaRunRecord, run_eda, select_truncation, uniform_random_permutation
from .perm import (
    Permutation,
    PermutationMatrix,
    argsort_vector,
    compose,
    from_matrix,
    inverse,
    rank_vector,
    to_matrix,
)
from .qap import QapInstance, evaluate, load_instance, parse_qaplib, relative_deviation
from .sampling import (
    BirkhoffDecomposition,
    algebraic_round,
    birkhoff_decompose,
    hopcroft_karp,
    pmf_oracle,
    rng_stream,
    sample_as,
    sample_gs,
    sample_ps,
    sample_ps_batch,
)

__version__ = "0.1.0"
