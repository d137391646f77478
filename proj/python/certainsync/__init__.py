"""Rateless set reconciliation with guaranteed listing.

The heavy lifting lives in the compiled ``_core`` module; this package just
re-exports its public names.
"""

from ._core import (  # noqa: F401
    ChunkLimitExceeded,
    ConfigError,
    ConstructionSpec,
    DiffSizeUnsupported,
    ElementOutOfUniverse,
    Error,
    ExhaustedBeforeDecode,
    Family,
    RoundLimitExceeded,
    chunk_count_limit,
    chunk_schedule,
    decodability_profile,
    default_ols_order,
    digest,
    expected_collisions,
    experiment_csv,
    family_name,
    gen_general_scenario,
    gen_superset_scenario,
    materialize_rows,
    max_diff_size,
    reconcile,
    reduced_universe_size,
    rows_for_element,
    run_experiment,
    smallest_prime_count,
    stopping_distance,
    universe_reduce,
)

__all__ = [
    "ChunkLimitExceeded",
    "ConfigError",
    "ConstructionSpec",
    "DiffSizeUnsupported",
    "ElementOutOfUniverse",
    "Error",
    "ExhaustedBeforeDecode",
    "Family",
    "RoundLimitExceeded",
    "chunk_count_limit",
    "chunk_schedule",
    "decodability_profile",
    "default_ols_order",
    "digest",
    "expected_collisions",
    "experiment_csv",
    "family_name",
    "gen_general_scenario",
    "gen_superset_scenario",
    "materialize_rows",
    "max_diff_size",
    "reconcile",
    "reduced_universe_size",
    "rows_for_element",
    "run_experiment",
    "smallest_prime_count",
    "stopping_distance",
    "universe_reduce",
]
