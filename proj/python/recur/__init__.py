"""Recurrence rates, pressure and dimension for expanding Markov maps."""

from ._recur import (  # noqa: F401
    RecurError,
    ae_experiment,
    bowen_dimension,
    construct,
    dimension_ladder,
    ell_sequence,
    exit_code,
    lemma_trials,
    pressure,
    pressure_with_holes,
    repetition_times,
    sandwich,
)
