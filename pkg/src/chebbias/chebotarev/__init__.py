"""Frobenius-class sources, exact counting series, and bias checks."""

from .frobenius import FrobeniusRecord, SplitData, per_prime_induction_identity, split_prime
from .linnik import LinnikInputs, linnik_bound
from .primes import default_checkpoints, int_nth_root, primes_upto
from .series import (
    ChebotarevAccumulator,
    CountingSeries,
    counting_series,
    counting_series_from_records,
    inclusion_exclusion_check,
    leading_term,
    telescoping_check,
)
from .sources import QuarticSource, SyntheticSource, factorization_pattern

__all__ = [
    "ChebotarevAccumulator",
    "CountingSeries",
    "FrobeniusRecord",
    "LinnikInputs",
    "QuarticSource",
    "SplitData",
    "SyntheticSource",
    "counting_series",
    "counting_series_from_records",
    "default_checkpoints",
    "factorization_pattern",
    "inclusion_exclusion_check",
    "int_nth_root",
    "leading_term",
    "linnik_bound",
    "per_prime_induction_identity",
    "primes_upto",
    "split_prime",
    "telescoping_check",
]
