from ._core import (
    Morphism,
    PreconditionError,
    __version__,
    distinct_squares,
    find_power,
    k_abelian_eq,
    lyndon_factorize,
    random_long_word,
    search,
    surviving_squares,
    verify,
)

__all__ = [
    "Morphism",
    "PreconditionError",
    "__version__",
    "distinct_squares",
    "find_power",
    "k_abelian_eq",
    "lyndon_factorize",
    "random_long_word",
    "search",
    "surviving_squares",
    "verify",
]
