"""Structured low-rank approximation by dual ascent."""

from ._slra import (
    DomainError,
    NumericalError,
    ShapeError,
    esprit,
    f_alpha,
    gen_cos_sum,
    hankel_from_vector,
    hankel_project,
    numerical_rank,
    sample_model_json,
    singular_values,
    solve,
    toy,
    vector_from_hankel,
)

__all__ = [
    "DomainError",
    "NumericalError",
    "ShapeError",
    "esprit",
    "f_alpha",
    "gen_cos_sum",
    "hankel_from_vector",
    "hankel_project",
    "numerical_rank",
    "sample_model_json",
    "singular_values",
    "solve",
    "toy",
    "vector_from_hankel",
]
