"""Exact tree-shape densities, parametric models and sampling polytopes.

Shapes are canonical strings such as ``"((*,*),(*,(*,*)))"``. Every
probability is a ``fractions.Fraction``; rational arguments accept
``Fraction``, ``int`` or ``"p/q"`` text.
"""

from ._treepoly import (
    beta_distribution,
    beta_rule,
    canonical,
    claim_ids,
    count_pattern,
    density_row,
    derive_lower_rule,
    in_convex_hull,
    labeling_count,
    marginalize,
    multinomial_distribution,
    sampling_polytope,
    shape_count,
    shape_name,
    shapes,
    verify,
)

__all__ = [
    "beta_distribution",
    "beta_rule",
    "canonical",
    "claim_ids",
    "count_pattern",
    "density_row",
    "derive_lower_rule",
    "in_convex_hull",
    "labeling_count",
    "marginalize",
    "multinomial_distribution",
    "sampling_polytope",
    "shape_count",
    "shape_name",
    "shapes",
    "verify",
]
