"""Linking numbers, Biot-Savart and Green's operators on R^3, S^3 and H^3."""

from .curves import (Curve, CurveSamples, circle_r3, curve_from_dict, embed_r3_curve, embedded_pair, great_circle,
                     hopf_pair_r3, hopf_pair_s3, load_curve, polygonal, random_embedded_pair, sample, save_curve,
                     torus_curve_r3, torus_link_r3, validate)
from .errors import (CurvelinkError, DegenerateProjectionError, DimensionError, DomainError, PreconditionError,
                     SingularityError)
from .fields import (CenteredGrid, VolumeGrid, bs_line, bs_line_field, bs_volume, bs_volume_field, circulation,
                     electric_field, electric_field_fn, fd_curl, fd_div, fd_grad, green_lt_field, green_lt_s3,
                     green_pt_field, key_lemma_residual, maxwell_residual, scalar_green, volume_grid)
from .kernels import (ChainId, KernelId, Radial, chain_residual, kernel_derivs, kernel_eval, kernel_grad_y,
                      radial_laplacian, s3_average)
from .linking import LinkFormat, LinkResult, QuadConfig, integrand, linking_integral, linking_number
from .oracle import crossing_linking, oracle_linking
from .space import (Isometry, Space, cross, distance, exp_map, inner, left_invariant_field, parallel_transport,
                    project_to_tangent, random_isometry, right_invariant_field, triple_product)

__version__ = "0.1.0"

__all__ = [
    "Curve",
    "CurveSamples",
    "circle_r3",
    "curve_from_dict",
    "embed_r3_curve",
    "embedded_pair",
    "great_circle",
    "hopf_pair_r3",
    "hopf_pair_s3",
    "load_curve",
    "polygonal",
    "random_embedded_pair",
    "sample",
    "save_curve",
    "torus_curve_r3",
    "torus_link_r3",
    "validate",
    "CurvelinkError",
    "DegenerateProjectionError",
    "DimensionError",
    "DomainError",
    "PreconditionError",
    "SingularityError",
    "CenteredGrid",
    "VolumeGrid",
    "bs_line",
    "bs_line_field",
    "bs_volume",
    "bs_volume_field",
    "circulation",
    "electric_field",
    "electric_field_fn",
    "fd_curl",
    "fd_div",
    "fd_grad",
    "green_lt_field",
    "green_lt_s3",
    "green_pt_field",
    "key_lemma_residual",
    "maxwell_residual",
    "scalar_green",
    "volume_grid",
    "ChainId",
    "KernelId",
    "Radial",
    "chain_residual",
    "kernel_derivs",
    "kernel_eval",
    "kernel_grad_y",
    "radial_laplacian",
    "s3_average",
    "LinkFormat",
    "LinkResult",
    "QuadConfig",
    "integrand",
    "linking_integral",
    "linking_number",
    "crossing_linking",
    "oracle_linking",
    "Isometry",
    "Space",
    "cross",
    "distance",
    "exp_map",
    "inner",
    "left_invariant_field",
    "parallel_transport",
    "project_to_tangent",
    "random_isometry",
    "right_invariant_field",
    "triple_product",
]
