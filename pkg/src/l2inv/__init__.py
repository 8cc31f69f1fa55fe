"""Exact L2-Betti numbers and von Neumann dimensions over group rings."""
from .alpha import (RationalInterval, alpha_enclosure, euler_phi, min_denominator_in_interval,
                    rationality_report)
from .complexes import (ChainComplex, Presentation, finite_cover_complex, laplacian,
                        presentation_complex, rescale_basis, torus_complex, validate)
from .dimension import (DimensionResult, QuotientTower, dim_ker_abelian, dim_ker_approx,
                        dim_ker_finite, dim_ker_sampled, dim_scaling_check, trace_moment_check)
from .errors import (GroupMismatchError, InvalidGroupError, L2InvError, ParseError, ShapeError,
                     UnsupportedGroupError)
from .groups import FiniteGroup, FinitelyGeneratedGroup, FreeAbelianGroup
from .invariants import (FinSet, atiyah_check, b0_check, euler_check, l2_betti, poincare_check,
                         zero_divisor_probe)
from .ring import (GroupRingElement, GroupRingMatrix, QuotientHom, gr_add, gr_mul, gr_star,
                   mat_adjoint, mat_mul, push_to_quotient, trace_gamma)

__version__ = "0.1.0"

__all__ = ["alpha_enclosure", "atiyah_check", "b0_check", "ChainComplex", "dim_ker_abelian",
           "dim_ker_approx", "dim_ker_finite", "dim_ker_sampled", "dim_scaling_check",
           "DimensionResult", "euler_check", "euler_phi", "finite_cover_complex", "FiniteGroup",
           "FinitelyGeneratedGroup", "FinSet", "FreeAbelianGroup", "gr_add", "gr_mul", "gr_star",
           "GroupMismatchError", "GroupRingElement", "GroupRingMatrix", "InvalidGroupError",
           "l2_betti", "L2InvError", "laplacian", "mat_adjoint", "mat_mul",
           "min_denominator_in_interval", "ParseError", "poincare_check", "Presentation",
           "presentation_complex", "push_to_quotient", "QuotientHom", "QuotientTower",
           "RationalInterval", "rationality_report", "rescale_basis", "ShapeError",
           "torus_complex", "trace_gamma", "trace_moment_check", "UnsupportedGroupError",
           "validate", "zero_divisor_probe"]
