"""Exact rational computations for Browder cooperations of n-fold suspensions."""

from .browder import (CoalgebraDatum, delta2, from_product_model, kappa, make_datum, obstruction_report,
                      sigma3_cp2_datum, sphere_datum, validate, wedge_pinch_datum)
from .equivariant import (FiniteGroup, FreeLieAction, GroupAction, check_equivariance, free_lie_action,
                          invariant_subalgebra, invariants, invariants_commute_with_homology, swap_action)
from .forms_oracle import PolyForms, abelian_mc_homotopy, apl_forms, mc_simplices_abelian
from .freelie import (FreeGradedLie, LieElement, LieMorphism, canonical_form, extend_morphism,
                      free_product, lcs_quotient)
from .linfty import (LInftyAlgebra, bch, check_all, check_generalized_jacobi, is_maurer_cartan,
                     mc_homotopy_groups, twist)
from .mapmodel import CDGA, TensorLie, cohomology_sphere_cdga, hofixed_homotopy_groups, tensor_model
from .qlinalg import ChainComplex, GradedVectorSpace, QMatrix, homology, homology_dims, kernel_image

__version__ = "0.1.0"
