"""Linear systems of hypersurfaces through general fat points in projective space."""
from .baselocus import base_locus, check_conditions, strict_transform, tilde
from .cohomology import (
    CohomologyTable,
    Regime,
    RegimeTag,
    chi_tilde,
    classify_regime,
    cohomology_table,
    reconstruct_h0,
    recursion_check,
)
from .cremona import cr_divisor, cremona_apply, cremona_reduce, is_valid_move
from .dimension import dimension_report, l_tail, ldim, lexpdim, vdim
from .lattice import LinearSystemSpec, PicardClass, parse_mult_spec
from .oracle import OracleConfig, containment_multiplicity, h0_interpolation, star_points
from .star import StarSpec, star_h0_formula, star_h0_oracle

__version__ = "0.1.0"
