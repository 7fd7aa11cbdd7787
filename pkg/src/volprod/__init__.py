"""volprod: volume products |K||(K-K)deg| of 2D/3D polytopes.

Computes Mahler-type volume products exactly at double precision,
mechanically certifies the planar lower bound 3/2 and the tetrahedrally
symmetric 3D lower bound 2/3 inequality by inequality, cross-checks every
exact volume against a seeded Monte-Carlo oracle, and searches for volume
product minimizers by simulated annealing.
"""

from .bodies import (
    PlaneBasis,
    central_section,
    difference_body,
    makai_floor,
    polar,
    project,
    steiner_symmetrize_2d,
    translate,
    volume_product,
)
from .certificates import (
    Certificate2D,
    Certificate3D,
    HexagonFrame,
    TOL_CERT,
    certify_plane,
    certify_space,
    chain_lower_bound,
    check_section_projection_duality,
    check_zang,
    detect_equality_2d,
    detect_equality_3d,
    inscribe_affine_hexagon,
    partition_3d,
    section_areas,
)
from .errors import (
    CertificateInvalid,
    DegenerateInput,
    EmptyRegion,
    GeometryError,
    NoConvergence,
    NotCentrallySymmetric,
    NotClosed,
    NotOnBoundary,
    NotSymmetric,
    OriginNotInterior,
    SingularMatrix,
    SymmetryViolation,
    UnboundedRegion,
    ZeroDirection,
)
from .geometry import (
    Halfspace,
    Polytope,
    TOL_GEOM,
    apply_linear,
    contains,
    convex_hull,
    dump_body,
    gauge,
    halfspace_to_vertex,
    load_body,
    support_point,
    support_value,
    vertex_to_halfspace,
    volume,
)
from .kernels import backend_name
from .oracle import OracleEstimate, mc_area_2d, mc_volume, mc_volume_polytope
from .search import SearchConfig, SearchReport, minimize_volume_product, random_body, santalo_point
from .symmetry import (
    SymmetryClass,
    classify_low_vertex_symmetric,
    is_tetrahedrally_symmetric,
    orbit_decomposition,
    symmetrize_orbit,
    tetrahedral_group,
)

__version__ = "0.1.0"
