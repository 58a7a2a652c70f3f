"""Exact computations relating rank-d bundles on a graph-modeled base to
degree-d covers: Cartan algebra subbundles of End(E), spectral covers and
their line bundles, factorization of covers through block systems, and
parabolic pushforwards along ramified covers of curves.

Everything is exact (rationals or GF(p)); there is no floating point in
the package.
"""

__version__ = "0.1.0"

from .bundles import (
    BaseGraph,
    BundleRep,
    FlatSectionSpace,
    SubalgebraBundle,
    bundle_iso_check,
    end_bundle,
    flat_sections,
    flat_sections_dim,
    validate_bundle,
    validate_cartan_bundle,
)
from .cartan import (
    CartanStatus,
    CartanVerdict,
    EigenlineSet,
    classify_subspace,
    conjugate_subspace,
    simultaneous_eigenlines,
)
from .covers import (
    CoverRep,
    CoverReport,
    LineBundleOnCover,
    build_spectral_cover,
    canonical_algebra_map,
    cover_report,
    cover_roundtrip,
    direct_image_line_bundle,
    roundtrip_verify,
    trivial_line_bundle,
)
from .factorization import (
    BlockSystem,
    MonodromyData,
    block_systems,
    intermediate_cover,
    monodromy_generators,
    summand_embedding_check,
)
from .fields import GF, QQ, Fp, PrimeField, Rationals
from .linalg import Matrix, MatrixSubspace, Subspace, eigenspaces, kernel, min_poly, rref
from .parabolic import (
    LocalFlagModel,
    ParabolicBundleData,
    RamifiedCoverData,
    check_pardeg_conservation,
    degree_direct_image,
    local_flags,
    merge_fiber_filtration,
    parabolic_degree,
    pushforward_parabolic,
    riemann_hurwitz_genus,
    tameness_check,
)
from .poly import Poly, is_squarefree, poly_gcd, roots_in_field
