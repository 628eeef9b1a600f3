"""snubweave: planar mesh subdivision, weaving patterns, fractal analysis.

The package is organized by capability:

* :mod:`snubweave.mesh_core` — planar polygon meshes, validation,
  classification, demo-input generators;
* :mod:`snubweave.snub` — the pentagon-producing snub subdivision scheme
  with smoothing and multi-step histories;
* :mod:`snubweave.classic_schemes` — Loop, butterfly, sqrt-3, mid-edge,
  Catmull-Clark, and Doo-Sabin subdivision steps;
* :mod:`snubweave.weaving` — strand tracing, two-colorings, gluings, and
  over/under crossing assignment;
* :mod:`snubweave.fractal` — boundary-curve rewriting system, length growth,
  fractal-dimension estimation, first-hit rasters;
* :mod:`snubweave.io_formats` — mesh text format, weave documents, SVG and
  portable-raster writers;
* :mod:`snubweave.cli` — the ``snubweave`` command-line front end.
"""

from .errors import (
    AmbiguousHalfPlaneError,
    BoundaryC2EdgeError,
    DegenerateFaceError,
    DepthTooLargeError,
    InconsistentOrientationError,
    IndexRangeError,
    InsufficientDataError,
    InternalInvariantError,
    InvalidParameterError,
    InvalidTriangleColoringError,
    MeshFormatError,
    MissingOriginRecordsError,
    MissingProvenanceError,
    NoInteriorEdgesError,
    NonManifoldError,
    NotBipartiteError,
    NotTriangleMeshError,
    SelfIntersectionError,
    SnubWeaveError,
    UnknownSeedError,
    WeaveFormatError,
)
from .mesh_core import (
    EdgeTag,
    ElementClass,
    Mesh,
    ParentKind,
    Point2,
    Provenance,
    VertexTag,
    build_mesh,
    classify,
    convexity_report,
    euler_characteristic,
    fan_ngon,
    generate_demo_mesh,
    ngon,
    pentagon,
    pentagon_flower,
    square_grid,
)
from .snub import (
    ALPHA,
    StepRecord,
    SubdivisionHistory,
    Z_GEOMETRY,
    ZOrientation,
    ZTripletGeometry,
    assign_z_orientations,
    connect_new_vertices,
    insert_barycenters,
    replace_edges_with_z_triplets,
    smooth_inner_vertices,
    snub_subdivide,
)
from .classic_schemes import (
    OriginKind,
    SchemeStepResult,
    butterfly_step,
    catmull_clark_step,
    doo_sabin_step,
    loop_step,
    midedge_step,
    sqrt3_step,
)
from .weaving import (
    GluedTiling,
    Ribbon,
    Strand,
    VertexColoring,
    Weaving,
    catmull_clark_coloring,
    general_face_split_weaving,
    glue_snub_pairs,
    glue_triangle_pairs,
    loop_color_update,
    quad_weaving,
    sqrt3_quadization,
    strand_ribbons,
    trace_snub_strands,
    triangle_coloring_check,
    two_color_vertices,
)
from .fractal import (
    CurveFamily,
    CurveTrack,
    DimensionEstimate,
    FirstHitRaster,
    LSystem,
    SNUB_BOUNDARY_LSYSTEM,
    boundary_lengths,
    box_counting_dimension,
    default_palette,
    estimate_fractal_dimension,
    first_hit_raster,
    lsystem_expand,
    track_inner_curves,
)
__version__ = "0.1.0"
