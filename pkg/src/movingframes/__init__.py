"""Moving Parseval frames on vector bundles: construction, dilation, continuation."""
from .atlas import (
    EdgeGluing,
    FrameField,
    Surface,
    band_frame,
    identification_residual,
    project_ambient_field,
    sphere_frame,
    tangent_projector,
)
from .config import DEFAULT, Tolerances
from .dilation import (
    ComplementField,
    HolonomyReport,
    canonical_field,
    continue_complement,
    loop_holonomy,
    zero_locus_scan,
)
from .frames import (
    ComplementProjector,
    DilationPair,
    Frame,
    FrameSpectrum,
    analysis,
    canonical_complement,
    det_normalized_complement,
    dilate,
    frame_spectrum,
    is_parseval,
    local_complement,
    parseval_normalize,
    parseval_tangent_dimension,
    project_frame,
    synthesis,
)

__version__ = "0.1.0"
