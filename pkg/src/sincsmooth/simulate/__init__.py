from __future__ import annotations

from sincsmooth.simulate.baselines import (
    ReplicateEstimates,
    default_bandwidth,
    gaussian_nw_baseline,
    replicate_example1,
)
from sincsmooth.simulate.examples import ExampleId, ExampleSpec, generate
from sincsmooth.simulate.metrics import mise

__all__ = [
    "ExampleId",
    "ExampleSpec",
    "ReplicateEstimates",
    "default_bandwidth",
    "gaussian_nw_baseline",
    "generate",
    "mise",
    "replicate_example1",
]
