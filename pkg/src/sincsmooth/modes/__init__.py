from __future__ import annotations

from sincsmooth.modes.ascent import (
    AscentConfig,
    ModeSet,
    StartKind,
    find_modes_density,
    find_modes_mixing,
)
from sincsmooth.modes.conditional import (
    ConditionalModeSet,
    JointPartials,
    ModalCurve,
    conditional_modes,
    joint_density_partials,
    modal_curve,
)
from sincsmooth.modes.hausdorff import hausdorff, sup_hausdorff

__all__ = [
    "AscentConfig",
    "ConditionalModeSet",
    "JointPartials",
    "ModalCurve",
    "ModeSet",
    "StartKind",
    "conditional_modes",
    "find_modes_density",
    "find_modes_mixing",
    "hausdorff",
    "joint_density_partials",
    "modal_curve",
    "sup_hausdorff",
]
