"""Screw-calculus mechanics: slider algebra, frame transform groups, rigid and
multibody Newton-Euler/Lagrange dynamics, mass-point systems, and isotropic
constitutive maps.

The compiled kernels are optional; see screwmech._backend for the selection
rule and the SCREWMECH_FORCE_PYTHON override.
"""

__version__ = "0.1.0"

from .screws import (  # noqa: E402
    ScrewAtom,
    ScrewMeasure,
    Slider,
    SliderReduction,
    cross_matrix,
    screw_resultant,
    slider_reduce,
)
from .frames import (  # noqa: E402
    FramePose,
    VelocityState,
    derivative_factors,
    pose_compose,
    pose_inverse,
    twist_transform,
    wrench_transform,
    wrench_velocity_factor,
)
from .rotations import (  # noqa: E402
    EulerAngles,
    Quaternion,
    euler_from_rotation,
    euler_to_rotation,
    fedorov_from_rotation,
    quat_from_rotation,
    rotation_from_fedorov,
    rotation_from_quat,
)
from .body import InertiaScrew, MassAtom, assemble_inertia, newton_euler_accel  # noqa: E402
from .trees import (  # noqa: E402
    Joint,
    LoopClosure,
    MultibodyTree,
    SystemState,
    TreeBody,
    assemble_system,
    joint_project,
    lagrange_assemble,
    state_from_joint_coords,
)
from .points import MassPoint, PointBodyInertia, gravity_forces, momentum_summary  # noqa: E402
from .constitutive import IsotropicLaw, material_class, require_correct  # noqa: E402
from .errors import (  # noqa: E402
    InvariantViolation,
    ModelError,
    NumericalError,
    ParameterizationSingularity,
    ScrewmechError,
)
from .model import load_model, parse_model  # noqa: E402
from ._backend import BACKEND  # noqa: E402
