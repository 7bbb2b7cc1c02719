"""Motion-capture stream bridge bindings.

The native module carries the wire protocol codec, frame assembly, message
mapping, URDF generation, and the synthetic motion harness.
"""

from ._core import (
    BridgeError,
    FrameAssembler,
    MotionFrame,
    MotionScript,
    ScaleData,
    describe_datagram,
    euler_zxy_to_quaternion,
    forward_npose,
    frame_to_datagram_bytes,
    generate_urdf_xml,
    joint_dof_names,
    joint_names,
    quaternion_to_euler_zxy,
    reserialize_datagram,
    segment_names,
    synth_frame,
    validate_urdf,
    __version__,
)

__all__ = [
    "BridgeError",
    "FrameAssembler",
    "MotionFrame",
    "MotionScript",
    "ScaleData",
    "describe_datagram",
    "euler_zxy_to_quaternion",
    "forward_npose",
    "frame_to_datagram_bytes",
    "generate_urdf_xml",
    "joint_dof_names",
    "joint_names",
    "quaternion_to_euler_zxy",
    "reserialize_datagram",
    "segment_names",
    "synth_frame",
    "validate_urdf",
    "__version__",
]
