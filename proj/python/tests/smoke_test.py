"""Smoke tests for the python bindings: the whole pipeline from a synthetic
frame through wire bytes, reassembly, and JSONL mapping."""

import json
import math
import random

import xsbridge


def test_names():
    segments = xsbridge.segment_names()
    assert len(segments) == 23
    assert segments[0] == "Pelvis"
    assert segments[-1] == "LeftToe"
    assert len(xsbridge.joint_names()) == 22
    dofs = xsbridge.joint_dof_names()
    assert len(dofs) == 66
    assert "jRightElbow_z" in dofs


def test_euler_quaternion_roundtrip():
    rng = random.Random(7)
    for _ in range(200):
        z = rng.uniform(-3.0, 3.0)
        x = rng.uniform(-1.4, 1.4)
        y = rng.uniform(-3.0, 3.0)
        q = xsbridge.euler_zxy_to_quaternion(z, x, y)
        assert abs(math.sqrt(sum(c * c for c in q)) - 1.0) < 1e-9
        back = xsbridge.quaternion_to_euler_zxy(*q)
        assert abs(back[0] - z) < 1e-9
        assert abs(back[1] - x) < 1e-9
        assert abs(back[2] - y) < 1e-9


def test_urdf_counts():
    xml = xsbridge.generate_urdf_xml(height_m=1.70)
    counts = xsbridge.validate_urdf(xml)
    assert counts == {
        "links": 23,
        "virtual_links": 44,
        "revolute_joints": 66,
        "is_tree": True,
    }


def test_npose_geometry():
    scale = xsbridge.ScaleData.default(1.70)
    assert abs(sum(scale.mass_fractions()) - 1.0) < 1e-9
    poses = xsbridge.forward_npose(scale)
    right_foot = poses["RightFoot"]
    assert abs(right_foot[0]) < 1e-12 and abs(right_foot[1]) < 1e-12
    assert right_foot[2] > 0.0


def test_wire_pipeline_roundtrip():
    script = xsbridge.MotionScript.sinusoidal("jLeftKnee", "z", 0.6, 1.0)
    frame = xsbridge.synth_frame(script, 0.73, sample_counter=9, time_code_ms=730)
    packets = xsbridge.frame_to_datagram_bytes(frame, max_payload_bytes=400)
    assert len(packets) > 1

    for raw in packets:
        assert xsbridge.reserialize_datagram(raw) == raw  # canonical bytes

    rng = random.Random(3)
    rng.shuffle(packets)
    assembler = xsbridge.FrameAssembler()
    frames = []
    for raw in packets:
        frames.extend(assembler.feed(raw))
    frames.extend(assembler.flush())
    assert len(frames) == 1
    assert frames[0] == frame
    assert frames[0].complete()
    assert assembler.stats()["frames_emitted"] == 1


def test_jsonl_record_dimensions():
    script = xsbridge.MotionScript.npose()
    frame = xsbridge.synth_frame(script, 0.0)
    record = json.loads(frame.to_jsonl(recv_stamp_us=123))
    assert len(record["link_states"]) == 23
    assert len(record["joint_state"]["name"]) == 66
    assert len(record["joint_state"]["position"]) == 66
    assert len(record["transforms"]) == 23
    assert record["recv_stamp_us"] == 123


def test_describe_and_errors():
    frame = xsbridge.synth_frame(xsbridge.MotionScript.npose(), 0.0)
    raw = xsbridge.frame_to_datagram_bytes(frame)[0]
    text = xsbridge.describe_datagram(raw)
    assert "PoseQuaternion" in text

    try:
        xsbridge.describe_datagram(b"garbage")
    except xsbridge.BridgeError as e:
        assert "TooShort" in str(e)
    else:
        raise AssertionError("expected BridgeError")


def main():
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_")]
    for test in tests:
        test()
        print(f"ok {test.__name__}")
    print(f"{len(tests)} smoke tests passed")


if __name__ == "__main__":
    main()
