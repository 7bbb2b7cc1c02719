#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "xsbridge/assembler.hpp"
#include "xsbridge/errors.hpp"
#include "xsbridge/jsonl.hpp"
#include "xsbridge/synth.hpp"
#include "xsbridge/urdf.hpp"

namespace py = pybind11;
using namespace xsbridge;

namespace {

ByteBuffer to_buffer(const py::bytes& data) {
  std::string_view view = data;
  return ByteBuffer(view.begin(), view.end());
}

py::bytes to_bytes(const ByteBuffer& buffer) {
  return py::bytes(reinterpret_cast<const char*>(buffer.data()), buffer.size());
}

DofAxis axis_from_string(const std::string& axis) {
  if (axis == "z") return DofAxis::Z;
  if (axis == "x") return DofAxis::X;
  if (axis == "y") return DofAxis::Y;
  throw py::value_error("axis must be 'z', 'x', or 'y'");
}

py::dict stats_dict(const StreamStats& stats) {
  py::dict d;
  d["datagrams_received"] = stats.datagrams_received;
  d["frames_emitted"] = stats.frames_emitted;
  d["frames_dropped"] = stats.frames_dropped;
  d["stale_discarded"] = stats.stale_discarded;
  d["unknown_kind_count"] = stats.unknown_kind_count;
  d["parse_errors"] = stats.parse_errors;
  d["estimated_rate_hz"] = stats.estimated_rate_hz;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Motion-capture stream bridge: wire protocol, frame assembly, "
            "message mapping, URDF generation, synthetic harness";

  py::register_exception<Error>(m, "BridgeError");

  m.def("segment_names", [] {
    std::vector<std::string> names;
    for (uint32_t i = 1; i <= 23; ++i) names.emplace_back(segment_name(segment_from_index(i)));
    return names;
  });
  m.def("joint_names", [] {
    std::vector<std::string> names;
    for (const auto& def : joint_definitions()) names.emplace_back(joint_name(def.joint));
    return names;
  });
  m.def("joint_dof_names", [] {
    std::vector<std::string> names;
    for (const auto& def : joint_definitions())
      for (DofAxis axis : {DofAxis::Z, DofAxis::X, DofAxis::Y})
        names.push_back(joint_dof_name(def.joint, axis));
    return names;
  });

  m.def(
      "euler_zxy_to_quaternion",
      [](double z, double x, double y) {
        Quaternion q = euler_zxy_to_quaternion({z, x, y});
        return py::make_tuple(q.w, q.x, q.y, q.z);
      },
      py::arg("z"), py::arg("x"), py::arg("y"),
      "Quaternion (w, x, y, z) for intrinsic Z-X-Y Euler angles in radians");
  m.def(
      "quaternion_to_euler_zxy",
      [](double w, double x, double y, double z) {
        RotationZXY r = quaternion_to_euler_zxy({w, x, y, z});
        return py::make_tuple(r.z, r.x, r.y);
      },
      py::arg("w"), py::arg("x"), py::arg("y"), py::arg("z"));

  py::class_<ScaleData>(m, "ScaleData")
      .def_static("default", &default_scale, py::arg("height_m") = kDefaultHeightM)
      .def_static("from_text", &scale_from_text)
      .def("to_text", &scale_to_text)
      .def("mass_fractions", [](const ScaleData& scale) {
        std::vector<double> fractions;
        for (const auto& s : scale.segments) fractions.push_back(s.mass_fraction);
        return fractions;
      });

  m.def(
      "forward_npose",
      [](const ScaleData& scale) {
        py::dict out;
        auto poses = forward_npose(scale);
        for (uint32_t i = 1; i <= 23; ++i) {
          const Vec3& p = poses[i - 1].position;
          out[py::str(std::string(segment_name(segment_from_index(i))))] =
              py::make_tuple(p[0], p[1], p[2]);
        }
        return out;
      },
      py::arg("scale"), "Neutral-pose segment positions keyed by segment name");

  m.def(
      "generate_urdf_xml",
      [](double height_m, const std::string& name, double total_mass_kg, bool with_visuals,
         bool physics_mass) {
        UrdfOptions options;
        options.robot_name = name;
        options.total_mass_kg = total_mass_kg;
        options.with_visuals = with_visuals;
        options.physics_mass = physics_mass;
        return render_xml(generate_urdf(default_topology(), default_scale(height_m), options));
      },
      py::arg("height_m") = kDefaultHeightM, py::arg("name") = "human",
      py::arg("total_mass_kg") = 70.0, py::arg("with_visuals") = true,
      py::arg("physics_mass") = false);
  m.def("validate_urdf", [](const std::string& xml_text) {
    UrdfCounts counts = validate_urdf(xml_text);
    py::dict d;
    d["links"] = counts.links;
    d["virtual_links"] = counts.virtual_links;
    d["revolute_joints"] = counts.revolute_joints;
    d["is_tree"] = counts.is_tree;
    return d;
  });

  py::class_<MotionScript>(m, "MotionScript")
      .def_static(
          "npose",
          [](double height_m) { return MotionScript::npose(default_scale(height_m)); },
          py::arg("height_m") = kDefaultHeightM)
      .def_static(
          "sinusoidal",
          [](const std::string& joint, const std::string& axis, double amplitude_rad,
             double frequency_hz, double height_m) {
            auto j = joint_from_name(joint);
            if (!j) throw py::value_error("unknown joint " + joint);
            return MotionScript::sinusoidal(
                {*j, axis_from_string(axis), amplitude_rad, frequency_hz},
                default_scale(height_m));
          },
          py::arg("joint") = "jRightElbow", py::arg("axis") = "z",
          py::arg("amplitude_rad") = 0.5, py::arg("frequency_hz") = 0.5,
          py::arg("height_m") = kDefaultHeightM);

  py::class_<MotionFrame>(m, "MotionFrame")
      .def_property_readonly("sample_counter",
                             [](const MotionFrame& f) { return f.sample_counter; })
      .def_property_readonly("time_code_ms", [](const MotionFrame& f) { return f.time_code_ms; })
      .def_property_readonly("com",
                             [](const MotionFrame& f) -> py::object {
                               if (!f.com_m) return py::none();
                               return py::make_tuple((*f.com_m)[0], (*f.com_m)[1], (*f.com_m)[2]);
                             })
      .def("complete", [](const MotionFrame& f) {
        return f.has_all_poses() && f.has_all_joint_angles();
      })
      .def(
          "to_jsonl",
          [](const MotionFrame& f, uint64_t recv_stamp_us) {
            return frame_to_jsonl(f, Stamp{recv_stamp_us, f.time_code_ms});
          },
          py::arg("recv_stamp_us") = 0)
      .def("__eq__", [](const MotionFrame& a, const MotionFrame& b) { return a == b; });

  m.def(
      "synth_frame",
      [](const MotionScript& script, double t_s, uint32_t sample_counter, uint32_t time_code_ms) {
        return synth_frame(script, t_s, sample_counter, time_code_ms);
      },
      py::arg("script"), py::arg("t_s"), py::arg("sample_counter") = 0,
      py::arg("time_code_ms") = 0);

  m.def(
      "frame_to_datagram_bytes",
      [](const MotionFrame& frame, size_t max_payload_bytes) {
        std::vector<py::bytes> out;
        for (const auto& d : frame_to_datagrams(frame, max_payload_bytes))
          out.push_back(to_bytes(serialize_datagram(d)));
        return out;
      },
      py::arg("frame"), py::arg("max_payload_bytes") = kDefaultMaxPayloadBytes);

  m.def("describe_datagram", [](const py::bytes& data) {
    return describe_datagram(parse_datagram(to_buffer(data)));
  });
  m.def("reserialize_datagram", [](const py::bytes& data) {
    return to_bytes(serialize_datagram(parse_datagram(to_buffer(data))));
  });

  py::class_<FrameAssembler>(m, "FrameAssembler")
      .def(py::init([] { return FrameAssembler(); }))
      .def("feed",
           [](FrameAssembler& assembler, const py::bytes& data) {
             return assembler.feed(parse_datagram(to_buffer(data)));
           })
      .def("flush", &FrameAssembler::flush)
      .def("stats", [](const FrameAssembler& assembler) { return stats_dict(assembler.stats()); });

  m.attr("__version__") = "0.1.0";
}
