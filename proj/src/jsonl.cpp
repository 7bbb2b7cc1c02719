#include "xsbridge/jsonl.hpp"

#include <json.hpp>

namespace xsbridge {

namespace {

using Json = nlohmann::ordered_json;

Json vec_json(const Vec3& v) { return Json::array({v[0], v[1], v[2]}); }

Json quat_json(const Quaternion& q) {
  return Json{{"w", q.w}, {"x", q.x}, {"y", q.y}, {"z", q.z}};
}

}  // namespace

std::string frame_to_jsonl(const MotionFrame& frame, const Stamp& stamp, const AxisRemap& remap) {
  LinkStateMessage links = map_link_states(frame, stamp, remap);
  JointStateMessage joints = map_joint_state(frame, stamp);
  std::vector<TransformMessage> transforms = map_transforms(frame, stamp, remap);
  std::optional<PointMessage> com = map_com(frame, stamp, remap);

  Json record;
  record["sample"] = frame.sample_counter;
  record["time_code_ms"] = frame.time_code_ms;
  record["recv_stamp_us"] = stamp.recv_wall_us;
  record["character_id"] = frame.character_id;

  Json link_array = Json::array();
  for (const auto& link : links.links) {
    Json entry;
    entry["name"] = link.name;
    entry["pose"] = Json{{"position", vec_json(link.pose.position)},
                         {"orientation", quat_json(link.pose.orientation)}};
    entry["twist"] = Json{{"linear", vec_json(link.twist.linear_mps)},
                          {"angular", vec_json(link.twist.angular_radps)}};
    entry["accel"] = Json{{"linear", vec_json(link.accel.linear_mps2)},
                          {"angular", vec_json(link.accel.angular_radps2)}};
    entry["has_linear_kinematics"] = link.has_linear_kinematics;
    entry["has_angular_kinematics"] = link.has_angular_kinematics;
    link_array.push_back(std::move(entry));
  }
  record["link_states"] = std::move(link_array);

  Json joint_state;
  joint_state["name"] = Json::array();
  joint_state["position"] = Json::array();
  for (const auto& n : joints.names) joint_state["name"].push_back(n);
  for (double p : joints.positions_rad) joint_state["position"].push_back(p);
  record["joint_state"] = std::move(joint_state);

  Json transform_array = Json::array();
  for (const auto& t : transforms) {
    transform_array.push_back(Json{{"parent_frame", t.parent_frame},
                                   {"child_frame", t.child_frame},
                                   {"translation", vec_json(t.translation_m)},
                                   {"rotation", quat_json(t.rotation)}});
  }
  record["transforms"] = std::move(transform_array);

  record["com"] = com ? vec_json(com->position_m) : Json(nullptr);

  Json marker_array = Json::array();
  for (const auto& m : frame.markers)
    marker_array.push_back(Json{{"id", m.point_id}, {"position", vec_json(m.position_m)}});
  record["markers"] = std::move(marker_array);

  return record.dump();
}

}  // namespace xsbridge
