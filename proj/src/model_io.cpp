#include <fstream>
#include <sstream>
#include <unordered_map>

#include "hcdr/errors.hpp"
#include "hcdr/json_util.hpp"
#include "hcdr/model.hpp"

namespace hcdr {

namespace {

using nlohmann::json;

Vec3 read_vec3(const JsonDoc& doc, const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) throw doc.error(path, "expected an array of 3 numbers");
  Vec3 v;
  for (int k = 0; k < 3; ++k) v[k] = doc.number(j[k], path + "/" + std::to_string(k));
  return v;
}

Mat3 read_mat3(const JsonDoc& doc, const json& j, const std::string& path, bool allow_diagonal) {
  if (!j.is_array()) throw doc.error(path, "expected a 3x3 matrix");
  if (allow_diagonal && j.size() == 3 && j[0].is_number()) return read_vec3(doc, j, path).asDiagonal();
  if (j.size() != 3) throw doc.error(path, "expected a 3x3 matrix");
  Mat3 m;
  for (int r = 0; r < 3; ++r) m.row(r) = read_vec3(doc, j[r], path + "/" + std::to_string(r)).transpose();
  return m;
}

int read_axis(const JsonDoc& doc, const json& j, const std::string& path) {
  if (!j.is_string()) throw doc.error(path, "expected \"X\", \"Y\" or \"Z\"");
  const std::string s = j.get<std::string>();
  if (s == "X" || s == "x") return 0;
  if (s == "Y" || s == "y") return 1;
  if (s == "Z" || s == "z") return 2;
  throw doc.error(path, "unknown axis '" + s + "'");
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json mat_json(const Mat3& m) {
  json a = json::array();
  for (int r = 0; r < 3; ++r) a.push_back(json::array({m(r, 0), m(r, 1), m(r, 2)}));
  return a;
}

}  // namespace

RobotModel load_model(const std::string& text) {
  const JsonDoc doc(text);
  const json& root = doc.root();
  if (!root.is_object()) throw doc.error("", "model document must be a JSON object");

  RobotModel m;
  const json& pl = doc.require(root, "", "platform");
  m.platform.mass = doc.number(doc.require(pl, "/platform", "mass_kg"), "/platform/mass_kg");
  m.platform.inertia = read_mat3(doc, doc.require(pl, "/platform", "inertia_kgm2"), "/platform/inertia_kgm2", true);
  const json& cables = doc.require(pl, "/platform", "cables");
  if (!cables.is_array()) throw doc.error("/platform/cables", "expected an array");
  for (size_t i = 0; i < cables.size(); ++i) {
    const std::string p = "/platform/cables/" + std::to_string(i);
    const json& c = cables[i];
    if (!c.is_object()) throw doc.error(p, "expected an object");
    Cable cab;
    cab.anchor = read_vec3(doc, doc.require(c, p, "a_m"), p + "/a_m");
    cab.attachment = read_vec3(doc, doc.require(c, p, "r_m"), p + "/r_m");
    cab.EA = doc.number(doc.require(c, p, "EA_N"), p + "/EA_N");
    cab.Tmin = doc.number(doc.require(c, p, "Tmin_N"), p + "/Tmin_N");
    cab.Tmax = doc.number(doc.require(c, p, "Tmax_N"), p + "/Tmax_N");
    m.platform.cables.push_back(cab);
  }
  if (pl.contains("actuator_groups")) {
    const json& g = pl["actuator_groups"];
    if (!g.is_object()) throw doc.error("/platform/actuator_groups", "expected an object");
    for (auto it = g.begin(); it != g.end(); ++it) {
      const std::string p = "/platform/actuator_groups/" + it.key();
      int id = 0;
      try {
        size_t used = 0;
        id = std::stoi(it.key(), &used);
        if (used != it.key().size()) throw std::invalid_argument("id");
      } catch (const std::exception&) {
        throw doc.error(p, "actuator id must be an integer");
      }
      if (!it.value().is_array()) throw doc.error(p, "expected an array of cable indices");
      std::vector<int> members;
      for (size_t k = 0; k < it.value().size(); ++k) {
        const json& e = it.value()[k];
        if (!e.is_number_integer()) throw doc.error(p + "/" + std::to_string(k), "expected an integer");
        members.push_back(e.get<int>() - 1);
      }
      m.platform.actuator_groups[id] = members;
    }
  } else {
    for (int i = 0; i < m.num_cables(); ++i) m.platform.actuator_groups[i + 1] = {i};
  }

  if (root.contains("arm")) {
    const json& arm = root["arm"];
    if (!arm.is_array()) throw doc.error("/arm", "expected an array");
    for (size_t j = 0; j < arm.size(); ++j) {
      const std::string p = "/arm/" + std::to_string(j);
      const json& l = arm[j];
      if (!l.is_object()) throw doc.error(p, "expected an object");
      ArmLink link;
      link.mass = doc.number(doc.require(l, p, "mass_kg"), p + "/mass_kg");
      link.inertia = read_mat3(doc, doc.require(l, p, "inertia_kgm2"), p + "/inertia_kgm2", true);
      const json& jt = doc.require(l, p, "joint");
      if (!jt.is_object()) throw doc.error(p + "/joint", "expected an object");
      const json& kind = doc.require(jt, p + "/joint", "kind");
      if (kind == "revolute") link.joint.kind = JointKind::kRevolute;
      else if (kind == "prismatic") link.joint.kind = JointKind::kPrismatic;
      else throw doc.error(p + "/joint/kind", "expected \"revolute\" or \"prismatic\"");
      link.joint.axis = read_axis(doc, doc.require(jt, p + "/joint", "axis"), p + "/joint/axis");
      link.joint_offset = read_vec3(doc, doc.require(l, p, "joint_offset_m"), p + "/joint_offset_m");
      link.com_offset = read_vec3(doc, doc.require(l, p, "com_offset_m"), p + "/com_offset_m");
      m.arm.push_back(link);
    }
  }

  if (root.contains("mount")) {
    const json& mt = root["mount"];
    if (!mt.is_object()) throw doc.error("/mount", "expected an object");
    if (mt.contains("l_m_m")) m.mount_offset = read_vec3(doc, mt["l_m_m"], "/mount/l_m_m");
    if (mt.contains("R_m_a0")) m.mount_rotation = read_mat3(doc, mt["R_m_a0"], "/mount/R_m_a0", false);
  }
  if (root.contains("gravity_mps2")) m.gravity = doc.number(root["gravity_mps2"], "/gravity_mps2");
  if (root.contains("euler_order")) {
    const json& e = root["euler_order"];
    if (!e.is_string()) throw doc.error("/euler_order", "expected a string such as \"XYZ\"");
    try {
      m.euler = EulerConvention::from_string(e.get<std::string>());
    } catch (const ArgumentError& ex) {
      throw doc.error("/euler_order", ex.what());
    }
  }
  validate_model(m, /*require_cables=*/true);
  return m;
}

RobotModel load_model_file(const std::string& path) {
  return load_model(read_text_file(path));
}

RobotModel resolve_model(const std::string& ref) {
  if (ref.empty() || ref == "hcdr9dof" || ref == "builtin:hcdr9dof") return builtin_hcdr9dof();
  return load_model_file(ref);
}

std::string serialize_model(const RobotModel& m) {
  json root;
  json pl;
  pl["mass_kg"] = m.platform.mass;
  pl["inertia_kgm2"] = mat_json(m.platform.inertia);
  json cables = json::array();
  for (const Cable& c : m.platform.cables) {
    json jc;
    jc["a_m"] = vec_json(c.anchor);
    jc["r_m"] = vec_json(c.attachment);
    jc["EA_N"] = c.EA;
    jc["Tmin_N"] = c.Tmin;
    jc["Tmax_N"] = c.Tmax;
    cables.push_back(jc);
  }
  pl["cables"] = cables;
  json groups = json::object();
  for (const auto& [id, members] : m.platform.actuator_groups) {
    json arr = json::array();
    for (int i : members) arr.push_back(i + 1);
    groups[std::to_string(id)] = arr;
  }
  pl["actuator_groups"] = groups;
  root["platform"] = pl;
  json arm = json::array();
  for (const ArmLink& l : m.arm) {
    json jl;
    jl["mass_kg"] = l.mass;
    jl["inertia_kgm2"] = mat_json(l.inertia);
    jl["joint"] = {{"kind", l.joint.kind == JointKind::kRevolute ? "revolute" : "prismatic"},
                   {"axis", std::string(1, static_cast<char>('X' + l.joint.axis))}};
    jl["joint_offset_m"] = vec_json(l.joint_offset);
    jl["com_offset_m"] = vec_json(l.com_offset);
    arm.push_back(jl);
  }
  root["arm"] = arm;
  root["mount"] = {{"l_m_m", vec_json(m.mount_offset)}, {"R_m_a0", mat_json(m.mount_rotation)}};
  root["gravity_mps2"] = m.gravity;
  root["euler_order"] = m.euler.to_string();
  return root.dump(2) + "\n";
}

}  // namespace hcdr
