#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hcdr/dynamics.hpp"
#include "hcdr/errors.hpp"
#include "hcdr/metrics.hpp"
#include "hcdr/model.hpp"
#include "hcdr/redundancy.hpp"
#include "hcdr/scenario.hpp"
#include "hcdr/sim.hpp"
#include "hcdr/stiffness.hpp"
#include "hcdr/trace_io.hpp"

namespace py = pybind11;
using namespace hcdr;

namespace {

Pose make_pose(const Vec3& p, const Vec3& euler) {
  Pose pose;
  pose.p = p;
  pose.euler = euler;
  return pose;
}

template <class T>
MatX stack(const std::vector<T>& rows) {
  if (rows.empty()) return MatX();
  MatX m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) m.row(i) = rows[i].transpose();
  return m;
}

py::dict trace_dict(const SimTrace& tr) {
  py::dict d;
  d["t"] = VecX(Eigen::Map<const VecX>(tr.t.data(), tr.t.size()));
  d["x"] = stack(tr.x);
  d["u"] = stack(tr.u);
  d["T"] = stack(tr.T);
  d["L01"] = VecX(Eigen::Map<const VecX>(tr.L01.data(), tr.L01.size()));
  d["L02"] = VecX(Eigen::Map<const VecX>(tr.L02.data(), tr.L02.size()));
  d["KE"] = VecX(Eigen::Map<const VecX>(tr.KE.data(), tr.KE.size()));
  d["VE"] = VecX(Eigen::Map<const VecX>(tr.VE.data(), tr.VE.size()));
  d["x_ref"] = stack(tr.x_ref);
  d["u_ref"] = stack(tr.u_ref);
  d["pe"] = stack(tr.pe);
  d["pe_ref"] = stack(tr.pe_ref);
  return d;
}

py::dict report_dict(const EvalReport& r) {
  py::dict d;
  d["rmse_x_m"] = r.rmse_x;
  d["rmse_z_m"] = r.rmse_z;
  d["rmse_2d_m"] = r.rmse_2d;
  d["min_tension_N"] = r.min_tension;
  d["max_tension_N"] = r.max_tension;
  d["samples"] = r.samples;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Hybrid cable-driven robot dynamics, stiffness optimization and control";

  static py::exception<Error> exc(m, "HcdrError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(exc, (std::string(category_name(e.category())) + ": " + e.what()).c_str());
    }
  });

  py::class_<RobotModel>(m, "RobotModel")
      .def_property_readonly("num_cables", &RobotModel::num_cables)
      .def_property_readonly("num_joints", &RobotModel::num_joints)
      .def_property_readonly("dof", &RobotModel::dof)
      .def_property_readonly("gravity", [](const RobotModel& r) { return r.gravity; })
      .def("to_json", [](const RobotModel& r) { return serialize_model(r); });

  m.def("builtin_hcdr9dof", &builtin_hcdr9dof);
  m.def("load_model", &load_model, py::arg("text"));
  m.def("resolve_model", &resolve_model, py::arg("ref"));

  m.def("mass_matrix", &mass_matrix, py::arg("model"), py::arg("q"));
  m.def("gravity_vector", &gravity_vector, py::arg("model"), py::arg("q"));
  m.def(
      "inverse_dynamics",
      [](const RobotModel& model, const VecX& q, const VecX& qd, const VecX& qdd) {
        return inverse_dynamics(model, q, qd, qdd);
      },
      py::arg("model"), py::arg("q"), py::arg("qdot"), py::arg("qddot"));
  m.def(
      "forward_dynamics",
      [](const RobotModel& model, const VecX& q, const VecX& qd, const VecX& T, const VecX& tau_a) {
        return forward_dynamics(model, q, qd, T, tau_a);
      },
      py::arg("model"), py::arg("q"), py::arg("qdot"), py::arg("T"), py::arg("tau_a"));
  m.def(
      "structure_matrix",
      [](const RobotModel& model, const Vec3& p, const Vec3& euler) {
        return structure_matrix(model, make_pose(p, euler));
      },
      py::arg("model"), py::arg("p"), py::arg("euler") = Vec3::Zero());
  m.def("null_space", &null_space, py::arg("A"));
  m.def("pinv_tensions", &pinv_tensions, py::arg("A"), py::arg("tau"));

  m.def(
      "stiffness_map",
      [](const RobotModel& model, double px, double pz, double L01, double L02, int resolution) {
        const auto grid = stiffness_map(model, make_pose(Vec3(px, 0.0, pz), Vec3::Zero()), L01, L02, resolution);
        MatX out(grid.size(), 4);
        for (std::size_t i = 0; i < grid.size(); ++i) out.row(i) << grid[i].T3, grid[i].T4, grid[i].JK, grid[i].min_eig;
        return out;
      },
      py::arg("model"), py::arg("px") = 0.0, py::arg("pz") = 0.0, py::arg("L01") = 1.005, py::arg("L02") = 1.005,
      py::arg("resolution") = 76, "Rows of (T3, T4, J_K, min_eig).");

  m.def(
      "case_study_sample",
      [](double t) {
        const TrajectorySample s = case_study_trajectory().sample(t);
        return py::make_tuple(s.x, s.acc);
      },
      py::arg("t"));

  m.def(
      "simulate",
      [](const RobotModel& model, const std::string& architecture, double t_end, std::uint64_t seed,
         const VecX& noise_std) {
        SimConfig cfg = default_config(architecture_from_string(architecture));
        cfg.t_end = t_end;
        cfg.seed = seed;
        cfg.noise.std_dev = noise_std;
        SimTrace tr;
        {
          py::gil_scoped_release release;
          tr = simulate(model, case_study_trajectory(), cfg);
        }
        py::dict d = trace_dict(tr);
        d["report"] = report_dict(evaluate_trace(tr));
        return d;
      },
      py::arg("model"), py::arg("architecture") = "integrated2", py::arg("t_end") = 6.0, py::arg("seed") = 0,
      py::arg("noise_std") = VecX());

  m.def(
      "run_scenario",
      [](const std::string& path) {
        const Scenario s = load_scenario_file(path);
        SimTrace tr;
        {
          py::gil_scoped_release release;
          tr = simulate(s.model, scenario_trajectory(s), s.config);
        }
        py::dict d = trace_dict(tr);
        d["report"] = report_dict(evaluate_trace(tr));
        d["config_hash"] = config_hash(s);
        d["csv"] = trace_csv(tr);
        return d;
      },
      py::arg("path"));

  m.def(
      "rmse",
      [](const MatX& path, const MatX& ref) {
        auto rows = [](const MatX& a) {
          if (a.cols() != 2) throw ArgumentError("paths must be N x 2");
          std::vector<Eigen::Vector2d> v;
          for (int i = 0; i < a.rows(); ++i) v.emplace_back(a(i, 0), a(i, 1));
          return v;
        };
        return report_dict(rmse(rows(path), rows(ref)));
      },
      py::arg("path"), py::arg("reference"));
}
