#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "polylin/config.hpp"
#include "polylin/verify.hpp"

namespace py = pybind11;
using namespace polylin;

namespace {

PhasePoint point(const std::array<double, 3>& v, double I) { return PhasePoint::checked({v[0], v[1], v[2]}, I); }

py::dict operator_dict(const NystromOperator& op) {
  Eigen::MatrixXd coords(op.grid.size(), op.grid.coordinate_dim());
  for (std::size_t i = 0; i < op.grid.size(); ++i) {
    const auto c = op.grid.coordinates(i);
    for (std::size_t k = 0; k < c.size(); ++k) coords(i, k) = c[k];
  }
  py::dict d;
  d["mode"] = to_string(op.grid.mode);
  d["dims"] = py::make_tuple(op.grid.dim_a, op.grid.dim_b);
  d["coords"] = coords;
  d["weights"] = Eigen::Map<const Eigen::VectorXd>(op.grid.weights.data(), op.grid.weights.size()).eval();
  d["nu"] = op.nu;
  d["K"] = op.Kmat;
  return d;
}

py::list checks_list(const std::vector<Check>& checks) {
  py::list out;
  for (const auto& c : checks) {
    py::dict d;
    d["name"] = c.name;
    d["value"] = c.value;
    d["tolerance"] = c.tolerance;
    d["relation"] = c.relation;
    d["pass"] = c.pass;
    out.append(d);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_polylin, m) {
  m.doc() = "Linearized polyatomic Boltzmann operator";

  py::class_<GasModel>(m, "GasModel")
      .def(py::init([](double mass, double delta) {
             GasModel g{mass, delta};
             g.validate();
             return g;
           }),
           py::arg("m") = 1.0, py::arg("delta") = 2.0)
      .def_readonly("m", &GasModel::m)
      .def_readonly("delta", &GasModel::delta);

  py::class_<ScatteringModel>(m, "ScatteringModel")
      .def_static("power_law", &ScatteringModel::power_law, py::arg("C") = 1.0, py::arg("alpha") = 1.0,
                  py::arg("gamma") = 0.5)
      .def_static("gp20", &ScatteringModel::gp20, py::arg("which"), py::arg("b") = 1.0, py::arg("alpha") = 1.0,
                  py::arg("gamma") = 0.5)
      .def_property_readonly("variant", [](const ScatteringModel& s) { return to_string(s.variant()); })
      .def_property_readonly("alpha", &ScatteringModel::alpha)
      .def_property_readonly("prefactor", &ScatteringModel::prefactor);

  py::class_<QuadratureSpec>(m, "QuadratureSpec")
      .def(py::init<>())
      .def_readwrite("n_interval", &QuadratureSpec::n_interval)
      .def_readwrite("n_semi", &QuadratureSpec::n_semi)
      .def_readwrite("sphere_order", &QuadratureSpec::sphere_order)
      .def_readwrite("n_plane_radial", &QuadratureSpec::n_plane_radial)
      .def_readwrite("n_plane_angular", &QuadratureSpec::n_plane_angular)
      .def_readwrite("n_chi", &QuadratureSpec::n_chi)
      .def_readwrite("n_k2_energy", &QuadratureSpec::n_k2_energy)
      .def_readwrite("n_split", &QuadratureSpec::n_split)
      .def_readwrite("n_mu", &QuadratureSpec::n_mu)
      .def_readwrite("mc_samples", &QuadratureSpec::mc_samples)
      .def_readwrite("mc_seed", &QuadratureSpec::mc_seed);

  m.def(
      "nu_general",
      [](const std::array<double, 3>& v, double I, const GasModel& gas, const ScatteringModel& model,
         const QuadratureSpec& quad) { return nu_general(point(v, I), gas, model, quad); },
      py::arg("v"), py::arg("I"), py::arg("gas") = GasModel{}, py::arg("model") = ScatteringModel::power_law(1, 1),
      py::arg("quad") = QuadratureSpec{});
  m.def(
      "nu_reduced",
      [](const std::array<double, 3>& v, double I, const GasModel& gas, double alpha, double C,
         const QuadratureSpec& quad) { return nu_reduced_e1(point(v, I), gas, alpha, C, quad); },
      py::arg("v"), py::arg("I"), py::arg("gas") = GasModel{}, py::arg("alpha") = 1.0, py::arg("C") = 1.0,
      py::arg("quad") = QuadratureSpec{});
  m.def(
      "kernel",
      [](const std::array<double, 4>& x, const std::array<double, 4>& y, const GasModel& gas,
         const ScatteringModel& model, const QuadratureSpec& quad) {
        const KernelArgs a{point({x[0], x[1], x[2]}, x[3]), point({y[0], y[1], y[2]}, y[3])};
        return py::make_tuple(k1_eval(a, gas, model, quad), k2_eval(a, gas, model, quad));
      },
      "(k1, k2) at x = (vx, vy, vz, I), y likewise", py::arg("x"), py::arg("y"), py::arg("gas") = GasModel{},
      py::arg("model") = ScatteringModel::power_law(1, 1), py::arg("quad") = QuadratureSpec{});

  m.def(
      "assemble",
      [](int n_speed, int n_energy, const std::string& mode, const GasModel& gas, const ScatteringModel& model,
         const QuadratureSpec& quad) {
        const Grid g = parse_mode(mode) == GridMode::Isotropic ? isotropic_grid(n_speed, n_energy, gas)
                                                               : full_grid(n_speed, n_energy, gas);
        NystromOperator op;
        {
          py::gil_scoped_release nogil;
          op = assemble(g, gas, model, quad);
        }
        return operator_dict(op);
      },
      "Nystrom operator; for mode='full' n_speed is the per-axis velocity count", py::arg("n_speed"),
      py::arg("n_energy"), py::arg("mode") = "isotropic", py::arg("gas") = GasModel{},
      py::arg("model") = ScatteringModel::power_law(1, 1), py::arg("quad") = QuadratureSpec{});
  m.def("read_blop", [](const std::string& path) { return operator_dict(read_blop(path)); }, py::arg("path"));

  m.def(
      "run_suite",
      [](const std::string& suite, const std::string& config) {
        const VerifyContext ctx(resolve_config(config));
        std::vector<Check> checks;
        {
          py::gil_scoped_release nogil;
          checks = run_suite(suite, ctx);
        }
        return checks_list(checks);
      },
      "Run a verification suite; config '' falls back to $POLYLIN_CONFIG, then defaults", py::arg("suite"),
      py::arg("config") = "");

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
}
