// SPDX-License-Identifier: Apache-2.0
#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "irsmba/channel/channel.hpp"
#include "irsmba/error.hpp"
#include "irsmba/harness/cli.hpp"
#include "irsmba/harness/config.hpp"
#include "irsmba/harness/results.hpp"
#include "irsmba/ls/ls.hpp"
#include "irsmba/mba/model.hpp"
#include "irsmba/mba/report.hpp"
#include "irsmba/pilot/pilot.hpp"

namespace py = pybind11;
using namespace irsmba;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;
using RArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

CArray to_numpy(const ComplexMatrix& m) {
  CArray a({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), a.mutable_data());
  return a;
}

ComplexMatrix from_numpy(const CArray& a) {
  if (a.ndim() != 2) throw DimensionError("expected a 2-D complex array");
  ComplexMatrix m(static_cast<std::size_t>(a.shape(0)), static_cast<std::size_t>(a.shape(1)));
  std::copy(a.data(), a.data() + a.size(), m.data().begin());
  return m;
}

RArray to_numpy(const tensor::Tensor& t) {
  std::vector<py::ssize_t> shape(t.dims().begin(), t.dims().end());
  RArray a(shape);
  std::copy(t.data().begin(), t.data().end(), a.mutable_data());
  return a;
}

tensor::Tensor from_numpy(const RArray& a) {
  tensor::Shape dims(a.shape(), a.shape() + a.ndim());
  return tensor::Tensor(dims, std::vector<double>(a.data(), a.data() + a.size()));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "IRS cascaded channel estimation workbench";

  py::register_exception<DimensionError>(m, "DimensionError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<SingularMatrixError>(m, "SingularMatrixError", PyExc_ArithmeticError);
  py::register_exception<NonFiniteError>(m, "NonFiniteError", PyExc_ArithmeticError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def("dft_matrix", [](std::size_t n) { return to_numpy(pilot::dft_matrix(n).psi); }, py::arg("n"));
  m.def("hadamard_matrix", [](std::size_t n) { return to_numpy(pilot::hadamard_matrix(n).psi); }, py::arg("n"));
  m.def(
      "ls_mse_objective",
      [](const CArray& psi, std::size_t n_t, double sigma_n2) {
        return pilot::ls_mse_objective(from_numpy(psi), n_t, sigma_n2);
      },
      py::arg("psi"), py::arg("n_t"), py::arg("sigma_n2"));
  m.def(
      "make_pattern",
      [](const std::string& kind, std::size_t rows, std::size_t cols, std::size_t b, std::uint64_t seed) {
        Rng rng(seed);
        const auto p = pilot::make_pattern(pilot::parse_pattern_kind(kind), rows, cols, b, rng);
        py::array_t<bool> a({rows, cols});
        for (std::size_t i = 0; i < p.mask.size(); ++i) a.mutable_data()[i] = p.mask[i];
        return a;
      },
      py::arg("kind"), py::arg("rows"), py::arg("cols"), py::arg("b"), py::arg("seed") = 0,
      "Boolean (rows, cols) activation mask.");
  m.def(
      "ls_estimate", [](const CArray& y, const CArray& psi) { return to_numpy(ls::ls_estimate(from_numpy(y), from_numpy(psi))); },
      py::arg("y"), py::arg("psi"));
  m.def(
      "nmse", [](const CArray& truth, const CArray& est) { return ls::nmse(from_numpy(truth), from_numpy(est)); },
      py::arg("truth"), py::arg("estimate"));
  m.def(
      "draw_cascaded_channels",
      [](const std::string& config_text, std::uint64_t index) {
        const auto c = harness::config_from_text(config_text);
        Rng rng(derive_seed(c.seed, stream::channel, index));
        const auto real = channel::draw_realization(c.system, rng);
        py::list out;
        for (const auto& h : real.h_cs) out.append(to_numpy(h));
        return out;
      },
      py::arg("config_text"), py::arg("index") = 0, "Per-subcarrier N_t x M cascaded channels of one realization.");

  m.def(
      "config_from_text",
      [](const std::string& text, const std::vector<std::string>& overrides) {
        return harness::format_config(harness::config_from_text(text, overrides));
      },
      py::arg("text"), py::arg("overrides") = std::vector<std::string>{},
      "Validates a config and returns its canonical `key = value` listing.");

  py::class_<mba::GainReport>(m, "GainReport")
      .def_readonly("nmse_ls", &mba::GainReport::nmse_ls)
      .def_readonly("nmse_can", &mba::GainReport::nmse_can)
      .def_readonly("nmse_cmn", &mba::GainReport::nmse_cmn)
      .def_readonly("lambda_can", &mba::GainReport::lambda_can)
      .def_readonly("lambda_cmn", &mba::GainReport::lambda_cmn)
      .def_readonly("first_power_nmse", &mba::GainReport::first_power_nmse)
      .def_readonly("squared_nmse", &mba::GainReport::squared_nmse);
  m.def("gain_report", &mba::gain_report, py::arg("nmse_ls"), py::arg("nmse_can"), py::arg("nmse_cmn"));
  m.def(
      "flop_estimate",
      [](std::size_t width, std::size_t attention_dim, std::size_t n_t, std::size_t m_, std::size_t k) {
        const auto f = mba::flop_estimate({width, attention_dim, 0}, n_t, m_, k);
        return py::dict(py::arg("can") = f.can_total(), py::arg("mba") = f.mba_total());
      },
      py::arg("width"), py::arg("attention_dim"), py::arg("n_t"), py::arg("m"), py::arg("k"));

  py::class_<mba::MbaModel>(m, "MbaModel")
      .def(py::init([](std::size_t width, std::size_t attention_dim, std::uint64_t seed) {
             return std::make_unique<mba::MbaModel>(mba::ModelConfig{width, attention_dim, seed});
           }),
           py::arg("width") = 32, py::arg("attention_dim") = 16, py::arg("seed") = 0)
      .def("predict", [](mba::MbaModel& self, const RArray& x) { return to_numpy(self.predict(from_numpy(x))); })
      .def("predict_can", [](mba::MbaModel& self, const RArray& x) { return to_numpy(self.predict_can(from_numpy(x))); })
      .def("save", [](mba::MbaModel& self, const std::string& path) { self.save(path); })
      .def("load", [](mba::MbaModel& self, const std::string& path) { self.load(path); })
      .def_readwrite("can_trained", &mba::MbaModel::can_trained)
      .def_readwrite("cmn_trained", &mba::MbaModel::cmn_trained);

  m.def(
      "parse_results",
      [](const std::string& text) {
        py::list out;
        for (const auto& r : harness::parse_results(text)) {
          out.append(py::dict(py::arg("method") = r.method, py::arg("b") = r.b, py::arg("snr_db") = r.snr_db,
                              py::arg("nmse") = r.nmse, py::arg("wall_time_ms") = r.wall_time_ms,
                              py::arg("flop_estimate") = r.flop_estimate));
        }
        return out;
      },
      py::arg("text"));
  m.def(
      "format_results",
      [](const std::vector<py::dict>& rows) {
        std::vector<harness::ResultRow> rs;
        for (const auto& d : rows) {
          rs.push_back({d["method"].cast<std::string>(), d["b"].cast<std::size_t>(), d["snr_db"].cast<double>(),
                        d["nmse"].cast<double>(), d["wall_time_ms"].cast<double>(), d["flop_estimate"].cast<double>()});
        }
        return harness::format_results(rs);
      },
      py::arg("rows"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = harness::run_cli(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"), "Runs a harness command; returns (exit_code, stdout, stderr).");
}
