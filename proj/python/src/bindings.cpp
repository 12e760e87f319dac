#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "holoqed/classical.hpp"
#include "holoqed/cqed.hpp"
#include "holoqed/grape.hpp"
#include "holoqed/harness.hpp"
#include "holoqed/noise.hpp"
#include "holoqed/propagator.hpp"
#include "holoqed/qmps.hpp"
#include "holoqed/snap.hpp"
#include "holoqed/vqe.hpp"

namespace py = pybind11;
using namespace holoqed;
using nlohmann::json;

namespace {

json to_json_value(const py::object& o) {
  return json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

py::object from_json_value(const json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

// Drives are (n_ts, 2) complex arrays: column 0 cavity, column 1 qubit.
Waveform waveform_from(const Matrix& drive, double dt) {
  if (drive.cols() != 2) throw py::value_error("drive must have shape (n_ts, 2)");
  Waveform wf = Waveform::zeros(static_cast<std::size_t>(drive.rows()), dt);
  for (Eigen::Index i = 0; i < drive.rows(); ++i) wf.steps[i] = {drive(i, 0), drive(i, 1)};
  return wf;
}

Matrix drive_from(const Waveform& wf) {
  Matrix d(static_cast<Eigen::Index>(wf.n_steps()), 2);
  for (std::size_t i = 0; i < wf.n_steps(); ++i) {
    d(i, 0) = wf.steps[i].cavity;
    d(i, 1) = wf.steps[i].qubit;
  }
  return d;
}

MpsTensor tensor_from(const Matrix& a0, const Matrix& a1) {
  MpsTensor t;
  t.a = {a0, a1};
  return t;
}

NoiseSpec noise_from(const py::object& o) { return o.is_none() ? NoiseSpec{} : to_json_value(o).get<NoiseSpec>(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Holographic qMPS simulation on a qubit-cavity device";
  m.attr("__version__") = harness::version();
  py::register_exception<Error>(m, "HoloqedError", PyExc_RuntimeError);

  py::class_<DeviceParams>(m, "DeviceParams")
      .def(py::init<>())
      .def(py::init([](const py::dict& d) { return to_json_value(d).get<DeviceParams>(); }), py::arg("config"))
      .def_readwrite("chi", &DeviceParams::chi)
      .def_readwrite("chi_prime", &DeviceParams::chi_prime)
      .def_readwrite("kerr", &DeviceParams::kerr)
      .def_readwrite("omega_max", &DeviceParams::omega_max)
      .def_readwrite("dt", &DeviceParams::dt)
      .def_readwrite("t1_cavity", &DeviceParams::t1_cavity)
      .def_readwrite("t1_qubit", &DeviceParams::t1_qubit)
      .def_readwrite("t2_qubit", &DeviceParams::t2_qubit)
      .def_readwrite("cutoff", &DeviceParams::cutoff)
      .def_property_readonly("dim", &DeviceParams::dim)
      .def("validate", &DeviceParams::validate)
      .def("to_dict", [](const DeviceParams& p) { return from_json_value(json(p)); });

  py::class_<SpinChainModel>(m, "SpinChainModel")
      .def(py::init([](double j, double h, double v) { return SpinChainModel{j, h, v}; }), py::arg("J") = 1.0,
           py::arg("h") = 1.0, py::arg("V") = 0.5)
      .def_readwrite("J", &SpinChainModel::j_coupling)
      .def_readwrite("h", &SpinChainModel::h_field)
      .def_readwrite("V", &SpinChainModel::v_perturbation);

  m.def("static_hamiltonian", &build_static_hamiltonian, py::arg("params"));
  m.def(
      "propagate",
      [](const DeviceParams& p, const Matrix& drive) { return propagate(p, waveform_from(drive, p.dt)); },
      py::arg("params"), py::arg("drive"), "Joint unitary of a piecewise-constant drive");
  m.def("trace_fidelity", &trace_fidelity, py::arg("u"), py::arg("target"));
  m.def("subspace_fidelity", &subspace_fidelity, py::arg("u"), py::arg("target"));
  m.def(
      "synthesize",
      [](const Matrix& target, const DeviceParams& p, std::size_t n_ts, std::uint64_t seed, int max_iters,
         double tol, int restarts) {
        SynthesisProblem prob;
        prob.target = target;
        prob.params = p;
        prob.n_ts = n_ts;
        prob.seed = seed;
        prob.max_iters = max_iters;
        prob.tol_infidelity = tol;
        SynthesisResult r;
        {
          py::gil_scoped_release release;
          r = synthesize_restarts(prob, restarts);
        }
        py::dict d;
        d["drive"] = drive_from(r.waveform);
        d["infidelity"] = r.infidelity;
        d["iterations"] = r.iterations;
        d["seed"] = r.seed;
        d["converged"] = r.converged;
        d["history"] = r.fidelity_history;
        return d;
      },
      py::arg("target"), py::arg("params"), py::arg("n_ts"), py::arg("seed") = 1, py::arg("max_iters") = 3000,
      py::arg("tol_infidelity") = 1e-6, py::arg("restarts") = 1, "GRAPE synthesis of a target unitary");

  m.def(
      "extract_tensor",
      [](const Matrix& u, int bond_dim) {
        const MpsTensor t = extract_tensor(u, bond_dim);
        return py::make_tuple(t.a[0], t.a[1]);
      },
      py::arg("u"), py::arg("bond_dim"));
  m.def(
      "embed_isometry",
      [](const Matrix& a0, const Matrix& a1, int cutoff) { return embed_isometry(tensor_from(a0, a1), cutoff).matrix; },
      py::arg("a0"), py::arg("a1"), py::arg("cutoff"));
  m.def(
      "energy_density",
      [](const Matrix& a0, const Matrix& a1, const SpinChainModel& model) {
        return energy_density(tensor_from(a0, a1), model);
      },
      py::arg("a0"), py::arg("a1"), py::arg("model"));
  m.def(
      "correlation",
      [](const Matrix& a0, const Matrix& a1, char a, char b, int r) { return correlation(tensor_from(a0, a1), a, b, r); },
      py::arg("a0"), py::arg("a1"), py::arg("a"), py::arg("b"), py::arg("r"));
  m.def(
      "fixed_point",
      [](const Matrix& a0, const Matrix& a1) { return transfer_channel_fixed_point(tensor_from(a0, a1)); },
      py::arg("a0"), py::arg("a1"));
  m.def(
      "sample_chain",
      [](const Matrix& u, const std::string& bases, int shots, std::uint64_t seed, int burn_in) {
        const auto rows = sample_chain(u, std::vector<char>(bases.begin(), bases.end()), shots, seed, burn_in);
        py::array_t<std::uint8_t> out({static_cast<py::ssize_t>(rows.size()), static_cast<py::ssize_t>(bases.size())});
        auto v = out.mutable_unchecked<2>();
        for (std::size_t i = 0; i < rows.size(); ++i)
          for (std::size_t k = 0; k < bases.size(); ++k) v(i, k) = rows[i][k];
        return out;
      },
      py::arg("u"), py::arg("bases"), py::arg("shots"), py::arg("seed") = 1, py::arg("burn_in") = 0);

  m.def(
      "exact_ground_state",
      [](const SpinChainModel& model, int l, bool periodic) {
        const GroundState g = exact_ground_state(model, l, periodic ? Boundary::Periodic : Boundary::Open);
        return py::make_tuple(g.energy, g.state);
      },
      py::arg("model"), py::arg("length"), py::arg("periodic") = false);

  py::class_<FiniteMps>(m, "FiniteMps")
      .def_property_readonly("length", &FiniteMps::length)
      .def("expectation", &FiniteMps::expectation, py::arg("ops"))
      .def("central_correlation",
           [](const FiniteMps& mps, char a, char b, int r) { return central_correlation(mps, a, b, r); })
      .def("local_energy", [](const FiniteMps& mps, const SpinChainModel& model, int i) {
        return local_energy(mps, model, i);
      })
      .def("bulk_tensor", [](const FiniteMps& mps, int bond_dim) {
        const BulkTensor b = bulk_tensor(mps, bond_dim);
        return py::make_tuple(b.tensor.a[0], b.tensor.a[1]);
      });

  py::class_<DmrgResult>(m, "DmrgResult")
      .def_readonly("energy", &DmrgResult::energy)
      .def_readonly("bulk_energy", &DmrgResult::bulk_energy)
      .def_readonly("sweep_energies", &DmrgResult::sweep_energies)
      .def_readonly("truncation_error", &DmrgResult::truncation_error)
      .def_readonly("mps", &DmrgResult::mps);
  m.def(
      "dmrg",
      [](const SpinChainModel& model, int chain_length, int bond_dim, double sweep_tol, int max_sweeps,
         std::uint64_t seed) {
        DmrgConfig cfg;
        cfg.chain_length = chain_length;
        cfg.bond_dim = bond_dim;
        cfg.sweep_tol = sweep_tol;
        cfg.max_sweeps = max_sweeps;
        cfg.seed = seed;
        py::gil_scoped_release release;
        return dmrg_ground_state(model, cfg);
      },
      py::arg("model"), py::arg("chain_length") = 128, py::arg("bond_dim") = 16, py::arg("sweep_tol") = 1e-9,
      py::arg("max_sweeps") = 40, py::arg("seed") = 7);

  m.def(
      "snap_layer",
      [](cplx alpha, const std::array<double, 3>& phi, const RealVector& theta) {
        return SnapLayer{alpha, phi, theta}.unitary();
      },
      py::arg("alpha"), py::arg("phi"), py::arg("theta"));
  m.def(
      "synthesize_circuit",
      [](const Matrix& target, int cutoff, int depth, std::uint64_t seed, int batch, int max_iters) {
        CircuitProblem p;
        p.target = target;
        p.cutoff = cutoff;
        p.depth = depth;
        p.seed = seed;
        p.batch = batch;
        p.max_iters = max_iters;
        CircuitResult r;
        {
          py::gil_scoped_release release;
          r = synthesize_circuit(p);
        }
        py::dict d;
        d["unitary"] = r.circuit.unitary();
        d["depth_infidelity"] = r.depth_infidelity;
        d["infidelity"] = r.infidelity;
        d["implementation_time_ns"] = r.circuit.implementation_time();
        d["circuit"] = from_json_value(json(r.circuit));
        return d;
      },
      py::arg("target"), py::arg("cutoff"), py::arg("depth"), py::arg("seed") = 1, py::arg("batch") = 10,
      py::arg("max_iters") = 200, "SNAP-displacement circuit synthesis, growing depth one layer at a time");

  m.def(
      "noisy_step",
      [](const DeviceParams& p, const py::object& noise, const Matrix& h, const Matrix& rho) {
        return noisy_step(p, noise_from(noise), h, rho);
      },
      py::arg("params"), py::arg("noise"), py::arg("h"), py::arg("rho"),
      "One dt step: unitary evolution under h, then the dissipator");
  m.def(
      "noisy_energy",
      [](const DeviceParams& p, const py::object& noise, const Matrix& drive, const SpinChainModel& model) {
        const SiteChannel ch = noisy_site_superchannel(p, noise_from(noise), waveform_from(drive, p.dt));
        return energy_density(ch, fixed_point(ch).rho, model);
      },
      py::arg("params"), py::arg("noise"), py::arg("drive"), py::arg("model"));

  m.def(
      "run_vqe",
      [](const SpinChainModel& model, const DeviceParams& p, std::size_t n_ts, int bond_levels, int batch,
         std::uint64_t seed, int max_iters, const py::object& noise) {
        VqeProblem v;
        v.model = model;
        v.params = p;
        v.n_ts = n_ts;
        v.bond_levels = bond_levels;
        v.batch = batch;
        v.seed = seed;
        v.max_iters = max_iters;
        if (!noise.is_none()) v.noise = noise_from(noise);
        VqeResult r;
        {
          py::gil_scoped_release release;
          r = v.noise ? run_noisy_vqe(v) : run_vqe(v);
        }
        py::dict d;
        d["drive"] = drive_from(r.best);
        d["energy"] = r.energy;
        d["penalty"] = r.penalty;
        d["buffer_population"] = r.buffer_population;
        d["best_run"] = r.best_run;
        return d;
      },
      py::arg("model"), py::arg("params"), py::arg("n_ts"), py::arg("bond_levels") = 0, py::arg("batch") = 10,
      py::arg("seed") = 1, py::arg("max_iters") = 3000, py::arg("noise") = py::none());

  m.def(
      "validate_manifest",
      [](const py::dict& manifest, const std::filesystem::path& base) {
        return harness::validate(to_json_value(manifest), base);
      },
      py::arg("manifest"), py::arg("base_dir") = std::filesystem::path("."));
  m.def(
      "run_manifest",
      [](const py::dict& manifest, const std::filesystem::path& base,
         const std::optional<std::filesystem::path>& out) {
        const json j = to_json_value(manifest);
        harness::RunOutcome r;
        {
          py::gil_scoped_release release;
          r = harness::run(j, base, out.value_or(std::filesystem::path()));
        }
        return from_json_value(r.results);
      },
      py::arg("manifest"), py::arg("base_dir") = std::filesystem::path("."),
      py::arg("output_dir") = py::none());
  m.def("templates", [] { return from_json_value(harness::templates()); });
}
