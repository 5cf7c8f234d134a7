#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ssrent/convertibility.hpp"
#include "ssrent/distillation.hpp"
#include "ssrent/formation.hpp"
#include "ssrent/io.hpp"
#include "ssrent/monotones.hpp"
#include "ssrent/qubit_state.hpp"
#include "ssrent/reference_frames.hpp"

namespace py = pybind11;
using namespace ssrent;

namespace {

using PyLabel = std::pair<int, int>;
using PyAmp = std::tuple<PyLabel, PyLabel, cplx>;

SectoredPureState make_state(const std::vector<PyAmp>& amps, std::optional<std::vector<int>> alice_deg,
                             std::optional<std::vector<int>> bob_deg) {
  std::vector<Amplitude> list;
  for (const auto& [a, b, v] : amps) list.push_back({{a.first, a.second}, {b.first, b.second}, v});
  std::optional<LocalSpace> sa, sb;
  if (alice_deg) sa = LocalSpace(*alice_deg);
  if (bob_deg) sb = LocalSpace(*bob_deg);
  return SectoredPureState::from_amplitudes(list, sa, sb);
}

std::vector<PyAmp> amplitudes_of(const SectoredPureState& s) {
  std::vector<PyAmp> out;
  for (const auto& a : s.amplitudes()) out.emplace_back(PyLabel{a.alice.particles, a.alice.index}, PyLabel{a.bob.particles, a.bob.index}, a.value);
  return out;
}

RecurrenceVariant variant_of(const std::string& s) { return recurrence_variant_from_string(s); }

Task task_of(const std::string& s) {
  if (s == "distinguish") return Task::distinguish;
  if (s == "teleport") return Task::teleport;
  throw Error(ErrorCode::invalid_argument, "task must be 'distinguish' or 'teleport'");
}

HelperKind helper_of(const std::string& s) {
  if (s == "constant") return HelperKind::constant;
  if (s == "gaussian") return HelperKind::gaussian;
  if (s == "rho_sep") return HelperKind::rho_sep;
  if (s == "coherent") return HelperKind::coherent;
  throw Error(ErrorCode::invalid_argument, "unknown helper kind '" + s + "'");
}

py::dict sf_dict(const StandardForm& sf) {
  py::dict d;
  d["v"] = sf.v;
  d["w"] = sf.w;
  d["success_probability"] = sf.success_probability;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Bipartite entanglement under a particle-number superselection rule";

  static py::exception<Error> exc(m, "SsrentError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object err = exc;
      err.attr("code") = to_string(e.code());
      PyErr_SetString(exc.ptr(), e.what());
    }
  });

  py::class_<SectoredPureState>(m, "PureState")
      .def(py::init(&make_state), py::arg("amplitudes"), py::arg("alice_degeneracy") = py::none(),
           py::arg("bob_degeneracy") = py::none(),
           "amplitudes: list of ((n, i), (m, j), complex); normalized on construction")
      .def_property_readonly("total_particles", &SectoredPureState::total_particles)
      .def_property_readonly("alice_degeneracy", [](const SectoredPureState& s) { return s.alice_space().degeneracies(); })
      .def_property_readonly("bob_degeneracy", [](const SectoredPureState& s) { return s.bob_space().degeneracies(); })
      .def("amplitudes", &amplitudes_of)
      .def("coefficients", &SectoredPureState::coefficients)
      .def("norm", &SectoredPureState::norm)
      .def("sector_weights", &SectoredPureState::sector_weights)
      .def("schmidt_sector", [](const SectoredPureState& s, int n) { return schmidt_sector(s, n); })
      .def("to_json", [](const SectoredPureState& s) { return to_json(s); })
      .def("density", &SectoredPureState::density);

  py::class_<BlockDensityMatrix>(m, "DensityMatrix")
      .def("trace", &BlockDensityMatrix::trace)
      .def("dense", &BlockDensityMatrix::dense)
      .def("blocks", &BlockDensityMatrix::blocks)
      .def("min_eigenvalue", &BlockDensityMatrix::min_eigenvalue)
      .def("to_json", [](const BlockDensityMatrix& r) { return to_json(r); });

  py::class_<QubitSSRState>(m, "QubitState")
      .def(py::init<double, double, double, double, cplx>(), py::arg("w00"), py::arg("w01"), py::arg("w10"),
           py::arg("w11"), py::arg("gamma"))
      .def_static("from_p_cbar", &QubitSSRState::from_p_cbar)
      .def_static("from_density", [](const BlockDensityMatrix& r) { return QubitSSRState::from_density(r); })
      .def_property_readonly("w00", &QubitSSRState::w00)
      .def_property_readonly("w01", &QubitSSRState::w01)
      .def_property_readonly("w10", &QubitSSRState::w10)
      .def_property_readonly("w11", &QubitSSRState::w11)
      .def_property_readonly("gamma", &QubitSSRState::gamma)
      .def("matrix", &QubitSSRState::matrix)
      .def("density", &QubitSSRState::density);

  m.def("parse_state", [](const std::string& text) -> py::object {
    ParsedState s = parse_state(text);
    if (auto* p = std::get_if<SectoredPureState>(&s)) return py::cast(*p);
    return py::cast(std::get<BlockDensityMatrix>(s));
  });

  // monotones
  m.def("eoe", &eoe);
  m.def("siv", [](const SectoredPureState& s) { return siv(s); });
  m.def("monotones", [](const SectoredPureState& s) {
    MonotonePair p = monotones(s);
    return std::make_pair(p.eoe, p.siv);
  });
  m.def("concurrence", &concurrence);
  m.def("formation_function", &formation_function);
  m.def("rho_sep", &rho_sep);
  m.def("formation_point", [](const QubitSSRState& q) {
    FormationPoint f = formation_point(q);
    py::dict d;
    d["p"] = f.p;
    d["cbar"] = f.cbar;
    d["ef_ssr"] = f.ef_ssr;
    d["vf_ssr"] = f.vf_ssr;
    d["ef"] = f.ef;
    d["separable_candidate"] = f.separable_candidate;
    return d;
  });

  // convertibility
  m.def("convertible", [](const SectoredPureState& source, const SectoredPureState& target) {
    ConversionVerdict v = ssr_convertible(ConversionTask::deterministic(source, target));
    py::dict d;
    d["convertible"] = v.convertible;
    d["failing_sector"] = v.failing_sector;
    d["gap"] = v.gap;
    d["reason"] = v.reason;
    return d;
  });
  m.def("hat_embedding", &hat_embedding);
  m.def("ssr_schmidt_vector", [](const SectoredPureState& s) { return ssr_schmidt_vector(s).per_sector; });
  m.def("gaussian_convergence", [](const SectoredPureState& phi, int copies) {
    GaussianConvergence g = gaussian_convergence(phi, copies);
    py::dict d;
    d["gap_detected"] = g.gap_detected;
    d["gap_period"] = g.gap_period;
    d["kl_divergence"] = g.kl_divergence;
    d["variance_ratio"] = g.variance_ratio;
    return d;
  });
  m.def("typical_subspace_bounds", &typical_subspace_bounds);

  // distillation
  m.def("standard_form", [](const QubitSSRState& q) { return sf_dict(standard_form(q)); });
  m.def("standard_state", &standard_state);
  m.def("apply_closed_form", [](double v, double w, const std::string& var) {
    return sf_dict(apply_closed_form({v, w}, variant_of(var)));
  });
  m.def("simulate_recurrence", [](double v, double w, const std::string& var) {
    return sf_dict(simulate_recurrence({v, w}, variant_of(var)));
  });
  m.def("iterate_recurrence", [](double v, double w, const std::string& var, double tol, int max_steps) {
    IterationResult r = iterate_recurrence({v, w}, variant_of(var), tol, max_steps);
    py::dict d = sf_dict(r.final_form);
    d["steps"] = r.steps;
    d["converged"] = r.converged;
    return d;
  }, py::arg("v"), py::arg("w"), py::arg("variant"), py::arg("tol") = 1e-9, py::arg("max_steps") = 1000);
  m.def("extract_vepr", [](int rounds, std::uint64_t seed) {
    ExtractionResult r = extract_vepr(rounds, seed);
    py::dict d;
    d["success_probability"] = r.success_probability;
    d["matched_fidelity"] = r.matched_fidelity;
    d["matched_eoe"] = r.matched_eoe;
    d["matched_siv"] = r.matched_siv;
    d["residual_entanglement"] = r.residual_entanglement;
    d["monte_carlo_yield"] = r.monte_carlo_yield;
    return d;
  }, py::arg("rounds") = 1000, py::arg("seed") = 0);

  // reference frames
  m.def("fourier_hiding_state", &fourier_hiding_state);
  m.def("task_kernel", [](const std::string& task, int n) { return task_kernel(task_of(task), n); });
  m.def("helper_kernel", [](const std::string& kind, double size) { return helper_kernel({helper_of(kind), size}); });
  m.def("error_probability", [](const std::string& task, const std::string& kind, double size, int n) {
    return error_probability(task_of(task), {helper_of(kind), size}, n);
  });
  m.def("table_closed_form", [](const std::string& task, const std::string& kind, int n, double size) {
    return table_closed_form(task_of(task), helper_of(kind), n, size);
  });
  m.def("simulate_distinguish", [](int n, const std::string& kind, double size) {
    return simulate_distinguish(n, helper_state({helper_of(kind), size}));
  });
  m.def("rho_sep_distinguish", [] {
    RhoSepDistinguish r = rho_sep_distinguish();
    py::dict d;
    d["vepr_branch_probability"] = r.vepr_branch_probability;
    d["lost_branch_probability"] = r.lost_branch_probability;
    d["vepr_branch_success"] = r.vepr_branch_success;
    d["lost_branch_success"] = r.lost_branch_success;
    d["success_probability"] = r.success_probability;
    return d;
  });
  m.def("coherent_reference", [](double alpha, std::optional<int> cutoff) {
    return coherent_reference(alpha, cutoff ? *cutoff : coherent_cutoff(alpha));
  }, py::arg("alpha"), py::arg("cutoff") = py::none());
  m.def("coherent_vf_oracle", [](double alpha) { return coherent_vf_oracle(alpha, coherent_cutoff(alpha)); });
  m.def("mixed_teleport", [](const SectoredPureState& phi, const BlockDensityMatrix& frame) {
    TeleportResult r = mixed_teleport(phi, frame);
    return std::make_pair(r.fidelity, r.condition_residual);
  });
  m.def("quantum_hide", [](cplx alpha, cplx beta, int n) {
    QuantumHiding h = quantum_hide(alpha, beta, n);
    py::dict d;
    d["recovered"] = h.recovered;
    d["particle_cost"] = h.particle_cost;
    d["dephasing_residual"] = h.dephasing_residual;
    d["recovery_fidelity"] = h.recovery_fidelity;
    return d;
  });
}
