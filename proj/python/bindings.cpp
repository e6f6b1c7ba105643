#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stlfem/scenario.hpp"

namespace py = pybind11;

namespace {

using namespace stlfem;

ScenarioConfig resolve(const std::string& config_or_preset) {
  if (!config_or_preset.empty() && config_or_preset.front() == '{')
    return config_from_json(config_or_preset);
  return preset(config_or_preset);
}

py::dict spectrum_dict(const BandSpectrum& s) {
  py::list nominal, f_m, values, lines;
  for (size_t i = 0; i < s.bands.size(); ++i) {
    nominal.append(s.bands[i].nominal);
    f_m.append(s.bands[i].f_m);
    values.append(s.values[i]);
    lines.append(s.lines[i]);
  }
  py::dict d;
  d["nominal"] = nominal;
  d["f_m"] = f_m;
  d["values"] = values;
  d["lines"] = lines;
  return d;
}

py::dict stl_dict(const StlResult& r) {
  py::dict d;
  d["ok"] = r.ok;
  d["stl"] = spectrum_dict(r.stl);
  d["level_SR"] = spectrum_dict(r.level_SR);
  d["level_RR"] = spectrum_dict(r.level_RR);
  d["freqs"] = r.freqs;
  d["mic_SR"] = r.mic_SR;
  d["mic_RR"] = r.mic_RR;
  d["max_drift"] = r.max_drift;
  d["empty_bands"] = r.empty_bands;
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(r.hash));
  d["config_hash"] = std::string(hash);
  py::list stats;
  for (const IntervalStats& st : r.stats) {
    py::dict e;
    e["f_lo"] = st.interval.f_lo;
    e["f_hi"] = st.interval.f_hi;
    e["n_dof"] = st.n_dof;
    e["solves"] = st.solves;
    e["failures"] = st.failures;
    e["seconds"] = st.seconds;
    stats.append(e);
  }
  d["intervals"] = stats;
  return d;
}

py::dict convergence_dict(const ConvergenceReport& r) {
  py::dict d;
  d["ok"] = r.ok;
  py::list runs;
  for (const ConvergenceRun& run : r.runs) {
    py::dict e;
    e["rate"] = run.rate;
    e["n_dof"] = run.n_dof;
    e["freqs"] = run.freqs;
    e["mean_SR"] = run.mean_SR;
    e["mean_RR"] = run.mean_RR;
    runs.append(e);
  }
  d["runs"] = runs;
  py::list pairs;
  for (const ConvergencePair& pr : r.pairs) {
    py::dict e;
    e["rate_coarse"] = pr.rate_coarse;
    e["rate_fine"] = pr.rate_fine;
    auto bands = [](const std::vector<FracBand>& v) {
      py::list out;
      for (const FracBand& b : v) {
        py::dict x;
        x["f_lo"] = b.f_lo;
        x["f_hi"] = b.f_hi;
        x["value"] = b.value;
        x["lines"] = b.lines;
        out.append(x);
      }
      return out;
    };
    e["frac_SR"] = bands(pr.frac_SR);
    e["frac_RR"] = bands(pr.frac_RR);
    e["err_RR_mean"] = pr.err_RR.mean;
    e["err_RR_used"] = pr.err_RR.used;
    pairs.append(e);
  }
  d["pairs"] = pairs;
  return d;
}

RunOptions make_options(const std::string& out_dir, int workers,
                        bool write_outputs, bool snapshot_fields,
                        bool progress) {
  RunOptions opt;
  opt.out_dir = out_dir;
  opt.workers = workers;
  opt.write_outputs = write_outputs;
  opt.snapshot_fields = snapshot_fields;
  opt.progress = progress;
  return opt;
}

}  // namespace

PYBIND11_MODULE(_stlfem, m) {
  m.doc() = "Finite-element sound transmission loss simulator";
  m.attr("__version__") = "0.1.0";

  py::register_exception<Error>(m, "StlfemError");

  py::class_<FluidMedium>(m, "FluidMedium")
      .def(py::init<>())
      .def_readwrite("c", &FluidMedium::c)
      .def_readwrite("rho0", &FluidMedium::rho0)
      .def_readwrite("gamma", &FluidMedium::gamma)
      .def_readwrite("mu", &FluidMedium::mu)
      .def_readwrite("Pr", &FluidMedium::Pr)
      .def_readwrite("P0", &FluidMedium::P0)
      .def_readwrite("T_K", &FluidMedium::T_K)
      .def_readwrite("h_r", &FluidMedium::h_r);

  py::class_<PorousMedium>(m, "PorousMedium")
      .def(py::init<>())
      .def_readwrite("alpha_inf", &PorousMedium::alpha_inf)
      .def_readwrite("Lambda", &PorousMedium::Lambda)
      .def_readwrite("Lambda_p", &PorousMedium::Lambda_p)
      .def_readwrite("sigma", &PorousMedium::sigma)
      .def_readwrite("phi", &PorousMedium::phi)
      .def_readwrite("rho1", &PorousMedium::rho1)
      .def_readwrite("fluid", &PorousMedium::fluid);

  py::class_<SolidMedium>(m, "SolidMedium")
      .def(py::init<>())
      .def_readwrite("E", &SolidMedium::E)
      .def_readwrite("nu", &SolidMedium::nu)
      .def_readwrite("rho", &SolidMedium::rho)
      .def_readwrite("eta_s", &SolidMedium::eta_s);

  py::class_<ThirdOctaveBand>(m, "ThirdOctaveBand")
      .def_readonly("n", &ThirdOctaveBand::n)
      .def_readonly("nominal", &ThirdOctaveBand::nominal)
      .def_readonly("f_m", &ThirdOctaveBand::f_m)
      .def_readonly("f_l", &ThirdOctaveBand::f_l)
      .def_readonly("f_u", &ThirdOctaveBand::f_u)
      .def("__repr__", [](const ThirdOctaveBand& b) {
        return "ThirdOctaveBand(" + std::to_string(b.nominal) + " Hz)";
      });

  m.def("loss_factor_reverberation", &loss_factor_reverberation, py::arg("f"),
        py::arg("T"));
  m.def("atmospheric_attenuation", &atmospheric_attenuation, py::arg("f"),
        py::arg("T_K"), py::arg("h_r"), py::arg("P0"));
  m.def("loss_factor_attenuation", &loss_factor_attenuation, py::arg("f"),
        py::arg("m"), py::arg("c"));
  m.def("dynamic_bulk_modulus", &dynamic_bulk_modulus, py::arg("porous"),
        py::arg("omega"));
  m.def("dynamic_density", &dynamic_density, py::arg("porous"),
        py::arg("omega"));
  m.def("limp_density", &limp_density, py::arg("rho_e"), py::arg("porous"));
  m.def("equivalent_speed", &equivalent_speed, py::arg("K"), py::arg("rho"));
  m.def("wavelength_fluid", &wavelength_fluid, py::arg("medium"), py::arg("f"));
  m.def("wavelength_equivalent", &wavelength_equivalent, py::arg("porous"),
        py::arg("f"));
  m.def("wavelength_bending", &wavelength_bending, py::arg("solid"),
        py::arg("h"), py::arg("f"));
  m.def("element_length", &element_length, py::arg("wavelength"),
        py::arg("nodes_per_wavelength"));

  m.def("band_nominal", &band_nominal, py::arg("n"));
  m.def("third_octave_bands", &third_octave_bands, py::arg("f_min"),
        py::arg("f_max"));
  m.def(
      "band_rms",
      [](const std::vector<double>& freqs, const std::vector<cdouble>& amps,
         const ThirdOctaveBand& band) {
        BandRms r = band_rms(freqs, amps, band);
        return py::make_tuple(r.p, r.lines);
      },
      py::arg("freqs"), py::arg("amplitudes"), py::arg("band"));
  m.def("energy_average_level", &energy_average_level, py::arg("p_rms"));
  m.def("sound_reduction_index",
        py::overload_cast<double, double>(&sound_reduction_index),
        py::arg("L1"), py::arg("L2"));
  m.def("required_source_count", &required_source_count, py::arg("volume"));

  m.def("berger_reduction_index", &berger_reduction_index, py::arg("f"),
        py::arg("m_pp"), py::arg("air"));
  m.def("bending_stiffness", &bending_stiffness, py::arg("solid"),
        py::arg("h"));
  m.def("coincidence_frequency", &coincidence_frequency, py::arg("solid"),
        py::arg("h"), py::arg("air"));
  m.def("gap_stiffness",
        py::overload_cast<const FluidMedium&>(&gap_stiffness), py::arg("air"));
  m.def("gap_stiffness",
        py::overload_cast<const PorousMedium&, double>(&gap_stiffness),
        py::arg("porous"), py::arg("f_eval") = 1000.0);
  m.def("double_wall_resonance", &double_wall_resonance, py::arg("m1"),
        py::arg("m2"), py::arg("K"), py::arg("l_g"));
  m.def("octave_slope_guide", &octave_slope_guide, py::arg("f"),
        py::arg("f_anchor"), py::arg("R_anchor"),
        py::arg("dB_per_octave") = 12.0);
  m.def("clamped_plate_frequencies", &clamped_plate_frequencies,
        py::arg("solid"), py::arg("h"), py::arg("a"), py::arg("b"),
        py::arg("count"), py::arg("n_basis") = 10,
        py::call_guard<py::gil_scoped_release>());
  m.def("frac", &frac, py::arg("H1"), py::arg("H2"));

  m.def("preset_names", &preset_names);
  m.def(
      "preset_json",
      [](const std::string& name) { return config_to_json(preset(name)); },
      py::arg("name"));
  m.def(
      "config_hash",
      [](const std::string& config_or_preset) {
        char hash[17];
        std::snprintf(hash, sizeof hash, "%016llx",
                      static_cast<unsigned long long>(
                          config_hash(resolve(config_or_preset))));
        return std::string(hash);
      },
      py::arg("config"));
  m.def(
      "mesh_dof",
      [](const std::string& config_or_preset, double f_max) {
        Scene scene = build_scene(resolve(config_or_preset), f_max);
        return build_dof_map(scene).n;
      },
      py::arg("config"), py::arg("f_max"),
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "run_stl",
      [](const std::string& config_or_preset, const std::string& out_dir,
         int workers, bool write_outputs, bool snapshot_fields, bool progress) {
        ScenarioConfig cfg = resolve(config_or_preset);
        StlResult res;
        {
          py::gil_scoped_release release;
          res = run_stl(cfg, make_options(out_dir, workers, write_outputs,
                                          snapshot_fields, progress));
        }
        return stl_dict(res);
      },
      py::arg("config"), py::arg("out_dir") = "out", py::arg("workers") = 1,
      py::arg("write_outputs") = true, py::arg("snapshot_fields") = false,
      py::arg("progress") = false);
  m.def(
      "run_convergence",
      [](const std::string& config_or_preset, const std::vector<int>& rates,
         const std::string& out_dir, int workers, bool write_outputs,
         bool progress) {
        ScenarioConfig cfg = resolve(config_or_preset);
        ConvergenceReport rep;
        {
          py::gil_scoped_release release;
          rep = run_convergence(cfg, rates,
                                make_options(out_dir, workers, write_outputs,
                                             false, progress));
        }
        return convergence_dict(rep);
      },
      py::arg("config"), py::arg("rates"), py::arg("out_dir") = "out",
      py::arg("workers") = 1, py::arg("write_outputs") = true,
      py::arg("progress") = false);
}
