#include "stlfem/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "json.hpp"

namespace stlfem {

using ordered_json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

void collect(std::vector<std::string>& errs, const std::string& msg) {
  errs.push_back(msg);
}

DampingModel parse_damping(const ordered_json& j, const std::string& ctx,
                           std::vector<std::string>& errs) {
  DampingModel d;
  if (!j.is_object()) {
    collect(errs, ctx + ": damping must be an object");
    return d;
  }
  std::string kind = j.value("kind", "none");
  if (kind == "none") {
    d.kind = DampingKind::none;
  } else if (kind == "reverberation") {
    d.kind = DampingKind::reverberation;
    d.T = j.value("T", 1.5);
    if (d.T <= 0.0) collect(errs, ctx + ".T: must be positive");
  } else if (kind == "atmospheric") {
    d.kind = DampingKind::atmospheric;
  } else {
    collect(errs, ctx + ".kind: unknown damping kind '" + kind + "'");
  }
  return d;
}

std::array<double, 3> parse_vec3(const ordered_json& j, const std::string& ctx,
                                 std::vector<std::string>& errs) {
  std::array<double, 3> v{};
  if (!j.is_array() || j.size() != 3) {
    collect(errs, ctx + ": expected an array of 3 numbers");
    return v;
  }
  for (int i = 0; i < 3; ++i) v[static_cast<size_t>(i)] = j[static_cast<size_t>(i)].get<double>();
  return v;
}

std::vector<std::array<double, 3>> parse_points(const ordered_json& j,
                                                const std::string& ctx,
                                                std::vector<std::string>& errs) {
  std::vector<std::array<double, 3>> out;
  if (!j.is_array()) {
    collect(errs, ctx + ": expected an array of positions");
    return out;
  }
  for (size_t i = 0; i < j.size(); ++i)
    out.push_back(parse_vec3(j[i], ctx + "[" + std::to_string(i) + "]", errs));
  return out;
}

RoomConfig parse_room(const ordered_json& j, const std::string& ctx,
                      std::vector<std::string>& errs) {
  RoomConfig r;
  if (!j.is_object()) {
    collect(errs, ctx + ": expected an object");
    return r;
  }
  if (j.contains("dims"))
    r.dims = parse_vec3(j.at("dims"), ctx + ".dims", errs);
  else
    collect(errs, ctx + ".dims: missing");
  r.medium = j.value("medium", "air");
  if (j.contains("damping")) r.damping = parse_damping(j.at("damping"), ctx + ".damping", errs);
  return r;
}

ordered_json damping_to_json(const DampingModel& d) {
  ordered_json j;
  switch (d.kind) {
    case DampingKind::none: j["kind"] = "none"; break;
    case DampingKind::reverberation:
      j["kind"] = "reverberation";
      j["T"] = d.T;
      break;
    case DampingKind::atmospheric: j["kind"] = "atmospheric"; break;
  }
  return j;
}

ordered_json room_to_json(const RoomConfig& r) {
  ordered_json j;
  j["dims"] = r.dims;
  j["medium"] = r.medium;
  j["damping"] = damping_to_json(r.damping);
  return j;
}

double room_volume(const RoomConfig& r) {
  return r.dims[0] * r.dims[1] * r.dims[2];
}

}  // namespace

ScenarioConfig config_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: JSON parse failed: ") + e.what());
  }
  std::vector<std::string> errs;
  ScenarioConfig cfg;
  cfg.fluids["air"] = FluidMedium{};

  try {
    cfg.name = j.value("name", "unnamed");
    if (j.contains("source_room"))
      cfg.source_room = parse_room(j.at("source_room"), "source_room", errs);
    else
      collect(errs, "source_room: missing");
    if (j.contains("receiving_room"))
      cfg.receiving_room =
          parse_room(j.at("receiving_room"), "receiving_room", errs);
    else
      collect(errs, "receiving_room: missing");

    if (j.contains("gap")) {
      const auto& g = j.at("gap");
      cfg.gap.present = g.value("present", true);
      if (cfg.gap.present) {
        if (!g.contains("l_x")) collect(errs, "gap.l_x: missing");
        cfg.gap.l_x = g.value("l_x", 0.0);
        cfg.gap.medium = g.value("medium", "air");
        if (g.contains("damping"))
          cfg.gap.damping = parse_damping(g.at("damping"), "gap.damping", errs);
      }
    }

    if (j.contains("walls") && j.at("walls").is_array()) {
      for (size_t i = 0; i < j.at("walls").size(); ++i) {
        const auto& w = j.at("walls")[i];
        WallConfig wc;
        wc.medium = w.value("medium", "plasterboard");
        wc.h = w.value("h", 0.0);
        if (wc.h <= 0.0)
          collect(errs, "walls[" + std::to_string(i) + "].h: must be positive");
        cfg.walls.push_back(wc);
      }
    } else {
      collect(errs, "walls: missing or not an array");
    }

    if (j.contains("fluids"))
      for (auto it = j.at("fluids").begin(); it != j.at("fluids").end(); ++it) {
        const auto& f = it.value();
        FluidMedium m;
        m.c = f.value("c", m.c);
        m.rho0 = f.value("rho0", m.rho0);
        m.gamma = f.value("gamma", m.gamma);
        m.mu = f.value("mu", m.mu);
        m.Pr = f.value("Pr", m.Pr);
        m.P0 = f.value("P0", m.P0);
        m.T_K = f.value("T_K", m.T_K);
        m.h_r = f.value("h_r", m.h_r);
        cfg.fluids[it.key()] = m;
      }
    if (j.contains("porous"))
      for (auto it = j.at("porous").begin(); it != j.at("porous").end(); ++it) {
        const auto& p = it.value();
        PorousMedium m;
        m.alpha_inf = p.value("alpha_inf", 1.0);
        m.Lambda = p.value("Lambda", 0.0);
        m.Lambda_p = p.value("Lambda_p", 0.0);
        m.sigma = p.value("sigma", 0.0);
        m.phi = p.value("phi", 1.0);
        m.rho1 = p.value("rho1", 0.0);
        std::string fl = p.value("fluid", "air");
        if (cfg.fluids.count(fl) == 0)
          collect(errs, "porous." + it.key() + ".fluid: unknown fluid '" + fl + "'");
        else
          m.fluid = cfg.fluids.at(fl);
        cfg.porous[it.key()] = m;
      }
    if (j.contains("solids"))
      for (auto it = j.at("solids").begin(); it != j.at("solids").end(); ++it) {
        const auto& s = it.value();
        SolidMedium m;
        m.E = s.value("E", 0.0);
        m.nu = s.value("nu", 0.0);
        m.rho = s.value("rho", 0.0);
        m.eta_s = s.value("eta_s", 0.0);
        cfg.solids[it.key()] = m;
      }

    cfg.Q_s = j.value("Q_s", 1e-4);
    if (j.contains("sources"))
      cfg.source_positions = parse_points(j.at("sources"), "sources", errs);
    else
      collect(errs, "sources: missing");
    if (j.contains("mics_source_room"))
      cfg.mics_source_room =
          parse_points(j.at("mics_source_room"), "mics_source_room", errs);
    if (j.contains("mics_receiving_room"))
      cfg.mics_receiving_room = parse_points(j.at("mics_receiving_room"),
                                             "mics_receiving_room", errs);

    if (j.contains("intervals") && j.at("intervals").is_array()) {
      for (size_t i = 0; i < j.at("intervals").size(); ++i) {
        const auto& iv = j.at("intervals")[i];
        if (!iv.is_array() || iv.size() != 2) {
          collect(errs, "intervals[" + std::to_string(i) + "]: expected [f_lo, f_hi]");
          continue;
        }
        cfg.intervals.push_back({iv[0].get<double>(), iv[1].get<double>()});
      }
    } else {
      collect(errs, "intervals: missing or not an array");
    }
    cfg.df = j.value("df", 1.0);
    cfg.nodes_per_wavelength = j.value("nodes_per_wavelength", 13);
    std::string mode = j.value("mesh_mode", "domain_specific");
    if (mode == "conforming")
      cfg.mesh_mode = MeshMode::conforming;
    else if (mode == "domain_specific")
      cfg.mesh_mode = MeshMode::domain_specific;
    else
      collect(errs, "mesh_mode: must be 'conforming' or 'domain_specific'");
    if (j.contains("bands")) {
      const auto& b = j.at("bands");
      if (b.is_array() && b.size() == 2) {
        cfg.band_min = b[0].get<double>();
        cfg.band_max = b[1].get<double>();
      } else {
        collect(errs, "bands: expected [f_min, f_max]");
      }
    }
    cfg.area_correction = j.value("area_correction", false);
  } catch (const nlohmann::json::exception& e) {
    collect(errs, std::string("config: malformed field: ") + e.what());
  }

  // Semantic checks.
  if (errs.empty()) {
    if (cfg.fluids.count(cfg.source_room.medium) == 0)
      collect(errs, "source_room.medium: unknown fluid '" + cfg.source_room.medium + "'");
    if (cfg.fluids.count(cfg.receiving_room.medium) == 0)
      collect(errs, "receiving_room.medium: unknown fluid '" +
                        cfg.receiving_room.medium + "'");
    if (cfg.gap.present && cfg.fluids.count(cfg.gap.medium) == 0 &&
        cfg.porous.count(cfg.gap.medium) == 0)
      collect(errs, "gap.medium: unknown medium '" + cfg.gap.medium + "'");
    for (size_t i = 0; i < cfg.walls.size(); ++i)
      if (cfg.solids.count(cfg.walls[i].medium) == 0)
        collect(errs, "walls[" + std::to_string(i) + "].medium: unknown solid '" +
                          cfg.walls[i].medium + "'");
    size_t need = cfg.gap.present ? 2 : 1;
    if (cfg.walls.size() != need)
      collect(errs, "walls: expected " + std::to_string(need) + " leaf/leaves");
    if (cfg.Q_s <= 0.0) collect(errs, "Q_s: must be positive");
    if (cfg.df <= 0.0) collect(errs, "df: must be positive");
    if (cfg.nodes_per_wavelength < 3)
      collect(errs, "nodes_per_wavelength: must be at least 3");
    if (cfg.band_min <= 0.0 || cfg.band_max < cfg.band_min)
      collect(errs, "bands: must satisfy 0 < f_min <= f_max");
    if (cfg.source_positions.empty()) collect(errs, "sources: empty");
  }

  if (!errs.empty()) {
    std::string msg = "config validation failed:";
    for (const std::string& e : errs) msg += "\n  - " + e;
    throw ConfigError(msg);
  }
  return cfg;
}

std::string config_to_json(const ScenarioConfig& cfg) {
  ordered_json j;
  j["name"] = cfg.name;
  j["source_room"] = room_to_json(cfg.source_room);
  j["receiving_room"] = room_to_json(cfg.receiving_room);
  ordered_json g;
  g["present"] = cfg.gap.present;
  if (cfg.gap.present) {
    g["l_x"] = cfg.gap.l_x;
    g["medium"] = cfg.gap.medium;
    g["damping"] = damping_to_json(cfg.gap.damping);
  }
  j["gap"] = g;
  j["walls"] = ordered_json::array();
  for (const WallConfig& w : cfg.walls)
    j["walls"].push_back({{"medium", w.medium}, {"h", w.h}});
  j["fluids"] = ordered_json::object();
  for (const auto& [name, m] : cfg.fluids)
    j["fluids"][name] = {{"c", m.c},   {"rho0", m.rho0}, {"gamma", m.gamma},
                         {"mu", m.mu}, {"Pr", m.Pr},     {"P0", m.P0},
                         {"T_K", m.T_K}, {"h_r", m.h_r}};
  j["porous"] = ordered_json::object();
  auto same_fluid = [](const FluidMedium& a, const FluidMedium& b) {
    return a.c == b.c && a.rho0 == b.rho0 && a.gamma == b.gamma &&
           a.mu == b.mu && a.Pr == b.Pr && a.P0 == b.P0 && a.T_K == b.T_K &&
           a.h_r == b.h_r;
  };
  for (const auto& [name, m] : cfg.porous) {
    std::string fl = "air";
    for (const auto& [fn, fm] : cfg.fluids)
      if (same_fluid(fm, m.fluid)) fl = fn;
    j["porous"][name] = {{"alpha_inf", m.alpha_inf}, {"Lambda", m.Lambda},
                         {"Lambda_p", m.Lambda_p},   {"sigma", m.sigma},
                         {"phi", m.phi},             {"rho1", m.rho1},
                         {"fluid", fl}};
  }
  j["solids"] = ordered_json::object();
  for (const auto& [name, m] : cfg.solids)
    j["solids"][name] = {
        {"E", m.E}, {"nu", m.nu}, {"rho", m.rho}, {"eta_s", m.eta_s}};
  j["Q_s"] = cfg.Q_s;
  j["sources"] = cfg.source_positions;
  j["mics_source_room"] = cfg.mics_source_room;
  j["mics_receiving_room"] = cfg.mics_receiving_room;
  j["intervals"] = ordered_json::array();
  for (const SweepInterval& iv : cfg.intervals)
    j["intervals"].push_back({iv.f_lo, iv.f_hi});
  j["df"] = cfg.df;
  j["nodes_per_wavelength"] = cfg.nodes_per_wavelength;
  j["mesh_mode"] = cfg.mesh_mode == MeshMode::conforming ? "conforming"
                                                         : "domain_specific";
  j["bands"] = {cfg.band_min, cfg.band_max};
  j["area_correction"] = cfg.area_correction;
  return j.dump(2) + "\n";
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

void save_config(const ScenarioConfig& cfg, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("config: cannot write '" + path + "'");
  out << config_to_json(cfg);
}

uint64_t config_hash(const ScenarioConfig& cfg) {
  const std::string s = config_to_json(cfg);
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void clip_intervals(ScenarioConfig& cfg, double f_min, double f_max) {
  if (!(f_min > 0.0) || !(f_max >= f_min))
    throw ConfigError("clip: need 0 < f_min <= f_max");
  std::vector<SweepInterval> kept;
  for (SweepInterval iv : cfg.intervals) {
    iv.f_lo = std::max(iv.f_lo, f_min);
    iv.f_hi = std::min(iv.f_hi, f_max);
    if (iv.f_lo <= iv.f_hi) kept.push_back(iv);
  }
  if (kept.empty())
    throw ConfigError("clip: no sweep interval intersects the requested range");
  cfg.intervals = kept;
}

namespace {

struct MergedLines {
  std::vector<double> freqs;
  std::vector<std::vector<cdouble>> mic_SR;  // [line][mic]
  std::vector<std::vector<cdouble>> mic_RR;
};

// Later intervals win at duplicated boundary frequencies.
MergedLines merge_records(const std::vector<SweepResult>& results) {
  std::map<long long, std::pair<size_t, size_t>> where;  // key -> (run, rec)
  for (size_t r = 0; r < results.size(); ++r)
    for (size_t i = 0; i < results[r].records.size(); ++i) {
      if (!results[r].records[i].ok) continue;
      long long key = std::llround(results[r].records[i].f * 1e6);
      where[key] = {r, i};
    }
  MergedLines out;
  out.freqs.reserve(where.size());
  for (const auto& [key, loc] : where) {
    const FrequencyRecord& rec = results[loc.first].records[loc.second];
    out.freqs.push_back(rec.f);
    out.mic_SR.push_back(rec.mic_SR);
    out.mic_RR.push_back(rec.mic_RR);
  }
  return out;
}

void write_narrowband_csv(const MergedLines& m, std::ostream& os) {
  os << "f_Hz,mic_id,room,re_p,im_p\n";
  char line[160];
  for (size_t i = 0; i < m.freqs.size(); ++i) {
    for (size_t j = 0; j < m.mic_SR[i].size(); ++j) {
      std::snprintf(line, sizeof line, "%.10g,%zu,SR,%.17g,%.17g\n", m.freqs[i],
                    j + 1, m.mic_SR[i][j].real(), m.mic_SR[i][j].imag());
      os << line;
    }
    for (size_t j = 0; j < m.mic_RR[i].size(); ++j) {
      std::snprintf(line, sizeof line, "%.10g,%zu,RR,%.17g,%.17g\n", m.freqs[i],
                    j + 1, m.mic_RR[i][j].real(), m.mic_RR[i][j].imag());
      os << line;
    }
  }
}

double max_set_drift(const Scene& scene) {
  double d = 0.0;
  for (const NodeSet& s : scene.sets)
    for (double g : s.drift) d = std::max(d, g);
  return d;
}

}  // namespace

StlResult run_stl(const ScenarioConfig& cfg, const RunOptions& opt) {
  std::vector<IntervalPlan> plan = plan_intervals(cfg);
  StlResult out;
  out.hash = config_hash(cfg);

  const double V_SR = room_volume(cfg.source_room);
  const double V_RR = room_volume(cfg.receiving_room);
  const int d_req = required_source_count(V_SR);
  if (static_cast<int>(cfg.source_positions.size()) < d_req)
    std::cerr << "[stl] warning: " << cfg.source_positions.size()
              << " source position(s), " << d_req
              << " required for this room volume\n";
  auto check_T = [](const RoomConfig& r, double V, const char* tag) {
    if (r.damping.kind != DampingKind::reverberation) return;
    if (!reverberation_time_admissible(r.damping.T, V))
      std::cerr << "[stl] warning: reverberation time " << r.damping.T
                << " s outside the admissible window for the " << tag << "\n";
  };
  check_T(cfg.source_room, V_SR, "source room");
  check_T(cfg.receiving_room, V_RR, "receiving room");

  std::vector<SweepResult> results;
  for (const IntervalPlan& ip : plan) {
    Scene scene = build_scene(cfg, ip.interval.f_hi);
    out.max_drift = std::max(out.max_drift, max_set_drift(scene));
    SweepOptions so;
    so.workers = opt.workers;
    so.keep_fields = opt.snapshot_fields;
    so.progress = opt.progress;
    SweepResult res = sweep(scene, cfg.Q_s, ip.freqs, so);
    IntervalStats st;
    st.interval = ip.interval;
    st.n_dof = res.n_dof;
    st.solves = static_cast<int>(ip.freqs.size());
    st.failures = res.failures;
    st.seconds = res.seconds;
    out.stats.push_back(st);
    if (res.failures > 0) out.ok = false;
    if (opt.snapshot_fields && opt.write_outputs) {
      fs::create_directories(opt.out_dir);
      char name[64];
      std::snprintf(name, sizeof name, "fields_%g_%g.csv", ip.interval.f_lo,
                    ip.interval.f_hi);
      std::ofstream fo(fs::path(opt.out_dir) / name);
      fo << "f_Hz,dof,re,im\n";
      for (const FrequencyRecord& rec : res.records) {
        if (!rec.ok) continue;
        for (Eigen::Index k = 0; k < rec.field.size(); ++k) {
          char ln[128];
          std::snprintf(ln, sizeof ln, "%.10g,%lld,%.17g,%.17g\n", rec.f,
                        static_cast<long long>(k), rec.field[k].real(),
                        rec.field[k].imag());
          fo << ln;
        }
      }
    }
    results.push_back(std::move(res));
  }

  MergedLines merged = merge_records(results);
  out.freqs = merged.freqs;
  out.mic_SR = merged.mic_SR;
  out.mic_RR = merged.mic_RR;

  // Band synthesis.
  const size_t n_sr = cfg.mics_source_room.size();
  const size_t n_rr = cfg.mics_receiving_room.size();
  if (opt.bands && (n_sr == 0 || n_rr == 0))
    throw ConfigError("stl: both rooms need at least one microphone");
  std::vector<std::vector<cdouble>> series_SR(n_sr), series_RR(n_rr);
  for (size_t i = 0; i < merged.freqs.size(); ++i) {
    for (size_t j = 0; j < n_sr; ++j) series_SR[j].push_back(merged.mic_SR[i][j]);
    for (size_t j = 0; j < n_rr; ++j) series_RR[j].push_back(merged.mic_RR[i][j]);
  }

  double corr = 0.0;
  if (opt.bands && cfg.area_correction) {
    if (cfg.receiving_room.damping.kind != DampingKind::reverberation)
      throw ConfigError(
          "stl: the area correction needs a receiving-room reverberation time");
    const double S = cfg.source_room.dims[1] * cfg.source_room.dims[2];
    const double A = 0.161 * V_RR / cfg.receiving_room.damping.T;
    corr = 10.0 * std::log10(S / A);
  }

  std::vector<ThirdOctaveBand> band_grid;
  if (opt.bands) band_grid = third_octave_bands(cfg.band_min, cfg.band_max);
  for (const ThirdOctaveBand& band : band_grid) {
    std::vector<double> p1, p2;
    int lines = 0;
    for (size_t j = 0; j < n_sr; ++j) {
      BandRms r = band_rms(merged.freqs, series_SR[j], band);
      lines = r.lines;
      p1.push_back(r.p);
    }
    for (size_t j = 0; j < n_rr; ++j)
      p2.push_back(band_rms(merged.freqs, series_RR[j], band).p);
    if (lines == 0) {
      ++out.empty_bands;
      std::cerr << "[stl] warning: band " << band.nominal
                << " Hz has no narrowband lines and is omitted\n";
      continue;
    }
    const double L1 = energy_average_level(p1);
    const double L2 = energy_average_level(p2);
    out.level_SR.bands.push_back(band);
    out.level_SR.values.push_back(L1);
    out.level_SR.lines.push_back(lines);
    out.level_RR.bands.push_back(band);
    out.level_RR.values.push_back(L2);
    out.level_RR.lines.push_back(lines);
    out.stl.bands.push_back(band);
    out.stl.values.push_back(sound_reduction_index(L1, L2) + corr);
    out.stl.lines.push_back(lines);
  }

  if (opt.write_outputs) {
    fs::create_directories(opt.out_dir);
    if (opt.bands) {
      std::ofstream os(fs::path(opt.out_dir) / "stl.csv");
      write_band_csv(out.stl, os);
    }
    {
      std::ofstream os(fs::path(opt.out_dir) / "narrowband.csv");
      write_narrowband_csv(merged, os);
    }
    {
      std::ofstream os(fs::path(opt.out_dir) / "manifest.txt");
      char buf[256];
      os << "scenario " << cfg.name << "\n";
      std::snprintf(buf, sizeof buf, "config_hash %016llx\n",
                    static_cast<unsigned long long>(out.hash));
      os << buf;
      os << "workers " << opt.workers << "\n";
      os << "mesh_mode "
         << (cfg.mesh_mode == MeshMode::conforming ? "conforming"
                                                   : "domain_specific")
         << "\n";
      os << "sources_provided " << cfg.source_positions.size() << " required "
         << d_req << "\n";
      auto t_line = [&](const RoomConfig& r, double V, const char* tag) {
        os << "reverberation_" << tag << " ";
        if (r.damping.kind != DampingKind::reverberation)
          os << "n/a\n";
        else
          os << (reverberation_time_admissible(r.damping.T, V) ? "admissible"
                                                               : "inadmissible")
             << "\n";
      };
      t_line(cfg.source_room, V_SR, "source_room");
      t_line(cfg.receiving_room, V_RR, "receiving_room");
      std::snprintf(buf, sizeof buf, "max_snap_drift_m %.6g\n", out.max_drift);
      os << buf;
      for (const IntervalStats& st : out.stats) {
        std::snprintf(buf, sizeof buf,
                      "interval %g %g dof %d solves %d failures %d seconds %.3f\n",
                      st.interval.f_lo, st.interval.f_hi, st.n_dof, st.solves,
                      st.failures, st.seconds);
        os << buf;
      }
      os << "bands " << out.stl.bands.size() << " empty_omitted "
         << out.empty_bands << "\n";
      os << "narrowband_lines " << merged.freqs.size() << "\n";
      os << "status " << (out.ok ? "ok" : "failed") << "\n";
    }
  }
  return out;
}

ConvergenceReport run_convergence(const ScenarioConfig& cfg,
                                  const std::vector<int>& rates,
                                  const RunOptions& opt) {
  if (rates.size() < 2)
    throw ConfigError("convergence: at least two sampling rates are required");
  ConvergenceReport out;

  std::ostringstream drift_report;
  for (int rate : rates) {
    ScenarioConfig c = cfg;
    c.nodes_per_wavelength = rate;
    c.mesh_mode = MeshMode::domain_specific;
    std::vector<IntervalPlan> plan = plan_intervals(c);
    ConvergenceRun run;
    run.rate = rate;
    std::vector<SweepResult> results;
    for (const IntervalPlan& ip : plan) {
      Scene scene = build_scene(c, ip.interval.f_hi);
      for (const NodeSet& s : scene.sets) {
        if (s.role != SetRole::microphone && s.role != SetRole::source) continue;
        for (size_t i = 0; i < s.ids.size(); ++i) {
          const auto& q = scene.domains[static_cast<size_t>(s.owner)]
                              .block.nodes[static_cast<size_t>(s.ids[i])];
          char buf[256];
          std::snprintf(buf, sizeof buf,
                        "rate %d interval %g %g set %s idx %zu requested "
                        "%g %g %g snapped %g %g %g drift %.6g\n",
                        rate, ip.interval.f_lo, ip.interval.f_hi,
                        s.name.c_str(), i + 1, s.requested[i][0],
                        s.requested[i][1], s.requested[i][2], q[0], q[1], q[2],
                        s.drift[i]);
          drift_report << buf;
        }
      }
      SweepOptions so;
      so.workers = opt.workers;
      so.progress = opt.progress;
      SweepResult res = sweep(scene, c.Q_s, ip.freqs, so);
      if (res.failures > 0) out.ok = false;
      run.n_dof = std::max(run.n_dof, res.n_dof);
      results.push_back(std::move(res));
    }
    MergedLines merged = merge_records(results);
    run.freqs = merged.freqs;
    for (size_t i = 0; i < merged.freqs.size(); ++i) {
      cdouble sr{0.0, 0.0}, rr{0.0, 0.0};
      for (const cdouble& p : merged.mic_SR[i]) sr += p;
      for (const cdouble& p : merged.mic_RR[i]) rr += p;
      run.mean_SR.push_back(sr / static_cast<double>(merged.mic_SR[i].size()));
      run.mean_RR.push_back(rr / static_cast<double>(merged.mic_RR[i].size()));
    }
    out.runs.push_back(std::move(run));
  }

  double f_lo = cfg.intervals.front().f_lo;
  double f_hi = cfg.intervals.back().f_hi;
  for (size_t k = 0; k + 1 < out.runs.size(); ++k) {
    const ConvergenceRun& a = out.runs[k];
    const ConvergenceRun& b = out.runs[k + 1];
    ConvergencePair pr;
    pr.rate_coarse = a.rate;
    pr.rate_fine = b.rate;
    pr.frac_SR = frac_report(a.freqs, a.mean_SR, b.freqs, b.mean_SR, f_lo, f_hi);
    pr.frac_RR = frac_report(a.freqs, a.mean_RR, b.freqs, b.mean_RR, f_lo, f_hi);
    std::vector<double> pa, pb;
    for (size_t i = 0; i < b.mean_RR.size(); ++i) pa.push_back(std::abs(b.mean_RR[i]));
    for (size_t i = 0; i < a.mean_RR.size(); ++i) pb.push_back(std::abs(a.mean_RR[i]));
    pr.err_RR = averaged_relative_error(pa, pb);
    out.pairs.push_back(std::move(pr));
  }

  if (opt.write_outputs) {
    fs::create_directories(opt.out_dir);
    {
      std::ofstream os(fs::path(opt.out_dir) / "frac.csv");
      os << "rate_coarse,rate_fine,room,f_lo,f_hi,lines,frac\n";
      char buf[160];
      for (const ConvergencePair& pr : out.pairs) {
        for (const FracBand& b : pr.frac_SR) {
          std::snprintf(buf, sizeof buf, "%d,%d,SR,%.10g,%.10g,%d,%.12g\n",
                        pr.rate_coarse, pr.rate_fine, b.f_lo, b.f_hi, b.lines,
                        b.value);
          os << buf;
        }
        for (const FracBand& b : pr.frac_RR) {
          std::snprintf(buf, sizeof buf, "%d,%d,RR,%.10g,%.10g,%d,%.12g\n",
                        pr.rate_coarse, pr.rate_fine, b.f_lo, b.f_hi, b.lines,
                        b.value);
          os << buf;
        }
      }
    }
    {
      std::ofstream os(fs::path(opt.out_dir) / "manifest.txt");
      os << "convergence " << cfg.name << "\n";
      char buf[160];
      std::snprintf(buf, sizeof buf, "config_hash %016llx\n",
                    static_cast<unsigned long long>(config_hash(cfg)));
      os << buf;
      os << "rates";
      for (const ConvergenceRun& r : out.runs) os << ' ' << r.rate;
      os << "\n";
      for (const ConvergenceRun& r : out.runs)
        os << "rate " << r.rate << " dof " << r.n_dof << " lines "
           << r.freqs.size() << "\n";
      for (const ConvergencePair& pr : out.pairs) {
        double mean_rr = 0.0;
        int cnt = 0;
        for (const FracBand& b : pr.frac_RR)
          if (b.lines > 0) {
            mean_rr += b.value;
            ++cnt;
          }
        std::snprintf(buf, sizeof buf,
                      "pair %d %d frac_RR_mean %.12g err_RR_mean %.12g used %d "
                      "skipped %d\n",
                      pr.rate_coarse, pr.rate_fine, cnt ? mean_rr / cnt : 0.0,
                      pr.err_RR.mean, pr.err_RR.used, pr.err_RR.skipped);
        os << buf;
      }
      os << drift_report.str();
      os << "status " << (out.ok ? "ok" : "failed") << "\n";
    }
  }
  return out;
}

}  // namespace stlfem
