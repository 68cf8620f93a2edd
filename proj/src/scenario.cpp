#include "biphoton/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "biphoton/bounds.hpp"
#include "biphoton/csv.hpp"
#include "biphoton/errors.hpp"

namespace biphoton {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw ConfigError(path + ": " + msg); }

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& [k, v] : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return k == a; })) {
      fail(path.empty() ? k : path + "." + k, "unknown field");
    }
  }
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double number(const json& obj, const std::string& key, const std::string& path) {
  const std::string p = join(path, key);
  if (!obj.contains(key)) fail(p, "missing required number");
  if (!obj.at(key).is_number()) fail(p, "expected a number");
  const double v = obj.at(key).get<double>();
  if (!std::isfinite(v)) fail(p, "must be finite");
  return v;
}

double number_or(const json& obj, const std::string& key, const std::string& path, double dflt) {
  return obj.contains(key) ? number(obj, key, path) : dflt;
}

std::string text(const json& obj, const std::string& key, const std::string& path) {
  const std::string p = join(path, key);
  if (!obj.contains(key)) fail(p, "missing required string");
  if (!obj.at(key).is_string()) fail(p, "expected a string");
  return obj.at(key).get<std::string>();
}

std::size_t count(const json& v, const std::string& p, std::size_t min) {
  if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(min)) {
    fail(p, "expected an integer >= " + std::to_string(min));
  }
  return static_cast<std::size_t>(v.get<long long>());
}

Window parse_window(const json& w, const std::string& path) {
  if (w.is_string()) {
    const auto s = w.get<std::string>();
    if (s == "full") return Window::full();
    if (s == "empty") return Window::empty();
    fail(path, "expected \"full\", \"empty\" or a range object");
  }
  check_keys(w, path, {"lo_rad_s", "hi_rad_s", "lo_s", "hi_s"});
  const bool freq = w.contains("lo_rad_s") || w.contains("hi_rad_s");
  const bool time = w.contains("lo_s") || w.contains("hi_s");
  if (freq == time) fail(path, "give either lo_rad_s/hi_rad_s (frequency) or lo_s/hi_s (time)");
  const double lo = number(w, freq ? "lo_rad_s" : "lo_s", path);
  const double hi = number(w, freq ? "hi_rad_s" : "hi_s", path);
  if (!(lo <= hi)) fail(path, "window needs lo <= hi");
  return Window::range(lo, hi, freq ? Domain::Frequency : Domain::Time);
}

TransformStep parse_step(const json& s, const std::string& path) {
  TransformStep t;
  const std::string type = text(s, "type", path);
  if (type == "phase") {
    check_keys(s, path, {"type", "dof", "phi0_rad", "tau_s", "beta_l_s2"});
    t.kind = TransformStep::Kind::Phase;
    t.dof = text(s, "dof", path);
    t.phi0 = number_or(s, "phi0_rad", path, 0.0);
    t.tau = number_or(s, "tau_s", path, 0.0);
    t.beta_l = number_or(s, "beta_l_s2", path, 0.0);
  } else if (type == "fourier") {
    check_keys(s, path, {"type", "dof"});
    t.kind = TransformStep::Kind::Fourier;
    t.dof = text(s, "dof", path);
  } else if (type == "beam_splitter") {
    check_keys(s, path, {"type", "p", "q", "transmission"});
    t.kind = TransformStep::Kind::BeamSplitter;
    t.dof = text(s, "p", path);
    t.dof_q = text(s, "q", path);
    t.transmission = number(s, "transmission", path);
    if (!(t.transmission >= 0.0 && t.transmission <= 1.0)) fail(join(path, "transmission"), "must lie in [0, 1]");
  } else if (type == "loss") {
    check_keys(s, path, {"type", "dof", "eta"});
    t.kind = TransformStep::Kind::Loss;
    t.dof = text(s, "dof", path);
    t.eta = number(s, "eta", path);
    if (!(t.eta >= 0.0 && t.eta <= 1.0)) fail(join(path, "eta"), "field transmittivity must lie in [0, 1]");
  } else if (type == "projection") {
    check_keys(s, path, {"type", "dof", "window"});
    t.kind = TransformStep::Kind::Projection;
    t.dof = text(s, "dof", path);
    if (!s.contains("window")) fail(join(path, "window"), "missing required window");
    t.window = parse_window(s.at("window"), join(path, "window"));
  } else {
    fail(join(path, "type"), "unknown transform '" + type + "' (phase, fourier, beam_splitter, loss, projection)");
  }
  return t;
}

std::size_t dof_index(const std::vector<DofAxis>& dofs, const std::string& label, const std::string& what) {
  for (std::size_t k = 0; k < dofs.size(); ++k) {
    if (dofs[k].label == label) return k;
  }
  std::string known;
  for (const auto& d : dofs) known += (known.empty() ? "" : ", ") + d.label;
  throw ConfigError(what + ": unknown DOF '" + label + "' (known: " + known + ")");
}

std::string pnd_label(const std::vector<std::size_t>& n) {
  std::string s = "P(";
  for (std::size_t d = 0; d < n.size(); ++d) s += (d ? "," : "") + std::to_string(n[d]);
  return s + ")";
}

void add_pnd_rows(ScenarioResult& r, const PhotonStatistics& st, const std::string& method) {
  std::vector<std::size_t> n(st.cutoffs.size(), 0);
  for (double p : st.probabilities) {
    r.rows.push_back({pnd_label(n), method, p, std::nullopt, ""});
    for (std::size_t d = n.size(); d-- > 0;) {
      if (++n[d] <= st.cutoffs[d]) break;
      n[d] = 0;
    }
  }
  r.rows.push_back({"normalization_deficit", method, st.normalization_deficit, std::nullopt, ""});
}

std::string fmt(double v) { return csv::format_number(v); }

}  // namespace

ScenarioConfig parse_scenario(const std::string& json_text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(root, "", {"source", "grid", "modes", "pipeline", "detection", "output"});
  ScenarioConfig c;

  if (!root.contains("source")) fail("source", "missing required object");
  const json& src = root.at("source");
  check_keys(src, "source", {"process", "gain", "mu", "jsa"});
  c.process = [&] {
    try {
      return parse_process(text(src, "process", "source"));
    } catch (const ConfigError& e) {
      if (std::string(e.what()).rfind("source.", 0) == 0) throw;
      fail("source.process", e.what());
    }
  }();
  if (src.contains("gain") == src.contains("mu")) fail("source", "give exactly one of gain or mu");
  if (src.contains("gain")) {
    c.gain = number(src, "gain", "source");
    if (*c.gain < 0.0) fail("source.gain", "must be >= 0");
  } else {
    c.mu = number(src, "mu", "source");
    if (*c.mu < 0.0) fail("source.mu", "must be >= 0");
  }
  if (!src.contains("jsa")) fail("source.jsa", "missing required object");
  const json& jsa = src.at("jsa");
  check_keys(jsa, "source.jsa", {"gaussian", "csv"});
  if (jsa.contains("gaussian") == jsa.contains("csv")) fail("source.jsa", "give exactly one of gaussian or csv");
  if (jsa.contains("gaussian")) {
    const std::string p = "source.jsa.gaussian";
    const json& g = jsa.at("gaussian");
    check_keys(g, p, {"delta_plus_rad_s", "delta_minus_rad_s", "center_signal_rad_s", "center_idler_rad_s"});
    GaussianJsaModel m;
    m.delta_plus = number(g, "delta_plus_rad_s", p);
    m.delta_minus = number(g, "delta_minus_rad_s", p);
    m.center_signal = number_or(g, "center_signal_rad_s", p, 0.0);
    m.center_idler = number_or(g, "center_idler_rad_s", p, 0.0);
    if (!(m.delta_plus > 0.0)) fail(p + ".delta_plus_rad_s", "must be > 0");
    if (!(m.delta_minus > 0.0)) fail(p + ".delta_minus_rad_s", "must be > 0");
    c.gaussian = m;
  } else {
    if (!jsa.at("csv").is_string()) fail("source.jsa.csv", "expected a file path");
    std::filesystem::path f = jsa.at("csv").get<std::string>();
    c.jsa_csv = f.is_absolute() ? f : base_dir / f;
  }

  if (root.contains("grid")) {
    const json& g = root.at("grid");
    check_keys(g, "grid", {"extent_sigma", "points"});
    c.extent_sigma = number_or(g, "extent_sigma", "grid", c.extent_sigma);
    if (!(c.extent_sigma > 0.0)) fail("grid.extent_sigma", "must be > 0");
    if (g.contains("points")) c.points = count(g.at("points"), "grid.points", 2);
  }

  if (root.contains("modes")) {
    const json& m = root.at("modes");
    check_keys(m, "modes", {"vacuum"});
    if (m.contains("vacuum")) {
      if (!m.at("vacuum").is_array()) fail("modes.vacuum", "expected an array of labels");
      for (std::size_t i = 0; i < m.at("vacuum").size(); ++i) {
        const json& v = m.at("vacuum")[i];
        if (!v.is_string()) fail("modes.vacuum[" + std::to_string(i) + "]", "expected a label");
        c.vacuum_modes.push_back(v.get<std::string>());
      }
    }
  }

  if (root.contains("pipeline")) {
    const json& p = root.at("pipeline");
    if (!p.is_array()) fail("pipeline", "expected an array of transforms");
    for (std::size_t i = 0; i < p.size(); ++i) c.pipeline.push_back(parse_step(p[i], "pipeline[" + std::to_string(i) + "]"));
  }

  if (root.contains("detection")) {
    const json& d = root.at("detection");
    check_keys(d, "detection", {"detectors", "methods", "series_order", "pnd_cutoffs"});
    if (d.contains("detectors")) {
      const json& ds = d.at("detectors");
      if (!ds.is_array() || ds.empty()) fail("detection.detectors", "expected a non-empty array");
      for (std::size_t i = 0; i < ds.size(); ++i) {
        const std::string p = "detection.detectors[" + std::to_string(i) + "]";
        check_keys(ds[i], p, {"dofs", "windows"});
        DetectorConfig det;
        if (!ds[i].contains("dofs") || !ds[i].at("dofs").is_array() || ds[i].at("dofs").empty()) {
          fail(p + ".dofs", "expected a non-empty array of DOF labels");
        }
        for (const auto& l : ds[i].at("dofs")) {
          if (!l.is_string()) fail(p + ".dofs", "expected DOF labels");
          det.dofs.push_back(l.get<std::string>());
        }
        det.windows.assign(det.dofs.size(), Window::full());
        if (ds[i].contains("windows")) {
          const json& ws = ds[i].at("windows");
          if (!ws.is_object()) fail(p + ".windows", "expected an object keyed by DOF label");
          for (const auto& [k, v] : ws.items()) {
            auto it = std::find(det.dofs.begin(), det.dofs.end(), k);
            if (it == det.dofs.end()) fail(p + ".windows." + k, "DOF is not part of this detector");
            det.windows[static_cast<std::size_t>(it - det.dofs.begin())] = parse_window(v, p + ".windows." + k);
          }
        }
        c.detectors.push_back(std::move(det));
      }
    }
    if (d.contains("methods")) {
      const json& ms = d.at("methods");
      if (!ms.is_array() || ms.empty()) fail("detection.methods", "expected a non-empty array");
      c.methods.clear();
      for (std::size_t i = 0; i < ms.size(); ++i) {
        const std::string p = "detection.methods[" + std::to_string(i) + "]";
        if (!ms[i].is_string()) fail(p, "expected a method name");
        try {
          c.methods.push_back(parse_method(ms[i].get<std::string>()));
        } catch (const ConfigError& e) {
          fail(p, e.what());
        }
      }
    }
    if (d.contains("series_order")) c.series_order = static_cast<int>(count(d.at("series_order"), "detection.series_order", 1));
    if (d.contains("pnd_cutoffs")) {
      const json& pc = d.at("pnd_cutoffs");
      if (!pc.is_array()) fail("detection.pnd_cutoffs", "expected an array of integers");
      for (std::size_t i = 0; i < pc.size(); ++i) {
        c.pnd_cutoffs.push_back(count(pc[i], "detection.pnd_cutoffs[" + std::to_string(i) + "]", 0));
      }
    }
  }

  if (root.contains("output")) {
    const json& o = root.at("output");
    check_keys(o, "output", {"csv", "precision"});
    if (o.contains("csv")) {
      if (!o.at("csv").is_string()) fail("output.csv", "expected a file path");
      std::filesystem::path f = o.at("csv").get<std::string>();
      c.output_csv = f.is_absolute() ? f : base_dir / f;
    }
    if (o.contains("precision")) {
      c.precision = static_cast<int>(count(o.at("precision"), "output.precision", 1));
      if (c.precision > 17) fail("output.precision", "at most 17 significant digits");
    }
  }
  return c;
}

ScenarioConfig load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open config file '" + file.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), file.parent_path());
}

const ResultRow* ScenarioResult::find(const std::string& quantity, const std::string& method) const {
  for (const auto& r : rows) {
    if (r.quantity == quantity && r.method == method) return &r;
  }
  return nullptr;
}

void ScenarioResult::write_csv(std::ostream& os, int precision) const {
  csv::Writer w(os, precision);
  for (const auto& m : metadata) w.comment(m);
  w.header({"quantity", "method", "value", "bound", "bound_kind"});
  for (const auto& r : rows) {
    w.row({r.quantity, r.method, csv::format_number(r.value, precision),
           r.bound ? csv::format_number(*r.bound, precision) : std::string{}, r.bound_kind});
  }
}

ScenarioResult run_scenario(const ScenarioConfig& c) {
  ScenarioResult out;

  // source
  DiscretizedJsa jsa;
  if (c.gaussian) {
    c.gaussian->validate();
    const std::size_t n = c.points.value_or(default_gaussian_points(*c.gaussian, c.extent_sigma));
    const auto [gs, gi] = default_gaussian_grids(*c.gaussian, n, c.extent_sigma);
    jsa = build_gaussian_jsa(*c.gaussian, gs, gi);
  } else {
    std::ifstream in(*c.jsa_csv);
    if (!in) throw ConfigError("source.jsa.csv: cannot open '" + c.jsa_csv->string() + "'");
    jsa = read_jsa_csv(in);
  }
  const SchmidtSpectrum schmidt = schmidt_decompose(jsa);
  const double k_schmidt = schmidt_number(schmidt);
  const double gain = c.gain ? *c.gain : gain_for_mean_pairs(schmidt.coefficients, *c.mu, c.process);
  const SqueezingSpectrum sq = SqueezingSpectrum::from_schmidt(schmidt, gain, c.process);
  const RenormalizedCovariance gamma =
      build_covariance_exact(schmidt, jsa.grid_signal, jsa.grid_idler, gain, c.process);
  const GeneratorZ z = build_generator(jsa, gain, c.process);

  // modes and pipeline
  std::vector<DofAxis> dofs = gamma.dofs;
  const std::size_t m_src = dofs.size();
  for (const auto& label : c.vacuum_modes) {
    dofs.push_back(DofAxis{gamma.dofs[0].grid, Domain::Frequency, label});
  }
  std::set<std::string> labels;
  for (const auto& d : dofs) {
    if (!labels.insert(d.label).second) throw ConfigError("modes.vacuum: duplicate DOF label '" + d.label + "'");
  }
  SymplecticTransform s = identity_transform(dofs);
  bool loss_only = c.vacuum_modes.empty();
  std::vector<double> eta_src(m_src, 1.0);
  for (std::size_t i = 0; i < c.pipeline.size(); ++i) {
    const TransformStep& st = c.pipeline[i];
    const std::string where = "pipeline[" + std::to_string(i) + "]";
    const auto& cur = s.out_dofs;
    SymplecticTransform t;
    switch (st.kind) {
      case TransformStep::Kind::Phase:
        t = phase_shift(st.phi0, st.tau, st.beta_l, cur, dof_index(cur, st.dof, where));
        loss_only = false;
        break;
      case TransformStep::Kind::Fourier:
        t = fourier(cur, dof_index(cur, st.dof, where));
        loss_only = false;
        break;
      case TransformStep::Kind::BeamSplitter: {
        const std::size_t p = dof_index(cur, st.dof, where);
        const std::size_t q = dof_index(cur, st.dof_q, where);
        const auto n = static_cast<Eigen::Index>(cur[p].grid.size());
        const RVector tt = RVector::Constant(n, std::sqrt(st.transmission));
        const RVector rr = RVector::Constant(n, std::sqrt(1.0 - st.transmission));
        t = beam_splitter(tt, rr, p, q, cur);
        loss_only = false;
        break;
      }
      case TransformStep::Kind::Loss: {
        const std::size_t k = dof_index(cur, st.dof, where);
        LossProfile lp = LossProfile::uniform(cur, 1.0);
        lp.eta[k].setConstant(st.eta);
        t = loss_transform(lp, cur);
        if (k < m_src) eta_src[k] *= st.eta;
        break;
      }
      case TransformStep::Kind::Projection: {
        const std::size_t k = dof_index(cur, st.dof, where);
        DetectionProjection pr = DetectionProjection::full(cur.size());
        pr.windows[k] = st.window;
        t = projection_transform(pr, cur);
        loss_only = false;
        break;
      }
    }
    s = compose(t, s);
  }
  const SymplecticTransform sc = compress(s, m_src);

  // detectors
  std::vector<DetectorConfig> detectors = c.detectors;
  if (detectors.empty()) {
    for (std::size_t k = 0; k < m_src; ++k) detectors.push_back({{dofs[k].label}, {Window::full()}});
  }
  std::set<std::size_t> used;
  std::vector<BlockOperator> d_ops;
  bool full_windows = true;
  for (std::size_t i = 0; i < detectors.size(); ++i) {
    const std::string where = "detection.detectors[" + std::to_string(i) + "]";
    DetectionProjection pr = DetectionProjection::empty(sc.out_dofs.size());
    for (std::size_t j = 0; j < detectors[i].dofs.size(); ++j) {
      const std::size_t k = dof_index(sc.out_dofs, detectors[i].dofs[j], where);
      if (!used.insert(k).second) throw ConfigError(where + ": DOF '" + detectors[i].dofs[j] + "' is watched twice");
      pr.windows[k] = detectors[i].windows[j];
      if (detectors[i].windows[j].kind != Window::Kind::Full) full_windows = false;
    }
    d_ops.push_back(pulled_back_projection(sc, pr));
  }
  // the largest eigenvalue of the summed detection operator plays the role of eta^2
  BlockOperator d_total = d_ops.front();
  for (std::size_t i = 1; i < d_ops.size(); ++i) d_total = d_total + d_ops[i];
  const double eta2_max = std::clamp(hermitian_eigenvalues(d_total).back() * (1.0 + 1e-12), 0.0, 1.0);
  std::vector<double> eta_detected = eta_src;
  for (std::size_t k = 0; k < m_src; ++k) {
    if (!used.count(k)) eta_detected[k] = 0.0;
  }
  std::vector<BlockOperator> k_ops;
  for (const auto& d : d_ops) k_ops.push_back(d * gamma.op);
  BlockOperator k_total = k_ops.front();
  for (std::size_t i = 1; i < k_ops.size(); ++i) k_total = k_total + k_ops[i];
  const double tr_k = k_total.trace().real();
  const double tr_k2 = trace_product(k_total, k_total).real();
  auto [lower, upper] = vacuum_interval(tr_k, tr_k2);
  upper = std::min(upper, 1.0);
  auto certificate = [&](double v) { return std::max(std::abs(v - lower), std::abs(v - upper)); };

  out.metadata = {
      "process=" + to_string(c.process),
      "gain=" + fmt(gain),
      "mean_pairs=" + fmt(sq.mean_pairs()),
      "schmidt_number=" + fmt(k_schmidt),
      "schmidt_modes=" + std::to_string(schmidt.coefficients.size()),
      "grid_points=" + std::to_string(jsa.grid_signal.size()) + "x" + std::to_string(jsa.grid_idler.size()),
      "source_dofs=" + std::to_string(m_src),
      "total_dofs=" + std::to_string(dofs.size()),
      "detectors=" + std::to_string(d_ops.size()),
      "determinant_dimension=" + std::to_string(k_total.total_rows()),
      "vacuum_interval=[" + fmt(lower) + ", " + fmt(upper) + "]",
  };
  out.rows.push_back({"mean_pairs", "exact", sq.mean_pairs(), std::nullopt, ""});
  out.rows.push_back({"schmidt_number", "numeric", k_schmidt, std::nullopt, ""});

  std::optional<PowerSeries> poisson_e;
  std::optional<PowerSeries> hermite_e;
  auto poisson_exp = [&]() -> const PowerSeries& {
    if (!poisson_e) poisson_e = poisson_exponent(d_ops, z.op);
    return *poisson_e;
  };
  auto hermite_exp = [&]() -> const PowerSeries& {
    if (!hermite_e) hermite_e = hermite_exponent(d_ops, z.op);
    return *hermite_e;
  };
  const std::vector<double> ones(d_ops.size(), 1.0);
  const std::string vac = "vacuum_probability";
  const std::string kind_range = to_string(BoundKind::VacuumRange);

  bool poisson_family = false;
  for (Method m : c.methods) {
    const std::string name = to_string(m);
    switch (m) {
      case Method::Exact: {
        const double v = std::exp(-0.5 * log_det_exact(k_total));
        out.rows.push_back({vac, name, v, 0.0, "EXACT"});
        break;
      }
      case Method::LogSeries: {
        const LogDetSeries ls = log_det_series(k_total, c.series_order);
        const double v = std::exp(-0.5 * ls.value);
        if (ls.radius_warning) {
          out.metadata.push_back("warning: spectral radius estimate " + fmt(ls.spectral_radius_estimate) +
                                 " exceeds 0.95; the log series may diverge");
        }
        try {
          const BoundReport b = det_truncation_bound_eigen(covariance_eigenvalues(sq), eta2_max, c.series_order);
          out.rows.push_back({vac, name, v, std::min(absolute_from_relative(b.value, v), certificate(v)),
                              to_string(b.kind)});
        } catch (const DomainError&) {
          out.rows.push_back({vac, name, v, certificate(v), kind_range});
        }
        break;
      }
      case Method::Poisson:
        poisson_family = true;
        out.rows.push_back({vac, name, std::exp(poisson_exp().evaluate(ones)), std::nullopt, kind_range});
        out.rows.back().bound = certificate(out.rows.back().value);
        break;
      case Method::Linear:
        poisson_family = true;
        out.rows.push_back({vac, name, 1.0 + poisson_exp().evaluate(ones), std::nullopt, kind_range});
        out.rows.back().bound = certificate(out.rows.back().value);
        break;
      case Method::Hermite:
        out.rows.push_back({vac, name, std::exp(hermite_exp().evaluate(ones)), std::nullopt, kind_range});
        out.rows.back().bound = certificate(out.rows.back().value);
        break;
      case Method::Quadratic: {
        if (!loss_only || !full_windows) {
          throw ConfigError("detection.methods: quadratic needs a loss-only pipeline without vacuum modes and unbounded windows");
        }
        const double es = eta_detected[0];
        const double ei = eta_detected[m_src - 1];
        const double v = quadratic_vacuum(schmidt, gain, es, ei, c.process);
        out.rows.push_back({vac, name, v, certificate(v), kind_range});
        break;
      }
    }
  }
  if (poisson_family) {
    const double eta_max = *std::max_element(eta_src.begin(), eta_src.end());
    const BoundReport b = poisson_vs_n2_bound(gain, k_schmidt, eta_max, eta_max, c.process);
    out.rows.push_back({"poisson_vs_n2_relative_bound", "poisson", b.value, std::nullopt, to_string(b.kind)});
    const double mu_p = gain * gain / (c.process == ProcessType::Type0I ? 2.0 : 4.0);
    const std::size_t want = c.process == ProcessType::Type0I ? 1 : 2;
    if (d_ops.size() == want && mu_p > 0.0) {
      const PoissonParams p = poisson_params_from_exponent(poisson_exp(), mu_p, c.process);
      out.rows.push_back({"poisson_mu", "poisson", p.mu, std::nullopt, ""});
      out.rows.push_back({"poisson_p_s", "poisson", p.p_s, std::nullopt, ""});
      out.rows.push_back({"poisson_p_i", "poisson", p.p_i, std::nullopt, ""});
      out.rows.push_back({"poisson_p_si", "poisson", p.p_si, std::nullopt, ""});
    }
  }

  if (!c.pnd_cutoffs.empty()) {
    if (c.pnd_cutoffs.size() != d_ops.size()) {
      throw ConfigError("detection.pnd_cutoffs: need one cutoff per detector (" + std::to_string(d_ops.size()) + ")");
    }
    for (Method m : c.methods) {
      const std::string name = to_string(m);
      switch (m) {
        case Method::Exact:
          add_pnd_rows(out, pnd_exact_operator(d_ops, gamma.op, c.pnd_cutoffs), name);
          break;
        case Method::LogSeries: {
          GeneratingFunctionSpec gf{LogSeriesGf{trace_polynomials(k_ops, c.series_order)}, d_ops.size()};
          add_pnd_rows(out, pnd(gf, c.pnd_cutoffs), name);
          break;
        }
        case Method::Poisson:
          add_pnd_rows(out, pnd_from_log_series(poisson_exp().reflect().truncated(c.pnd_cutoffs)), name);
          break;
        case Method::Hermite:
          add_pnd_rows(out, pnd_from_log_series(hermite_exp().reflect().truncated(c.pnd_cutoffs)), name);
          break;
        default:
          break;
      }
    }
  }
  return out;
}

}  // namespace biphoton
