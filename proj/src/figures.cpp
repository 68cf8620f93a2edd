#include "biphoton/figures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "biphoton/bounds.hpp"
#include "biphoton/covariance.hpp"
#include "biphoton/csv.hpp"
#include "biphoton/detection.hpp"
#include "biphoton/errors.hpp"
#include "biphoton/spectral.hpp"

namespace biphoton {

namespace {

std::vector<double> log_space(double lo, double hi, std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    x[i] = std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
  }
  x.front() = lo;
  x.back() = hi;
  return x;
}

std::vector<double> lin_space(double lo, double hi, std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return x;
}

std::string label(const std::string& prefix, const std::vector<std::pair<std::string, double>>& kv) {
  std::string s = prefix;
  for (const auto& [k, v] : kv) s += "_" + k + "=" + csv::format_number(v, 6);
  return s;
}

// type-II Gaussian source at mean pair number mu: (spectrum, gain)
std::pair<SchmidtSpectrum, double> gaussian_source(double aspect, double mu) {
  SchmidtSpectrum s = analytic_gaussian_schmidt(aspect, gaussian_mode_count(aspect));
  const double gain = gain_for_mean_pairs(s.coefficients, mu, ProcessType::TypeII);
  return {std::move(s), gain};
}

const std::vector<double> kFig1Eta2{0.1, 1.0};
const std::vector<double> kFig1Mu{0.01, 0.1};
const std::vector<int> kFig2N{2, 4, 6};
const std::vector<double> kFig2Mu{0.01, 0.1, 1.0};
const std::vector<double> kFig4Aspect{1.0, 3.0, 10.0, 100.0};

FigureData fig1(std::size_t points) {
  FigureData f;
  f.name = "fig1";
  f.log_x = f.log_y = true;
  f.metadata = {"relative vacuum-probability error bound of the order-2 log series (Hilbert-Schmidt form)",
                "type-II source, Gaussian JSA, analytic Schmidt spectrum, gain solved from the exact mean pair number",
                "x = aspect ratio delta_minus/delta_plus"};
  f.columns = {"aspect_ratio"};
  for (double mu : kFig1Mu) {
    for (double e2 : kFig1Eta2) f.columns.push_back(label("det_trunc_hs", {{"eta2", e2}, {"mu", mu}}));
  }
  const auto xs = log_space(1.0, 1000.0, points);
  f.rows.assign(xs.size(), {});
  parallel_for(xs.size(), [&](std::size_t i) {
    std::vector<double> row{xs[i]};
    for (double mu : kFig1Mu) {
      const auto [s, gain] = gaussian_source(xs[i], mu);
      const auto sq = SqueezingSpectrum::from_schmidt(s, gain, ProcessType::TypeII);
      const Norms nm = norms(sq);
      for (double e2 : kFig1Eta2) {
        row.push_back(det_truncation_bound_hs(nm.largest_abs_eigenvalue, nm.hs_norm * nm.hs_norm, e2, 2).value);
      }
    }
    f.rows[i] = std::move(row);
  });
  return f;
}

FigureData fig2(std::size_t points) {
  FigureData f;
  f.name = "fig2";
  f.log_x = f.log_y = true;
  f.metadata = {"relative trace-norm error bound of the order-N covariance series from the largest squeezing parameter",
                "type-II source, Gaussian JSA, analytic Schmidt spectrum, gain solved from the exact mean pair number",
                "x = aspect ratio delta_minus/delta_plus"};
  f.columns = {"aspect_ratio"};
  for (double mu : kFig2Mu) {
    for (int n : kFig2N) f.columns.push_back(label("cov_trunc", {{"N", n}, {"mu", mu}}));
  }
  const auto xs = log_space(1.0, 1000.0, points);
  f.rows.assign(xs.size(), {});
  parallel_for(xs.size(), [&](std::size_t i) {
    std::vector<double> row{xs[i]};
    for (double mu : kFig2Mu) {
      const auto [s, gain] = gaussian_source(xs[i], mu);
      const double sigma1 = gain * s.coefficients.front();
      for (int n : kFig2N) row.push_back(covariance_truncation_bound({sigma1}, n).value);
    }
    f.rows[i] = std::move(row);
  });
  return f;
}

FigureData fig3(std::size_t points) {
  FigureData f;
  f.name = "fig3";
  f.metadata = {"vacuum probability: Poisson approximation, exact extremes for type-0/I and type-II, linear approximation",
                "x = mean pair number mu"};
  f.columns = {"mu", "poisson", "type0I_max", "typeII_max", "linear"};
  for (double mu : lin_space(0.0, 3.0, points)) {
    const auto [up1, lo1] = vacuum_range(mu, ProcessType::Type0I);
    const auto [up2, lo2] = vacuum_range(mu, ProcessType::TypeII);
    (void)lo1;
    f.rows.push_back({mu, lo2, up1, up2, 1.0 - mu});
  }
  return f;
}

FigureData fig4(std::size_t points) {
  FigureData f;
  f.name = "fig4";
  f.log_x = f.log_y = true;
  f.metadata = {"relative error of the vacuum probability w.r.t. the exact type-II Gaussian-JSA source",
                "eta=1, unbounded windows, gain solved from the exact mean pair number, mu in [1e-3, 2]",
                "x = mean pair number mu"};
  f.columns = {"mu"};
  for (double a : kFig4Aspect) {
    for (const char* m : {"poisson", "hermite", "quadratic"}) f.columns.push_back(label(m, {{"aspect", a}}));
  }
  const auto xs = log_space(1e-3, 2.0, points);  // Hermite stays valid (mu >= eps^2) for K >= 1
  f.rows.assign(xs.size(), {});
  parallel_for(xs.size(), [&](std::size_t i) {
    std::vector<double> row{xs[i]};
    for (double a : kFig4Aspect) {
      const auto [s, gain] = gaussian_source(a, xs[i]);
      VacuumQuery q;
      q.schmidt = s;
      q.gain = gain;
      q.process = ProcessType::TypeII;
      const double exact = vacuum_probability(q, Method::Exact);
      for (Method m : {Method::Poisson, Method::Hermite, Method::Quadratic}) {
        row.push_back(std::abs(vacuum_probability(q, m) - exact) / exact);
      }
    }
    f.rows[i] = std::move(row);
  });
  return f;
}

}  // namespace

std::size_t gaussian_mode_count(double aspect_ratio) {
  const double zeta = (aspect_ratio - 1.0) / (aspect_ratio + 1.0);
  const double z2 = zeta * zeta;
  if (z2 == 0.0) return 1;
  return 1 + static_cast<std::size_t>(std::ceil(std::log(1e-16) / std::log(z2)));
}

unsigned worker_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("BIPHOTON_SIM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) throw ConfigError("BIPHOTON_SIM_THREADS must be a positive integer");
    n = static_cast<unsigned>(v);
  }
  return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(worker_threads(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::mutex mu;
  std::exception_ptr first;
  std::size_t next = 0;
  auto work = [&] {
    while (true) {
      std::size_t i = 0;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= n || first) return;
        i = next++;
      }
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first) first = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

std::vector<std::string> figure_names() { return {"fig1", "fig2", "fig3", "fig4"}; }

std::size_t default_figure_points(const std::string& name) {
  if (name == "fig3") return 301;
  if (name == "fig4") return 61;
  return 91;
}

FigureData make_figure(const std::string& name, std::optional<std::size_t> points) {
  const std::size_t n = points.value_or(default_figure_points(name));
  if (n < 2) throw ConfigError("--points must be at least 2");
  if (name == "fig1") return fig1(n);
  if (name == "fig2") return fig2(n);
  if (name == "fig3") return fig3(n);
  if (name == "fig4") return fig4(n);
  throw ConfigError("unknown figure '" + name + "' (fig1, fig2, fig3, fig4)");
}

void FigureData::write_csv(std::ostream& os, int precision) const {
  csv::Writer w(os, precision);
  for (const auto& m : metadata) w.comment(m);
  w.header(columns);
  for (const auto& r : rows) w.row(r);
}

void FigureData::write_svg(std::ostream& os) const {
  constexpr double width = 640.0;
  constexpr double height = 420.0;
  constexpr double margin = 60.0;
  auto tx = [&](double v) { return log_x ? std::log10(v) : v; };
  auto ty = [&](double v) { return log_y ? std::log10(v) : v; };
  auto usable = [&](double x, double y) {
    return std::isfinite(tx(x)) && std::isfinite(ty(y)) && (!log_x || x > 0.0) && (!log_y || y > 0.0);
  };
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& r : rows) {
    for (std::size_t c = 1; c < r.size(); ++c) {
      if (!usable(r[0], r[c])) continue;
      x0 = std::min(x0, tx(r[0]));
      x1 = std::max(x1, tx(r[0]));
      y0 = std::min(y0, ty(r[c]));
      y1 = std::max(y1, ty(r[c]));
    }
  }
  if (!(x1 > x0)) x1 = x0 + 1.0;
  if (!(y1 > y0)) y1 = y0 + 1.0;
  auto px = [&](double v) { return margin + (tx(v) - x0) / (x1 - x0) * (width - 2 * margin); };
  auto py = [&](double v) { return height - margin - (ty(v) - y0) / (y1 - y0) * (height - 2 * margin); };
  static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                 "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin << "\" y2=\""
     << height - margin << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\"" << height - margin
     << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\" font-size=\"12\">"
     << columns.front() << (log_x ? " (log)" : "") << "</text>\n";
  for (std::size_t c = 1; c < columns.size(); ++c) {
    std::ostringstream pts;
    for (const auto& r : rows) {
      if (usable(r[0], r[c])) pts << px(r[0]) << "," << py(r[c]) << " ";
    }
    const char* col = colors[(c - 1) % 10];
    os << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"" << pts.str() << "\"/>\n";
    os << "<text x=\"" << width - margin + 4 << "\" y=\"" << margin + 14.0 * static_cast<double>(c - 1)
       << "\" font-size=\"9\" fill=\"" << col << "\">" << columns[c] << "</text>\n";
  }
  os << "</svg>\n";
}

}  // namespace biphoton
