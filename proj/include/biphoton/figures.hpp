#pragma once

// Figure datasets: error-bound curves over the JSA aspect ratio and vacuum
// probabilities over the mean pair number.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace biphoton {

struct FigureData {
  std::string name;
  std::vector<std::string> metadata;  // comment lines
  std::vector<std::string> columns;   // first column is x
  std::vector<std::vector<double>> rows;
  bool log_x = false;
  bool log_y = false;

  void write_csv(std::ostream& os, int precision = 17) const;
  void write_svg(std::ostream& os) const;
};

std::vector<std::string> figure_names();
std::size_t default_figure_points(const std::string& name);

/// Throws ConfigError for an unknown name.
FigureData make_figure(const std::string& name, std::optional<std::size_t> points = std::nullopt);

/// Worker count: BIPHOTON_SIM_THREADS if set, else the hardware concurrency.
unsigned worker_threads();
/// Runs fn(i) for i in [0, n) on up to worker_threads() threads. Exceptions are rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Number of analytic Gaussian Schmidt modes with lambda_j >= 1e-16 lambda_1.
std::size_t gaussian_mode_count(double aspect_ratio);

}  // namespace biphoton
