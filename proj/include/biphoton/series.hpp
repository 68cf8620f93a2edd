#pragma once

// Truncated multivariate power series with a per-variable degree cutoff.
// Coefficients live in a dense row-major tensor, index k = (k_1, ..., k_D).

#include <cstddef>
#include <vector>

namespace biphoton {

class PowerSeries {
 public:
  PowerSeries() = default;
  explicit PowerSeries(std::vector<std::size_t> cutoffs);
  static PowerSeries constant(std::vector<std::size_t> cutoffs, double c);
  /// The series of x_var.
  static PowerSeries variable(std::vector<std::size_t> cutoffs, std::size_t var);

  std::size_t variables() const { return cut_.size(); }
  const std::vector<std::size_t>& cutoffs() const { return cut_; }
  std::size_t size() const { return c_.size(); }
  const std::vector<double>& coefficients() const { return c_; }

  double& operator[](const std::vector<std::size_t>& k) { return c_[flat(k)]; }
  double operator[](const std::vector<std::size_t>& k) const { return c_[flat(k)]; }
  double& at_flat(std::size_t i) { return c_[i]; }
  double at_flat(std::size_t i) const { return c_[i]; }
  std::vector<std::size_t> unflat(std::size_t i) const;
  std::size_t flat(const std::vector<std::size_t>& k) const;
  double constant_term() const { return c_.empty() ? 0.0 : c_[0]; }

  PowerSeries& operator+=(const PowerSeries& o);
  PowerSeries& operator-=(const PowerSeries& o);
  PowerSeries& operator*=(double s);
  PowerSeries operator+(const PowerSeries& o) const;
  PowerSeries operator-(const PowerSeries& o) const;
  PowerSeries operator*(double s) const;
  /// Truncated product.
  PowerSeries operator*(const PowerSeries& o) const;

  /// exp and log through the recurrence |k| f_k = sum_j |j| g_j f_{k-j}.
  PowerSeries exp() const;
  /// Requires a positive constant term.
  PowerSeries log() const;

  /// p(x) -> p(1 - x) for every variable; exact for polynomials within the cutoffs.
  PowerSeries reflect() const;

  /// Same coefficients under different cutoffs (dropped or zero-filled).
  PowerSeries truncated(const std::vector<std::size_t>& cutoffs) const;

  double evaluate(const std::vector<double>& x) const;

 private:
  std::vector<std::size_t> cut_;
  std::vector<std::size_t> stride_;
  std::vector<double> c_;
};

}  // namespace biphoton
