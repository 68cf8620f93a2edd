#include "biphoton/series.hpp"

#include <cmath>
#include <numeric>

#include "biphoton/errors.hpp"

namespace biphoton {

PowerSeries::PowerSeries(std::vector<std::size_t> cutoffs) : cut_(std::move(cutoffs)) {
  stride_.assign(cut_.size(), 1);
  std::size_t total = 1;
  for (std::size_t d = cut_.size(); d-- > 0;) {
    stride_[d] = total;
    total *= cut_[d] + 1;
  }
  c_.assign(total, 0.0);
}

PowerSeries PowerSeries::constant(std::vector<std::size_t> cutoffs, double c) {
  PowerSeries p(std::move(cutoffs));
  p.c_[0] = c;
  return p;
}

PowerSeries PowerSeries::variable(std::vector<std::size_t> cutoffs, std::size_t var) {
  PowerSeries p(std::move(cutoffs));
  if (var >= p.cut_.size()) throw ShapeError("series variable out of range");
  if (p.cut_[var] >= 1) p.c_[p.stride_[var]] = 1.0;
  return p;
}

std::vector<std::size_t> PowerSeries::unflat(std::size_t i) const {
  std::vector<std::size_t> k(cut_.size());
  for (std::size_t d = 0; d < cut_.size(); ++d) {
    k[d] = i / stride_[d];
    i %= stride_[d];
  }
  return k;
}

std::size_t PowerSeries::flat(const std::vector<std::size_t>& k) const {
  std::size_t i = 0;
  for (std::size_t d = 0; d < cut_.size(); ++d) i += k[d] * stride_[d];
  return i;
}

PowerSeries& PowerSeries::operator+=(const PowerSeries& o) {
  if (o.cut_ != cut_) throw ShapeError("series cutoffs differ");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

PowerSeries& PowerSeries::operator-=(const PowerSeries& o) {
  if (o.cut_ != cut_) throw ShapeError("series cutoffs differ");
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

PowerSeries& PowerSeries::operator*=(double s) {
  for (double& x : c_) x *= s;
  return *this;
}

PowerSeries PowerSeries::operator+(const PowerSeries& o) const {
  PowerSeries r = *this;
  r += o;
  return r;
}

PowerSeries PowerSeries::operator-(const PowerSeries& o) const {
  PowerSeries r = *this;
  r -= o;
  return r;
}

PowerSeries PowerSeries::operator*(double s) const {
  PowerSeries r = *this;
  r *= s;
  return r;
}

PowerSeries PowerSeries::operator*(const PowerSeries& o) const {
  if (o.cut_ != cut_) throw ShapeError("series cutoffs differ");
  PowerSeries r(cut_);
  const std::size_t n = c_.size();
  std::vector<std::vector<std::size_t>> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = unflat(i);
  const std::size_t dims = cut_.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (c_[i] == 0.0) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (o.c_[j] == 0.0) continue;
      bool ok = true;
      std::size_t f = 0;
      for (std::size_t d = 0; d < dims; ++d) {
        const std::size_t s = idx[i][d] + idx[j][d];
        if (s > cut_[d]) {
          ok = false;
          break;
        }
        f += s * stride_[d];
      }
      if (ok) r.c_[f] += c_[i] * o.c_[j];
    }
  }
  return r;
}

namespace {

// Calls fn(j_flat, km_flat, |j|) for every j with 0 <= j <= k componentwise, j != 0.
template <typename Fn>
void for_each_sub_index(const std::vector<std::size_t>& k, const std::vector<std::size_t>& stride,
                        Fn&& fn) {
  const std::size_t dims = k.size();
  std::vector<std::size_t> j(dims, 0);
  std::size_t kf = 0;
  for (std::size_t d = 0; d < dims; ++d) kf += k[d] * stride[d];
  while (true) {
    // advance odometer (skipping j = 0 on the first pass)
    std::size_t d = dims;
    while (d-- > 0) {
      if (j[d] < k[d]) {
        ++j[d];
        break;
      }
      j[d] = 0;
      if (d == 0) return;
    }
    if (dims == 0) return;
    std::size_t jf = 0;
    std::size_t deg = 0;
    for (std::size_t e = 0; e < dims; ++e) {
      jf += j[e] * stride[e];
      deg += j[e];
    }
    fn(jf, kf - jf, deg);
  }
}

std::size_t degree(const std::vector<std::size_t>& k) {
  return std::accumulate(k.begin(), k.end(), std::size_t{0});
}

}  // namespace

PowerSeries PowerSeries::exp() const {
  PowerSeries f(cut_);
  f.c_[0] = std::exp(c_[0]);
  for (std::size_t i = 1; i < c_.size(); ++i) {
    const auto k = unflat(i);
    double acc = 0.0;
    for_each_sub_index(k, stride_, [&](std::size_t jf, std::size_t kmj, std::size_t deg) {
      acc += static_cast<double>(deg) * c_[jf] * f.c_[kmj];
    });
    f.c_[i] = acc / static_cast<double>(degree(k));
  }
  return f;
}

PowerSeries PowerSeries::log() const {
  if (!(c_[0] > 0.0)) throw DomainError("series log needs a positive constant term");
  PowerSeries f(cut_);
  f.c_[0] = std::log(c_[0]);
  for (std::size_t i = 1; i < c_.size(); ++i) {
    const auto k = unflat(i);
    const double kd = static_cast<double>(degree(k));
    double acc = kd * c_[i];
    for_each_sub_index(k, stride_, [&](std::size_t jf, std::size_t kmj, std::size_t deg) {
      if (jf != i) acc -= static_cast<double>(deg) * f.c_[jf] * c_[kmj];
    });
    f.c_[i] = acc / (kd * c_[0]);
  }
  return f;
}

PowerSeries PowerSeries::reflect() const {
  PowerSeries cur = *this;
  for (std::size_t d = 0; d < cut_.size(); ++d) {
    PowerSeries next(cut_);
    const std::size_t kmax = cut_[d];
    // binomial row by row
    std::vector<std::vector<double>> binom(kmax + 1, std::vector<double>(kmax + 1, 0.0));
    for (std::size_t a = 0; a <= kmax; ++a) {
      binom[a][0] = 1.0;
      for (std::size_t b = 1; b <= a; ++b) binom[a][b] = binom[a - 1][b - 1] + (b <= a - 1 ? binom[a - 1][b] : 0.0);
    }
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (cur.c_[i] == 0.0) continue;
      const std::size_t kd = (i / stride_[d]) % (kmax + 1);
      const std::size_t base = i - kd * stride_[d];
      for (std::size_t j = 0; j <= kd; ++j) {
        const double sgn = (j % 2 == 0) ? 1.0 : -1.0;
        next.c_[base + j * stride_[d]] += cur.c_[i] * binom[kd][j] * sgn;
      }
    }
    cur = std::move(next);
  }
  return cur;
}

PowerSeries PowerSeries::truncated(const std::vector<std::size_t>& cutoffs) const {
  if (cutoffs.size() != cut_.size()) throw ShapeError("truncated: wrong number of variables");
  PowerSeries r(cutoffs);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0.0) continue;
    const auto k = unflat(i);
    bool inside = true;
    for (std::size_t d = 0; d < k.size(); ++d) inside = inside && k[d] <= cutoffs[d];
    if (inside) r.c_[r.flat(k)] = c_[i];
  }
  return r;
}

double PowerSeries::evaluate(const std::vector<double>& x) const {
  if (x.size() != cut_.size()) throw ShapeError("evaluate: wrong number of variables");
  double total = 0.0;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    if (c_[i] == 0.0) continue;
    const auto k = unflat(i);
    double term = c_[i];
    for (std::size_t d = 0; d < k.size(); ++d) term *= std::pow(x[d], static_cast<double>(k[d]));
    total += term;
  }
  return total;
}

}  // namespace biphoton
