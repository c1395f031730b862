#include "symjac/jet.hpp"

#include <algorithm>

namespace symjac {

double Jet::derivative(int k) const {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return c_[static_cast<std::size_t>(k)] * f;
}

Jet Jet::differentiate() const {
  Jet d(std::max(order() - 1, 0));
  for (int k = 1; k <= order(); ++k) d.c_[static_cast<std::size_t>(k - 1)] = k * c_[static_cast<std::size_t>(k)];
  return d;
}

Jet Jet::reflect() const {
  Jet r = *this;
  for (std::size_t k = 1; k < r.c_.size(); k += 2) r.c_[k] = -r.c_[k];
  return r;
}

Jet Jet::truncate(int order) const {
  Jet r(order);
  for (int k = 0; k <= std::min(order, this->order()); ++k)
    r.c_[static_cast<std::size_t>(k)] = c_[static_cast<std::size_t>(k)];
  return r;
}

Jet& Jet::operator+=(const Jet& o) {
  if (o.c_.size() < c_.size()) c_.resize(o.c_.size());
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  if (o.c_.size() < c_.size()) c_.resize(o.c_.size());
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& v : c_) v *= s;
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  const int n = std::min(a.order(), b.order());
  Jet r(n);
  for (int k = 0; k <= n; ++k) {
    double s = 0.0;
    for (int j = 0; j <= k; ++j) s += a[static_cast<std::size_t>(j)] * b[static_cast<std::size_t>(k - j)];
    r[static_cast<std::size_t>(k)] = s;
  }
  return r;
}

Jet operator/(const Jet& a, const Jet& b) {
  const int n = std::min(a.order(), b.order());
  Jet q(n);
  for (int k = 0; k <= n; ++k) {
    double s = a[static_cast<std::size_t>(k)];
    for (int j = 1; j <= k; ++j) s -= b[static_cast<std::size_t>(j)] * q[static_cast<std::size_t>(k - j)];
    q[static_cast<std::size_t>(k)] = s / b[0];
  }
  return q;
}

namespace {

void sincos_series(const Jet& x, Jet& s, Jet& c) {
  const int n = x.order();
  s = Jet(n, std::sin(x[0]));
  c = Jet(n, std::cos(x[0]));
  for (int k = 1; k <= n; ++k) {
    double ss = 0.0, cc = 0.0;
    for (int j = 1; j <= k; ++j) {
      const double jx = j * x[static_cast<std::size_t>(j)];
      ss += jx * c[static_cast<std::size_t>(k - j)];
      cc -= jx * s[static_cast<std::size_t>(k - j)];
    }
    s[static_cast<std::size_t>(k)] = ss / k;
    c[static_cast<std::size_t>(k)] = cc / k;
  }
}

}  // namespace

Jet sin(const Jet& x) {
  Jet s, c;
  sincos_series(x, s, c);
  return s;
}

Jet cos(const Jet& x) {
  Jet s, c;
  sincos_series(x, s, c);
  return c;
}

Jet exp(const Jet& x) {
  const int n = x.order();
  Jet y(n, std::exp(x[0]));
  for (int k = 1; k <= n; ++k) {
    double s = 0.0;
    for (int j = 1; j <= k; ++j) s += j * x[static_cast<std::size_t>(j)] * y[static_cast<std::size_t>(k - j)];
    y[static_cast<std::size_t>(k)] = s / k;
  }
  return y;
}

Jet log(const Jet& x) {
  const int n = x.order();
  Jet y(n, std::log(x[0]));
  for (int k = 1; k <= n; ++k) {
    double s = k * x[static_cast<std::size_t>(k)];
    for (int j = 1; j < k; ++j) s -= j * y[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(k - j)];
    y[static_cast<std::size_t>(k)] = s / (k * x[0]);
  }
  return y;
}

}  // namespace symjac
