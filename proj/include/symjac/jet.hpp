#pragma once

// Truncated Taylor series arithmetic: a Jet holds f(x0 + h) up to h^order,
// coefficient k being f^{(k)}(x0)/k!.

#include <cmath>
#include <cstddef>
#include <vector>

namespace symjac {

class Jet {
 public:
  Jet() = default;
  explicit Jet(int order, double value = 0.0) : c_(static_cast<std::size_t>(order) + 1, 0.0) {
    c_[0] = value;
  }
  static Jet variable(int order, double x0) {
    Jet j(order, x0);
    if (order >= 1) j.c_[1] = 1.0;
    return j;
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  double& operator[](std::size_t k) { return c_[k]; }
  double operator[](std::size_t k) const { return c_[k]; }
  double value() const { return c_[0]; }
  // k-th derivative at x0
  double derivative(int k) const;

  // d/dh; the result has order one less.
  Jet differentiate() const;
  // Same function seen at reflected argument: g(h) = f(-h) expansion.
  Jet reflect() const;
  Jet truncate(int order) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator-(Jet a) { return a *= -1.0; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, double s) {
    a.c_[0] += s;
    return a;
  }
  friend Jet operator-(Jet a, double s) {
    a.c_[0] -= s;
    return a;
  }
  friend Jet operator+(double s, Jet a) { return a + s; }
  friend Jet operator-(double s, Jet a) {
    a *= -1.0;
    a.c_[0] += s;
    return a;
  }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);

 private:
  std::vector<double> c_;
};

Jet sin(const Jet& x);
Jet cos(const Jet& x);
Jet exp(const Jet& x);
Jet log(const Jet& x);

}  // namespace symjac
