#include "mrdwr/fem/time_basis.hpp"

#include <stdexcept>

#include "mrdwr/fem/quadrature.hpp"

namespace mrdwr::fem {

void FiniteElementSpec::validate() const {
  if (p < 1 || p > 2)
    throw std::invalid_argument("spatial degree must be 1 or 2");
  if (r < 0 || r > 2)
    throw std::invalid_argument("temporal degree must be 0, 1 or 2");
}

void FlowElementSpec::validate() const {
  if (velocity_degree < 2 || pressure_degree + 1 != velocity_degree)
    throw std::invalid_argument("flow element must be Taylor-Hood Q_p/Q_{p-1} with p >= 2");
  if (velocity_degree > 2)
    throw std::invalid_argument("only Q2/Q1 is implemented");
  if (r < 0 || r > 2)
    throw std::invalid_argument("temporal degree must be 0, 1 or 2");
}

TimeBasis::TimeBasis(int r, double t_a, double t_b) : r_(r), ta_(t_a), tb_(t_b) {
  if (r < 0 || r > 2)
    throw std::invalid_argument("temporal degree must be 0, 1 or 2");
  if (!(t_b > t_a))
    throw std::invalid_argument("empty time cell");
  for (double s : gauss_points(r + 1).points)
    nodes_.push_back(t_a + s * (t_b - t_a));
}

double TimeBasis::value(int k, double t) const {
  double v = 1.0;
  for (int m = 0; m <= r_; ++m)
    if (m != k)
      v *= (t - nodes_[m]) / (nodes_[k] - nodes_[m]);
  return v;
}

double TimeBasis::evaluate(const std::vector<double> &coefficients, double t) const {
  double s = 0.0;
  for (int k = 0; k <= r_; ++k)
    s += coefficients.at(k) * value(k, t);
  return s;
}

std::vector<double> TimeBasis::interpolate(const std::function<double(double)> &f) const {
  std::vector<double> c;
  for (double t : nodes_)
    c.push_back(f(t));
  return c;
}

} // namespace mrdwr::fem
