#pragma once

#include <functional>
#include <vector>

namespace mrdwr::fem {

/// Spatial and temporal degrees of a transport-type space.
struct FiniteElementSpec {
  int p = 1; // cG(p) in space
  int r = 0; // dG(r) in time
  void validate() const;
};

/// Taylor-Hood pair Q_pv / Q_pp with pp + 1 = pv >= 2, dG(r) in time.
struct FlowElementSpec {
  int velocity_degree = 2;
  int pressure_degree = 1;
  int r = 0;
  void validate() const;
};

/// Lagrange basis of degree r on [t_a, t_b] with nodes at the r+1 Gauss points.
class TimeBasis {
public:
  TimeBasis(int r, double t_a, double t_b);

  int degree() const { return r_; }
  double t_a() const { return ta_; }
  double t_b() const { return tb_; }
  const std::vector<double> &nodes() const { return nodes_; }

  double value(int k, double t) const;
  double evaluate(const std::vector<double> &coefficients, double t) const;
  /// Nodal coefficients of a function.
  std::vector<double> interpolate(const std::function<double(double)> &f) const;

private:
  int r_;
  double ta_, tb_;
  std::vector<double> nodes_;
};

} // namespace mrdwr::fem
