#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Core>

namespace starkband {

enum class RkMethod {
  dopri5,  // Dormand-Prince 5(4)
  dop853,  // Dormand-Prince 8(5,3)
};

struct IntegratorOptions {
  double rtol = 1e-12;
  double atol = 1e-12;
  RkMethod method = RkMethod::dop853;
  std::uint64_t max_steps = 200'000'000;
  // A step shorter than min_step * max(1, |t|) is treated as stiffness.
  double min_step = 1e-13;
};

struct IntegratorStats {
  std::uint64_t accepted = 0;
  std::uint64_t rejected = 0;
  std::uint64_t rhs_evals = 0;
};

// Embedded explicit Runge-Kutta pair with adaptive step size for complex
// systems y' = f(t, y). The accepted step size carries over between
// advance() calls, so a run chopped into sampling intervals behaves like a
// single integration apart from the truncated landing steps.
class RungeKutta {
 public:
  using Vector = Eigen::VectorXcd;
  using Rhs = std::function<void(double t, const Vector& y, Vector& dydt)>;

  RungeKutta(Rhs rhs, Eigen::Index dim, IntegratorOptions opts = {});

  // Integrates y from t0 to exactly t1 (no-op unless t1 > t0).
  void advance(Vector& y, double t0, double t1);

  const IntegratorStats& stats() const { return stats_; }

 private:
  double initial_step(const Vector& y, double t0, double t1);
  // Scaled error norm of the step just taken with size h.
  double error_norm(const Vector& y0, const Vector& y1, double h);
  void step(const Vector& y, double t, double h);

  Rhs rhs_;
  IntegratorOptions opts_;
  IntegratorStats stats_;
  double h_ = 0.0;
  std::vector<Vector> k_;  // stages plus f(t + h, y_new)
  Vector tmp_, y_new_, e1_, e2_;
};

}  // namespace starkband
