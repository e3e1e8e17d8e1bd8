#include "starkband/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "starkband/error.hpp"

namespace starkband {

namespace {

// Dormand-Prince 5(4), FSAL.
constexpr int kDopri5Stages = 6;
constexpr double kDopri5C[6] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0};
constexpr double kDopri5A[6][6] = {
    {0, 0, 0, 0, 0, 0},
    {1.0 / 5, 0, 0, 0, 0, 0},
    {3.0 / 40, 9.0 / 40, 0, 0, 0, 0},
    {44.0 / 45, -56.0 / 15, 32.0 / 9, 0, 0, 0},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729, 0, 0},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656, 0},
};
constexpr double kDopri5B[6] = {35.0 / 384, 0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784,
                                11.0 / 84};
constexpr double kDopri5E[7] = {71.0 / 57600, 0, -71.0 / 16695, 71.0 / 1920,
                                -17253.0 / 339200, 22.0 / 525, -1.0 / 40};

// Hairer's DOP853 tableau (12 stages, FSAL stage appended for the error).
constexpr int kDop853Stages = 12;
constexpr double kDop853C[12] = {0.0, 0.05260015195876773, 0.0789002279381516, 0.1183503419072274, 0.2816496580927726, 0.3333333333333333, 0.25, 0.3076923076923077, 0.6512820512820513, 0.6, 0.8571428571428571, 1.0};
constexpr double kDop853A[12][12] = {
    {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.05260015195876773, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.0197250569845379, 0.0591751709536137, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.02958758547680685, 0.0, 0.08876275643042054, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.2413651341592667, 0.0, -0.8845494793282861, 0.924834003261792, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.037037037037037035, 0.0, 0.0, 0.17082860872947386, 0.12546768756682242, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.037109375, 0.0, 0.0, 0.17025221101954405, 0.06021653898045596, -0.017578125, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.03709200011850479, 0.0, 0.0, 0.17038392571223998, 0.10726203044637328, -0.015319437748624402, 0.008273789163814023, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.6241109587160757, 0.0, 0.0, -3.3608926294469414, -0.868219346841726, 27.59209969944671, 20.154067550477894, -43.48988418106996, 0.0, 0.0, 0.0, 0.0},
    {0.47766253643826434, 0.0, 0.0, -2.4881146199716677, -0.590290826836843, 21.230051448181193, 15.279233632882423, -33.28821096898486, -0.020331201708508627, 0.0, 0.0, 0.0},
    {-0.9371424300859873, 0.0, 0.0, 5.186372428844064, 1.0914373489967295, -8.149787010746927, -18.52006565999696, 22.739487099350505, 2.4936055526796523, -3.0467644718982196, 0.0, 0.0},
    {2.273310147516538, 0.0, 0.0, -10.53449546673725, -2.0008720582248625, -17.9589318631188, 27.94888452941996, -2.8589982771350235, -8.87285693353063, 12.360567175794303, 0.6433927460157636, 0.0},
};
constexpr double kDop853B[12] = {0.054293734116568765, 0.0, 0.0, 0.0, 0.0, 4.450312892752409, 1.8915178993145003, -5.801203960010585, 0.3111643669578199, -0.1521609496625161, 0.20136540080403034, 0.04471061572777259};
constexpr double kDop853E3[13] = {-0.18980075407240762, 0.0, 0.0, 0.0, 0.0, 4.450312892752409, 1.8915178993145003, -5.801203960010585, -0.4226823213237919, -0.1521609496625161, 0.20136540080403034, 0.02265179219836082, 0.0};
constexpr double kDop853E5[13] = {0.01312004499419488, 0.0, 0.0, 0.0, 0.0, -1.2251564463762044, -0.4957589496572502, 1.6643771824549864, -0.35032884874997366, 0.3341791187130175, 0.08192320648511571, -0.022355307863886294, 0.0};

constexpr double kSafety = 0.9;
constexpr double kFacMin = 0.2;
constexpr double kFacMax = 10.0;

struct Tableau {
  int stages;
  const double* c;
  const double* a;  // stages x stages, row major
  const double* b;
  double exponent;  // -1 / (estimator order + 1)
};

Tableau tableau(RkMethod m) {
  if (m == RkMethod::dopri5)
    return {kDopri5Stages, kDopri5C, &kDopri5A[0][0], kDopri5B, -1.0 / 5.0};
  return {kDop853Stages, kDop853C, &kDop853A[0][0], kDop853B, -1.0 / 8.0};
}

}  // namespace

RungeKutta::RungeKutta(Rhs rhs, Eigen::Index dim, IntegratorOptions opts)
    : rhs_(std::move(rhs)), opts_(opts) {
  k_.assign(tableau(opts_.method).stages + 1, Vector(dim));
  for (Vector* v : {&tmp_, &y_new_, &e1_, &e2_}) v->resize(dim);
}

void RungeKutta::step(const Vector& y, double t, double h) {
  const Tableau tb = tableau(opts_.method);
  for (int s = 1; s < tb.stages; ++s) {
    tmp_ = y;
    for (int j = 0; j < s; ++j) {
      const double a = tb.a[s * tb.stages + j];
      if (a != 0.0) tmp_ += (h * a) * k_[j];
    }
    rhs_(t + tb.c[s] * h, tmp_, k_[s]);
  }
  y_new_ = y;
  for (int j = 0; j < tb.stages; ++j)
    if (tb.b[j] != 0.0) y_new_ += (h * tb.b[j]) * k_[j];
  rhs_(t + h, y_new_, k_[tb.stages]);
  stats_.rhs_evals += tb.stages;
}

double RungeKutta::error_norm(const Vector& y0, const Vector& y1, double h) {
  const int ns = tableau(opts_.method).stages + 1;
  const double* ea = opts_.method == RkMethod::dopri5 ? kDopri5E : kDop853E5;
  e1_.setZero();
  for (int j = 0; j < ns; ++j)
    if (ea[j] != 0.0) e1_ += ea[j] * k_[j];
  const auto n = static_cast<double>(std::max<Eigen::Index>(1, y0.size()));

  auto scaled_sq = [&](const Vector& e) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < e.size(); ++i) {
      const double sk = opts_.atol + opts_.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
      acc += std::norm(e[i]) / (sk * sk);
    }
    return acc;
  };

  if (opts_.method == RkMethod::dopri5) return std::abs(h) * std::sqrt(scaled_sq(e1_) / n);

  // DOP853 blends its 5th- and 3rd-order estimates.
  e2_.setZero();
  for (int j = 0; j < ns; ++j)
    if (kDop853E3[j] != 0.0) e2_ += kDop853E3[j] * k_[j];
  const double err5 = scaled_sq(e1_);
  const double err3 = scaled_sq(e2_);
  if (err5 == 0.0 && err3 == 0.0) return 0.0;
  return std::abs(h) * err5 / std::sqrt((err5 + 0.01 * err3) * n);
}

double RungeKutta::initial_step(const Vector& y, double t0, double t1) {
  // Starting step heuristic of Hairer, Norsett & Wanner.
  auto scaled = [&](const Vector& v) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double sk = opts_.atol + opts_.rtol * std::abs(y[i]);
      acc += std::norm(v[i]) / (sk * sk);
    }
    return std::sqrt(acc / static_cast<double>(std::max<Eigen::Index>(1, v.size())));
  };
  const double order = opts_.method == RkMethod::dopri5 ? 5.0 : 8.0;
  const double d0 = scaled(y);
  const double d1 = scaled(k_[0]);
  double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
  h0 = std::min(h0, t1 - t0);
  tmp_ = y + h0 * k_[0];
  rhs_(t0 + h0, tmp_, k_[1]);
  ++stats_.rhs_evals;
  const double d2 = scaled(k_[1] - k_[0]) / h0;
  const double dm = std::max(d1, d2);
  const double h1 = dm <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / dm, 1.0 / order);
  return std::min(100.0 * h0, h1);
}

void RungeKutta::advance(Vector& y, double t0, double t1) {
  if (!(t1 > t0)) return;
  const Tableau tb = tableau(opts_.method);
  rhs_(t0, y, k_[0]);
  ++stats_.rhs_evals;
  if (h_ <= 0.0) h_ = initial_step(y, t0, t1);

  double t = t0;
  bool last_rejected = false;
  while (t < t1) {
    if (stats_.accepted + stats_.rejected >= opts_.max_steps)
      throw Error(Errc::integration_failure, "step budget exhausted before reaching t_final");
    const bool final_step = t + h_ >= t1;
    const double h = final_step ? t1 - t : h_;

    step(y, t, h);
    const double err = error_norm(y, y_new_, h);
    if (!std::isfinite(err)) throw Error(Errc::integration_failure, "non-finite error estimate");

    const double fac = err > 0.0 ? kSafety * std::pow(err, tb.exponent) : kFacMax;
    if (err <= 1.0) {
      t = final_step ? t1 : t + h;
      y.swap(y_new_);
      k_[0].swap(k_[tb.stages]);  // first same as last
      ++stats_.accepted;
      // A truncated landing step says nothing about the natural step size.
      if (!final_step) h_ = h * std::clamp(fac, kFacMin, last_rejected ? 1.0 : kFacMax);
      last_rejected = false;
    } else {
      ++stats_.rejected;
      h_ = h * std::clamp(fac, kFacMin, 1.0);
      last_rejected = true;
      if (h_ < opts_.min_step * std::max(1.0, std::abs(t)))
        throw Error(Errc::stiffness, "step size underflow at t = " + std::to_string(t));
    }
  }
}

}  // namespace starkband
