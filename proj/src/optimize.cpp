#include "lasucc/optimize.hpp"

#include <cmath>
#include <limits>

namespace lasucc {

namespace {

struct Probe {
  double alpha = 0.0;
  double value = 0.0;
  double slope = 0.0;
  Eigen::VectorXd x, grad;
};

// Minimizer of the cubic through (a, fa, da) and (b, fb, db); NaN when
// the cubic has no real minimizer.
double cubic_min(double a, double fa, double da, double b, double fb, double db) {
  const double d1 = da + db - 3.0 * (fa - fb) / (a - b);
  const double disc = d1 * d1 - da * db;
  if (disc < 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double d2 = std::copysign(std::sqrt(disc), b - a);
  return b - (b - a) * (db + d2 - d1) / (db - da + 2.0 * d2);
}

class LineSearch {
 public:
  LineSearch(const Objective &f, const Eigen::VectorXd &x, const Eigen::VectorXd &p, double f0,
             double d0, const BfgsOptions &opt, int &evals)
      : f_(f), x_(x), p_(p), f0_(f0), d0_(d0), opt_(opt), evals_(evals) {}

  /// Returns a strong-Wolfe point, else the best sufficient-decrease point
  /// seen, else nothing (alpha == 0).
  Probe run(double alpha) {
    Probe prev{0.0, f0_, d0_, x_, {}};
    for (int i = 0; i < 40; ++i) {
      Probe cur = eval(alpha);
      if (cur.value > f0_ + opt_.c1 * alpha * d0_ || (i > 0 && cur.value >= prev.value))
        return zoom(prev, cur);
      if (std::abs(cur.slope) <= -opt_.c2 * d0_) return cur;
      if (cur.slope >= 0.0) return zoom(cur, prev);
      prev = cur;
      alpha *= 2.0;
    }
    return best_;
  }

 private:
  Probe eval(double alpha) {
    Probe pr;
    pr.alpha = alpha;
    pr.x = x_ + alpha * p_;
    pr.grad.resize(x_.size());
    pr.value = f_(pr.x, pr.grad);
    pr.slope = pr.grad.dot(p_);
    ++evals_;
    if (std::isfinite(pr.value) && pr.value <= f0_ + opt_.c1 * alpha * d0_ &&
        (best_.alpha == 0.0 || pr.value < best_.value))
      best_ = pr;
    return pr;
  }

  Probe zoom(Probe lo, Probe hi) {
    for (int i = 0; i < 40; ++i) {
      const double a = lo.alpha, b = hi.alpha;
      if (std::abs(b - a) < 1e-14 * std::max(1.0, std::abs(a))) break;
      double t = cubic_min(a, lo.value, lo.slope, b, hi.value, hi.slope);
      const double left = std::min(a, b), right = std::max(a, b), w = right - left;
      if (!std::isfinite(t) || t < left + 0.1 * w || t > right - 0.1 * w) t = 0.5 * (a + b);
      Probe cur = eval(t);
      if (cur.value > f0_ + opt_.c1 * t * d0_ || cur.value >= lo.value) {
        hi = cur;
      } else {
        if (std::abs(cur.slope) <= -opt_.c2 * d0_) return cur;
        if (cur.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
        lo = cur;
      }
    }
    return best_;
  }

  const Objective &f_;
  const Eigen::VectorXd &x_, &p_;
  double f0_, d0_;
  const BfgsOptions &opt_;
  int &evals_;
  Probe best_;
};

}  // namespace

BfgsResult bfgs_minimize(const Objective &f, const Eigen::VectorXd &x0,
                         const BfgsOptions &options) {
  const Eigen::Index n = x0.size();
  BfgsResult res;
  res.x = x0;
  res.gradient.resize(n);
  res.value = f(res.x, res.gradient);
  res.evaluations = 1;
  if (n == 0 || res.gradient.lpNorm<Eigen::Infinity>() < options.gradient_tolerance) {
    res.converged = true;
    return res;
  }
  Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);
  bool scaled = false;
  while (res.iterations < options.max_iterations) {
    Eigen::VectorXd p = -hinv * res.gradient;
    double d0 = p.dot(res.gradient);
    if (!(d0 < 0.0)) {
      hinv.setIdentity();
      scaled = false;
      p = -res.gradient;
      d0 = p.dot(res.gradient);
    }
    Probe step = LineSearch(f, res.x, p, res.value, d0, options, res.evaluations).run(1.0);
    if (step.alpha == 0.0) {
      if (scaled || !hinv.isIdentity()) {
        hinv.setIdentity();
        scaled = false;
        continue;
      }
      return res;  // no descent along steepest descent either
    }
    ++res.iterations;
    const Eigen::VectorXd s = step.x - res.x;
    const Eigen::VectorXd y = step.grad - res.gradient;
    const double dv = res.value - step.value;
    res.x = step.x;
    res.value = step.value;
    res.gradient = step.grad;
    if (std::abs(dv) < options.value_tolerance &&
        res.gradient.lpNorm<Eigen::Infinity>() < options.gradient_tolerance) {
      res.converged = true;
      return res;
    }
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      if (!scaled) {
        hinv *= sy / y.squaredNorm();
        scaled = true;
      }
      const double rho = 1.0 / sy;
      const Eigen::VectorXd hy = hinv * y;
      const double yhy = y.dot(hy);
      hinv.noalias() += (rho + rho * rho * yhy) * (s * s.transpose());
      hinv.noalias() -= rho * (hy * s.transpose() + s * hy.transpose());
    }
  }
  return res;
}

}  // namespace lasucc
