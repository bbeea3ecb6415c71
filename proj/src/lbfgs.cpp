// Copyright 2026 The schwinger-cvqe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "scvqe/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "scvqe/error.hpp"

namespace scvqe {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (const double x : v) m = std::max(m, std::abs(x));
  return m;
}

struct Probe {
  double alpha = 0.0;
  double f = 0.0;
  double slope = 0.0;  // directional derivative
  std::vector<double> x;
  std::vector<double> g;
};

// Minimizer of the cubic through (a, fa, da), (b, fb, db), kept inside the
// middle 80% of the bracket.
double safeguarded_cubic(const Probe& lo, const Probe& hi) {
  const double a = lo.alpha, b = hi.alpha;
  const double lo_edge = std::min(a, b) + 0.1 * std::abs(b - a);
  const double hi_edge = std::max(a, b) - 0.1 * std::abs(b - a);
  const double d1 = lo.slope + hi.slope - 3.0 * (lo.f - hi.f) / (a - b);
  const double disc = d1 * d1 - lo.slope * hi.slope;
  double trial = 0.5 * (a + b);
  if (disc >= 0.0) {
    const double d2 = std::copysign(std::sqrt(disc), b - a);
    const double denom = hi.slope - lo.slope + 2.0 * d2;
    if (denom != 0.0) {
      const double t = b - (b - a) * (hi.slope + d2 - d1) / denom;
      if (std::isfinite(t)) trial = t;
    }
  }
  return std::clamp(trial, lo_edge, hi_edge);
}

class LineSearch {
 public:
  LineSearch(const Objective& objective, const LbfgsOptions& options, std::span<const double> x0,
             double f0, std::span<const double> direction, int& evaluations)
      : objective_(objective),
        options_(options),
        x0_(x0),
        f0_(f0),
        dir_(direction),
        evaluations_(evaluations) {
    d0_ = 0.0;
  }

  // Returns true on a strong-Wolfe point; `best` always holds the lowest
  // finite evaluation.
  bool run(double slope0, double alpha_init, Probe& accepted) {
    d0_ = slope0;
    Probe prev{0.0, f0_, slope0, {}, {}};
    double alpha = alpha_init;
    for (int i = 0; i < options_.max_line_search; ++i) {
      Probe cur = evaluate(alpha);
      if (!std::isfinite(cur.f)) {
        alpha = 0.5 * (prev.alpha + alpha);
        continue;
      }
      if (cur.f > f0_ + options_.c1 * alpha * d0_ || (i > 0 && cur.f >= prev.f)) {
        return zoom(prev, cur, accepted);
      }
      if (std::abs(cur.slope) <= -options_.c2 * d0_) {
        accepted = std::move(cur);
        return true;
      }
      if (cur.slope >= 0.0) return zoom(cur, prev, accepted);
      prev = std::move(cur);
      alpha *= 2.0;
    }
    return false;
  }

  const Probe* best() const { return has_best_ ? &best_ : nullptr; }

 private:
  Probe evaluate(double alpha) {
    Probe p;
    p.alpha = alpha;
    p.x.resize(x0_.size());
    p.g.assign(x0_.size(), 0.0);
    for (std::size_t i = 0; i < x0_.size(); ++i) p.x[i] = x0_[i] + alpha * dir_[i];
    p.f = objective_(p.x, p.g);
    ++evaluations_;
    p.slope = dot(p.g, dir_);
    if (std::isfinite(p.f) && std::isfinite(p.slope) && (!has_best_ || p.f < best_.f)) {
      best_ = p;
      has_best_ = true;
    }
    if (!std::isfinite(p.slope)) p.f = std::numeric_limits<double>::quiet_NaN();
    return p;
  }

  bool zoom(Probe lo, Probe hi, Probe& accepted) {
    for (int i = 0; i < options_.max_line_search; ++i) {
      if (std::abs(hi.alpha - lo.alpha) <= 1e-16 * std::max(1.0, std::abs(lo.alpha))) break;
      const double alpha = safeguarded_cubic(lo, hi);
      Probe cur = evaluate(alpha);
      if (!std::isfinite(cur.f) || cur.f > f0_ + options_.c1 * alpha * d0_ || cur.f >= lo.f) {
        hi = std::move(cur);
        if (!std::isfinite(hi.f)) hi.f = std::numeric_limits<double>::max();
        continue;
      }
      if (std::abs(cur.slope) <= -options_.c2 * d0_) {
        accepted = std::move(cur);
        return true;
      }
      if (cur.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
      lo = std::move(cur);
    }
    return false;
  }

  const Objective& objective_;
  const LbfgsOptions& options_;
  std::span<const double> x0_;
  double f0_;
  double d0_;
  std::span<const double> dir_;
  int& evaluations_;
  Probe best_;
  bool has_best_ = false;
};

}  // namespace

std::string to_string(LbfgsStatus status) {
  switch (status) {
    case LbfgsStatus::converged: return "converged";
    case LbfgsStatus::target_reached: return "target_reached";
    case LbfgsStatus::max_iterations: return "max_iterations";
    case LbfgsStatus::line_search_failed: return "line_search_failed";
    case LbfgsStatus::nonfinite: return "nonfinite";
  }
  return "unknown";
}

LbfgsResult lbfgs_minimize(const Objective& objective, std::vector<double> x0,
                           const LbfgsOptions& options) {
  detail::require(options.memory >= 1, "lbfgs: memory must be >= 1");
  detail::require(options.max_iterations >= 0, "lbfgs: max_iterations must be >= 0");
  detail::require(options.c1 > 0.0 && options.c1 < options.c2 && options.c2 < 1.0,
                  "lbfgs: need 0 < c1 < c2 < 1");
  const std::size_t n = x0.size();
  LbfgsResult res;
  res.x = std::move(x0);
  res.gradient.assign(n, 0.0);
  res.f = objective(res.x, res.gradient);
  res.evaluations = 1;
  if (!std::isfinite(res.f)) {
    res.status = LbfgsStatus::nonfinite;
    return res;
  }
  res.trace.emplace_back(0, res.f);

  std::deque<std::vector<double>> s_hist, y_hist;
  std::deque<double> rho_hist;
  std::vector<double> dir(n), alpha_buf(static_cast<std::size_t>(options.memory));
  bool restarted = false;

  while (true) {
    if (res.f <= options.f_target) {
      res.status = LbfgsStatus::target_reached;
      return res;
    }
    if (n == 0 || max_abs(res.gradient) < options.gradient_tolerance) {
      res.status = LbfgsStatus::converged;
      return res;
    }
    if (res.iterations >= options.max_iterations) {
      res.status = LbfgsStatus::max_iterations;
      return res;
    }

    // two-loop recursion
    for (std::size_t i = 0; i < n; ++i) dir[i] = -res.gradient[i];
    const std::size_t m = s_hist.size();
    for (std::size_t k = m; k-- > 0;) {
      alpha_buf[k] = rho_hist[k] * dot(s_hist[k], dir);
      for (std::size_t i = 0; i < n; ++i) dir[i] -= alpha_buf[k] * y_hist[k][i];
    }
    if (m > 0) {
      const double gamma = dot(s_hist[m - 1], y_hist[m - 1]) / dot(y_hist[m - 1], y_hist[m - 1]);
      for (double& d : dir) d *= gamma;
    }
    for (std::size_t k = 0; k < m; ++k) {
      const double beta = rho_hist[k] * dot(y_hist[k], dir);
      for (std::size_t i = 0; i < n; ++i) dir[i] += (alpha_buf[k] - beta) * s_hist[k][i];
    }

    double slope = dot(res.gradient, dir);
    if (!(slope < 0.0)) {
      // lost descent: fall back to steepest descent
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      for (std::size_t i = 0; i < n; ++i) dir[i] = -res.gradient[i];
      slope = dot(res.gradient, dir);
    }
    const double alpha0 = m == 0 ? std::min(1.0, 1.0 / max_abs(res.gradient)) : 1.0;

    LineSearch search(objective, options, res.x, res.f, dir, res.evaluations);
    Probe step;
    const bool ok = search.run(slope, alpha0, step);
    if (!ok) {
      const Probe* best = search.best();
      if (best != nullptr && best->f < res.f) {
        step = *best;
      } else if (!restarted && m > 0) {
        s_hist.clear();
        y_hist.clear();
        rho_hist.clear();
        restarted = true;
        continue;
      } else {
        res.status = LbfgsStatus::line_search_failed;
        return res;
      }
    }
    restarted = false;

    std::vector<double> s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = step.x[i] - res.x[i];
      y[i] = step.g[i] - res.gradient[i];
    }
    const double sy = dot(s, y);
    if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
      if (s_hist.size() == static_cast<std::size_t>(options.memory)) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
    }
    res.x = std::move(step.x);
    res.gradient = std::move(step.g);
    res.f = step.f;
    ++res.iterations;
    res.trace.emplace_back(res.iterations, res.f);
  }
}

}  // namespace scvqe
