// Copyright 2026 The annealbench Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "annealbench/analysis.hpp"
#include "annealbench/errors.hpp"
#include "annealbench/rng.hpp"

namespace annealbench {

std::string to_string(FitFamily f) {
  switch (f) {
    case FitFamily::quadratic_log: return "quadratic_log";
    case FitFamily::hfs_form: return "hfs_form";
    case FitFamily::power_law: return "power_law";
    case FitFamily::scaling_exp: return "scaling_exp";
    case FitFamily::scaling_poly: return "scaling_poly";
    case FitFamily::scaling_hybrid: return "scaling_hybrid";
  }
  return "quadratic_log";
}

FitFamily fit_family_from_string(const std::string& s) {
  for (FitFamily f : {FitFamily::quadratic_log, FitFamily::hfs_form, FitFamily::power_law, FitFamily::scaling_exp,
                      FitFamily::scaling_poly, FitFamily::scaling_hybrid})
    if (to_string(f) == s) return f;
  throw ParameterError("unknown fit family: " + s);
}

const FitParam& FitResult::param(const std::string& name) const {
  for (const auto& p : params)
    if (p.name == name) return p;
  throw ParameterError("fit has no parameter " + name);
}

bool FitResult::operator==(const FitResult& o) const {
  if (family != o.family || params.size() != o.params.size() || derived != o.derived ||
      diagnostics != o.diagnostics || residual_norm != o.residual_norm || ci_method != o.ci_method ||
      convex != o.convex)
    return false;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto &a = params[i], &b = o.params[i];
    if (a.name != b.name || a.value != b.value || a.ci_lo != b.ci_lo || a.ci_hi != b.ci_hi) return false;
  }
  return true;
}

namespace {

constexpr double kHfsCoefficient = 4.0 / 2.2795070569547775;  // 4 / 3^(3/4)

std::vector<FitPoint> canonical(std::span<const FitPoint> points) {
  std::vector<FitPoint> v(points.begin(), points.end());
  for (const auto& p : v)
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw ParameterError("fit points must be finite");
  std::sort(v.begin(), v.end(), [](const FitPoint& a, const FitPoint& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
  return v;
}

// A model maps points to parameter values (natural parametrization) and can
// predict y at x from those values.
struct Model {
  std::vector<std::string> names;
  std::function<std::vector<double>(const std::vector<FitPoint>&)> fit;
  std::function<double(const std::vector<double>&, double)> predict;
};

double residual_norm(const Model& m, const std::vector<double>& params, const std::vector<FitPoint>& pts) {
  double ss = 0.0;
  for (const auto& p : pts) {
    const double r = p.y - m.predict(params, p.x);
    ss += r * r;
  }
  return std::sqrt(ss);
}

// Bootstrap replicates of the parameters: supplied resamples if any, else
// residual resampling with residuals inflated by sqrt(n / (n - k)).
std::vector<std::vector<double>> replicate(const Model& m, const std::vector<double>& best,
                                           const std::vector<FitPoint>& pts, const FitOptions& opt) {
  std::vector<std::vector<double>> reps;
  if (!opt.resamples.empty()) {
    for (const auto& rs : opt.resamples) {
      try {
        reps.push_back(m.fit(canonical(rs)));
      } catch (const std::exception&) {
        // An unfittable resample contributes nothing.
      }
    }
    return reps;
  }
  if (opt.n_boot < 1) throw ParameterError("n_boot must be positive");
  const std::size_t n = pts.size();
  const double inflate = std::sqrt(static_cast<double>(n) / static_cast<double>(n - m.names.size()));
  std::vector<double> fitted(n), resid(n);
  for (std::size_t i = 0; i < n; ++i) {
    fitted[i] = m.predict(best, pts[i].x);
    resid[i] = (pts[i].y - fitted[i]) * inflate;
  }
  std::vector<std::vector<double>> slots(static_cast<std::size_t>(opt.n_boot));
  std::vector<char> ok(slots.size(), 0);
#pragma omp parallel for schedule(static)
  for (int b = 0; b < opt.n_boot; ++b) {
    const auto idx = resample_indices(n, opt.seed, b);
    std::vector<FitPoint> synth(n);
    for (std::size_t i = 0; i < n; ++i) synth[i] = {pts[i].x, fitted[i] + resid[idx[i]]};
    try {
      slots[static_cast<std::size_t>(b)] = m.fit(synth);
      ok[static_cast<std::size_t>(b)] = 1;
    } catch (const std::exception&) {
    }
  }
  for (std::size_t b = 0; b < slots.size(); ++b)
    if (ok[b]) reps.push_back(std::move(slots[b]));
  return reps;
}

FitResult assemble(FitFamily family, const Model& m, const std::vector<double>& best,
                   const std::vector<std::vector<double>>& reps, const std::vector<FitPoint>& pts,
                   const FitOptions& opt) {
  FitResult r;
  r.family = family;
  r.ci_method = opt.ci_method;
  r.residual_norm = residual_norm(m, best, pts);
  for (std::size_t k = 0; k < m.names.size(); ++k) {
    FitParam p{m.names[k], best[k], best[k], best[k]};
    std::vector<double> col;
    for (const auto& rep : reps)
      if (std::isfinite(rep[k])) col.push_back(rep[k]);
    if (!col.empty()) {
      const Interval ci = confidence_interval(col, best[k], opt.ci_method);
      p.ci_lo = std::min(ci.lo, best[k]);
      p.ci_hi = std::max(ci.hi, best[k]);
    }
    r.params.push_back(p);
  }
  if (reps.empty()) r.diagnostics.push_back("no bootstrap replicate could be fitted; intervals collapsed");
  return r;
}

// Ordinary least squares on a linear basis.
std::vector<double> linear_ls(const std::vector<FitPoint>& pts, const std::function<Eigen::VectorXd(double)>& basis,
                              int k) {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(pts.size()), k);
  Eigen::VectorXd y(static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    X.row(static_cast<Eigen::Index>(i)) = basis(pts[i].x).transpose();
    y(static_cast<Eigen::Index>(i)) = pts[i].y;
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < k) throw NumericalError("least squares design matrix is rank deficient");
  const Eigen::VectorXd beta = qr.solve(y);
  return {beta.data(), beta.data() + k};
}

void require_points(std::size_t have, std::size_t need, const char* family) {
  if (have < need)
    throw ParameterError(std::string(family) + " fit needs at least " + std::to_string(need) + " points, got " +
                         std::to_string(have));
}

Model quadratic_model() {
  Model m;
  m.names = {"a", "b", "c"};
  m.fit = [](const std::vector<FitPoint>& pts) {
    const auto beta = linear_ls(pts, [](double x) { return Eigen::Vector3d(x * x, x, 1.0).eval(); }, 3);
    const double a = beta[0];
    if (a == 0.0) throw NumericalError("quadratic fit has zero curvature");
    const double b = -beta[1] / (2.0 * a);
    const double c = beta[2] - a * b * b;
    return std::vector<double>{a, b, c};
  };
  m.predict = [](const std::vector<double>& p, double x) { return p[0] * (x - p[1]) * (x - p[1]) + p[2]; };
  return m;
}

double hfs_value(double a, double b, double c, double x) {
  return a / (x * x * x) + b * x + c - kHfsCoefficient * std::pow(a * a * a * b, 0.25);
}

// Damped Gauss-Newton in (ln a, ln b) with c eliminated in closed form.
struct HfsSolver {
  const std::vector<FitPoint>& pts;

  double offset_for(double a, double b) const {
    double s = 0.0;
    for (const auto& p : pts) s += p.y - hfs_value(a, b, 0.0, p.x);
    return s / static_cast<double>(pts.size());
  }

  double cost(double la, double lb) const {
    const double a = std::exp(la), b = std::exp(lb), c = offset_for(a, b);
    double ss = 0.0;
    for (const auto& p : pts) {
      const double r = p.y - hfs_value(a, b, c, p.x);
      ss += r * r;
    }
    return ss;
  }

  // Returns (ln a, ln b, cost, converged).
  std::tuple<double, double, double, bool> solve(double la, double lb) const {
    const std::size_t n = pts.size();
    double lambda = 1e-3;
    double current = cost(la, lb);
    for (int it = 0; it < 10000; ++it) {
      const double a = std::exp(la), b = std::exp(lb);
      const double c = offset_for(a, b);
      Eigen::MatrixXd Jm(static_cast<Eigen::Index>(n), 2);
      Eigen::VectorXd r(static_cast<Eigen::Index>(n));
      const double root = std::pow(a * a * a * b, 0.25);
      for (std::size_t i = 0; i < n; ++i) {
        const double x = pts[i].x;
        // d g / d ln a and d g / d ln b of g = a x^-3 + b x - K (a^3 b)^(1/4).
        Jm(static_cast<Eigen::Index>(i), 0) = a / (x * x * x) - 0.75 * kHfsCoefficient * root;
        Jm(static_cast<Eigen::Index>(i), 1) = b * x - 0.25 * kHfsCoefficient * root;
        r(static_cast<Eigen::Index>(i)) = pts[i].y - hfs_value(a, b, c, x);
      }
      // Project out the constant direction absorbed by c.
      Jm.rowwise() -= Jm.colwise().mean();
      const Eigen::Matrix2d JtJ = Jm.transpose() * Jm;
      const Eigen::Vector2d g = Jm.transpose() * r;
      bool improved = false;
      for (int tries = 0; tries < 60; ++tries) {
        Eigen::Matrix2d Aug = JtJ;
        Aug.diagonal() += lambda * JtJ.diagonal().cwiseMax(1e-12);
        const Eigen::Vector2d step = Aug.ldlt().solve(g);
        const double nla = la + step(0), nlb = lb + step(1);
        const double trial = cost(nla, nlb);
        if (std::isfinite(trial) && trial <= current) {
          const double rel = (current - trial) / std::max(current, 1e-300);
          la = nla;
          lb = nlb;
          current = trial;
          lambda = std::max(lambda / 3.0, 1e-15);
          improved = true;
          if (rel < 1e-10 || current < 1e-28) return {la, lb, current, true};
          break;
        }
        lambda *= 4.0;
      }
      if (!improved) return {la, lb, current, current < 1e-20 || lambda > 1e10};
    }
    return {la, lb, current, false};
  }
};

Model hfs_model(std::string* log) {
  Model m;
  m.names = {"a", "b", "c"};
  m.fit = [log](const std::vector<FitPoint>& pts) {
    HfsSolver solver{pts};
    double best_cost = std::numeric_limits<double>::infinity();
    double best_la = 0.0, best_lb = 0.0;
    bool any = false;
    std::ostringstream diag;
    for (double a0 : {0.01, 0.1, 1.0, 10.0, 100.0})
      for (double b0 : {0.01, 0.1, 1.0, 10.0}) {
        auto [la, lb, c, conv] = solver.solve(std::log(a0), std::log(b0));
        diag << "start(a=" << a0 << ",b=" << b0 << ") cost=" << c << (conv ? " converged" : " stalled") << "; ";
        if (conv && c < best_cost) {
          best_cost = c;
          best_la = la;
          best_lb = lb;
          any = true;
        }
      }
    if (log) *log = diag.str();
    if (!any) throw FitError("HFS-form fit did not converge from any start", diag.str());
    const double a = std::exp(best_la), b = std::exp(best_lb);
    return std::vector<double>{a, b, solver.offset_for(a, b)};
  };
  m.predict = [](const std::vector<double>& p, double x) { return hfs_value(p[0], p[1], p[2], x); };
  return m;
}

Model power_law_model() {
  Model m;
  m.names = {"a", "b"};
  m.fit = [](const std::vector<FitPoint>& pts) {
    return linear_ls(pts, [](double x) { return Eigen::Vector2d(x, 1.0).eval(); }, 2);
  };
  m.predict = [](const std::vector<double>& p, double x) { return p[0] * x + p[1]; };
  return m;
}

}  // namespace

FitResult fit_quadratic_log(std::span<const FitPoint> points, const FitOptions& options) {
  require_points(points.size(), 4, "quadratic");
  const auto pts = canonical(points);
  const Model m = quadratic_model();
  const auto best = m.fit(pts);
  auto reps = replicate(m, best, pts, options);
  const std::size_t total = reps.size();
  // Only convex replicates locate a minimum.
  std::erase_if(reps, [](const std::vector<double>& p) { return !(p[0] > 0.0); });
  FitResult r = assemble(FitFamily::quadratic_log, m, best, reps, pts, options);
  r.convex = best[0] > 0.0;
  if (r.convex) {
    r.derived["t_star"] = std::exp(best[1]);
    r.derived["tts_star"] = std::exp(best[2]);
    r.derived["convex_replicate_fraction"] =
        total == 0 ? 0.0 : static_cast<double>(reps.size()) / static_cast<double>(total);
  } else {
    r.diagnostics.push_back("non-convex: fitted curvature a <= 0, no optimal effort reported");
  }
  return r;
}

FitResult fit_hfs_form(std::span<const FitPoint> points, const FitOptions& options) {
  require_points(points.size(), 5, "HFS-form");
  for (const auto& p : points)
    if (!(p.x > 0.0)) throw ParameterError("HFS-form fit requires x > 0");
  const auto pts = canonical(points);
  std::string log;
  const Model m = hfs_model(&log);
  const auto best = m.fit(pts);
  const Model quiet = hfs_model(nullptr);
  const auto reps = replicate(quiet, best, pts, options);
  FitResult r = assemble(FitFamily::hfs_form, m, best, reps, pts, options);
  const double x_star = std::pow(3.0 * best[0] / best[1], 0.25);
  r.derived["x_star"] = x_star;
  r.derived["y_at_x_star"] = hfs_value(best[0], best[1], best[2], x_star);
  return r;
}

FitResult fit_power_law(std::span<const FitPoint> points, const FitOptions& options) {
  require_points(points.size(), 3, "power-law");
  std::vector<FitPoint> logged;
  for (const auto& p : points) {
    if (!(p.x > 0.0) || !(p.y > 0.0)) throw ParameterError("power-law fit requires t_f > 0 and p_S > 0");
    logged.push_back({std::log(p.x), std::log(p.y)});
  }
  const auto pts = canonical(logged);
  const Model m = power_law_model();
  const auto best = m.fit(pts);
  const auto reps = replicate(m, best, pts, options);
  FitResult r = assemble(FitFamily::power_law, m, best, reps, pts, options);
  r.derived["tts_exponent"] = 1.0 - best[0];
  r.diagnostics.push_back(best[0] > 1.0 ? "a > 1: small-p_S TTS decreases with t_f"
                                        : "a <= 1: small-p_S TTS does not decrease with t_f");
  return r;
}

FitResult fit_scaling(std::span<const FitPoint> points, FitFamily family, const FitOptions& options) {
  Model m;
  std::size_t k = 0;
  switch (family) {
    case FitFamily::scaling_exp:
      k = 2;
      m.names = {"a", "b"};
      m.fit = [](const std::vector<FitPoint>& pts) {
        auto beta = linear_ls(pts, [](double x) { return Eigen::Vector2d(1.0, x).eval(); }, 2);
        return std::vector<double>{std::exp(beta[0]), beta[1]};
      };
      m.predict = [](const std::vector<double>& p, double x) { return std::log(p[0]) + p[1] * x; };
      break;
    case FitFamily::scaling_poly:
      k = 2;
      m.names = {"a", "b"};
      m.fit = [](const std::vector<FitPoint>& pts) {
        auto beta = linear_ls(pts, [](double x) { return Eigen::Vector2d(1.0, std::log(x)).eval(); }, 2);
        return std::vector<double>{std::exp(beta[0]), beta[1]};
      };
      m.predict = [](const std::vector<double>& p, double x) { return std::log(p[0]) + p[1] * std::log(x); };
      break;
    case FitFamily::scaling_hybrid:
      k = 3;
      m.names = {"a", "b", "c"};
      m.fit = [](const std::vector<FitPoint>& pts) {
        return linear_ls(pts, [](double x) { return Eigen::Vector3d(1.0, std::log(x), x).eval(); }, 3);
      };
      m.predict = [](const std::vector<double>& p, double x) { return p[0] + p[1] * std::log(x) + p[2] * x; };
      break;
    default:
      throw ParameterError("fit_scaling needs a scaling family, got " + to_string(family));
  }
  require_points(points.size(), k + 1, to_string(family).c_str());
  for (const auto& p : points)
    if (!(p.x > 0.0)) throw ParameterError("scaling fit requires L > 0");
  const auto pts = canonical(points);
  const auto best = m.fit(pts);
  const auto reps = replicate(m, best, pts, options);
  return assemble(family, m, best, reps, pts, options);
}

double evaluate_fit(const FitResult& fit, double x) {
  auto p = [&](const char* n) { return fit.param(n).value; };
  switch (fit.family) {
    case FitFamily::quadratic_log: return p("a") * (x - p("b")) * (x - p("b")) + p("c");
    case FitFamily::hfs_form: return hfs_value(p("a"), p("b"), p("c"), x);
    case FitFamily::power_law: return p("a") * x + p("b");
    case FitFamily::scaling_exp: return std::log(p("a")) + p("b") * x;
    case FitFamily::scaling_poly: return std::log(p("a")) + p("b") * std::log(x);
    case FitFamily::scaling_hybrid: return p("a") + p("b") * std::log(x) + p("c") * x;
  }
  throw ParameterError("unknown fit family");
}

}  // namespace annealbench
