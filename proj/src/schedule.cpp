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

#include "annealbench/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "annealbench/errors.hpp"

namespace annealbench {

Schedule::Schedule(std::string name, std::vector<SchedulePoint> points)
    : name_(std::move(name)), points_(std::move(points)) {
  if (points_.size() < 2) throw ParameterError("schedule needs at least two points");
  if (points_.front().s != 0.0 || points_.back().s != 1.0)
    throw ParameterError("schedule must start at s = 0 and end at s = 1");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const auto& p = points_[i];
    if (!std::isfinite(p.A) || !std::isfinite(p.B) || p.A < 0.0 || p.B < 0.0)
      throw ParameterError("schedule values must be finite and non-negative");
    if (i > 0 && !(p.s > points_[i - 1].s)) throw ParameterError("schedule s must be strictly increasing");
  }
}

ScheduleValue Schedule::evaluate(double s) const {
  if (!(s >= 0.0 && s <= 1.0)) throw ParameterError("schedule evaluated outside [0, 1]");
  auto hi = std::lower_bound(points_.begin(), points_.end(), s,
                             [](const SchedulePoint& p, double x) { return p.s < x; });
  if (hi->s == s) return {hi->A, hi->B};
  auto lo = hi - 1;
  const double t = (s - lo->s) / (hi->s - lo->s);
  return {lo->A + t * (hi->A - lo->A), lo->B + t * (hi->B - lo->B)};
}

bool Schedule::is_annealing() const {
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (points_[i].A > points_[i - 1].A || points_[i].B < points_[i - 1].B) return false;
  }
  return points_.back().A == 0.0;
}

namespace {

constexpr int kKnots = 201;

// A(s) decays exponentially and reaches zero at s_end; B(s) rises as a power.
struct DeviceShape {
  double A0, decay, s_end, B1, b0, power;

  SchedulePoint at(double s) const {
    double A = 0.0;
    if (s < s_end) A = A0 * (std::exp(-decay * s) - std::exp(-decay * s_end)) / (1.0 - std::exp(-decay * s_end));
    const double B = B1 * (b0 + (1.0 - b0) * std::pow(s, power));
    return {s, A, B};
  }
};

constexpr DeviceShape kDw2kqLike{40.0, 11.0, 0.75, 50.0, 0.002, 3.0};
constexpr DeviceShape kDw2xLike{33.0, 7.0, 1.0, 37.88, 0.004, 2.5};

Schedule tabulate(const std::string& name, const DeviceShape& shape) {
  std::vector<SchedulePoint> pts;
  for (int i = 0; i < kKnots; ++i) pts.push_back(shape.at(static_cast<double>(i) / (kKnots - 1)));
  pts.back().A = 0.0;
  return Schedule(name, std::move(pts));
}

}  // namespace

Schedule builtin_schedule(const std::string& name) {
  if (name == "dw2kq-like") return tabulate(name, kDw2kqLike);
  if (name == "dw2x-like") return tabulate(name, kDw2xLike);
  if (name == "linear") return Schedule(name, {{0.0, kLinearA0, 0.0}, {1.0, 0.0, kLinearB0}});
  throw ParameterError("unknown schedule: " + name);
}

std::vector<std::string> builtin_schedule_names() { return {"dw2kq-like", "dw2x-like", "linear"}; }

BetaSchedule::BetaSchedule(Schedule base, double beta_scale) : base_(std::move(base)), scale_(beta_scale) {
  if (!(beta_scale > 0.0) || !std::isfinite(beta_scale)) throw ParameterError("beta scale must be positive");
}

BetaSchedule sa_beta_schedule(Schedule base, double beta_scale) { return BetaSchedule(std::move(base), beta_scale); }

}  // namespace annealbench
