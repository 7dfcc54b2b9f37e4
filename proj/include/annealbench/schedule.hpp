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

#pragma once

#include <string>
#include <vector>

namespace annealbench {

struct SchedulePoint {
  double s = 0.0;
  double A = 0.0;  // GHz
  double B = 0.0;  // GHz
};

struct ScheduleValue {
  double A = 0.0;
  double B = 0.0;
};

// Piecewise-linear annealing schedule A(s), B(s) in GHz (hbar = 1).
class Schedule {
 public:
  // Throws ParameterError unless s is strictly increasing from 0 to 1 and all
  // A, B are finite and non-negative.
  Schedule(std::string name, std::vector<SchedulePoint> points);

  const std::string& name() const noexcept { return name_; }
  const std::vector<SchedulePoint>& points() const noexcept { return points_; }

  // Throws ParameterError for s outside [0, 1].
  ScheduleValue evaluate(double s) const;
  double A(double s) const { return evaluate(s).A; }
  double B(double s) const { return evaluate(s).B; }

  // A non-increasing, B non-decreasing, A(1) = 0.
  bool is_annealing() const;

 private:
  std::string name_;
  std::vector<SchedulePoint> points_;
};

// "dw2kq-like", "dw2x-like" or "linear". Throws ParameterError otherwise.
Schedule builtin_schedule(const std::string& name);
std::vector<std::string> builtin_schedule_names();

// Energy scales of the linear builtin.
inline constexpr double kLinearA0 = 33.0;
inline constexpr double kLinearB0 = 37.88;

// Inverse temperature of simulated annealing as a function of s, in units
// where max |J| = 1.
class BetaSchedule {
 public:
  // Throws ParameterError unless beta_scale > 0.
  BetaSchedule(Schedule base, double beta_scale);

  double operator()(double s) const { return scale_ * base_.B(s); }
  double scale() const noexcept { return scale_; }
  const Schedule& base() const noexcept { return base_; }

 private:
  Schedule base_;
  double scale_;
};

BetaSchedule sa_beta_schedule(Schedule base, double beta_scale);

// Named inverse-temperature presets, in units where max |J| = 1.
namespace presets {
inline constexpr double kSaBetaLogical = 0.132;
inline constexpr double kSaBetaHardware = 0.396;
inline constexpr double kSvmcBetaLogical = 2.5;
inline constexpr double kSvmcBetaHardware = 0.51;
inline constexpr double kSqaBetaLogical = 2.5;
inline constexpr double kSqaBetaHardware = 4.25;
}  // namespace presets

// k_B T expressed in GHz (hbar = 1 units of the schedules) per millikelvin.
inline constexpr double kGHzPerMilliKelvin = 0.020836619123;

}  // namespace annealbench
