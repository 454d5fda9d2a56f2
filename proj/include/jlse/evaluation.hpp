/* Copyright 2026 The JLSE Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Metrics and comparison reports.
//
//   Error(t) = 1/(m_test n) sum_k sum_i (x_i(t)[k] - xhat_i(t)[k])^2
//   NMSE     = 1/(m_test n T) sum_k sum_t sum_i (...)^2  =  mean_t Error(t)
//
// Scoring starts at t = 1; the initial state x(0) is never scored.

#ifndef JLSE_EVALUATION_HPP_
#define JLSE_EVALUATION_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "jlse/dynamics.hpp"
#include "jlse/filters.hpp"
#include "jlse/networks.hpp"

namespace jlse {

Vector error_curve(const std::vector<Series>& truth,
                   const std::vector<Series>& estimates);
double nmse(const std::vector<Series>& truth,
            const std::vector<Series>& estimates);

// Something that turns a measurement sequence into x-hat(1..T).
class Estimator {
 public:
  virtual ~Estimator() = default;
  virtual std::string name() const = 0;
  virtual Series estimate(const Trajectory& traj) const = 0;
  // Whole test set at once; the default estimates one sequence at a time.
  virtual std::vector<Series> estimate_all(const std::vector<Trajectory>& set) const;
};

class FilterEstimator : public Estimator {
 public:
  FilterEstimator(std::shared_ptr<const SystemModel> model, FilterKind kind);
  std::string name() const override;
  Series estimate(const Trajectory& traj) const override;

 private:
  std::shared_ptr<const SystemModel> model_;
  FilterKind kind_;
  FilterState init_;
};

class NetworkEstimator : public Estimator {
 public:
  explicit NetworkEstimator(NetworkParams params) : params_(std::move(params)) {}
  std::string name() const override { return to_string(params_.config().arch); }
  Series estimate(const Trajectory& traj) const override;
  std::vector<Series> estimate_all(const std::vector<Trajectory>& set) const override;
  const NetworkParams& params() const { return params_; }

 private:
  NetworkParams params_;
};

struct EstimatorResult {
  std::string name;
  Vector error_curve;
  double nmse = 0.0;
  double test_seconds = 0.0;  // roll-out only
};

struct EvalReport {
  std::string system;
  int sequence_length = 0;
  int m_test = 0;
  Box region;
  std::vector<EstimatorResult> results;

  const EstimatorResult& at(const std::string& name) const;
};

// Rolls every estimator over every test sequence single-threaded, timing
// the roll-outs only.
EvalReport evaluate(const SystemModel& model,
                    const std::vector<Trajectory>& test_set,
                    const std::vector<const Estimator*>& estimators,
                    const Box& region);

// Fresh trajectories whose initial means are drawn from `region`, seeded
// seed + i (diverging draws are redrawn). The region must not overlap the
// interior of the training box.
std::vector<Trajectory> out_of_region_testset(const SystemModel& model,
                                              const Box& region, int count,
                                              std::uint64_t seed, int T);

struct SummaryRow {
  std::string system;
  std::string estimator;
  double nmse = 0.0;
  std::optional<double> nmse_oor;
  double train_seconds = 0.0;
  double test_seconds = 0.0;
};

// system,estimator,nmse,nmse_oor,train_seconds,test_seconds
std::string summary_csv(const std::vector<SummaryRow>& rows);
// t,error_<estimator>,... for t = 1..T
std::string error_curve_csv(const EvalReport& report);

}  // namespace jlse

#endif  // JLSE_EVALUATION_HPP_
