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

#include "jlse/evaluation.hpp"

#include <algorithm>
#include <chrono>

#include "jlse/csv.hpp"
#include "jlse/errors.hpp"

namespace jlse {

namespace {

void check_congruent(const std::vector<Series>& truth,
                     const std::vector<Series>& estimates) {
  if (truth.empty() || truth.size() != estimates.size()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "metrics: need the same non-zero number of truth and estimate sequences");
  }
  const Eigen::Index n = truth.front().rows();
  const Eigen::Index steps = truth.front().cols();
  for (std::size_t k = 0; k < truth.size(); ++k) {
    if (truth[k].rows() != n || truth[k].cols() != steps ||
        estimates[k].rows() != n || estimates[k].cols() != steps) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "metrics: sequence " + std::to_string(k) + " has a different shape");
    }
  }
}

}  // namespace

Vector error_curve(const std::vector<Series>& truth,
                   const std::vector<Series>& estimates) {
  check_congruent(truth, estimates);
  const Eigen::Index n = truth.front().rows();
  Vector curve = Vector::Zero(truth.front().cols());
  for (std::size_t k = 0; k < truth.size(); ++k) {
    curve += (truth[k] - estimates[k]).colwise().squaredNorm().transpose();
  }
  return curve / static_cast<double>(truth.size() * static_cast<std::size_t>(n));
}

double nmse(const std::vector<Series>& truth, const std::vector<Series>& estimates) {
  return error_curve(truth, estimates).mean();
}

FilterEstimator::FilterEstimator(std::shared_ptr<const SystemModel> model,
                                 FilterKind kind)
    : model_(std::move(model)), kind_(kind) {
  init_ = kind_ == FilterKind::kKF ? kf_init(*model_) : ekf_init(*model_);
}

std::string FilterEstimator::name() const {
  return kind_ == FilterKind::kKF ? "kf" : "ekf";
}

Series FilterEstimator::estimate(const Trajectory& traj) const {
  return run_filter(*model_, traj.measurements, kind_, init_);
}

std::vector<Series> Estimator::estimate_all(const std::vector<Trajectory>& set) const {
  std::vector<Series> out;
  out.reserve(set.size());
  for (const Trajectory& traj : set) out.push_back(estimate(traj));
  return out;
}

Series NetworkEstimator::estimate(const Trajectory& traj) const {
  return predict(params_, traj.measurements);
}

std::vector<Series> NetworkEstimator::estimate_all(
    const std::vector<Trajectory>& set) const {
  const bool same_length = std::all_of(set.begin(), set.end(), [&](const Trajectory& t) {
    return t.length() == set.front().length();
  });
  if (set.empty() || !same_length) return Estimator::estimate_all(set);
  std::vector<Series> inputs;
  inputs.reserve(set.size());
  for (const Trajectory& traj : set) inputs.push_back(traj.measurements);
  return predict_batch(params_, inputs);
}

const EstimatorResult& EvalReport::at(const std::string& name) const {
  for (const auto& r : results) {
    if (r.name == name) return r;
  }
  throw Error(ErrorKind::kInvalidArgument, "no estimator named " + name + " in report");
}

EvalReport evaluate(const SystemModel& model,
                    const std::vector<Trajectory>& test_set,
                    const std::vector<const Estimator*>& estimators,
                    const Box& region) {
  if (test_set.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "evaluate: empty test set");
  }
  EvalReport report;
  report.system = model.name;
  report.sequence_length = test_set.front().length();
  report.m_test = static_cast<int>(test_set.size());
  report.region = region;

  std::vector<Series> truth;
  truth.reserve(test_set.size());
  for (const Trajectory& traj : test_set) {
    if (traj.states.rows() != model.n) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "evaluate: test sequence dimension differs from the model");
    }
    truth.push_back(traj.states.rightCols(traj.length()));
  }

  for (const Estimator* est : estimators) {
    const auto start = std::chrono::steady_clock::now();
    const std::vector<Series> estimates = est->estimate_all(test_set);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    EstimatorResult r;
    r.name = est->name();
    r.error_curve = error_curve(truth, estimates);
    r.nmse = r.error_curve.mean();
    r.test_seconds = seconds;
    report.results.push_back(std::move(r));
  }
  return report;
}

std::vector<Trajectory> out_of_region_testset(const SystemModel& model,
                                              const Box& region, int count,
                                              std::uint64_t seed, int T) {
  if (!region.disjoint(model.init_region)) {
    throw Error(ErrorKind::kInvalidArgument,
                "out_of_region_testset: region overlaps the training box");
  }
  if (count < 1) {
    throw Error(ErrorKind::kInvalidArgument, "out_of_region_testset: count must be >= 1");
  }
  std::vector<Trajectory> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    out.push_back(generate_finite_trajectory(model, T, region,
                                      seed + static_cast<std::uint64_t>(i)));
  }
  return out;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out = "system,estimator,nmse,nmse_oor,train_seconds,test_seconds\n";
  for (const SummaryRow& r : rows) {
    out += r.system + ',' + r.estimator + ',' + format_double(r.nmse) + ',' +
           (r.nmse_oor ? format_double(*r.nmse_oor) : std::string()) + ',' +
           format_double(r.train_seconds) + ',' + format_double(r.test_seconds) + '\n';
  }
  return out;
}

std::string error_curve_csv(const EvalReport& report) {
  std::string out = "t";
  for (const auto& r : report.results) out += ",error_" + r.name;
  out += '\n';
  for (int t = 0; t < report.sequence_length; ++t) {
    out += std::to_string(t + 1);
    for (const auto& r : report.results) out += ',' + format_double(r.error_curve[t]);
    out += '\n';
  }
  return out;
}

}  // namespace jlse
