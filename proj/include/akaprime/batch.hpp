#pragma once

#include <string>
#include <vector>

#include "akaprime/harness.hpp"

namespace akaprime {

struct BatchResult {
  RunResult result;
  std::string error;  // non-empty when the scenario could not run; result is then default
};

/// Runs every scenario against its own copy of `base`, one event loop per
/// OpenMP thread. Results are in input order and equal to run_batch_serial.
std::vector<BatchResult> run_batch(const std::vector<Scenario>& scenarios, const SubscriberStore& base);

/// Single-threaded reference for run_batch.
std::vector<BatchResult> run_batch_serial(const std::vector<Scenario>& scenarios, const SubscriberStore& base);

/// Parallel run where each scenario loads its own subscribers file.
std::vector<BatchResult> run_batch(const std::vector<Scenario>& scenarios);

}  // namespace akaprime
