#include "akaprime/batch.hpp"

#include "akaprime/error.hpp"

namespace akaprime {

namespace {

BatchResult run_one(const Scenario& sc, const SubscriberStore& base) {
  BatchResult out;
  try {
    SubscriberStore store(base);
    out.result = run_scenario(sc, store);
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

BatchResult run_one(const Scenario& sc) {
  BatchResult out;
  try {
    out.result = run_scenario(sc);
  } catch (const Error& e) {
    out.error = e.what();
  }
  return out;
}

}  // namespace

std::vector<BatchResult> run_batch(const std::vector<Scenario>& scenarios) {
  std::vector<BatchResult> results(scenarios.size());
  const auto n = static_cast<std::ptrdiff_t>(scenarios.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    results[static_cast<std::size_t>(i)] = run_one(scenarios[static_cast<std::size_t>(i)]);
  }
  return results;
}

std::vector<BatchResult> run_batch(const std::vector<Scenario>& scenarios, const SubscriberStore& base) {
  std::vector<BatchResult> results(scenarios.size());
  const auto n = static_cast<std::ptrdiff_t>(scenarios.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    results[static_cast<std::size_t>(i)] = run_one(scenarios[static_cast<std::size_t>(i)], base);
  }
  return results;
}

std::vector<BatchResult> run_batch_serial(const std::vector<Scenario>& scenarios, const SubscriberStore& base) {
  std::vector<BatchResult> results;
  results.reserve(scenarios.size());
  for (const auto& sc : scenarios) results.push_back(run_one(sc, base));
  return results;
}

}  // namespace akaprime
