// Invariant suites run by `ddd check`. Each suite is a few seconds at most.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ddd/kernels.hpp"

namespace ddd {

struct CheckOptions {
  int sphere_order = 24;
  double normalization = kGaussianNormalization;
  std::uint64_t seed = 1;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs every suite; `on_result` is called as each one finishes.
std::vector<CheckResult> run_checks(const CheckOptions& opt,
                                    const std::function<void(const CheckResult&)>& on_result = {});

}  // namespace ddd
