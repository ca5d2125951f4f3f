#pragma once

#include <string>
#include <vector>

namespace ghzsim {

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct ValidationOptions {
  // Test hook: added to every O_k diagonal entry seen by the checks.
  double ok_perturbation = 0.0;
};

std::vector<std::string> validation_check_names();

// Runs the built-in consistency suite: closed-form propagator against the block
// Hamiltonian, Hamiltonian structure, tuning identities and GHZ targets.
std::vector<CheckResult> run_validation(const ValidationOptions& options = {});

}  // namespace ghzsim
