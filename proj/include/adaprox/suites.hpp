#pragma once

#include <functional>
#include <string>
#include <vector>

namespace adaprox {

// Outcome of one acceptance criterion.
struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

CriterionResult check_forward_operator_identity();  // 1
CriterionResult check_lyapunov_decrease();           // 2
CriterionResult check_descent_inequality();          // 3
CriterionResult check_min_gap_bound();               // 4
CriterionResult check_rate_envelope_1d();            // 5
CriterionResult check_stepsize_ratio_and_k2();       // 6
CriterionResult check_operator_accounting();         // 7
CriterionResult check_generator_certificates();      // 8
CriterionResult check_lasso_ordering();              // 9
CriterionResult check_gradients();                   // 10
CriterionResult check_acfgm_recursion();             // 11

// "invariants" -> 1-4, 6-8, 10, 11; "rates" -> 5, 9; "all" -> 1-11.
std::vector<CriterionResult> run_suite(const std::string& name,
                                       const std::function<void(const CriterionResult&)>& on_result = {});

std::string format_result(const CriterionResult& r);

}  // namespace adaprox
