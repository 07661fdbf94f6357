// End-to-end verification suite: each check compares two independent
// routes (integrator vs exponential, closed form vs oracle, measured vs
// analytic bound) at a fixed tolerance.
#ifndef CTQW_VERIFY_HPP
#define CTQW_VERIFY_HPP

#include <functional>
#include <string>
#include <vector>

namespace ctqw {

struct CheckResult {
  std::string id;
  std::string description;
  bool passed = false;
  // Report-only lines carry measurements without gating the verdict.
  bool asserted = true;
  std::string detail;
};

struct VerificationReport {
  std::vector<CheckResult> checks;
  bool all_passed() const;
};

std::vector<CheckResult> check_oracle_equivalence();
std::vector<CheckResult> check_representation_equivalence();
std::vector<CheckResult> check_decay_law();
std::vector<CheckResult> check_unitary_closed_form();
std::vector<CheckResult> check_small_gamma_bound();
std::vector<CheckResult> check_large_gamma_bracket();
std::vector<CheckResult> check_classical_limit();
std::vector<CheckResult> check_transition_curve(int jobs = 1);
std::vector<CheckResult> check_perturbation_internals();

struct NamedCheck {
  std::string id;
  std::function<std::vector<CheckResult>()> run;
};

/// All checks in a fixed order.
std::vector<NamedCheck> verification_suite(int jobs = 1);

/// Runs the suite; `progress` (optional) is called after each check group.
VerificationReport run_verification(int jobs = 1,
                                    const std::function<void(const CheckResult&)>& progress = {});

}  // namespace ctqw

#endif  // CTQW_VERIFY_HPP
