// Two cells whose screening defects cancel: admissible, yet not screened off.
#include <iostream>

#include "rccs/rccs.hpp"

int main() {
  using namespace rccs;
  const auto cx = realize_counterexample();
  const auto d = diagnose_cancellation(cx.space, cx.A, cx.B, cx.partition);
  for (std::size_t i = 0; i < d.residuals.size(); ++i)
    std::cout << "cell " << i + 1 << ": residual " << d.residuals[i] << ", weighted " << d.weighted_defects[i]
              << "\n";
  std::cout << "sum " << d.defect_sum << ", admissible " << std::boolalpha << d.admissible_verdict
            << ", screens off " << d.screening_verdict << "\n";
}
