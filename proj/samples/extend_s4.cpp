// Builds a size-3 common cause system for the S4 pair and prints the
// extended space together with the cell conditionals.
#include <iostream>

#include "rccs/rccs.hpp"

int main() {
  using namespace rccs;
  ProbSpace s4({{"w1", Rational(3, 8)}, {"w2", Rational(1, 8)}, {"w3", Rational(1, 8)}, {"w4", Rational(3, 8)}});
  const Event A = s4.event({"w1", "w2"}), B = s4.event({"w1", "w3"});

  const auto target = correlation_summary(s4, A, B);
  std::cout << "p(A)=" << target.a << " p(B)=" << target.b << " p(AB)=" << target.pAB
            << " gamma=" << target.gamma << "\n";

  const auto set = construct_admissible_star({target, 3, ConstructionMode::Realizable, {}});
  const auto ext = extend_with_rccs(s4, A, B, set);
  const Event hA = ext.lift(A), hB = ext.lift(B);

  for (std::size_t j = 0; j < ext.new_space.size(); ++j)
    std::cout << "  " << ext.new_space.atom(j).label << "  " << ext.new_space.weight(j) << "\n";
  for (std::size_t i = 0; i < ext.rccs.size(); ++i)
    std::cout << "C" << i + 1 << ": p=" << probability(ext.new_space, ext.rccs[i])
              << " p(A|C)=" << conditional(ext.new_space, hA, ext.rccs[i])
              << " p(B|C)=" << conditional(ext.new_space, hB, ext.rccs[i]) << "\n";
  std::cout << "verified: " << std::boolalpha << verify_rccs(ext.new_space, hA, hB, ext.rccs).verdict
            << "\n";
}
