#pragma once

#include <string>

namespace partition_flow {

/// Outcome of one deficiency computation: Def = ell - k checked against
/// 1 - m + Mor, where m is the kernel dimension at the partition energy and
/// Mor the Morse index of the interface DN operator just above it.
struct DeficiencyReport {
  std::string source;  // "circle", "grid", "grid+slit"
  int k = 0;           // domain count
  int ell = 0;         // minimal labelling of the energy
  int m = 0;           // dim ker(T0 - energy)
  int mor = 0;         // Morse index of DN(energy + epsilon)
  int def = 0;         // ell - k
  double epsilon = 0.0;
  int identity_residual = 0;  // |def - (1 - m + mor)|
  double energy = 0.0;
  double equipartition_residual = 0.0;

  bool operator==(const DeficiencyReport&) const = default;
};

}  // namespace partition_flow
