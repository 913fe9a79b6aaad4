// Runs all criteria at full scale and prints one line per criterion.
// Exit status is non-zero if any criterion fails.

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

#include "partition_flow/suite.hpp"

int main(int argc, char** argv) {
  std::uint64_t seed = 20240601;
  if (argc > 1) seed = std::stoull(argv[1]);
  const auto summary = partition_flow::suite::run_suite(seed, partition_flow::suite::Scale::Full, {});
  std::cout << summary.table();
  return summary.all_passed() ? EXIT_SUCCESS : EXIT_FAILURE;
}
