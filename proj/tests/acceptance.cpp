#include "pcmk/selftest.hpp"

#include <iostream>

int main() {
  auto results = pcmk::run_selftest();
  int failed = 0;
  for (const auto& r : results) {
    std::cout << pcmk::format_result(r) << std::endl;
    failed += r.pass ? 0 : 1;
  }
  std::cout << results.size() - static_cast<std::size_t>(failed) << "/" << results.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
