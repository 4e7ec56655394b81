// Acceptance gate: one pass/fail line per criterion, nonzero exit on failure.
#include <cstring>
#include <iostream>
#include <string>
#include <vector>

#include "clab/acceptance.hpp"
#include "clab/config.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> only;
  int workers = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) {
      only.push_back(argv[++i]);
    } else if (std::strcmp(argv[i], "--workers") == 0 && i + 1 < argc) {
      workers = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--only AC-k]... [--workers N]\n";
      return 2;
    }
  }
  auto results = clab::run_acceptance(
      only, clab::resolve_workers(workers > 0 ? std::optional<int>(workers) : std::nullopt));
  return clab::acceptance_report(results, std::cout);
}
