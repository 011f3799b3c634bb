// Release-gate driver: runs acceptance criteria by id (all when none are
// given) and exits nonzero if any fail. Each criterion prints one line.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "qmcopt/acceptance.hpp"

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--list") {
      for (const auto& [id, name] : qmcopt::acceptance_criteria())
        std::printf("%02d  %s\n", id, name.c_str());
      return 0;
    }
    char* end = nullptr;
    const long id = std::strtol(arg.c_str(), &end, 10);
    if (end == arg.c_str() || *end != '\0' || id < 1) {
      std::fprintf(stderr, "usage: %s [--list] [criterion ids...]\n", argv[0]);
      return 2;
    }
    ids.push_back(static_cast<int>(id));
  }
  return qmcopt::run_acceptance(ids, std::cout) == 0 ? 0 : 1;
}
