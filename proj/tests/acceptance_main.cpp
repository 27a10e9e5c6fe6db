// One line per acceptance criterion; nonzero exit if any fails.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "entroframe/acceptance.hpp"

int main(int argc, char** argv) {
  entroframe::AcceptanceOptions opt;
  if (const char* n = std::getenv("ENTROFRAME_GRID_N")) opt.grid_n = std::stoul(n);
  if (argc > 1) opt.only = argv[1];
  int failed = 0;
  for (const auto& r : entroframe::run_acceptance(opt)) {
    std::printf("%s\n", entroframe::format_result(r).c_str());
    if (!r.passed) ++failed;
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
