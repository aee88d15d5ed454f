// Acceptance criteria 1-10: one PASS/FAIL line each, followed by the measured values.
#include "blockade/landmarks.hpp"

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

int main(int argc, char** argv) {
  std::vector<int> ids;
  for (int i = 1; i < argc; ++i) ids.push_back(std::atoi(argv[i]));
  if (ids.empty())
    for (int id = 1; id <= blockade::kLandmarkCount; ++id) ids.push_back(id);

  int failed = 0;
  for (int id : ids) {
    if (id < 1 || id > blockade::kLandmarkCount) {
      std::fprintf(stderr, "no criterion %d\n", id);
      return 2;
    }
    const auto r = blockade::run_landmark(id);
    std::printf("%s criterion %d: %s (%.2f s of %.0f s)\n", r.pass ? "PASS" : "FAIL", id, r.title.c_str(), r.seconds,
                r.budget);
    for (const auto& l : r.lines) std::printf("    %s\n", l.c_str());
    failed += !r.pass;
  }
  return failed ? 1 : 0;
}
