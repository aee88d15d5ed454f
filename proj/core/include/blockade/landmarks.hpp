#pragma once

#include <string>
#include <vector>

namespace blockade {

// One numbered acceptance check: a published value or a cross-engine agreement, with its tolerance.
struct LandmarkResult {
  int id = 0;
  std::string title;
  bool pass = false;
  double seconds = 0;
  double budget = 0;  // wall-clock limit in seconds
  double ratio = 0;   // worst measured error over its tolerance
  std::vector<std::string> lines;  // measured values, one per sub-check
};

constexpr int kLandmarkCount = 10;

LandmarkResult run_landmark(int id, unsigned seed = 1);
std::vector<LandmarkResult> run_landmarks(unsigned seed = 1);

}  // namespace blockade
