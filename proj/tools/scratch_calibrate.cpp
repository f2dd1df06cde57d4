// Exploratory driver for the calibration search; not installed.
#include <cstdio>
#include <cstring>

#include "vmorse/calibrate.hpp"

using namespace vmorse;

int main(int argc, char** argv) {
  bool verbose = argc > 1 && std::strcmp(argv[1], "-v") == 0;
  CalibrationResult res = calibrate();
  int ok = 0;
  std::map<std::string, int> fail_kinds;
  for (const std::string& line : res.table) {
    if (line.size() >= 4 && line.substr(line.size() - 2) == "ok") ++ok;
    auto pos = line.find(" : ");
    std::string note = line.substr(pos + 3);
    fail_kinds[note.substr(0, note.find_first_of("=0123456789") == std::string::npos
                                  ? note.size()
                                  : note.size())]++;
    if (verbose) std::puts(line.c_str());
  }
  std::printf("assignments=%zu matches=%zu\n", res.table.size(),
              res.matches.size());
  for (const Conventions& c : res.matches)
    std::printf("MATCH %s\n", conventions_tag(c).c_str());
  return 0;
}
