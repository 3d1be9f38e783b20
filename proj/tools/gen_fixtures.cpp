// Regenerates the rover trace fixtures: gen_fixtures <output-dir>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "cspmon/bench.hpp"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gen_fixtures <output-dir>\n";
    return 3;
  }
  std::filesystem::path dir(argv[1]);
  std::filesystem::create_directories(dir);
  for (const auto& sc : cspmon::rover_scenarios()) {
    std::ofstream out(dir / (sc.name + ".trace"));
    out << "# " << sc.description << "\n";
    for (const auto& line : sc.trace) out << line << "\n";
    if (!out) {
      std::cerr << "cannot write " << (dir / (sc.name + ".trace")) << "\n";
      return 4;
    }
  }
  return 0;
}
