#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <swarmsense/config.hpp>
#include <swarmsense/energy.hpp>
#include <swarmsense/sensing_map.hpp>

namespace testutil {

inline std::filesystem::path data_dir() { return SWARMSENSE_DATA_DIR; }
inline std::string cli_path() { return SWARMSENSE_CLI_PATH; }

// Fresh empty directory under the system temp root, removed on destruction.
struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("swarmsense_" + tag + "_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// The bundled reference scenario: 4x4 grid, 12 cells requiring 60 s each.
inline swarmsense::SensingMap reference_map() {
  return swarmsense::build_map(4, 4, 1.68, 1.18, 0);
}

inline swarmsense::Requirements reference_requirements() {
  return swarmsense::load_requirements(data_dir() / "requirements_4x4.csv",
                                       reference_map());
}

inline swarmsense::EnergyModel reference_model() {
  return swarmsense::calibrate(swarmsense::DroneSpec{}, 31.80);
}

}  // namespace testutil
