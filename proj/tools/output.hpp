// CSV + metadata plumbing shared by the CLI subcommands.
#pragma once

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace cli {

inline constexpr const char* kVersion = "0.1.0";

// Formats doubles with enough digits to round-trip, so identical runs produce
// byte-identical bodies.
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class Output {
 public:
  // path "-" or empty means stdout.
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open output: " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

  // '#'-prefixed single-line JSON header: config echo + run info.
  void metadata(const std::string& command, const nlohmann::json& config,
                uint64_t seed, int threads, double wall_ms) {
    nlohmann::json meta = {
        {"tool", "ising"},   {"version", kVersion}, {"command", command},
        {"config", config},  {"seed", seed},        {"threads", threads},
        {"wall_ms", wall_ms}};
    stream() << "# " << meta.dump() << '\n';
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

class WallClock {
 public:
  double ms() const {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

}  // namespace cli
