#pragma once

#include <cstdint>
#include <string>

namespace raid::cli {

// 64-bit float to decimal with 17 significant digits (round-trip exact).
std::string format_double(double v);

// Exit codes: 0 success, 1 property/check failure, 2 usage/IO error.
int cmd_simulate(const std::string& scenario_path, const std::string& out_dir,
                 int jobs);
int cmd_verify(const std::string& scenario_path, const std::string& check);
int cmd_trace(const std::string& scenario_path, std::uint64_t seed,
              const std::string& out_path);

// Full argv entry point (used by the raid binary and by tests).
int run(int argc, const char* const* argv);

}  // namespace raid::cli
