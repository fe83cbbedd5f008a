#pragma once

// Command-line front end. Commands write to the given streams and return
// the process exit code.

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace shortpa {

enum ExitCode : int {
  kExitTrue = 0,
  kExitFalse = 1,
  kExitInput = 2,
  kExitCap = 3,
  kExitVerify = 4,
  kExitMath = 5,
};

// args[0] is the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// 64-bit FNV-1a of the input bytes, as "fnv1a64:" and 16 hex digits.
std::string input_digest(std::string_view bytes);

}  // namespace shortpa
