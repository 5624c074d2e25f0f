#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace hceval {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int bad_input = 2;
inline constexpr int unknown_class = 3;
}  // namespace exit_code

// Entry point of the hceval tool; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// %.6g, with "nan" for undefined values.
std::string format_number(double v);

}  // namespace hceval
