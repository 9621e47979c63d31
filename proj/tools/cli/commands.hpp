#pragma once

#include <filesystem>
#include <iosfwd>

#include "settings.hpp"

namespace liberation::cli {

/// Each command writes its files under `out` and a short summary to `log`.
/// Return value is the process exit code.
int cmd_evolve(const Settings& s, const std::filesystem::path& out, std::ostream& log);
int cmd_stationary(const Settings& s, const std::filesystem::path& out, std::ostream& log);
int cmd_flow(const Settings& s, const std::filesystem::path& out, std::ostream& log);
int cmd_bridge(const Settings& s, const std::filesystem::path& out, std::ostream& log);
int cmd_oracle(const Settings& s, const std::filesystem::path& out, std::ostream& log);
/// Exit code 0 iff every selected criterion passes, 2 otherwise.
int cmd_verify(const Settings& s, const std::filesystem::path& out, std::ostream& log);

}  // namespace liberation::cli
