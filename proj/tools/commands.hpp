#pragma once

#include <string>

#include "runconfig.hpp"

namespace biclab::cli {

// Executes one CLI command and returns the full output-file text
// (CSV for spectrum/sweep/effective, JSON for classify/quench).
std::string run_command(const std::string& command, const RunConfig& cfg);

std::string cmd_spectrum(const RunConfig& cfg);
std::string cmd_sweep(const RunConfig& cfg);
std::string cmd_classify(const RunConfig& cfg);
std::string cmd_effective(const RunConfig& cfg);
std::string cmd_quench(const RunConfig& cfg);

std::string format_number(double v);  // 17 significant digits, locale-free

}  // namespace biclab::cli
