#ifndef TOLLBOUND_CLI_HPP
#define TOLLBOUND_CLI_HPP

// Subcommands of the `tollbound` executable. Each cmd_* returns the exact text
// the command prints so it can be tested without spawning a process.

#include "tollbound/adversary.hpp"
#include "tollbound/game.hpp"
#include "tollbound/toll_design.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace tollbound {

inline constexpr int exit_ok = 0;
inline constexpr int exit_input_error = 1;
inline constexpr int exit_numerical_failure = 2;

std::string cmd_table(const SensitivityBounds& bounds);
std::string cmd_sweep(const SensitivityBounds& bounds, int n_points);
std::string cmd_toll(Regime regime, const SensitivityBounds& bounds, std::optional<double> sbar,
                     std::optional<Network> network);
std::string cmd_nash(const Network& network, const SensitivityDistribution& dist, TollScale k);

struct AdversaryOutput {
    AdversaryReport report;
    bool sound;
    bool tight;
    std::string csv;
    std::string summary;
};

inline constexpr double soundness_tolerance = 1e-6;
inline constexpr double tightness_tolerance = 0.01;

AdversaryOutput cmd_adversary(Regime regime, const SensitivityBounds& bounds,
                              std::optional<double> sbar, const GridSpec& grid);

// Parses argv, runs one subcommand and returns the process exit code.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace tollbound

#endif
