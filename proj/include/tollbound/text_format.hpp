#ifndef TOLLBOUND_TEXT_FORMAT_HPP
#define TOLLBOUND_TEXT_FORMAT_HPP

// Text encodings used by the CLI:
//   network       "a1,b1,a2,b2"
//   distribution  "s:mass;s:mass;..."
// and locale-independent decimal formatting.

#include "tollbound/game.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace tollbound {

// Parse errors; the message names the offending token.
class ParseError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

double parse_number(std::string_view token);
Network parse_network(std::string_view text);
SensitivityDistribution parse_distribution(std::string_view text);

// Fixed-point with `digits` decimals, ties rounded away from zero, no "-0".
std::string format_fixed(double x, int digits);
// printf "%.*g" with `digits` significant digits.
std::string format_significant(double x, int digits);

std::string format_network(const Network& network);
std::string format_distribution(const SensitivityDistribution& dist);

} // namespace tollbound

#endif
