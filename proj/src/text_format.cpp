#include "tollbound/text_format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <vector>

namespace tollbound {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos)
            return parts;
        start = pos + 1;
    }
}

} // namespace

double parse_number(std::string_view token)
{
    const std::string_view t = trim(token);
    double value = 0.0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    if (!t.empty() && *first == '+')
        ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (t.empty() || ec != std::errc() || ptr != last || !std::isfinite(value))
        throw ParseError("invalid number '" + std::string(token) + "'");
    return value;
}

Network parse_network(std::string_view text)
{
    const auto parts = split(text, ',');
    if (parts.size() != 4)
        throw ParseError("network '" + std::string(text) + "' must have four fields a1,b1,a2,b2");
    double v[4];
    for (int i = 0; i < 4; ++i) {
        v[i] = parse_number(parts[i]);
        if (v[i] < 0.0)
            throw ParseError("negative latency coefficient '" + std::string(parts[i]) + "'");
    }
    return {Latency(v[0], v[1]), Latency(v[2], v[3])};
}

SensitivityDistribution parse_distribution(std::string_view text)
{
    std::vector<Atom> atoms;
    for (const std::string_view pair : split(text, ';')) {
        const auto fields = split(pair, ':');
        if (fields.size() != 2)
            throw ParseError("distribution entry '" + std::string(pair) + "' must be s:mass");
        const double s = parse_number(fields[0]);
        const double m = parse_number(fields[1]);
        if (!(s > 0.0))
            throw ParseError("sensitivity '" + std::string(fields[0]) + "' must be positive");
        if (!(m > 0.0 && m <= 1.0))
            throw ParseError("mass '" + std::string(fields[1]) + "' must lie in (0, 1]");
        atoms.push_back({s, m});
    }
    try {
        return SensitivityDistribution(std::move(atoms));
    } catch (const std::invalid_argument& e) {
        throw ParseError("distribution '" + std::string(text) + "': " + e.what());
    }
}

std::string format_fixed(double x, int digits)
{
    const double scale = std::pow(10.0, digits);
    double r = std::round(x * scale) / scale;
    if (r == 0.0)
        r = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, r);
    return buf;
}

std::string format_significant(double x, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x == 0.0 ? 0.0 : x);
    return buf;
}

std::string format_network(const Network& network)
{
    return format_significant(network.first().slope(), 17) + "," +
           format_significant(network.first().offset(), 17) + "," +
           format_significant(network.second().slope(), 17) + "," +
           format_significant(network.second().offset(), 17);
}

std::string format_distribution(const SensitivityDistribution& dist)
{
    std::string out;
    for (const Atom& a : dist.atoms()) {
        if (!out.empty())
            out += ';';
        out += format_significant(a.sensitivity, 17) + ":" + format_significant(a.mass, 17);
    }
    return out;
}

} // namespace tollbound
