#include "ccrlab/csv.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace ccrlab {

std::string format_number(double value)
{
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.12g", value);
    return buffer;
}

std::vector<std::string> split_csv_line(std::string_view line)
{
    if (!line.empty() && line.back() == '\r')
        line.remove_suffix(1);
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.emplace_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos)
            break;
        start = comma + 1;
    }
    return fields;
}

double parse_double(std::string_view field)
{
    try {
        std::size_t used = 0;
        const std::string text(field);
        const double value = std::stod(text, &used);
        if (used != text.size())
            throw std::invalid_argument("trailing characters");
        return value;
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: '" + std::string(field) + "'");
    }
}

long long parse_integer(std::string_view field)
{
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size())
        throw std::invalid_argument("not an integer: '" + std::string(field) + "'");
    return value;
}

} // namespace ccrlab
