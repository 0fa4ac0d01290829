#ifndef TORIC_FORMAT_HPP
#define TORIC_FORMAT_HPP

#include <array>
#include <charconv>
#include <string>

namespace toric {

/// Shortest decimal text that round-trips to the same double.
inline std::string format_double(double v) {
    std::array<char, 32> buf{};
    auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), end);
}

}  // namespace toric

#endif  // TORIC_FORMAT_HPP
