#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace qcast {

/// Calendar quarter, serialized as YYYYQn (e.g. "2000Q1").
struct Period {
    int year = 2000;
    int quarter = 1;  // 1..4

    /// Parses strict YYYYQn. Throws DataError on anything else.
    static Period parse(std::string_view text);

    /// Non-throwing variant; returns false and leaves `out` untouched on
    /// malformed input.
    static bool try_parse(std::string_view text, Period& out);

    [[nodiscard]] std::string str() const;

    [[nodiscard]] Period next() const { return advanced(1); }
    [[nodiscard]] Period advanced(int quarters) const;

    /// Total quarter count since year 0; gives the calendar a linear index.
    [[nodiscard]] int index() const noexcept { return year * 4 + (quarter - 1); }

    friend auto operator<=>(const Period&, const Period&) = default;
};

/// Signed number of quarters from a to b.
[[nodiscard]] int quarters_between(const Period& a, const Period& b);

}  // namespace qcast
