#include "qcast/period.hpp"

#include <cctype>
#include <cstdio>

#include "qcast/errors.hpp"

namespace qcast {

bool Period::try_parse(std::string_view text, Period& out) {
    if (text.size() != 6) {
        return false;
    }
    for (int i = 0; i < 4; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[static_cast<std::size_t>(i)]))) {
            return false;
        }
    }
    if (text[4] != 'Q') {
        return false;
    }
    if (text[5] < '1' || text[5] > '4') {
        return false;
    }
    int year = 0;
    for (int i = 0; i < 4; ++i) {
        year = year * 10 + (text[static_cast<std::size_t>(i)] - '0');
    }
    out.year = year;
    out.quarter = text[5] - '0';
    return true;
}

Period Period::parse(std::string_view text) {
    Period p;
    if (!try_parse(text, p)) {
        throw DataError("cannot parse period '" + std::string(text) + "'; expected YYYYQn");
    }
    return p;
}

std::string Period::str() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04dQ%d", year, quarter);
    return buf;
}

Period Period::advanced(int quarters) const {
    const int idx = index() + quarters;
    Period p;
    p.year = idx / 4;
    p.quarter = idx % 4 + 1;
    return p;
}

int quarters_between(const Period& a, const Period& b) {
    return b.index() - a.index();
}

}  // namespace qcast
