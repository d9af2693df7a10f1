#include "qcast/csv.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <vector>

#include "qcast/errors.hpp"

namespace qcast {

namespace {

std::string trimmed(const std::string& s) {
    std::size_t begin = 0;
    std::size_t end = s.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
    while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
    return s.substr(begin, end - begin);
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(trimmed(cell));
            cell.clear();
        } else {
            cell.push_back(ch);
        }
    }
    cells.push_back(trimmed(cell));
    return cells;
}

double parse_cell(const std::string& cell, std::size_t row, const std::string& column,
                  const std::string& origin) {
    if (cell.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const char* begin = cell.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end != begin + cell.size()) {
        throw DataError(origin + ": row " + std::to_string(row) + ", column '" + column +
                        "': cannot parse cell '" + cell + "'");
    }
    return value;
}

}  // namespace

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

RawTable ingest_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open dataset '" + path.string() + "'");
    }
    return ingest_csv(in, path.string());
}

RawTable ingest_csv(std::istream& in, const std::string& origin) {
    std::string line;
    if (!std::getline(in, line)) {
        throw DataError(origin + ": empty file");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    const std::vector<std::string> header = split_row(line);
    if (header.size() < 2) {
        throw DataError(origin + ": header needs a period column and at least one series");
    }
    if (header.front() != "period") {
        throw DataError(origin + ": first header cell must be 'period', got '" + header.front() +
                        "'");
    }
    std::set<std::string> seen;
    for (std::size_t c = 1; c < header.size(); ++c) {
        if (header[c].empty()) {
            throw DataError(origin + ": empty series name in header");
        }
        if (!seen.insert(header[c]).second) {
            throw DataError(origin + ": duplicate series name '" + header[c] + "'");
        }
    }

    RawTable table;
    table.names.assign(header.begin() + 1, header.end());
    table.columns.assign(table.names.size(), Vector{});

    std::size_t row = 1;  // header was row 1
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (trimmed(line).empty()) {
            continue;  // ignore blank trailing lines
        }
        const std::vector<std::string> cells = split_row(line);
        if (cells.size() != header.size()) {
            throw DataError(origin + ": row " + std::to_string(row) + " has " +
                            std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(header.size()));
        }
        Period period;
        if (!Period::try_parse(cells.front(), period)) {
            throw DataError(origin + ": row " + std::to_string(row) + ": cannot parse period '" +
                            cells.front() + "'");
        }
        if (!table.periods.empty()) {
            const Period expected = table.periods.back().next();
            if (period != expected) {
                throw DataError(origin + ": calendar gap at row " + std::to_string(row) +
                                ": missing " + expected.str() + " (got " + period.str() + ")");
            }
        }
        table.periods.push_back(period);
        for (std::size_t c = 1; c < cells.size(); ++c) {
            table.columns[c - 1].push_back(parse_cell(cells[c], row, header[c], origin));
        }
    }
    if (table.periods.empty()) {
        throw DataError(origin + ": no data rows");
    }
    return table;
}

void write_frame_csv(const SeriesFrame& frame, const std::filesystem::path& path) {
    std::ostringstream out;
    out << "period," << frame.response_name;
    for (const auto& name : frame.predictor_names) {
        out << ',' << name;
    }
    out << '\n';
    for (std::size_t t = 0; t < frame.n(); ++t) {
        out << frame.periods[t].str() << ',' << format_double(frame.response[t]);
        for (std::size_t c = 0; c < frame.q(); ++c) {
            out << ',' << format_double(frame.predictors(t, c));
        }
        out << '\n';
    }

    std::ofstream file(path);
    if (!file || !(file << out.str())) {
        throw DataError("cannot write '" + path.string() + "'");
    }
}

}  // namespace qcast
