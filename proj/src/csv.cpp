#include "bns/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace bns {

namespace {

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

double parse_double(std::string_view token, std::size_t line_no) {
    double value = 0.0;
    const char* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(token.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw std::invalid_argument("line " + std::to_string(line_no) +
                                    ": malformed number '" + std::string(token) + "'");
    }
    return value;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

}  // namespace

std::string series_to_csv_text(const ObservationSeries& series) {
    series.validate();
    const bool full = series.has_z() && series.has_y();
    std::ostringstream out;
    out << "# bns-series delta_t=" << format_double(series.delta_t)
        << " v0=" << format_double(series.v0) << "\n";
    out << (full ? "i,x,v,z,y\n" : "i,x,v\n");
    for (std::size_t i = 0; i < series.size(); ++i) {
        out << (i + 1) << ',' << format_double(series.x[i]) << ','
            << format_double(series.v[i]);
        if (full) {
            out << ',' << format_double(series.z[i]) << ',' << format_double(series.y[i]);
        }
        out << '\n';
    }
    return out.str();
}

void series_to_csv_file(const ObservationSeries& series, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << series_to_csv_text(series);
    if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

ObservationSeries series_from_csv_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) throw std::invalid_argument("empty file");
    ++line_no;
    if (line.empty() || line[0] != '#') {
        throw std::invalid_argument("line 1: expected metadata comment '# ... delta_t=... v0=...'");
    }
    ObservationSeries series;
    bool have_dt = false, have_v0 = false;
    {
        std::istringstream meta(line.substr(1));
        std::string token;
        while (meta >> token) {
            if (token.rfind("delta_t=", 0) == 0) {
                series.delta_t = parse_double(std::string_view(token).substr(8), 1);
                have_dt = true;
            } else if (token.rfind("v0=", 0) == 0) {
                series.v0 = parse_double(std::string_view(token).substr(3), 1);
                have_v0 = true;
            }
        }
    }
    if (!have_dt) throw std::invalid_argument("line 1: missing delta_t in metadata");
    if (!have_v0) throw std::invalid_argument("line 1: missing v0 in metadata");

    if (!std::getline(in, line)) throw std::invalid_argument("missing header row");
    ++line_no;
    const auto header = split(line);
    int col_i = -1, col_x = -1, col_v = -1, col_z = -1, col_y = -1;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == "i") col_i = static_cast<int>(c);
        else if (header[c] == "x") col_x = static_cast<int>(c);
        else if (header[c] == "v") col_v = static_cast<int>(c);
        else if (header[c] == "z") col_z = static_cast<int>(c);
        else if (header[c] == "y") col_y = static_cast<int>(c);
    }
    if (col_i < 0) throw std::invalid_argument("header: missing column 'i'");
    if (col_x < 0) throw std::invalid_argument("header: missing column 'x'");
    if (col_v < 0) throw std::invalid_argument("header: missing column 'v'");

    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        ++row;
        const auto fields = split(line);
        if (fields.size() != header.size()) {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": expected " +
                                        std::to_string(header.size()) + " fields, got " +
                                        std::to_string(fields.size()));
        }
        const double idx = parse_double(fields[static_cast<std::size_t>(col_i)], line_no);
        if (idx != static_cast<double>(row)) {
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": index out of sequence");
        }
        series.x.push_back(parse_double(fields[static_cast<std::size_t>(col_x)], line_no));
        series.v.push_back(parse_double(fields[static_cast<std::size_t>(col_v)], line_no));
        if (col_z >= 0)
            series.z.push_back(parse_double(fields[static_cast<std::size_t>(col_z)], line_no));
        if (col_y >= 0)
            series.y.push_back(parse_double(fields[static_cast<std::size_t>(col_y)], line_no));
    }
    series.validate();
    return series;
}

ObservationSeries series_from_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open series file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return series_from_csv_text(buffer.str());
}

}  // namespace bns
