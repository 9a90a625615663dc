#pragma once

// Text and audio file plumbing shared by the CLI: shortest round-trip number
// formatting, numeric CSV reading, atomic file replacement, 16-bit WAV.

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "topo/error.hpp"

namespace topo::io {

/// Shortest decimal string that parses back to the same double; "inf"/"-inf"/"nan".
inline std::string format_double(double v) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (s.empty()) return false;
    if (s.front() == '+') s.remove_prefix(1);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

/// Rows of comma-separated numbers. A first line that is not numeric is taken
/// as a header and skipped; blank lines and '#' lines are ignored. All rows
/// must have the same column count.
inline std::vector<std::vector<double>> read_numeric_csv(std::istream& in) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    bool first_content = true;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view view = trim(line);
        if (view.empty() || view.front() == '#') continue;
        std::vector<double> row;
        bool ok = true;
        std::size_t pos = 0;
        while (true) {
            const std::size_t comma = view.find(',', pos);
            double v = 0;
            if (!parse_double(view.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos), v)) {
                ok = false;
                break;
            }
            row.push_back(v);
            if (comma == std::string_view::npos) break;
            pos = comma + 1;
        }
        if (!ok) {
            if (first_content) {
                first_content = false;
                continue;
            }
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": not a numeric CSV row");
        }
        first_content = false;
        for (double v : row)
            if (!std::isfinite(v))
                throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": non-finite value");
        if (!rows.empty() && row.size() != rows.front().size())
            throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": column count differs from first row");
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::vector<std::vector<double>> read_numeric_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
    return read_numeric_csv(in);
}

/// Time series from a single-column file or `index,value` rows.
inline std::vector<double> read_series_csv(std::istream& in) {
    const auto rows = read_numeric_csv(in);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) {
        if (r.size() == 1) out.push_back(r[0]);
        else if (r.size() == 2) out.push_back(r[1]);
        else throw Error(ErrorCode::ParseError, "time series rows must have one or two columns");
    }
    return out;
}

inline std::vector<double> read_series_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
    return read_series_csv(in);
}

/// Writes to a sibling temp file then renames over the target, so the target
/// is either untouched or complete.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view bytes) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw Error(ErrorCode::InvalidArgument, "short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw Error(ErrorCode::InvalidArgument, "cannot rename onto " + path.string() + ": " + ec.message());
    }
}

inline std::string series_to_csv(std::span<const double> samples) {
    std::string out;
    for (double v : samples) {
        out += format_double(v);
        out += '\n';
    }
    return out;
}

/// 16-bit PCM mono little-endian WAV. Samples are clipped to [-1, 1] and scaled
/// by 32767 with round-to-nearest.
inline std::string encode_wav16(std::span<const double> samples, std::uint32_t sample_rate) {
    std::string out;
    auto put_u32 = [&](std::uint32_t v) {
        for (int k = 0; k < 4; ++k) out.push_back(static_cast<char>((v >> (8 * k)) & 0xff));
    };
    auto put_u16 = [&](std::uint16_t v) {
        out.push_back(static_cast<char>(v & 0xff));
        out.push_back(static_cast<char>((v >> 8) & 0xff));
    };
    const auto data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
    out += "RIFF";
    put_u32(36 + data_bytes);
    out += "WAVE";
    out += "fmt ";
    put_u32(16);
    put_u16(1); // PCM
    put_u16(1); // mono
    put_u32(sample_rate);
    put_u32(sample_rate * 2);
    put_u16(2);
    put_u16(16);
    out += "data";
    put_u32(data_bytes);
    for (double v : samples) {
        const double clipped = std::fmax(-1.0, std::fmin(1.0, v));
        const auto q = static_cast<std::int16_t>(std::lround(clipped * 32767.0));
        put_u16(static_cast<std::uint16_t>(q));
    }
    return out;
}

} // namespace topo::io
