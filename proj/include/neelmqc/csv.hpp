// Copyright 2026 The neelmqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Minimal numeric CSV tables: '#' comment lines, one header row, rows of
// comma-separated numbers.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace neelmqc {

struct CsvFormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CsvTable {
    std::vector<std::string> comments;
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }

    const std::vector<double>& column(std::string_view name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return columns[i];
        throw CsvFormatError("missing column '" + std::string(name) + "'");
    }

    // Throws naming the first position where the header differs.
    void expect_header(const std::vector<std::string>& expected) const {
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i >= header.size()) throw CsvFormatError("missing column '" + expected[i] + "'");
            if (header[i] != expected[i])
                throw CsvFormatError("unexpected column '" + header[i] + "', expected '" + expected[i] + "'");
        }
        if (header.size() > expected.size())
            throw CsvFormatError("unexpected extra column '" + header[expected.size()] + "'");
    }
};

inline std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        std::string_view f = line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
        while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
        while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) f.remove_suffix(1);
        out.emplace_back(f);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline CsvTable parse_csv(std::istream& in) {
    CsvTable t;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.front() == '#') {
            t.comments.push_back(line);
            continue;
        }
        auto fields = split_fields(line);
        if (t.header.empty()) {
            t.header = std::move(fields);
            t.columns.resize(t.header.size());
            continue;
        }
        if (fields.size() != t.header.size())
            throw CsvFormatError("line " + std::to_string(line_no) + ": expected " + std::to_string(t.header.size()) +
                                 " fields, got " + std::to_string(fields.size()));
        for (std::size_t i = 0; i < fields.size(); ++i) {
            double v = 0.0;
            const auto& f = fields[i];
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc{} || ptr != f.data() + f.size())
                throw CsvFormatError("line " + std::to_string(line_no) + ": bad number '" + f + "' in column '" +
                                     t.header[i] + "'");
            t.columns[i].push_back(v);
        }
    }
    if (t.header.empty()) throw CsvFormatError("empty CSV: no header row");
    return t;
}

inline CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw CsvFormatError("cannot open " + path.string());
    return parse_csv(in);
}

// Shortest representation that round-trips exactly.
inline std::string format_number(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

class CsvWriter {
public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void comment(std::string_view text) { out_ << "# " << text << '\n'; }

    void header(const std::vector<std::string>& names) {
        for (std::size_t i = 0; i < names.size(); ++i) out_ << (i ? "," : "") << names[i];
        out_ << '\n';
    }

    void row(std::initializer_list<double> values) {
        bool first = true;
        for (double v : values) {
            out_ << (first ? "" : ",") << format_number(v);
            first = false;
        }
        out_ << '\n';
    }

private:
    std::ostream& out_;
};

// Writes via a sibling temporary file and renames it into place, so a failed
// run never leaves a partial file behind.
inline void write_file_atomically(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) {
            std::filesystem::remove(tmp);
            throw std::runtime_error("write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace neelmqc
