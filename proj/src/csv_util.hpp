#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace tsp::detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

template <typename T>
T parse_number(std::string_view field, const std::string& file, std::size_t line_no,
               const char* what) {
    field = trim(field);
    T value{};
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        throw std::runtime_error(file + ":" + std::to_string(line_no) + ": malformed " + what +
                                 " '" + std::string(field) + "'");
    }
    return value;
}

// Line-oriented CSV reader: the header row is parsed on construction, data
// rows come from next_row(). Blank lines are skipped. No quoting support;
// the file schemas here never need it.
class CsvReader {
public:
    explicit CsvReader(const std::string& file) : file_(file), in_(file) {
        if (!in_) {
            throw std::runtime_error("cannot open " + file);
        }
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            std::string_view view = trim(line);
            if (view.empty()) {
                continue;
            }
            for (auto f : split_fields(view)) {
                header_.emplace_back(trim(f));
            }
            return;
        }
        throw std::runtime_error(file + ": empty file, expected a CSV header");
    }

    const std::vector<std::string>& header() const { return header_; }
    const std::string& file() const { return file_; }
    std::size_t line_no() const { return line_no_; }

    bool next_row(std::vector<std::string_view>& fields) {
        while (std::getline(in_, row_)) {
            ++line_no_;
            std::string_view view = trim(row_);
            if (view.empty()) {
                continue;
            }
            fields = split_fields(view);
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& message) const {
        throw std::runtime_error(file_ + ":" + std::to_string(line_no_) + ": " + message);
    }

private:
    std::string file_;
    std::ifstream in_;
    std::string row_;
    std::vector<std::string> header_;
    std::size_t line_no_ = 0;
};

inline bool header_is(const std::vector<std::string>& header,
                      std::initializer_list<std::string_view> expected) {
    if (header.size() != expected.size()) {
        return false;
    }
    std::size_t i = 0;
    for (auto name : expected) {
        if (header[i++] != name) {
            return false;
        }
    }
    return true;
}

} // namespace tsp::detail
