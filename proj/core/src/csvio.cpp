#include "tsadam/csvio.hpp"

#include <charconv>
#include <stdexcept>
#include <system_error>

#include "tsadam/errors.hpp"

namespace tsadam::csv {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

double parse_double(std::string_view text, const std::string& source, long line) {
    const std::string_view t = trim(text);
    double value = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size() || t.empty()) {
        throw ParseError(source + " line " + std::to_string(line) +
                         ": cannot parse number '" + std::string(text) + "'");
    }
    return value;
}

long long parse_int(std::string_view text, const std::string& source, long line) {
    const std::string_view t = trim(text);
    long long value = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size() || t.empty()) {
        throw ParseError(source + " line " + std::to_string(line) +
                         ": cannot parse integer '" + std::string(text) + "'");
    }
    return value;
}

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        const size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(line.substr(start));
            return out;
        }
        out.emplace_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

Writer::Writer(const std::string& path) : out_(path), path_(path) {
    if (!out_) throw IoError("cannot open '" + path + "' for writing");
}

Writer::~Writer() {
    if (!closed_) out_.flush();
}

void Writer::sep() {
    if (line_started_) out_ << ',';
    line_started_ = true;
}

void Writer::field(std::string_view s) {
    sep();
    out_ << s;
}

void Writer::field(double v) {
    sep();
    out_ << format_double(v);
}

void Writer::field(long long v) {
    sep();
    out_ << v;
}

void Writer::field(unsigned long long v) {
    sep();
    out_ << v;
}

void Writer::end_row() {
    out_ << '\n';
    line_started_ = false;
}

void Writer::raw_line(std::string_view line) {
    if (line_started_) throw std::logic_error("csv writer: raw_line inside a row");
    out_ << line << '\n';
}

void Writer::close() {
    out_.flush();
    if (!out_) throw IoError("failed writing '" + path_ + "'");
    closed_ = true;
    out_.close();
}

}  // namespace tsadam::csv
