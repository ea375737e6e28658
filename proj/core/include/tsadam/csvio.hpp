#pragma once

#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace tsadam::csv {

// Shortest round-trip decimal form, locale-independent.
std::string format_double(double v);

// Strict full-token numeric parsing; source/line feed the error message.
double parse_double(std::string_view text, const std::string& source, long line);
long long parse_int(std::string_view text, const std::string& source, long line);

std::vector<std::string> split(std::string_view line, char sep);
std::string_view trim(std::string_view s);

// Comma-separated writer. Rows are built field by field; raw_line emits a
// preformatted line and is only valid at the start of a row.
class Writer {
  public:
    explicit Writer(const std::string& path);
    ~Writer();
    Writer(const Writer&) = delete;
    Writer& operator=(const Writer&) = delete;

    void field(std::string_view s);
    void field(const char* s) { field(std::string_view(s)); }
    void field(double v);
    void field(long long v);
    void field(unsigned long long v);
    void field(int v) { field(static_cast<long long>(v)); }
    void field(long v) { field(static_cast<long long>(v)); }
    void end_row();
    void raw_line(std::string_view line);
    void close();

  private:
    void sep();
    std::ofstream out_;
    std::string path_;
    bool line_started_ = false;
    bool closed_ = false;
};

}  // namespace tsadam::csv
