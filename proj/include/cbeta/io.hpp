#pragma once

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace cbeta {

//! Shortest round-trip decimal form; "nan", "inf" and "-inf" for non-finite values.
std::string format_double(double value);

//! Plot-ready CSV: one header row, comma separated, LF line endings.
class CsvWriter
{
  public:
    explicit CsvWriter(std::vector<std::string> header);

    void add_row(std::vector<std::string> cells);
    void add_row(std::initializer_list<double> values);

    std::size_t columns() const noexcept { return header_.size(); }
    std::string str() const;

  private:
    std::vector<std::string> header_;
    std::string body_;
};

//! Writes `content` to `path`, replacing the file. Throws std::runtime_error
//! when the path cannot be written.
void write_text_file(std::string const& path, std::string_view content);

}  // namespace cbeta
