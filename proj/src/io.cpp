#include "cbeta/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace cbeta {
namespace {

void append_row(std::string& out, std::vector<std::string> const& cells)
{
    for (std::size_t i = 0; i < cells.size(); ++i)
    {
        if (i)
            out += ',';
        out += cells[i];
    }
    out += '\n';
}

}  // namespace

std::string format_double(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buf[64];
    auto const res = std::to_chars(buf, buf + sizeof buf, value);
    return {buf, res.ptr};
}

CsvWriter::CsvWriter(std::vector<std::string> header) : header_(std::move(header))
{
    if (header_.empty())
        throw std::invalid_argument("CsvWriter: empty header");
}

void CsvWriter::add_row(std::vector<std::string> cells)
{
    if (cells.size() != header_.size())
        throw std::invalid_argument("CsvWriter: row width does not match the header");
    append_row(body_, cells);
}

void CsvWriter::add_row(std::initializer_list<double> values)
{
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values)
        cells.push_back(format_double(v));
    add_row(std::move(cells));
}

std::string CsvWriter::str() const
{
    std::string out;
    append_row(out, header_);
    return out + body_;
}

void write_text_file(std::string const& path, std::string_view content)
{
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw std::runtime_error("cannot open " + path + " for writing");
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f)
        throw std::runtime_error("failed writing " + path);
}

}  // namespace cbeta
