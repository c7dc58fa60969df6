#ifndef PCELLS_SRC_CSV_HPP
#define PCELLS_SRC_CSV_HPP

// Minimal RFC 4180 reader/writer used by every CSV surface of the library.
// Lines starting with '#' outside a quoted field are treated as comments.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pcells::csv {

struct Record {
    std::size_t line = 0;  // 1-based line where the record starts
    std::vector<std::string> fields;
};

class Reader {
public:
    explicit Reader(std::string_view text);

    // Returns nullopt at end of input. Blank lines and comments are skipped.
    // Throws pcells::Error(RowParseError) on an unterminated quote.
    std::optional<Record> next();

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

std::string escape(std::string_view field);
void append_row(std::string& out, const std::vector<std::string>& fields);

bool is_valid_utf8(std::string_view text);

}  // namespace pcells::csv

#endif
