#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace shillbid::csv {

// Dialect: comma delimiter, double-quote quoting with "" escapes, UTF-8,
// LF line endings on output. CRLF is tolerated on input.

struct Row {
    std::size_t line = 0;  // physical line where the record starts
    std::vector<std::string> fields;
    bool malformed = false;  // unterminated quote or stray quote
};

/// Pull parser over an in-memory buffer.
class Reader {
public:
    explicit Reader(std::string_view text) : text_(text) {}

    /// Reads the next record into `row`. Returns false at end of input.
    /// Blank lines are skipped.
    bool next(Row& row);

    /// Byte offset of the current position; used to split input into chunks.
    std::size_t offset() const { return pos_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
};

/// Appends `field` to `out`, quoting it when it contains a delimiter,
/// quote or line break.
void append_field(std::string& out, std::string_view field);

/// Appends a full record terminated by '\n'.
void append_row(std::string& out, const std::vector<std::string>& fields);

/// Whole-file read; throws IoError when the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Whole-file write; throws IoError on failure.
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace shillbid::csv
