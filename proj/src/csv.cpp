#include "shillbid/csv.hpp"

#include <fstream>
#include <iterator>

#include "shillbid/error.hpp"

namespace shillbid::csv {

bool Reader::next(Row& row) {
    row.fields.clear();
    row.malformed = false;

    // skip blank lines
    while (pos_ < text_.size() && (text_[pos_] == '\n' || text_[pos_] == '\r')) {
        if (text_[pos_] == '\n') ++line_;
        ++pos_;
    }
    if (pos_ >= text_.size()) return false;

    row.line = line_;
    std::string field;
    bool in_quotes = false;
    bool was_quoted = false;
    while (pos_ < text_.size()) {
        const char c = text_[pos_];
        if (in_quotes) {
            if (c == '"') {
                if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '"') {
                    field.push_back('"');
                    pos_ += 2;
                    continue;
                }
                in_quotes = false;
                ++pos_;
                continue;
            }
            if (c == '\n') ++line_;
            field.push_back(c);
            ++pos_;
            continue;
        }
        if (c == ',') {
            row.fields.push_back(std::move(field));
            field.clear();
            was_quoted = false;
            ++pos_;
            continue;
        }
        if (c == '\n' || c == '\r') {
            if (c == '\r' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '\n') ++pos_;
            ++pos_;
            ++line_;
            row.fields.push_back(std::move(field));
            return true;
        }
        if (c == '"') {
            if (field.empty() && !was_quoted) {
                in_quotes = true;
                was_quoted = true;
            } else {
                row.malformed = true;
                field.push_back(c);
            }
            ++pos_;
            continue;
        }
        if (was_quoted) row.malformed = true;  // text after closing quote
        field.push_back(c);
        ++pos_;
    }
    if (in_quotes) row.malformed = true;
    row.fields.push_back(std::move(field));
    return true;
}

void append_field(std::string& out, std::string_view field) {
    if (field.find_first_of(",\"\n\r") == std::string_view::npos) {
        out.append(field);
        return;
    }
    out.push_back('"');
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
}

void append_row(std::string& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        append_field(out, fields[i]);
    }
    out.push_back('\n');
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("error reading '" + path.string() + "'");
    return content;
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw IoError("error writing '" + path.string() + "'");
}

}  // namespace shillbid::csv
