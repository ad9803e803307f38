#pragma once

#include <istream>
#include <string>
#include <vector>

namespace swarmnews {

// Minimal RFC 4180 reader: quoted fields, "" escapes, embedded commas and
// newlines, CRLF or LF endings. An unterminated quote swallows the rest of
// the stream into one field; the caller sees a record with the wrong arity
// and counts it as malformed.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    bool read_record(std::vector<std::string>& fields) {
        fields.clear();
        int c = in_.get();
        if (c == EOF) return false;

        std::string field;
        bool quoted = false;
        bool any = false;
        while (true) {
            if (c == EOF) {
                fields.push_back(std::move(field));
                return true;
            }
            any = true;
            if (quoted) {
                if (c == '"') {
                    const int next = in_.get();
                    if (next == '"') {
                        field.push_back('"');
                    } else {
                        quoted = false;
                        c = next;
                        continue;
                    }
                } else {
                    field.push_back(static_cast<char>(c));
                }
            } else if (c == '"' && field.empty()) {
                quoted = true;
            } else if (c == ',') {
                fields.push_back(std::move(field));
                field.clear();
            } else if (c == '\n') {
                fields.push_back(std::move(field));
                return true;
            } else if (c == '\r') {
                const int next = in_.peek();
                if (next == '\n') {
                    in_.get();
                    fields.push_back(std::move(field));
                    return true;
                }
                field.push_back('\r');
            } else {
                field.push_back(static_cast<char>(c));
            }
            c = in_.get();
        }
        (void)any;
    }

private:
    std::istream& in_;
};

inline std::string csv_quote(const std::string& s) {
    bool needs = false;
    for (char c : s)
        if (c == ',' || c == '"' || c == '\n' || c == '\r') {
            needs = true;
            break;
        }
    if (!needs) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out += '"';
    return out;
}

}  // namespace swarmnews
