#include "localcodes/text.hpp"

#include <charconv>
#include <cmath>

#include "localcodes/errors.hpp"

namespace localcodes::text {

std::string format_double(double v) {
    if (!std::isfinite(v)) throw DataError("refusing to format a non-finite value");
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

double parse_double(std::string_view s, std::string_view what) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v))
        throw ConfigError(std::string(what) + ": '" + std::string(s) + "' is not a number");
    return v;
}

std::uint64_t parse_u64(std::string_view s, std::string_view what) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ConfigError(std::string(what) + ": '" + std::string(s) + "' is not a non-negative integer");
    return v;
}

std::string csv_escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string csv_line(const std::vector<std::string>& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) line += ',';
        line += csv_escape(fields[i]);
    }
    line += '\n';
    return line;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view doc) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool field_started = false;
    std::size_t i = 0;
    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_started = false;
    };
    while (i < doc.size()) {
        const char c = doc[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < doc.size() && doc[i + 1] == '"') {
                    field += '"';
                    i += 2;
                    continue;
                }
                quoted = false;
            } else {
                field += c;
            }
            ++i;
            continue;
        }
        if (c == '"') {
            if (field_started || !field.empty()) throw DataError("csv: stray quote inside a field");
            quoted = true;
            field_started = true;
        } else if (c == ',') {
            end_field();
        } else if (c == '\n' || c == '\r') {
            end_field();
            records.push_back(std::move(record));
            record.clear();
            if (c == '\r' && i + 1 < doc.size() && doc[i + 1] == '\n') ++i;
        } else {
            field += c;
            field_started = true;
        }
        ++i;
    }
    if (quoted) throw DataError("csv: unterminated quoted field");
    if (field_started || !field.empty() || !record.empty()) {
        end_field();
        records.push_back(std::move(record));
    }
    return records;
}

}  // namespace localcodes::text
