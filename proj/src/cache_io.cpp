#include "chiang/cache_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string_view>
#include <system_error>
#include <vector>

#include "chiang/errors.hpp"

namespace chiang {

const char* const kCacheHeader = "chiang-ogw-cache v1";

namespace {

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
    throw CacheFormatError("cache line " + std::to_string(line_no) + ": " +
                           what);
}

// Canonical decimal integer only: no sign prefix beyond '-', no leading
// zeros, no surrounding junk.
int parse_int(std::string_view token, std::size_t line_no) {
    int value = 0;
    auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size())
        fail(line_no, "bad integer '" + std::string(token) + "'");
    if (std::to_string(value) != token)
        fail(line_no, "non-canonical integer '" + std::string(token) + "'");
    return value;
}

std::vector<std::string_view> split_fields(std::string_view line,
                                           std::size_t line_no) {
    if (line.empty()) fail(line_no, "empty line");
    if (line.front() == ' ' || line.back() == ' ')
        fail(line_no, "stray whitespace");
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ' ') {
            if (i == start) fail(line_no, "stray whitespace");
            fields.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return fields;
}

Rational parse_value(std::string_view token, std::size_t line_no) {
    try {
        return Rational::parse(token, /*strict=*/true);
    } catch (const std::exception& e) {
        fail(line_no, std::string("bad value: ") + e.what());
    }
}

}  // namespace

std::string serialize_cache(const CacheData& data) {
    std::ostringstream os;
    os << kCacheHeader << "\n";
    for (const auto& [key, value] : data.closed)
        os << "C " << key.d << " " << key.a << " " << key.b << " "
           << value.str() << "\n";
    for (const auto& [key, value] : data.open)
        os << "O " << key.beta << " " << key.k << " " << key.l2 << " "
           << key.l3 << " " << value.str() << "\n";
    return os.str();
}

CacheData parse_cache(const std::string& text) {
    CacheData data;
    std::size_t pos = 0;
    std::size_t line_no = 0;
    bool saw_header = false;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos)
            fail(line_no + 1, "missing final newline");
        std::string_view line(text.data() + pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (line_no == 1) {
            if (line != kCacheHeader)
                fail(1, "bad header, expected '" + std::string(kCacheHeader) +
                            "'");
            saw_header = true;
            continue;
        }
        std::vector<std::string_view> fields = split_fields(line, line_no);
        if (fields[0] == "C") {
            if (fields.size() != 5)
                fail(line_no, "C record needs 5 fields");
            ClosedKey key{parse_int(fields[1], line_no),
                          parse_int(fields[2], line_no),
                          parse_int(fields[3], line_no)};
            if (key.d < 1 || key.a < 0 || key.b < 0 ||
                key.a + 2 * key.b != 4 * key.d)
                fail(line_no, "closed key violates a + 2b = 4d");
            Rational value = parse_value(fields[4], line_no);
            if (!data.closed.emplace(key, std::move(value)).second)
                fail(line_no, "duplicate closed key");
        } else if (fields[0] == "O") {
            if (fields.size() != 6)
                fail(line_no, "O record needs 6 fields");
            OpenKey key{parse_int(fields[1], line_no),
                        parse_int(fields[2], line_no),
                        parse_int(fields[3], line_no),
                        parse_int(fields[4], line_no)};
            if (key.beta < 1 || key.k < 0 || key.l2 < 0 || key.l3 < 0 ||
                key.beta != key.k + key.l2 + 2 * key.l3)
                fail(line_no, "open key violates beta = k + l2 + 2*l3");
            Rational value = parse_value(fields[5], line_no);
            if (!data.open.emplace(key, std::move(value)).second)
                fail(line_no, "duplicate open key");
        } else {
            fail(line_no, "unknown record type '" + std::string(fields[0]) +
                              "'");
        }
    }
    if (!saw_header) throw CacheFormatError("cache file is empty");
    return data;
}

void save_cache(const std::string& path, const CacheData& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw CacheFormatError("cannot write cache file: " + path);
    out << serialize_cache(data);
    out.flush();
    if (!out) throw CacheFormatError("short write on cache file: " + path);
}

CacheData load_cache(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CacheFormatError("cannot read cache file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_cache(buf.str());
}

}  // namespace chiang
