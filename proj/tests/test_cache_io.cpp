#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <string>

#include "chiang/cache_io.hpp"

using chiang::CacheData;
using chiang::CacheFormatError;
using chiang::ClosedKey;
using chiang::OpenKey;
using chiang::Rational;

namespace {

CacheData sample() {
    CacheData data;
    data.closed[ClosedKey{1, 4, 0}] = Rational(2);
    data.closed[ClosedKey{1, 2, 1}] = Rational(1);
    data.closed[ClosedKey{2, 8, 0}] = Rational(92);
    data.open[OpenKey{1, 1, 0, 0}] = Rational(3);
    data.open[OpenKey{2, 0, 2, 0}] = Rational(-35, 64);
    data.open[OpenKey{2, 2, 0, 0}] = Rational(5, 4);
    return data;
}

}  // namespace

TEST_CASE("serialization is canonical and round-trips") {
    CacheData data = sample();
    std::string text = chiang::serialize_cache(data);

    CHECK(text.rfind(std::string(chiang::kCacheHeader) + "\n", 0) == 0);
    CHECK(text.back() == '\n');
    CHECK(text.find("C 1 2 1 1\n") != std::string::npos);
    CHECK(text.find("O 2 0 2 0 -35/64\n") != std::string::npos);
    // Closed section precedes the open section.
    CHECK(text.find("C ") < text.find("O "));

    CacheData parsed = chiang::parse_cache(text);
    CHECK(parsed == data);
    CHECK(chiang::serialize_cache(parsed) == text);
}

TEST_CASE("the empty cache still carries the header") {
    std::string text = chiang::serialize_cache(CacheData{});
    CHECK(text == std::string(chiang::kCacheHeader) + "\n");
    CHECK(chiang::parse_cache(text) == CacheData{});
}

TEST_CASE("malformed documents are rejected") {
    const std::string good = chiang::serialize_cache(sample());

    // Wrong or missing header.
    CHECK_THROWS_AS(chiang::parse_cache(""), CacheFormatError);
    CHECK_THROWS_AS(chiang::parse_cache("chiang-ogw-cache v2\n"),
                    CacheFormatError);
    CHECK_THROWS_AS(chiang::parse_cache("C 1 4 0 2\n"), CacheFormatError);

    // Missing final newline.
    CHECK_THROWS_AS(chiang::parse_cache(good.substr(0, good.size() - 1)),
                    CacheFormatError);

    auto with_line = [&](const std::string& line) {
        return good + line + "\n";
    };

    // Duplicate keys.
    CHECK_THROWS_AS(chiang::parse_cache(with_line("O 1 1 0 0 3")),
                    CacheFormatError);

    // Non-canonical numbers.
    CHECK_THROWS_AS(chiang::parse_cache(with_line("O 3 3 0 0 2/4")),
                    CacheFormatError);
    CHECK_THROWS_AS(chiang::parse_cache(with_line("O 3 3 0 0 +1")),
                    CacheFormatError);
    CHECK_THROWS_AS(chiang::parse_cache(with_line("O 03 3 0 0 1")),
                    CacheFormatError);

    // Wrong field counts.
    CHECK_THROWS_AS(chiang::parse_cache(with_line("O 3 3 0 1")),
                    CacheFormatError);
    CHECK_THROWS_AS(chiang::parse_cache(with_line("C 1 4 0 2 9")),
                    CacheFormatError);
    CHECK_THROWS_AS(chiang::parse_cache(with_line("X 1 1 0 0 3")),
                    CacheFormatError);

    // Keys violating the balances.
    CHECK_THROWS_AS(chiang::parse_cache(with_line("O 3 1 1 0 1")),
                    CacheFormatError);
    CHECK_THROWS_AS(chiang::parse_cache(with_line("C 1 3 0 1")),
                    CacheFormatError);
    CHECK_THROWS_AS(chiang::parse_cache(with_line("O 0 0 0 0 1")),
                    CacheFormatError);

    // Whitespace discipline.
    CHECK_THROWS_AS(chiang::parse_cache(with_line("O 3 3 0 0  1")),
                    CacheFormatError);
    CHECK_THROWS_AS(chiang::parse_cache(with_line(" O 3 3 0 0 1")),
                    CacheFormatError);
    CHECK_THROWS_AS(chiang::parse_cache(with_line("O 3 3 0 0 1 ")),
                    CacheFormatError);
    CHECK_THROWS_AS(chiang::parse_cache(good + "\n"), CacheFormatError);
}

TEST_CASE("file round trip") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "chiang-cache-test";
    fs::create_directories(dir);
    fs::path file = dir / "cache.txt";

    CacheData data = sample();
    chiang::save_cache(file.string(), data);
    CacheData loaded = chiang::load_cache(file.string());
    CHECK(loaded == data);

    chiang::save_cache(file.string(), loaded);
    CHECK(chiang::load_cache(file.string()) == data);

    CHECK_THROWS_AS(chiang::load_cache((dir / "missing.txt").string()),
                    CacheFormatError);

    fs::remove_all(dir);
}
