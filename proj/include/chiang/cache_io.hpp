#ifndef CHIANG_CACHE_IO_HPP
#define CHIANG_CACHE_IO_HPP

#include <map>
#include <string>

#include "chiang/closed_gw.hpp"
#include "chiang/open_gw.hpp"
#include "chiang/rational.hpp"

namespace chiang {

// On-disk cache of memoized invariants.  The format is line-oriented plain
// text so values can be audited by eye and diffed meaningfully:
//
//   chiang-ogw-cache v1
//   C d a b value
//   O beta k l2 l3 value
//
// with closed records first, each section sorted by key, every value in
// canonical rational form, and keys unique within the file.
struct CacheData {
    std::map<OpenKey, Rational> open;
    std::map<ClosedKey, Rational> closed;

    friend bool operator==(const CacheData&, const CacheData&) = default;
};

extern const char* const kCacheHeader;  // "chiang-ogw-cache v1"

// Canonical text form; parse(serialize(x)) == x and the text round-trips
// byte-identically.
std::string serialize_cache(const CacheData& data);

// Strict parser: exact header, exact field counts, canonical integers and
// rationals, valid and unique keys.  Throws CacheFormatError otherwise.
CacheData parse_cache(const std::string& text);

void save_cache(const std::string& path, const CacheData& data);
CacheData load_cache(const std::string& path);  // throws CacheFormatError

}  // namespace chiang

#endif  // CHIANG_CACHE_IO_HPP
