#pragma once

// Tab-separated store of search results keyed by q:
//
//   q	a	m_min	strategy	elapsed_ms

#include <cstdint>
#include <string>
#include <vector>

#include "zaremba/korobov.hpp"

namespace zaremba {

inline constexpr const char* kCacheHeader = "q\ta\tm_min\tstrategy\telapsed_ms";

// Rows sorted by q. A missing or empty file is an empty cache. Throws
// std::runtime_error on a wrong header or a malformed row.
std::vector<SearchResult> cache_read(const std::string& path);

// Merges rows whose q is not yet present and rewrites the file sorted by q.
// Returns the number of rows added. Rejects rows with repeated q and refuses
// to touch a file whose header is wrong.
std::size_t cache_upsert(const std::string& path, const std::vector<SearchResult>& rows);

}  // namespace zaremba
