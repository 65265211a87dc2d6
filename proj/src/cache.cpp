#include "zaremba/cache.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace zaremba {

namespace {

std::int64_t parse_int(const std::string& s, const std::string& path, std::size_t line) {
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": bad integer '" + s + "'");
  }
  return v;
}

}  // namespace

std::vector<SearchResult> cache_read(const std::string& path) {
  std::vector<SearchResult> rows;
  std::ifstream in(path);
  if (!in) return rows;
  std::string line;
  if (!std::getline(in, line)) return rows;
  if (line != kCacheHeader) throw std::runtime_error(path + ": unexpected cache header");
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, '\t')) cols.push_back(col);
    if (cols.size() != 5) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected 5 columns");
    }
    SearchResult r;
    r.q = parse_int(cols[0], path, lineno);
    r.a = parse_int(cols[1], path, lineno);
    r.m_min = parse_int(cols[2], path, lineno);
    r.strategy = strategy_from_string(cols[3]);
    r.elapsed_ms = parse_int(cols[4], path, lineno);
    rows.push_back(r);
  }
  std::sort(rows.begin(), rows.end(),
            [](const SearchResult& x, const SearchResult& y) { return x.q < y.q; });
  return rows;
}

std::size_t cache_upsert(const std::string& path, const std::vector<SearchResult>& rows) {
  std::map<std::int64_t, SearchResult> merged;
  for (const auto& r : cache_read(path)) merged.emplace(r.q, r);

  std::map<std::int64_t, int> incoming;
  for (const auto& r : rows) {
    if (++incoming[r.q] > 1) {
      throw std::invalid_argument("cache_upsert: repeated q = " + std::to_string(r.q));
    }
  }
  std::size_t added = 0;
  for (const auto& r : rows) {
    if (merged.emplace(r.q, r).second) ++added;
  }
  if (added == 0 && std::filesystem::exists(path) && std::filesystem::file_size(path) > 0) {
    return 0;
  }

  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path + ": cannot write cache");
    out << kCacheHeader << '\n';
    for (const auto& [q, r] : merged) {
      out << r.q << '\t' << r.a << '\t' << r.m_min << '\t' << to_string(r.strategy) << '\t'
          << r.elapsed_ms << '\n';
    }
    if (!out) throw std::runtime_error(path + ": write failed");
  }
  std::filesystem::rename(tmp, path);
  return added;
}

}  // namespace zaremba
