#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace tou {

/// Shortest round-trippable decimal rendering of a double ("%.17g" trimmed).
/// All report files format numbers through this so that identical runs are
/// byte-identical.
std::string fmt_g17(double v);

/// One "key value..." record per line; '#' starts a comment line.
struct KvRecord {
    std::vector<std::string> fields;  // whitespace-split tokens
};

struct KvDocument {
    std::vector<KvRecord> records;

    /// First record whose leading token equals key; throws when absent.
    const KvRecord& find(const std::string& key) const;
    bool has(const std::string& key) const;
};

KvDocument parse_kv(const std::string& text);

/// Tab-separated table with a header row.
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::string to_tsv() const;
};

Table parse_tsv(const std::string& text);

/// FNV-1a 64-bit hash, used to stamp reports with the config they came from.
std::uint64_t fnv1a64(const std::string& data);
std::string hash_hex(std::uint64_t h);

}  // namespace tou
