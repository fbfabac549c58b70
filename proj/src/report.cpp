#include "tou/report.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace tou {

std::string fmt_g17(double v) {
    char buf[40];
    // try increasing precision until the value round-trips
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        double back = 0.0;
        std::sscanf(buf, "%lf", &back);
        if (back == v) return buf;
    }
    return buf;
}

const KvRecord& KvDocument::find(const std::string& key) const {
    for (const KvRecord& r : records)
        if (!r.fields.empty() && r.fields[0] == key) return r;
    throw std::out_of_range("kv document: no record '" + key + "'");
}

bool KvDocument::has(const std::string& key) const {
    for (const KvRecord& r : records)
        if (!r.fields.empty() && r.fields[0] == key) return true;
    return false;
}

KvDocument parse_kv(const std::string& text) {
    KvDocument doc;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        KvRecord rec;
        std::istringstream ls(line);
        std::string tok;
        while (ls >> tok) rec.fields.push_back(tok);
        if (!rec.fields.empty()) doc.records.push_back(std::move(rec));
    }
    return doc;
}

std::string Table::to_tsv() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "\t" : "") << header[i];
    os << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "\t" : "") << row[i];
        os << "\n";
    }
    return os.str();
}

Table parse_tsv(const std::string& text) {
    Table t;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::size_t pos = 0;
        for (;;) {
            const std::size_t tab = line.find('\t', pos);
            cells.push_back(line.substr(pos, tab == std::string::npos ? tab : tab - pos));
            if (tab == std::string::npos) break;
            pos = tab + 1;
        }
        if (first) {
            t.header = std::move(cells);
            first = false;
        } else {
            t.rows.push_back(std::move(cells));
        }
    }
    return t;
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace tou
