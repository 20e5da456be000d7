#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace seplab {

/// CSV with '#'-prefixed metadata lines before the header. Numeric cells are
/// printed with %.17g so identical runs produce identical bytes.
class CsvWriter {
  public:
    void meta(const std::string& key, const std::string& value) {
        meta_.push_back("# " + key + ": " + value);
    }
    void header(const std::vector<std::string>& columns) { header_ = columns; }

    void cell(double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        row_.push_back(buf);
    }
    void cell(int v) { row_.push_back(std::to_string(v)); }
    void cell(long long v) { row_.push_back(std::to_string(v)); }
    void cell(const std::string& s) { row_.push_back(s); }
    void end_row() {
        rows_.push_back(row_);
        row_.clear();
    }

    std::string str() const {
        std::string out;
        for (const auto& m : meta_) out += m + "\n";
        out += join(header_) + "\n";
        for (const auto& r : rows_) out += join(r) + "\n";
        return out;
    }

    void write(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        f << str();
    }

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += ',';
            out += v[i];
        }
        return out;
    }
    std::vector<std::string> meta_;
    std::vector<std::string> header_;
    std::vector<std::string> row_;
    std::vector<std::vector<std::string>> rows_;
};

/// FNV-1a 64-bit digest used in the run manifest.
inline std::string fnv1a64_hex(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace seplab
