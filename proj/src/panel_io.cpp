#include "popcov/panel_io.hpp"

#include <cstdio>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <zlib.h>

#include "popcov/error.hpp"

namespace popcov {

namespace {

bool has_gz_extension(const std::filesystem::path& path) { return path.extension() == ".gz"; }

// Line source over either a plain or a gzip-compressed file.
class LineReader {
public:
    explicit LineReader(const std::filesystem::path& path) : path_(path) {
        if (has_gz_extension(path)) {
            gz_ = gzopen(path.c_str(), "rb");
            if (!gz_) throw InputError("cannot open " + path.string());
        } else {
            plain_.open(path);
            if (!plain_) throw InputError("cannot open " + path.string());
        }
    }
    ~LineReader() {
        if (gz_) gzclose(gz_);
    }
    LineReader(const LineReader&) = delete;
    LineReader& operator=(const LineReader&) = delete;

    bool next(std::string& line) {
        line.clear();
        if (!gz_) {
            if (!std::getline(plain_, line)) return false;
        } else {
            char buf[8192];
            bool got = false;
            while (gzgets(gz_, buf, sizeof buf)) {
                got = true;
                line += buf;
                if (!line.empty() && line.back() == '\n') break;
            }
            if (!got) return false;
            if (!line.empty() && line.back() == '\n') line.pop_back();
        }
        if (!line.empty() && line.back() == '\r') line.pop_back();
        ++lineno_;
        return true;
    }

    std::size_t lineno() const { return lineno_; }
    std::string where() const { return path_.string() + ":" + std::to_string(lineno_); }

private:
    std::filesystem::path path_;
    std::ifstream plain_;
    gzFile gz_ = nullptr;
    std::size_t lineno_ = 0;
};

// Writer over plain or gzip output.
class LineWriter {
public:
    explicit LineWriter(const std::filesystem::path& path) : path_(path) {
        if (has_gz_extension(path)) {
            gz_ = gzopen(path.c_str(), "wb");
            if (!gz_) throw InputError("cannot write " + path.string());
        } else {
            plain_.open(path);
            if (!plain_) throw InputError("cannot write " + path.string());
        }
    }
    ~LineWriter() {
        if (gz_) gzclose(gz_);
    }
    LineWriter(const LineWriter&) = delete;
    LineWriter& operator=(const LineWriter&) = delete;

    void put(const std::string& s) {
        if (gz_) {
            if (gzwrite(gz_, s.data(), static_cast<unsigned>(s.size())) != static_cast<int>(s.size()))
                throw InputError("write failed: " + path_.string());
        } else {
            plain_ << s;
        }
    }

private:
    std::filesystem::path path_;
    std::ofstream plain_;
    gzFile gz_ = nullptr;
};

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find('\t', start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

bool is_blank(const std::string& line) { return line.find_first_not_of(" \t") == std::string::npos; }

struct Header {
    std::vector<std::string> pops;
};

Header read_header(LineReader& reader) {
    std::string line;
    if (!reader.next(line)) throw InputError("empty panel");
    const auto cols = split_tabs(line);
    if (cols.size() < 4 || cols[0] != "snp_id" || cols[1] != "chrom")
        throw InputError(reader.where() + ": header must be 'snp_id<TAB>chrom<TAB>pop1<TAB>...' with at least 2 populations");
    return Header{std::vector<std::string>(cols.begin() + 2, cols.end())};
}

std::string format_value(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

FreqPanel read_panel(const std::filesystem::path& path, bool frequencies) {
    LineReader reader(path);
    const Header header = read_header(reader);
    const std::size_t m = header.pops.size();
    std::vector<double> values;
    std::vector<std::string> ids, chrom;
    std::string line;
    while (reader.next(line)) {
        if (is_blank(line)) continue;
        const auto cols = split_tabs(line);
        if (cols.size() != m + 2)
            throw InputError(reader.where() + ": expected " + std::to_string(m + 2) + " columns, got " +
                             std::to_string(cols.size()));
        ids.push_back(cols[0]);
        chrom.push_back(cols[1].empty() ? "." : cols[1]);
        for (std::size_t i = 0; i < m; ++i) {
            const std::string& cell = cols[2 + i];
            double x = 0.0;
            try {
                std::size_t used = 0;
                x = std::stod(cell, &used);
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw InputError(reader.where() + ": missing or malformed value '" + cell + "' for population " +
                                 header.pops[i]);
            }
            if (frequencies && (x < 0.0 || x > 1.0))
                throw InputError(reader.where() + ": frequency " + cell + " outside [0,1]");
            values.push_back(x);
        }
    }
    if (ids.empty()) throw InputError("empty panel");
    const std::size_t n = ids.size();
    return FreqPanel(n, m, std::move(values), std::move(ids), std::move(chrom), header.pops, frequencies);
}

void write_panel(const std::filesystem::path& path, const FreqPanel& panel) {
    LineWriter out(path);
    std::string line = "snp_id\tchrom";
    for (const auto& p : panel.pop_names()) line += "\t" + p;
    out.put(line + "\n");
    for (std::size_t k = 0; k < panel.n_snps(); ++k) {
        line = panel.snp_ids()[k] + "\t" + panel.chrom()[k];
        for (double x : panel.row(k)) line += "\t" + format_value(x);
        out.put(line + "\n");
    }
}

SampleSizes read_sizes(const std::filesystem::path& path, const FreqPanel& panel) {
    LineReader reader(path);
    const Header header = read_header(reader);
    if (header.pops != panel.pop_names())
        throw InputError(path.string() + ": population columns do not match the panel");
    const std::size_t m = header.pops.size();
    std::vector<long> sizes;
    std::size_t row = 0;
    std::string line;
    while (reader.next(line)) {
        if (is_blank(line)) continue;
        const auto cols = split_tabs(line);
        if (cols.size() != m + 2)
            throw InputError(reader.where() + ": expected " + std::to_string(m + 2) + " columns");
        if (row >= panel.n_snps()) throw InputError(reader.where() + ": more rows than the panel");
        if (cols[0] != panel.snp_ids()[row])
            throw InputError(reader.where() + ": SNP '" + cols[0] + "' does not match panel SNP '" +
                             panel.snp_ids()[row] + "'");
        for (std::size_t i = 0; i < m; ++i) {
            const std::string& cell = cols[2 + i];
            long v = 0;
            try {
                std::size_t used = 0;
                v = std::stol(cell, &used);
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw InputError(reader.where() + ": sample size must be an integer, got '" + cell + "'");
            }
            if (v <= 0) throw InputError(reader.where() + ": sample size must be positive, got " + cell);
            sizes.push_back(v);
        }
        ++row;
    }
    if (row != panel.n_snps())
        throw InputError(path.string() + ": " + std::to_string(row) + " rows, panel has " +
                         std::to_string(panel.n_snps()));
    return SampleSizes(panel.n_snps(), m, std::move(sizes));
}

void write_sizes(const std::filesystem::path& path, const FreqPanel& panel, const SampleSizes& sizes) {
    sizes.check_against(panel.n_snps(), panel.n_pops(), 1);
    LineWriter out(path);
    std::string line = "snp_id\tchrom";
    for (const auto& p : panel.pop_names()) line += "\t" + p;
    out.put(line + "\n");
    for (std::size_t k = 0; k < panel.n_snps(); ++k) {
        line = panel.snp_ids()[k] + "\t" + panel.chrom()[k];
        for (std::size_t i = 0; i < panel.n_pops(); ++i) line += "\t" + std::to_string(sizes(k, i));
        out.put(line + "\n");
    }
}

}  // namespace popcov
