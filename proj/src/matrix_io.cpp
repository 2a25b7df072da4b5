#include "popcov/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "popcov/error.hpp"

namespace popcov {

namespace {

std::string format_value(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Reads the next line that is not blank. Returns false at end of input.
bool next_content_line(std::istream& in, std::string& line, std::size_t& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
}

std::size_t parse_key(const std::string& header, const std::string& key, std::size_t lineno) {
    const std::string tag = key + "=";
    const auto pos = header.find(tag);
    if (pos == std::string::npos)
        throw InputError("line " + std::to_string(lineno) + ": header lacks '" + tag + "'");
    try {
        std::size_t used = 0;
        const long v = std::stol(header.substr(pos + tag.size()), &used);
        if (v <= 0) throw InputError("");
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw InputError("line " + std::to_string(lineno) + ": bad value for '" + key + "'");
    }
}

SymMat read_block(std::istream& in, std::size_t& lineno) {
    std::string line;
    if (!next_content_line(in, line, lineno)) throw InputError("expected '# symmat m=<dim>' header, got end of input");
    if (line.rfind("# symmat", 0) != 0)
        throw InputError("line " + std::to_string(lineno) + ": expected '# symmat m=<dim>' header");
    const std::size_t m = parse_key(line, "m", lineno);
    if (m < 2) throw InputError("line " + std::to_string(lineno) + ": matrix dimension must be at least 2");
    Eigen::MatrixXd a(m, m);
    for (std::size_t i = 0; i < m; ++i) {
        if (!std::getline(in, line)) throw InputError("unexpected end of input in matrix row " + std::to_string(i + 1));
        ++lineno;
        std::istringstream row(line);
        for (std::size_t j = 0; j < m; ++j) {
            std::string cell;
            if (!(row >> cell))
                throw InputError("line " + std::to_string(lineno) + ": expected " + std::to_string(m) + " values");
            try {
                std::size_t used = 0;
                a(i, j) = std::stod(cell, &used);
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw InputError("line " + std::to_string(lineno) + ": not a number: '" + cell + "'");
            }
        }
        std::string extra;
        if (row >> extra) throw InputError("line " + std::to_string(lineno) + ": too many values");
    }
    try {
        return SymMat::from_dense(a, 1e-9);
    } catch (const InputError& e) {
        throw InputError(std::string("matrix ending at line ") + std::to_string(lineno) + ": " + e.what());
    }
}

}  // namespace

void write_symmat(std::ostream& out, const SymMat& a) {
    const std::size_t m = a.dim();
    out << "# symmat m=" << m << '\n';
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (j) out << '\t';
            out << format_value(a(i, j));
        }
        out << '\n';
    }
}

SymMat read_symmat(std::istream& in) {
    std::size_t lineno = 0;
    return read_block(in, lineno);
}

void save_symmat(const std::filesystem::path& path, const SymMat& a) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path.string());
    write_symmat(out, a);
}

SymMat load_symmat(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    try {
        return read_symmat(in);
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

void write_basis(std::ostream& out, const std::vector<SymMat>& basis) {
    if (basis.empty()) throw InputError("basis is empty");
    out << "# basis k=" << basis.size() << " m=" << basis.front().dim() << '\n';
    for (std::size_t b = 0; b < basis.size(); ++b) {
        if (b) out << '\n';
        write_symmat(out, basis[b]);
    }
}

std::vector<SymMat> read_basis(std::istream& in) {
    std::size_t lineno = 0;
    std::string line;
    if (!next_content_line(in, line, lineno) || line.rfind("# basis", 0) != 0)
        throw InputError("expected '# basis k=<count> m=<dim>' header");
    const std::size_t k = parse_key(line, "k", lineno);
    const std::size_t m = parse_key(line, "m", lineno);
    std::vector<SymMat> basis;
    for (std::size_t b = 0; b < k; ++b) {
        basis.push_back(read_block(in, lineno));
        if (basis.back().dim() != m)
            throw InputError("basis element " + std::to_string(b + 1) + " has dimension " +
                             std::to_string(basis.back().dim()) + ", header says m=" + std::to_string(m));
    }
    if (next_content_line(in, line, lineno))
        throw InputError("line " + std::to_string(lineno) + ": more basis elements than k=" + std::to_string(k));
    return basis;
}

std::vector<SymMat> load_basis(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    try {
        return read_basis(in);
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

}  // namespace popcov
