#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "popcov/symmat.hpp"

namespace popcov {

// Text format shared by every matrix the tools read or write:
//
//   # symmat m=<dim>
//   <m rows of m tab-separated values, 17 significant digits>
//
// Readers accept input that is symmetric within 1e-9 and symmetrize it.

void write_symmat(std::ostream& out, const SymMat& a);
SymMat read_symmat(std::istream& in);
void save_symmat(const std::filesystem::path& path, const SymMat& a);
SymMat load_symmat(const std::filesystem::path& path);

// Subspace basis file: header "# basis k=<count> m=<dim>" followed by
// k symmat blocks separated by blank lines.
void write_basis(std::ostream& out, const std::vector<SymMat>& basis);
std::vector<SymMat> read_basis(std::istream& in);
std::vector<SymMat> load_basis(const std::filesystem::path& path);

}  // namespace popcov
