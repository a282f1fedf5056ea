#pragma once

// On-disk formats. All indices are 0-based; doubles are written in shortest
// round-trip form so a write/read cycle is bit-exact.
//
//   dense X / V     no header, one row per node, one column per realization
//   edges           header "i,j,w", i < j
//   triangles       header "i,j,k,w", i < j < k
//   sparse H1       header "i,j,w", nonzero entries only
//   sparse H2       header "k,i,j,w", meaning H2[k][col(i,j)]

#include <filesystem>
#include <string>
#include <string_view>

#include "vgr/sc_core.hpp"

namespace vgr::io {

std::string format_double(double value);
/// Parses the whole of `text` as a double; InputError names `where` on failure.
double parse_double(std::string_view text, const std::string& where);
long long parse_int(std::string_view text, const std::string& where);

void write_dense_csv(const std::filesystem::path& path, const Matrix& m);
/// Rejects ragged rows, unparsable and non-finite cells, naming row and column.
Matrix read_dense_csv(const std::filesystem::path& path);

void write_edges_csv(const std::filesystem::path& path, const Sc2& sc);
void write_triangles_csv(const std::filesystem::path& path, const Sc2& sc);
/// Reads an edge list and an optional triangle list into an n-node complex.
Sc2 read_sc2(const std::filesystem::path& edges, const std::filesystem::path* triangles, Index n);

void write_sparse_h1(const std::filesystem::path& path, const Matrix& h1);
void write_sparse_h2(const std::filesystem::path& path, const Matrix& h2);
Matrix read_sparse_h1(const std::filesystem::path& path, Index n);
Matrix read_sparse_h2(const std::filesystem::path& path, Index n);

void write_text(const std::filesystem::path& path, const std::string& text);

} // namespace vgr::io
