#include "vgr/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

#include "vgr/errors.hpp"

namespace vgr::io {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos)
            break;
        start = comma + 1;
    }
    return cells;
}

std::ifstream open_in(const fs::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open " + path.string());
    return in;
}

std::ofstream open_out(const fs::path& path)
{
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw InputError("cannot write " + path.string());
    return out;
}

std::string loc(const fs::path& path, std::size_t line) { return path.string() + ":" + std::to_string(line); }

// Calls `row` for every data line after the expected header.
void for_each_record(const fs::path& path, const std::string& header, std::size_t width,
                     const std::function<void(const std::vector<std::string>&, const std::string&)>& row)
{
    auto in = open_in(path);
    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line) || trim(line) != header)
        throw InputError(loc(path, 1) + ": expected header \"" + header + "\"");
    ++lineno;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        auto cells = split(line);
        if (cells.size() != width)
            throw InputError(loc(path, lineno) + ": expected " + std::to_string(width) + " fields, got " +
                             std::to_string(cells.size()));
        row(cells, loc(path, lineno));
    }
}

Index checked_node(const std::string& cell, Index n, const std::string& where)
{
    const long long v = parse_int(cell, where);
    if (v < 0 || v >= n)
        throw InputError(where + ": node " + std::to_string(v) + " outside [0, " + std::to_string(n) + ")");
    return static_cast<Index>(v);
}

double checked_weight(const std::string& cell, const std::string& where)
{
    const double w = parse_double(cell, where);
    if (w < 0.0)
        throw InputError(where + ": negative weight");
    return w;
}

} // namespace

std::string format_double(double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, const std::string& where)
{
    double value = 0.0;
    const std::string t = trim(text);
    const char* first = t.data();
    const char* last = t.data() + t.size();
    if (!t.empty() && *first == '+')
        ++first;
    const auto res = std::from_chars(first, last, value);
    if (t.empty() || res.ec != std::errc() || res.ptr != last)
        throw InputError(where + ": cannot parse \"" + t + "\" as a number");
    if (!std::isfinite(value))
        throw InputError(where + ": non-finite value \"" + t + "\"");
    return value;
}

long long parse_int(std::string_view text, const std::string& where)
{
    long long value = 0;
    const std::string t = trim(text);
    const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size())
        throw InputError(where + ": cannot parse \"" + t + "\" as an integer");
    return value;
}

void write_dense_csv(const fs::path& path, const Matrix& m)
{
    auto out = open_out(path);
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (j)
                out << ',';
            out << format_double(m(i, j));
        }
        out << '\n';
    }
}

Matrix read_dense_csv(const fs::path& path)
{
    auto in = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty())
            continue;
        const auto cells = split(line);
        std::vector<double> row;
        row.reserve(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c)
            row.push_back(parse_double(cells[c], path.string() + " row " + std::to_string(rows.size()) +
                                                     " column " + std::to_string(c) + " (0-based)"));
        if (!rows.empty() && row.size() != rows.front().size())
            throw InputError(loc(path, lineno) + ": row " + std::to_string(rows.size()) + " has " +
                             std::to_string(row.size()) + " columns, expected " +
                             std::to_string(rows.front().size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw InputError(path.string() + ": empty matrix");
    Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return m;
}

void write_edges_csv(const fs::path& path, const Sc2& sc)
{
    auto out = open_out(path);
    out << "i,j,w\n";
    for (const auto& [e, w] : sc.edges())
        out << e.first << ',' << e.second << ',' << format_double(w) << '\n';
}

void write_triangles_csv(const fs::path& path, const Sc2& sc)
{
    auto out = open_out(path);
    out << "i,j,k,w\n";
    for (const auto& [t, w] : sc.triangles())
        out << t[0] << ',' << t[1] << ',' << t[2] << ',' << format_double(w) << '\n';
}

Sc2 read_sc2(const fs::path& edges, const fs::path* triangles, Index n)
{
    Sc2 sc(n);
    for_each_record(edges, "i,j,w", 3, [&](const auto& c, const std::string& where) {
        const Index i = checked_node(c[0], n, where);
        const Index j = checked_node(c[1], n, where);
        if (i == j)
            throw InputError(where + ": self-loop");
        sc.add_edge(i, j, checked_weight(c[2], where));
    });
    if (triangles) {
        for_each_record(*triangles, "i,j,k,w", 4, [&](const auto& c, const std::string& where) {
            const Index i = checked_node(c[0], n, where);
            const Index j = checked_node(c[1], n, where);
            const Index k = checked_node(c[2], n, where);
            if (i == j || i == k || j == k)
                throw InputError(where + ": repeated node in triangle");
            if (!sc.has_edge(i, j) || !sc.has_edge(i, k) || !sc.has_edge(j, k))
                throw InputError(where + ": triangle without all three edges");
            sc.add_triangle(i, j, k, checked_weight(c[3], where));
        });
    }
    return sc;
}

void write_sparse_h1(const fs::path& path, const Matrix& h1)
{
    auto out = open_out(path);
    out << "i,j,w\n";
    for (Index i = 0; i < h1.rows(); ++i)
        for (Index j = 0; j < h1.cols(); ++j)
            if (h1(i, j) != 0.0)
                out << i << ',' << j << ',' << format_double(h1(i, j)) << '\n';
}

void write_sparse_h2(const fs::path& path, const Matrix& h2)
{
    const Index n = h2.rows();
    auto out = open_out(path);
    out << "k,i,j,w\n";
    for (Index k = 0; k < n; ++k)
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                if (const double w = h2(k, i * n + j); w != 0.0)
                    out << k << ',' << i << ',' << j << ',' << format_double(w) << '\n';
}

Matrix read_sparse_h1(const fs::path& path, Index n)
{
    Matrix h1 = Matrix::Zero(n, n);
    for_each_record(path, "i,j,w", 3, [&](const auto& c, const std::string& where) {
        h1(checked_node(c[0], n, where), checked_node(c[1], n, where)) = checked_weight(c[2], where);
    });
    return h1;
}

Matrix read_sparse_h2(const fs::path& path, Index n)
{
    Matrix h2 = Matrix::Zero(n, n * n);
    for_each_record(path, "k,i,j,w", 4, [&](const auto& c, const std::string& where) {
        const Index k = checked_node(c[0], n, where);
        const Index i = checked_node(c[1], n, where);
        const Index j = checked_node(c[2], n, where);
        h2(k, i * n + j) = checked_weight(c[3], where);
    });
    return h2;
}

void write_text(const fs::path& path, const std::string& text)
{
    auto out = open_out(path);
    out << text;
}

} // namespace vgr::io
