#include "chainpde/field_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace chainpde {

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string field_to_csv(const Field& f) {
    const Grid& g = *f.grid;
    std::string out = g.dim() == 1 ? "x,value\n" : "x,y,value\n";
    for (int k = 0; k < g.interior_count(); ++k) {
        const auto node = g.interior_to_node(k);
        out += format_g17(g.coordinate(0, node[0]));
        if (g.dim() == 2) {
            out += ',';
            out += format_g17(g.coordinate(1, node[1]));
        }
        out += ',';
        out += format_g17(f[k]);
        out += '\n';
    }
    return out;
}

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

double parse_number(const std::string& s, const std::string& context) {
    try {
        size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw FileError("field csv: bad number '" + s + "' in " + context);
    }
}

} // namespace

Field field_from_csv(const GridPtr& g, const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line))
        throw FileError("field csv: empty input");
    const std::string want_header = g->dim() == 1 ? "x,value" : "x,y,value";
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != want_header)
        throw FileError("field csv: expected header '" + want_header +
                        "', got '" + line + "'");

    std::vector<double> values(static_cast<size_t>(g->interior_count()));
    int row = 0;
    const int coords = g->dim();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (row >= g->interior_count())
            throw FileError("field csv: more rows than interior nodes");
        const auto cells = split_csv_row(line);
        if (static_cast<int>(cells.size()) != coords + 1)
            throw FileError("field csv: wrong column count in row " +
                            std::to_string(row + 2));
        const auto node = g->interior_to_node(row);
        for (int a = 0; a < coords; ++a) {
            const double x = parse_number(cells[static_cast<size_t>(a)],
                                          "row " + std::to_string(row + 2));
            const double want = g->coordinate(a, node[a]);
            if (std::abs(x - want) > 1e-9 * (1.0 + std::abs(want)))
                throw FileError("field csv: node coordinates do not match the grid");
        }
        const double v = parse_number(cells[static_cast<size_t>(coords)],
                                      "row " + std::to_string(row + 2));
        if (!std::isfinite(v))
            throw FileError("field csv: non-finite value in row " +
                            std::to_string(row + 2));
        values[static_cast<size_t>(row)] = v;
        ++row;
    }
    if (row != g->interior_count())
        throw FileError("field csv: expected " +
                        std::to_string(g->interior_count()) + " rows, got " +
                        std::to_string(row));
    return Field(g, std::move(values));
}

void write_text_atomic(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path dir = target.parent_path().empty() ? fs::path(".")
                                                      : target.parent_path();
    const fs::path tmp = dir / (".tmp." + target.filename().string());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FileError("cannot open '" + tmp.string() + "' for writing");
        out.write(text.data(), static_cast<std::streamsize>(text.size()));
        if (!out) throw FileError("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec)
        throw FileError("rename '" + tmp.string() + "' -> '" + target.string() +
                        "' failed: " + ec.message());
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Field load_field_csv(const GridPtr& g, const std::string& path) {
    return field_from_csv(g, read_text_file(path));
}

} // namespace chainpde
