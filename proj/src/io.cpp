#include "grushin/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <sstream>

namespace grushin {

static_assert(std::endian::native == std::endian::little,
              "field files are little-endian; wire up byte swapping for this platform");

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_field(const std::string& path, const Field& field) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("write_field: cannot open " + path);
    const GridSpec& grid = field.grid;
    out << "GRSH1\n";
    out << grid.params.x_dim << ' ' << grid.params.y_dim << ' '
        << format_double(grid.params.gamma) << '\n';
    for (int a = 0; a < grid.axes(); ++a) {
        out << grid.dims[a] << (a + 1 < grid.axes() ? ' ' : '\n');
    }
    for (int a = 0; a < grid.axes(); ++a) {
        out << format_double(grid.lo[a]) << ' ' << format_double(grid.hi[a])
            << (a + 1 < grid.axes() ? ' ' : '\n');
    }
    out.write(reinterpret_cast<const char*>(field.values.data()),
              static_cast<std::streamsize>(field.values.size() * sizeof(double)));
    if (!out) throw Error("write_field: write failed for " + path);
}

Field read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("read_field: cannot open " + path);

    std::string magic;
    if (!std::getline(in, magic) || magic != "GRSH1") {
        throw BadMagic("read_field: bad magic in " + path);
    }

    std::string line;
    if (!std::getline(in, line)) throw HeaderMismatch("read_field: missing dimension line");
    GrushinParams params;
    {
        std::istringstream ss(line);
        if (!(ss >> params.x_dim >> params.y_dim >> params.gamma)) {
            throw HeaderMismatch("read_field: malformed dimension line");
        }
    }
    if (params.x_dim < 1 || params.y_dim < 1 || !(params.gamma > 0.0)) {
        throw HeaderMismatch("read_field: invalid dimensions or gamma");
    }
    const int n_axes = params.topological_dimension();

    if (!std::getline(in, line)) throw HeaderMismatch("read_field: missing node-count line");
    std::vector<int> dims(static_cast<std::size_t>(n_axes));
    {
        std::istringstream ss(line);
        for (int a = 0; a < n_axes; ++a) {
            if (!(ss >> dims[a])) throw HeaderMismatch("read_field: malformed node counts");
        }
    }

    if (!std::getline(in, line)) throw HeaderMismatch("read_field: missing bounds line");
    std::vector<double> lo(static_cast<std::size_t>(n_axes)), hi(static_cast<std::size_t>(n_axes));
    {
        std::istringstream ss(line);
        for (int a = 0; a < n_axes; ++a) {
            if (!(ss >> lo[a] >> hi[a])) throw HeaderMismatch("read_field: malformed bounds");
        }
    }

    GridSpec grid;
    try {
        grid = GridSpec(params, std::move(dims), std::move(lo), std::move(hi));
    } catch (const Error& err) {
        throw HeaderMismatch(std::string("read_field: inconsistent header: ") + err.what());
    }

    Field field(grid);
    const std::streamsize bytes =
        static_cast<std::streamsize>(field.values.size() * sizeof(double));
    in.read(reinterpret_cast<char*>(field.values.data()), bytes);
    if (in.gcount() != bytes) {
        throw TruncatedPayload("read_field: payload shorter than the header promises");
    }
    char extra;
    if (in.read(&extra, 1); in.gcount() != 0) {
        throw HeaderMismatch("read_field: trailing bytes after the payload");
    }
    return field;
}

void write_field_csv(const std::string& path, const Field& field) {
    CsvWriter csv(path);
    const GridSpec& grid = field.grid;
    std::vector<std::string> header;
    for (int a = 0; a < grid.params.x_dim; ++a) header.push_back("x" + std::to_string(a));
    for (int a = 0; a < grid.params.y_dim; ++a) header.push_back("y" + std::to_string(a));
    header.push_back("value");
    csv.row(header);

    std::vector<int> idx;
    std::vector<std::string> cells;
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        grid.unflatten(i, idx);
        cells.clear();
        for (int a = 0; a < grid.axes(); ++a) cells.push_back(format_double(grid.coord(a, idx[a])));
        cells.push_back(format_double(field.values[i]));
        csv.row(cells);
    }
}

CsvWriter::CsvWriter(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw Error("CsvWriter: cannot open " + path);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
    }
}

}  // namespace grushin
