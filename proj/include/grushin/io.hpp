#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "grushin/grid.hpp"

namespace grushin {

/// Doubles rendered with 17 significant digits ('.' decimal separator),
/// which round-trips IEEE doubles exactly.
std::string format_double(double v);

/// Field file format "GRSH1": text header (magic, dimensions and gamma,
/// per-axis node counts, per-axis bounds), then the nodal values as raw
/// little-endian 64-bit floats in lexicographic x-major order.
void write_field(const std::string& path, const Field& field);

/// Throws BadMagic / HeaderMismatch / TruncatedPayload on malformed files.
Field read_field(const std::string& path);

/// One row per node: coordinates then value.
void write_field_csv(const std::string& path, const Field& field);

/// Minimal CSV emitter; callers format numbers via format_double so that
/// artifacts are byte-stable across runs.
class CsvWriter {
public:
    explicit CsvWriter(const std::string& path);
    void row(const std::vector<std::string>& cells);

private:
    std::ofstream out_;
};

}  // namespace grushin
