#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace grushin {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Geometry / closed forms -----------------------------------------------

struct DegenerateDimension : Error {
    explicit DegenerateDimension(const std::string& msg) : Error(msg) {}
};

struct OriginSingularity : Error {
    explicit OriginSingularity(const std::string& msg) : Error(msg) {}
};

struct OutsideSmoothRegion : Error {
    explicit OutsideSmoothRegion(const std::string& msg) : Error(msg) {}
};

// Grids / linear algebra ------------------------------------------------

struct GridTooSmall : Error {
    explicit GridTooSmall(const std::string& msg) : Error(msg) {}
};

struct GridMismatch : Error {
    explicit GridMismatch(const std::string& msg) : Error(msg) {}
};

struct MaxIterationsExceeded : Error {
    MaxIterationsExceeded(const std::string& msg, double achieved)
        : Error(msg), achieved_residual(achieved) {}
    double achieved_residual;
};

// Nonlinear solver --------------------------------------------------------

struct NewtonDiverged : Error {
    NewtonDiverged(const std::string& msg, std::vector<double> history)
        : Error(msg), residual_history(std::move(history)) {}
    std::vector<double> residual_history;
};

// Diagnostics -------------------------------------------------------------

struct PlaneOutsideGrid : Error {
    explicit PlaneOutsideGrid(const std::string& msg) : Error(msg) {}
};

struct InsufficientTail : Error {
    explicit InsufficientTail(const std::string& msg) : Error(msg) {}
};

struct DegenerateMaximum : Error {
    explicit DegenerateMaximum(const std::string& msg) : Error(msg) {}
};

struct NonpositiveCoefficient : Error {
    explicit NonpositiveCoefficient(const std::string& msg) : Error(msg) {}
};

// Configuration and file I/O ----------------------------------------------

struct ConfigParse : Error {
    ConfigParse(const std::string& msg, int line_no) : Error(msg), line(line_no) {}
    int line;
};

struct BadMagic : Error {
    explicit BadMagic(const std::string& msg) : Error(msg) {}
};

struct HeaderMismatch : Error {
    explicit HeaderMismatch(const std::string& msg) : Error(msg) {}
};

struct TruncatedPayload : Error {
    explicit TruncatedPayload(const std::string& msg) : Error(msg) {}
};

}  // namespace grushin
