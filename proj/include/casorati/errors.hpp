#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace casorati {

/// Base class of all errors thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed expression text. `position` is a 0-based byte offset into the source.
struct SyntaxError : Error {
    std::size_t position;
    std::string expected;
    SyntaxError(std::size_t pos, std::string what_expected)
        : Error("syntax error at offset " + std::to_string(pos) + ": expected " + what_expected),
          position(pos),
          expected(std::move(what_expected)) {}
};

/// Identifier that is neither a variable u1..un, a declared parameter, nor a builtin.
struct UnknownIdentifier : Error {
    std::string name;
    std::size_t position;
    UnknownIdentifier(std::string id, std::size_t pos, const std::string& detail = "")
        : Error("unknown identifier '" + id + "' at offset " + std::to_string(pos) +
                (detail.empty() ? "" : " (" + detail + ")")),
          name(std::move(id)),
          position(pos) {}
};

/// Malformed or inconsistent immersion file.
struct FileFormatError : Error {
    explicit FileFormatError(const std::string& msg) : Error("invalid immersion file: " + msg) {}
};

/// Evaluation left the domain of a function (log/sqrt of a nonpositive value, division
/// by a vanishing denominator, general powers of a nonpositive base).
struct DomainError : Error {
    std::string function;
    double argument;
    DomainError(std::string fn, double arg)
        : Error("domain error in " + fn + " at argument " + std::to_string(arg)),
          function(std::move(fn)),
          argument(arg) {}
};

/// Jacobian (or metric) numerically rank deficient at the evaluation point.
struct RankDeficient : Error {
    std::vector<double> singular_values;
    explicit RankDeficient(std::vector<double> sv)
        : Error(describe(sv)), singular_values(std::move(sv)) {}

  private:
    static std::string describe(const std::vector<double>& sv) {
        std::string s = "rank deficient: singular values [";
        for (std::size_t i = 0; i < sv.size(); ++i)
            s += (i ? ", " : "") + std::to_string(sv[i]);
        return s + "]";
    }
};

/// Operands have incompatible shapes.
struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg) : Error("dimension mismatch: " + msg) {}
};

/// Requested operation needs dimensions the immersion does not have.
struct DimensionError : Error {
    explicit DimensionError(const std::string& msg) : Error("dimension error: " + msg) {}
};

/// Vector required to be unit length is not.
struct NotUnit : Error {
    double norm;
    explicit NotUnit(double got)
        : Error("expected a unit vector, got norm " + std::to_string(got)), norm(got) {}
};

/// Point failed the Lagrangian test required by the requested operation.
struct NotLagrangian : Error {
    double residual;
    explicit NotLagrangian(double res)
        : Error("not Lagrangian: residual " + std::to_string(res)), residual(res) {}
};

}  // namespace casorati
