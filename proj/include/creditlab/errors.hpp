#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace creditlab {

// Base type for every error raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A Table 1 denominator was exactly zero for one record.
struct DivisionByZero : Error {
    explicit DivisionByZero(std::string code)
        : Error("division by zero computing ratio " + code), ratio_code(std::move(code)) {}
    std::string ratio_code;
};

// Malformed cell or row. `row` is the physical line number (header = line 1).
struct ParseError : Error {
    ParseError(std::size_t row_, std::string column_)
        : Error("parse error at row " + std::to_string(row_) + ", column '" + column_ + "'"),
          row(row_), column(std::move(column_)) {}
    std::size_t row;
    std::string column;
};

struct MissingColumn : Error {
    explicit MissingColumn(std::string name_)
        : Error("missing column '" + name_ + "'"), name(std::move(name_)) {}
    std::string name;
};

// Label outside {0,1}. `row` is the physical line number.
struct InvalidLabel : Error {
    explicit InvalidLabel(std::size_t row_)
        : Error("invalid label at row " + std::to_string(row_) + " (must be 0 or 1)"), row(row_) {}
    std::size_t row;
};

// Statement columns and ratio columns may not be mixed in one file.
struct InvalidSchema : Error {
    using Error::Error;
};

struct YearOutsideSplit : Error {
    YearOutsideSplit(std::string firm_id_, int year_)
        : Error("record '" + firm_id_ + "' has year " + std::to_string(year_) +
                " outside the base/test split"),
          firm_id(std::move(firm_id_)), year(year_) {}
    std::string firm_id;
    int year;
};

// Zero within-group sum of squares: the F statistic is not defined.
struct DegenerateVariable : Error {
    explicit DegenerateVariable(std::string code)
        : Error("degenerate variable " + code + " (zero within-group variance)"),
          variable(std::move(code)) {}
    std::string variable;
};

struct MissingClass : Error {
    explicit MissingClass(int label_)
        : Error("class " + std::to_string(label_) + " has no records"), label(label_) {}
    int label;
};

struct SingularWithinCovariance : Error {
    SingularWithinCovariance() : Error("pooled within-group covariance is singular") {}
};

// Group means are identical: the discriminant direction is the zero vector.
struct NoSeparation : Error {
    NoSeparation() : Error("group means coincide; no discriminant direction exists") {}
};

struct NoVariableSelected : Error {
    NoVariableSelected() : Error("no candidate variable cleared the F-to-enter threshold") {}
};

struct DimensionMismatch : Error {
    DimensionMismatch(std::size_t expected_, std::size_t got_)
        : Error("dimension mismatch: expected " + std::to_string(expected_) + ", got " +
                std::to_string(got_)),
          expected(expected_), got(got_) {}
    std::size_t expected;
    std::size_t got;
};

struct LengthMismatch : Error {
    LengthMismatch(std::size_t lhs, std::size_t rhs)
        : Error("length mismatch: " + std::to_string(lhs) + " vs " + std::to_string(rhs)) {}
};

struct EmptyInput : Error {
    EmptyInput() : Error("input is empty") {}
};

struct InvalidArchitecture : Error {
    using Error::Error;
};

struct NotPositiveDefinite : Error {
    NotPositiveDefinite() : Error("covariance matrix is not symmetric positive definite") {}
};

// Problems in a pipeline configuration file.
struct ConfigError : Error {
    using Error::Error;
};

// Wraps any module error with the pipeline stage it occurred in.
struct PipelineError : Error {
    PipelineError(std::string stage_, const std::string& cause)
        : Error("stage '" + stage_ + "': " + cause), stage(std::move(stage_)) {}
    std::string stage;
};

}  // namespace creditlab
