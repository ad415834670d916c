#pragma once

#include <stdexcept>
#include <string>

namespace fanopa {

// Exit-code categories used by the CLI: config=1, numeric=2, fit=3, io=4.
enum class ErrorCategory { config = 1, numeric = 2, fit = 3, io = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorCategory cat, const std::string& msg)
        : std::runtime_error(msg), cat_(cat) {}
    ErrorCategory category() const noexcept { return cat_; }

private:
    ErrorCategory cat_;
};

// Config / input validation.
struct ValidationError : Error {
    explicit ValidationError(const std::string& m) : Error(ErrorCategory::config, m) {}
};
struct ParseError : Error {
    explicit ParseError(const std::string& m) : Error(ErrorCategory::config, m) {}
};

// Numeric evaluation.
struct DomainError : Error {
    explicit DomainError(const std::string& m) : Error(ErrorCategory::numeric, m) {}
};
struct SingularDenominator : Error {
    explicit SingularDenominator(const std::string& m) : Error(ErrorCategory::numeric, m) {}
};
struct UnitarityViolation : Error {
    explicit UnitarityViolation(const std::string& m) : Error(ErrorCategory::numeric, m) {}
};
struct QuadratureNonConvergence : Error {
    explicit QuadratureNonConvergence(const std::string& m) : Error(ErrorCategory::numeric, m) {}
};
struct NegativeRate : Error {
    explicit NegativeRate(const std::string& m) : Error(ErrorCategory::numeric, m) {}
};

// Fitting.
struct NoPeak : Error {
    explicit NoPeak(const std::string& m) : Error(ErrorCategory::fit, m) {}
};
struct DegenerateJacobian : Error {
    explicit DegenerateJacobian(const std::string& m) : Error(ErrorCategory::fit, m) {}
};
struct NonConvergence : Error {
    explicit NonConvergence(const std::string& m) : Error(ErrorCategory::fit, m) {}
};

// File I/O.
struct SchemaError : Error {
    explicit SchemaError(const std::string& m) : Error(ErrorCategory::io, m) {}
};
struct MonotonicityError : Error {
    explicit MonotonicityError(const std::string& m) : Error(ErrorCategory::io, m) {}
};
struct IoError : Error {
    explicit IoError(const std::string& m) : Error(ErrorCategory::io, m) {}
};

} // namespace fanopa
