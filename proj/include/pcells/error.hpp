#ifndef PCELLS_ERROR_HPP
#define PCELLS_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pcells {

enum class ErrorCode {
    InvalidArgument,
    RowParseError,
    DuplicateId,
    TemporalViolation,
    EmptyCategorySet,
    InvalidCategoryCode,
    UnknownCategory,
    DegenerateTriple,
    InvalidSpec,
    EmptyDistribution,
    MissingReference,
    ZeroExpectation,
    NonPositiveValue,
    MixedDimensions,
    EmptyProfile,
    EmptyReport,
    IoError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library. `line` is set for ingestion errors
// (1-based physical line, header is line 1); `subject` carries the offending
// pub_id / code / path when one exists.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::string subject = {}, std::size_t line = 0)
        : std::runtime_error(message), code_(code), subject_(std::move(subject)), line_(line) {}

    ErrorCode code() const noexcept { return code_; }
    const std::string& subject() const noexcept { return subject_; }
    std::size_t line() const noexcept { return line_; }

private:
    ErrorCode code_;
    std::string subject_;
    std::size_t line_;
};

}  // namespace pcells

#endif
