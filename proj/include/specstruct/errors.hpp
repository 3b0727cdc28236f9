#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace specstruct {

// Every failure raised by the library derives from Error so callers can
// separate input problems from programming errors (std::logic_error).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SPECSTRUCT_DEFINE_ERROR(Name)  \
  class Name : public Error {          \
   public:                             \
    using Error::Error;                \
  };

SPECSTRUCT_DEFINE_ERROR(InvalidIdentifier)
SPECSTRUCT_DEFINE_ERROR(UnknownElement)
SPECSTRUCT_DEFINE_ERROR(DuplicateNode)
SPECSTRUCT_DEFINE_ERROR(CycleError)
SPECSTRUCT_DEFINE_ERROR(EmptyPoset)
SPECSTRUCT_DEFINE_ERROR(TooLarge)
SPECSTRUCT_DEFINE_ERROR(NotGraded)
SPECSTRUCT_DEFINE_ERROR(NotEvaluableError)
SPECSTRUCT_DEFINE_ERROR(RankMismatch)
SPECSTRUCT_DEFINE_ERROR(PartialTable)
SPECSTRUCT_DEFINE_ERROR(Unrepairable)
SPECSTRUCT_DEFINE_ERROR(UnknownAction)
SPECSTRUCT_DEFINE_ERROR(IncompleteOracle)
SPECSTRUCT_DEFINE_ERROR(AmbiguousEquilibria)
SPECSTRUCT_DEFINE_ERROR(NoPureEquilibrium)
SPECSTRUCT_DEFINE_ERROR(PreconditionError)
SPECSTRUCT_DEFINE_ERROR(DanglingReference)

#undef SPECSTRUCT_DEFINE_ERROR

/// Malformed input text. Carries the file and 1-based line of the offending
/// directive; `what()` is already formatted as `file:line: message`.
class ParseError : public Error {
 public:
  ParseError(std::string file, std::size_t line, const std::string& message)
      : Error(file + ":" + std::to_string(line) + ": " + message),
        file_(std::move(file)),
        line_(line) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

}  // namespace specstruct
