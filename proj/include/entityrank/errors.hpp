#pragma once

#include <stdexcept>
#include <string>

namespace entityrank {

/// Base class for all data and usage errors raised by the library.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A malformed input file. Carries the file name and 1-based line number
/// so the CLI can print a one-line diagnostic.
class ParseError : public Error {
  public:
    ParseError(std::string file, size_t line, const std::string& what)
        : Error(file + " line " + std::to_string(line) + ": " + what),
          file_(std::move(file)),
          line_(line) {}

    const std::string& file() const { return file_; }
    size_t line() const { return line_; }

  private:
    std::string file_;
    size_t line_;
};

class MissingSegmentation : public Error {
  public:
    using Error::Error;
};

class EmptyCorpus : public Error {
  public:
    using Error::Error;
};

class MalformedHeader : public Error {
  public:
    using Error::Error;
};

class DimensionMismatch : public Error {
  public:
    using Error::Error;
};

class ZeroNormVector : public Error {
  public:
    using Error::Error;
};

class UnexpectedEof : public Error {
  public:
    using Error::Error;
};

class EmptySentence : public Error {
  public:
    using Error::Error;
};

class EmptyQuery : public Error {
  public:
    using Error::Error;
};

class EmptyTraining : public Error {
  public:
    using Error::Error;
};

class SingleClassTraining : public Error {
  public:
    using Error::Error;
};

class TooFewQueries : public Error {
  public:
    using Error::Error;
};

class LengthMismatch : public Error {
  public:
    using Error::Error;
};

class EmptyList : public Error {
  public:
    using Error::Error;
};

}  // namespace entityrank
