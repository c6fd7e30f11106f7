#ifndef DTQ_ERRORS_HPP
#define DTQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dtq {

// Bad input data or parameters. The CLI maps this to exit status 1.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed record in a line-oriented input; carries the 1-based line number.
class ParseError : public ValidationError {
public:
    ParseError(std::size_t line, const std::string& what)
        : ValidationError("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// File could not be opened, read, or written. The CLI maps this to exit status 2.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace dtq

#endif
