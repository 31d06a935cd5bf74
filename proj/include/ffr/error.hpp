#ifndef FFR_ERROR_HPP
#define FFR_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ffr {

/// Malformed textual input (.bench, GML, CSV, stimulus JSON). Carries a
/// 1-based location when one is known; line 0 means "whole input".
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, int line = 0, int column = 0)
        : std::runtime_error(format(msg, line, column)), line_(line), column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    static std::string format(const std::string& msg, int line, int column) {
        if (line <= 0) return msg;
        std::string s = "line " + std::to_string(line);
        if (column > 0) s += ", col " + std::to_string(column);
        return s + ": " + msg;
    }
    int line_;
    int column_;
};

/// Semantically invalid data: contract violations, missing files,
/// mismatched shapes, out-of-range values.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Non-finite loss or other numeric breakdown. epoch() is the first
/// epoch at which the failure was observed (-1 if not epoch-bound).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg, int epoch = -1)
        : std::runtime_error(epoch >= 0 ? msg + " (epoch " + std::to_string(epoch) + ")" : msg),
          epoch_(epoch) {}

    int epoch() const { return epoch_; }

private:
    int epoch_;
};

} // namespace ffr

#endif
