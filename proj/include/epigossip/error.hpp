#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace epigossip {

/// A fluent was queried deeper than the state tracks.
class DepthOverflowError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// A plan item could not be executed on an instance (bad edge, forbidden
/// change, malformed parallel step, wrong mode). `index` is the 0-based
/// position of the offending item.
class PlanExecutionError : public std::runtime_error {
public:
    PlanExecutionError(std::size_t index, const std::string& what)
        : std::runtime_error("plan item " + std::to_string(index + 1) + ": " + what),
          index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Text-format error with a 1-based line and column.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, int column, const std::string& what)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what),
          line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    int line_;
    int column_;
};

} // namespace epigossip
