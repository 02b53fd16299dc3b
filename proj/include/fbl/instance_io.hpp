#pragma once

#include <istream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fbl/model.hpp"

namespace fbl {

/// Error raised while reading the instance text format. `line()` is 1-based.
class ParseError : public std::runtime_error {
public:
    ParseError(int line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

// Instance text format, one directive per line, '#' starts a comment:
//
//   buffer <B>
//   alpha <num>/<den>
//   packet <step> <seq> <one|alpha>
//
// `buffer` and `alpha` may appear anywhere, exactly once each. Packets must be
// strictly ascending by (step, seq) and receive ids 0..n-1 in file order.
Instance parse_instance(std::istream& in);
Instance parse_instance(std::string_view text);
Instance load_instance(const std::string& path);

/// Canonical text rendering; parse_instance(format_instance(x)) == x for any
/// instance whose ids are 0..n-1 in key order.
std::string format_instance(const Instance& inst);

}  // namespace fbl
