#include "rrk/errors.hpp"

namespace rrk {

namespace {
std::string with_position(const std::string& what, int line, int column) {
  if (line <= 0) return what;
  return what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")";
}
}  // namespace

ParseError::ParseError(const std::string& what, int line, int column)
    : Error(ErrorKind::Usage, with_position(what, line, column)), line_(line), column_(column) {}

}  // namespace rrk
