#include "feq/error.hpp"

namespace feq {

namespace {

std::string join_failures(const std::vector<std::string>& failures) {
  std::string out = "constraint violation";
  for (std::size_t i = 0; i < failures.size(); ++i) {
    out += (i == 0 ? ": " : "; ");
    out += failures[i];
  }
  return out;
}

}  // namespace

ConstraintViolation::ConstraintViolation(std::vector<std::string> failures)
    : Error(join_failures(failures)), failures_(std::move(failures)) {}

}  // namespace feq
