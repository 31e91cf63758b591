// SPDX-License-Identifier: Apache-2.0

#ifndef PFEM_ERROR_HPP
#define PFEM_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace pfem
{

enum class ErrorKind
{
  InvalidArgument,
  DegenerateCell,
  UnsupportedDegree,
  FamilyMismatch,
  InvalidCombination,
  ShapeMismatch,
  MaterialError,
  SolverFailure,
  NotApplicable,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error
{
public:
  Error(ErrorKind kind, const std::string &what)
    : std::runtime_error(what), kind_(kind)
  {
  }

  ErrorKind kind() const { return kind_; }

private:
  ErrorKind kind_;
};

#define PFEM_THROW_IF(cond, kind, msg)                                                   \
  do                                                                                     \
  {                                                                                      \
    if (cond)                                                                            \
    {                                                                                    \
      throw ::pfem::Error(::pfem::ErrorKind::kind, msg);                                 \
    }                                                                                    \
  } while (false)

}  // namespace pfem

#endif  // PFEM_ERROR_HPP
