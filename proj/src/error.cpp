// SPDX-License-Identifier: Apache-2.0

#include "pfem/error.hpp"

namespace pfem
{

std::string_view to_string(ErrorKind kind)
{
  switch (kind)
  {
  case ErrorKind::InvalidArgument: return "invalid argument";
  case ErrorKind::DegenerateCell: return "degenerate cell";
  case ErrorKind::UnsupportedDegree: return "unsupported degree";
  case ErrorKind::FamilyMismatch: return "family mismatch";
  case ErrorKind::InvalidCombination: return "invalid combination";
  case ErrorKind::ShapeMismatch: return "shape mismatch";
  case ErrorKind::MaterialError: return "material error";
  case ErrorKind::SolverFailure: return "solver failure";
  case ErrorKind::NotApplicable: return "not applicable";
  }
  return "unknown";
}

}  // namespace pfem
