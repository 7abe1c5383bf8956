#pragma once

#include <stdexcept>
#include <string>

namespace vdcsim {

// Numerical precondition violated (bad rotation matrix, loss of positive
// definiteness, failed convergence).
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Pose outside the admissible mechanism workspace (degenerate triangle,
// stroke limit, arccos domain violation).
class WorkspaceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Kinematic singularity beyond the configured guards.
class SingularityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace vdcsim
