#include "vdcsim/version.hpp"

namespace vdcsim {

const char* version() { return "0.1.0"; }

}  // namespace vdcsim
