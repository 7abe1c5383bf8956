#pragma once

namespace vdcsim {

const char* version();

}  // namespace vdcsim
