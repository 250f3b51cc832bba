#include "apec/version.hpp"

namespace apec {

const char* version() { return APEC_VERSION; }

}  // namespace apec
