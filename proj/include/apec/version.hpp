#pragma once

namespace apec {

const char* version();

}  // namespace apec
