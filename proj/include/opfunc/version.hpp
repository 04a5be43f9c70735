#pragma once

#define OPFUNC_VERSION "0.1.0"

namespace opfunc {
inline const char* version() { return OPFUNC_VERSION; }
}
