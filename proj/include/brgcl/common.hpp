#pragma once

#include <cstddef>
#include <cstdint>

namespace brgcl {

#ifdef BRGCL_REAL32
using real_t = float;
#else
using real_t = double;
#endif

}  // namespace brgcl
