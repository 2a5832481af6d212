#include "nsp/kernels.hpp"

namespace nsp::kernels {

namespace {
bool g_parallel = true;
}

bool parallel_enabled() { return g_parallel; }
void set_parallel(bool on) { g_parallel = on; }

}  // namespace nsp::kernels
