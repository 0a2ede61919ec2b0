#include "mpdenoise/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace mpdn::kern {
namespace {

#if defined(__x86_64__) || defined(_M_X64) || defined(__i386__)
bool cpu_has_avx2() { return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"); }
#else
bool cpu_has_avx2() { return false; }
#endif

Isa pick_default() {
    if (const char* env = std::getenv("MPDENOISE_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
        if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) return Isa::avx2;
        // "auto" or anything else falls through to detection
    }
    return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

std::atomic<Isa>& active() {
    static std::atomic<Isa> isa{pick_default()};
    return isa;
}

} // namespace

bool avx2_supported() { return cpu_has_avx2(); }

const Ops& ops() { return active().load() == Isa::avx2 ? avx2_ops() : scalar_ops(); }

Isa active_isa() { return active().load(); }

void force_isa(Isa isa) {
    if (isa == Isa::avx2 && !cpu_has_avx2()) isa = Isa::scalar;
    active().store(isa);
}

} // namespace mpdn::kern
