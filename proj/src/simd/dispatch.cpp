#include <cstdlib>
#include <cstring>

#include "featalloc/simd.hpp"

namespace featalloc::simd {

#ifndef FEATALLOC_BUILD_AVX2
const Ops* avx2_ops() { return nullptr; }
#endif

const Ops& ops() {
    static const Ops* active = [] {
        const char* forced = std::getenv("FEATALLOC_SIMD");
        if (forced && std::strcmp(forced, "scalar") == 0) return &scalar_ops();
        if (const Ops* a = avx2_ops()) return a;
        return &scalar_ops();
    }();
    return *active;
}

}  // namespace featalloc::simd
