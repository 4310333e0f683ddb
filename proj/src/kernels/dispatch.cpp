#include <atomic>

#include "ivnow/core/error.hpp"
#include "ivnow/kernels/kernels.hpp"

namespace ivnow::kernels {

bool avx2_supported() {
#if defined(__x86_64__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

namespace {

const KernelTable* best_table() {
#if defined(__x86_64__)
    if (avx2_supported())
        return &avx2_table;
#endif
    return &scalar_table;
}

std::atomic<const KernelTable*> g_active{nullptr};

}  // namespace

void set_lane(Lane lane) {
    switch (lane) {
        case Lane::automatic:
            g_active.store(best_table());
            return;
        case Lane::scalar:
            g_active.store(&scalar_table);
            return;
        case Lane::avx2:
#if defined(__x86_64__)
            if (avx2_supported()) {
                g_active.store(&avx2_table);
                return;
            }
#endif
            raise(Err::config_error, "avx2 kernel lane not supported on this host");
    }
}

Lane parse_lane(const std::string& name) {
    if (name == "auto")
        return Lane::automatic;
    if (name == "scalar")
        return Lane::scalar;
    if (name == "avx2")
        return Lane::avx2;
    raise(Err::config_error, "unknown kernel lane '" + name + "' (auto|scalar|avx2)");
}

const KernelTable& active() {
    const KernelTable* t = g_active.load();
    if (!t) {
        t = best_table();
        g_active.store(t);
    }
    return *t;
}

}  // namespace ivnow::kernels
