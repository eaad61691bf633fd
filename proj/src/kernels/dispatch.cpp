// Copyright 2026 The cvforge Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cvforge/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace cvforge::kernels {

namespace {

const KernelTable *pick_default() noexcept {
    if (const char *env = std::getenv("CVFORGE_SIMD");
        env != nullptr && std::strcmp(env, "scalar") == 0) {
        return &scalar_table();
    }
    if (cpu_has_avx2()) {
        return avx2_table();
    }
    return &scalar_table();
}

std::atomic<const KernelTable *> &slot() noexcept {
    static std::atomic<const KernelTable *> table{pick_default()};
    return table;
}

} // namespace

bool cpu_has_avx2() noexcept {
#if defined(__x86_64__) || defined(_M_X64)
    if (avx2_table() == nullptr) {
        return false;
    }
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable &active() noexcept {
    return *slot().load(std::memory_order_relaxed);
}

bool select(Isa isa) noexcept {
    switch (isa) {
    case Isa::Scalar:
        slot().store(&scalar_table());
        return true;
    case Isa::Avx2:
        if (!cpu_has_avx2()) {
            return false;
        }
        slot().store(avx2_table());
        return true;
    }
    return false;
}

std::string_view isa_name(Isa isa) noexcept {
    switch (isa) {
    case Isa::Scalar:
        return "scalar";
    case Isa::Avx2:
        return "avx2";
    }
    return "unknown";
}

} // namespace cvforge::kernels
