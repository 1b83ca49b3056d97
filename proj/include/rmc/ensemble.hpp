#pragma once

// Index-parallel map used for every embarrassingly parallel loop in the
// toolkit (seeds, vertices, path times, sample pairs). The serial path is the
// reference implementation; the OpenMP path must reproduce it bit for bit,
// which holds because each index is computed independently and results are
// stored by index.

#include <cstddef>
#include <exception>
#include <type_traits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rmc {

enum class Execution { serial, parallel };

inline int available_threads() noexcept {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

template <class Fn>
auto map_indexed(std::size_t count, Fn&& fn, Execution exec)
    -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
    using Result = std::invoke_result_t<Fn&, std::size_t>;
    std::vector<Result> out(count);
    if (exec == Execution::serial || count < 2) {
        for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
        return out;
    }
    // exceptions must not escape an OpenMP region; keep the lowest-index one
    std::vector<std::exception_ptr> errors(count);
    const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < n; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        try {
            out[idx] = fn(idx);
        } catch (...) {
            errors[idx] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

}  // namespace rmc
