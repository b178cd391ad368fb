#pragma once

// Data-parallel kernels used by the enumeration oracles and the estimators.
// Every kernel has a serial reference and an OpenMP variant; both return
// bit-identical results because reductions break ties by lowest index.

#include <cstddef>
#include <exception>
#include <limits>
#include <vector>

#include <omp.h>

namespace greedylab {

enum class Backend { serial, openmp };

inline constexpr Backend kDefaultBackend = Backend::openmp;

namespace kernels {

/// Value and position of the best element of an indexed family.
struct ArgBest {
  double value = std::numeric_limits<double>::quiet_NaN();
  std::size_t index = 0;
  bool found = false;
};

namespace detail {

// NaN candidates never win.
inline bool improves_min(double v, std::size_t i, const ArgBest& b) {
  if (!(v == v)) return false;
  return !b.found || v < b.value || (v == b.value && i < b.index);
}

inline bool improves_max(double v, std::size_t i, const ArgBest& b) {
  if (!(v == v)) return false;
  return !b.found || v > b.value || (v == b.value && i < b.index);
}

// Re-raises the first exception captured inside a parallel region.
class ExceptionSlot {
 public:
  void capture() {
#pragma omp critical(greedylab_exception_slot)
    if (!ptr_) ptr_ = std::current_exception();
  }
  void rethrow() const {
    if (ptr_) std::rethrow_exception(ptr_);
  }

 private:
  std::exception_ptr ptr_;
};

}  // namespace detail

template <class T, class Fn>
std::vector<T> map_serial(std::size_t count, Fn&& fn) {
  std::vector<T> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = fn(i);
  return out;
}

template <class T, class Fn>
std::vector<T> map_openmp(std::size_t count, Fn&& fn) {
  std::vector<T> out(count);
  detail::ExceptionSlot err;
  const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(static_cast<std::size_t>(i));
    } catch (...) {
      err.capture();
    }
  }
  err.rethrow();
  return out;
}

template <class T, class Fn>
std::vector<T> map(std::size_t count, Fn&& fn, Backend backend) {
  return backend == Backend::openmp ? map_openmp<T>(count, fn) : map_serial<T>(count, fn);
}

template <class Fn>
ArgBest argmin_serial(std::size_t count, Fn&& fn) {
  ArgBest best;
  for (std::size_t i = 0; i < count; ++i) {
    const double v = fn(i);
    if (detail::improves_min(v, i, best)) best = {v, i, true};
  }
  return best;
}

template <class Fn>
ArgBest argmin_openmp(std::size_t count, Fn&& fn) {
  ArgBest best;
  detail::ExceptionSlot err;
  const auto n = static_cast<long long>(count);
#pragma omp parallel
  {
    ArgBest local;
#pragma omp for schedule(dynamic, 64) nowait
    for (long long i = 0; i < n; ++i) {
      try {
        const auto idx = static_cast<std::size_t>(i);
        const double v = fn(idx);
        if (detail::improves_min(v, idx, local)) local = {v, idx, true};
      } catch (...) {
        err.capture();
      }
    }
#pragma omp critical(greedylab_argmin)
    if (local.found && detail::improves_min(local.value, local.index, best)) best = local;
  }
  err.rethrow();
  return best;
}

template <class Fn>
ArgBest argmin(std::size_t count, Fn&& fn, Backend backend) {
  return backend == Backend::openmp ? argmin_openmp(count, fn) : argmin_serial(count, fn);
}

template <class Fn>
ArgBest argmax_serial(std::size_t count, Fn&& fn) {
  ArgBest best;
  for (std::size_t i = 0; i < count; ++i) {
    const double v = fn(i);
    if (detail::improves_max(v, i, best)) best = {v, i, true};
  }
  return best;
}

template <class Fn>
ArgBest argmax_openmp(std::size_t count, Fn&& fn) {
  ArgBest best;
  detail::ExceptionSlot err;
  const auto n = static_cast<long long>(count);
#pragma omp parallel
  {
    ArgBest local;
#pragma omp for schedule(dynamic, 64) nowait
    for (long long i = 0; i < n; ++i) {
      try {
        const auto idx = static_cast<std::size_t>(i);
        const double v = fn(idx);
        if (detail::improves_max(v, idx, local)) local = {v, idx, true};
      } catch (...) {
        err.capture();
      }
    }
#pragma omp critical(greedylab_argmax)
    if (local.found && detail::improves_max(local.value, local.index, best)) best = local;
  }
  err.rethrow();
  return best;
}

template <class Fn>
ArgBest argmax(std::size_t count, Fn&& fn, Backend backend) {
  return backend == Backend::openmp ? argmax_openmp(count, fn) : argmax_serial(count, fn);
}

}  // namespace kernels
}  // namespace greedylab
