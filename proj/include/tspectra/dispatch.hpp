#pragma once

#include <utility>

#include "tspectra/mpfloat.hpp"
#include "tspectra/precision.hpp"

namespace tspectra {

/// Call fn.template operator()<Real>() with Real = double for a 53-bit context
/// and Real = mp::Float otherwise. Both instantiations must return the same type.
template <class Fn>
decltype(auto) with_scalar(const PrecisionContext& ctx, Fn&& fn) {
  if (ctx.is_native_double()) return std::forward<Fn>(fn).template operator()<double>();
  return std::forward<Fn>(fn).template operator()<mp::Float>();
}

}  // namespace tspectra
