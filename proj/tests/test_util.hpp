#pragma once

#include <optional>

#include "gradflow/error.hpp"

// Kind of the gradflow::Error thrown by f, or nullopt when f returns normally.
template <typename F>
std::optional<gradflow::ErrorKind> thrown_kind(F&& f) {
  try {
    f();
  } catch (const gradflow::Error& e) {
    return e.kind();
  }
  return std::nullopt;
}
