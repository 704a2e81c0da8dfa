#pragma once

#include <doctest.h>

#include <functional>

#include "rigaspec/error.hpp"

// Runs f and checks that it throws rigaspec::Error with the given code.
inline void check_error(rigaspec::ErrorCode code, const std::function<void()>& f) {
  bool thrown = false;
  try {
    f();
  } catch (const rigaspec::Error& e) {
    thrown = true;
    CHECK(e.code() == code);
  }
  CHECK_MESSAGE(thrown, "expected " << rigaspec::to_string(code));
}
