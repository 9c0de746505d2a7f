#pragma once

#include <gtest/gtest.h>

#include "hydrograph/error.hpp"

// Asserts that `stmt` throws hydrograph::Error carrying `expected`.
#define EXPECT_ERROR_CODE(stmt, expected)                                       \
  do {                                                                          \
    try {                                                                       \
      stmt;                                                                     \
      ADD_FAILURE() << #stmt " did not throw";                                  \
    } catch (const ::hydrograph::Error& e_) {                                   \
      EXPECT_EQ(e_.code(), (expected)) << e_.what();                            \
    }                                                                           \
  } while (0)
