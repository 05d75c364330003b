#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <system_error>

#include "vibrodiag/error.hpp"

namespace vibrodiag {

// Shortest decimal representation that round-trips to the same double.
// Used for every serialized parameter and feature so that write -> read
// reproduces values bit for bit.
inline std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) throw NumericError("format_double: conversion failed");
  return std::string(buf, ptr);
}

inline double parse_double(std::string_view text) {
  double v = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw DataError("not a number: '" + std::string(text) + "'");
  }
  return v;
}

inline long long parse_int(std::string_view text) {
  long long v = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc{} || ptr != last) {
    throw DataError("not an integer: '" + std::string(text) + "'");
  }
  return v;
}

}  // namespace vibrodiag
