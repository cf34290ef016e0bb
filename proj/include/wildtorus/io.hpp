// Field snapshot files: one-line JSON header + little-endian float64
// row-major payload, extension `.tfield`.
#pragma once

#include "wildtorus/field.hpp"

#include <string>

namespace wt {

void write_tfield(const std::string& path, const Field& f, double time);

struct TFieldSnapshot {
    Field field;
    double time = 0.0;
};

TFieldSnapshot read_tfield(const std::string& path);

} // namespace wt
