#pragma once

#include <filesystem>

#include "closure/field/field.hpp"

namespace closure {

/// Binary field file: 8-byte magic "CLFIELD1", uint32 component count (1 or 6),
/// uint32 zero, three uint64 dims, then little-endian float64 samples, one
/// row-major plane (z fastest) per component in the order 11,12,13,22,23,33.
/// A text sidecar "<file>.meta" repeats components, dims and the leaf time.
void write_scalar_field(const std::filesystem::path& path, const ScalarField& f, double time);
void write_tensor_field(const std::filesystem::path& path, const SymTensorField& f, double time);

/// Reads a field onto `chart`. Header, sidecar and chart dims must agree
/// (Shape); unreadable or truncated files raise Io.
ScalarField read_scalar_field(const std::filesystem::path& path, const GridChart& chart);
SymTensorField read_tensor_field(const std::filesystem::path& path, const GridChart& chart);

/// Leaf time recorded in the sidecar.
double read_field_time(const std::filesystem::path& path);

}  // namespace closure
