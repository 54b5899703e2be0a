#pragma once

#include <string>

#include "plns/field.hpp"

namespace plns {

struct Snapshot {
    Field field;
    double t = 0.0;
};

// Binary field snapshot, bit-exact round trip.
// Layout: ASCII header "PLNS1 <d> <n> <components> <t>\n", then n^d * components
// little-endian 8-byte doubles, row-major over points, components fastest.
void write_snapshot(const std::string& path, const Field& f, double t);
Snapshot read_snapshot(const std::string& path);

} // namespace plns
