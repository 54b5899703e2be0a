#include "plns/snapshot.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "plns/errors.hpp"

namespace plns {

namespace {

uint64_t swap_bytes(uint64_t v) {
    uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
}

uint64_t to_le_bits(double v) {
    uint64_t bits = std::bit_cast<uint64_t>(v);
    if constexpr (std::endian::native == std::endian::big) bits = swap_bytes(bits);
    return bits;
}

double from_le_bits(uint64_t bits) {
    if constexpr (std::endian::native == std::endian::big) bits = swap_bytes(bits);
    return std::bit_cast<double>(bits);
}

} // namespace

void write_snapshot(const std::string& path, const Field& f, double t) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw InvalidInput("write_snapshot: cannot open " + path);
    char header[128];
    std::snprintf(header, sizeof(header), "PLNS1 %d %d %d %.17g\n", f.grid().dim,
                  f.grid().n, f.ncomp(), t);
    os.write(header, static_cast<std::streamsize>(std::strlen(header)));
    const std::size_t np = f.num_points();
    std::vector<char> buf(np * static_cast<std::size_t>(f.ncomp()) * 8);
    std::size_t off = 0;
    for (std::size_t pt = 0; pt < np; ++pt)
        for (int c = 0; c < f.ncomp(); ++c) {
            uint64_t bits = to_le_bits(f.at(pt, c));
            std::memcpy(buf.data() + off, &bits, 8);
            off += 8;
        }
    os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!os) throw InvalidInput("write_snapshot: write failed for " + path);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw InvalidInput("read_snapshot: cannot open " + path);
    std::string header;
    if (!std::getline(is, header)) throw InvalidInput("read_snapshot: missing header in " + path);
    std::istringstream hs(header);
    std::string magic;
    int d = 0, n = 0, ncomp = 0;
    double t = 0.0;
    if (!(hs >> magic >> d >> n >> ncomp >> t) || magic != "PLNS1")
        throw InvalidInput("read_snapshot: malformed header in " + path + ": \"" + header + "\"");
    PeriodicGrid grid(d, n);
    if (ncomp < 1) throw InvalidInput("read_snapshot: bad component count in " + path);
    Field f(grid, ncomp);
    const std::size_t np = grid.num_points();
    std::vector<char> buf(np * static_cast<std::size_t>(ncomp) * 8);
    is.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (static_cast<std::size_t>(is.gcount()) != buf.size())
        throw InvalidInput("read_snapshot: truncated data in " + path);
    std::size_t off = 0;
    for (std::size_t pt = 0; pt < np; ++pt)
        for (int c = 0; c < ncomp; ++c) {
            uint64_t bits = 0;
            std::memcpy(&bits, buf.data() + off, 8);
            f.at(pt, c) = from_le_bits(bits);
            off += 8;
        }
    return Snapshot{std::move(f), t};
}

} // namespace plns
