#include "nslab/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace nslab {

// Serialization assumes a little-endian host (the NSSF1 wire format).
static_assert(std::endian::native == std::endian::little,
              "NSSF1 serialization requires a little-endian host");

namespace {
constexpr char kMagic[6] = {'N', 'S', 'S', 'F', '1', '\0'};
}

void save_field(const SpectralVelocityField& u, double nu, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path.string() + "' for writing");
    out.write(kMagic, sizeof(kMagic));
    const std::uint32_t n = static_cast<std::uint32_t>(u.grid.n);
    const double length = u.grid.length;
    const double t = u.time_tag.value_or(0.0);
    out.write(reinterpret_cast<const char*>(&n), sizeof(n));
    out.write(reinterpret_cast<const char*>(&length), sizeof(length));
    out.write(reinterpret_cast<const char*>(&nu), sizeof(nu));
    out.write(reinterpret_cast<const char*>(&t), sizeof(t));
    for (int c = 0; c < 3; ++c)
        out.write(reinterpret_cast<const char*>(u.coeffs[c].data()),
                  static_cast<std::streamsize>(u.coeffs[c].size() * sizeof(cdouble)));
    if (!out) throw Error("write failed for '" + path.string() + "'");
}

FieldSnapshot load_field(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");

    char magic[6] = {};
    in.read(magic, sizeof(magic));
    if (in.gcount() < static_cast<std::streamsize>(sizeof(magic)) ||
        std::memcmp(magic, "NSSF", 4) != 0)
        throw FormatError("unrecognized format: bad magic in '" + path.string() + "'");
    if (magic[4] != '1' || magic[5] != '\0')
        throw FormatVersionError("unsupported snapshot format version in '" + path.string() +
                                 "'");

    std::uint32_t n = 0;
    double length = 0.0, nu = 0.0, t = 0.0;
    auto read_or_throw = [&](void* dst, std::size_t bytes) {
        in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(bytes));
        if (in.gcount() != static_cast<std::streamsize>(bytes))
            throw TruncatedPayloadError("unexpected end of payload in '" + path.string() + "'");
    };
    read_or_throw(&n, sizeof(n));
    read_or_throw(&length, sizeof(length));
    read_or_throw(&nu, sizeof(nu));
    read_or_throw(&t, sizeof(t));
    if (n < 4 || n % 2 != 0 || !(length > 0.0))
        throw FormatError("snapshot header carries an invalid grid");

    FieldSnapshot snap;
    snap.nu = nu;
    snap.field = SpectralVelocityField(WaveGrid{static_cast<int>(n), length});
    snap.field.time_tag = t;
    for (int c = 0; c < 3; ++c)
        read_or_throw(snap.field.coeffs[c].data(), snap.field.coeffs[c].size() * sizeof(cdouble));
    return snap;
}

}  // namespace nslab
