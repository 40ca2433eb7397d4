#include "nsfv/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>

#include "nsfv/errors.hpp"
#include "nsfv/hydro.hpp"
#include "nsfv/thermal.hpp"

namespace nsfv {

namespace {

constexpr char kMagic[4] = {'N', 'S', 'F', 'V'};

template <class T>
void put(std::vector<std::uint8_t>& out, T value) {
    auto bits = std::bit_cast<std::array<std::uint8_t, sizeof(T)>>(value);
    if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
    out.insert(out.end(), bits.begin(), bits.end());
}

class Reader {
public:
    explicit Reader(const std::vector<std::uint8_t>& b) : b_(b) {}

    template <class T>
    T get(const char* what) {
        if (pos_ + sizeof(T) > b_.size()) throw FormatError(std::string("snapshot truncated while reading ") + what);
        std::array<std::uint8_t, sizeof(T)> bits;
        std::memcpy(bits.data(), b_.data() + pos_, sizeof(T));
        if constexpr (std::endian::native == std::endian::big) std::reverse(bits.begin(), bits.end());
        pos_ += sizeof(T);
        return std::bit_cast<T>(bits);
    }
    [[nodiscard]] std::size_t remaining() const { return b_.size() - pos_; }

private:
    const std::vector<std::uint8_t>& b_;
    std::size_t pos_ = 0;
};

}  // namespace

const char* field_name(FieldTag tag) {
    switch (tag) {
        case FieldTag::rho: return "rho";
        case FieldTag::m_x: return "m_x";
        case FieldTag::m_y: return "m_y";
        case FieldTag::g: return "g";
        case FieldTag::theta: return "theta";
    }
    return "?";
}

bool Snapshot::has(FieldTag tag) const { return std::find(tags.begin(), tags.end(), tag) != tags.end(); }

const ScalarField& Snapshot::field(FieldTag tag) const {
    for (std::size_t i = 0; i < tags.size(); ++i)
        if (tags[i] == tag) return fields[i];
    throw IndexOutOfRange(std::string("snapshot has no field ") + field_name(tag));
}

Snapshot snapshot_of(const SlabTrajectory& traj, std::size_t k) {
    Snapshot s;
    s.grid = traj.grid();
    s.time = traj.times.at(k);
    s.eps = traj.eps;
    s.tags.push_back(FieldTag::rho);
    s.fields.push_back(traj.rho[k]);
    s.tags.push_back(FieldTag::m_x);
    s.fields.push_back(traj.m[k][0]);
    if (s.grid.dim == 2) {
        s.tags.push_back(FieldTag::m_y);
        s.fields.push_back(traj.m[k][1]);
    }
    s.tags.push_back(FieldTag::g);
    s.fields.push_back(traj.g[k]);
    s.tags.push_back(FieldTag::theta);
    s.fields.push_back(traj.theta[k]);
    return s;
}

std::vector<std::uint8_t> encode_snapshot(const Snapshot& snap) {
    if (snap.tags.size() != snap.fields.size()) throw FormatError("snapshot tag and field counts differ");
    if (snap.tags.size() > 255) throw FormatError("too many snapshot fields");
    std::vector<std::uint8_t> out(kMagic, kMagic + 4);
    put<std::uint32_t>(out, kSnapshotVersion);
    put<std::uint8_t>(out, static_cast<std::uint8_t>(snap.grid.dim));
    for (int a = 0; a < snap.grid.dim; ++a) put<std::uint32_t>(out, static_cast<std::uint32_t>(snap.grid.n));
    put<double>(out, snap.time);
    put<double>(out, snap.eps);
    put<std::uint8_t>(out, static_cast<std::uint8_t>(snap.tags.size()));
    for (FieldTag t : snap.tags) put<std::uint8_t>(out, static_cast<std::uint8_t>(t));
    for (const auto& f : snap.fields) {
        if (f.size() != snap.grid.size()) throw FormatError("snapshot field size does not match the grid");
        for (double v : f.values()) put<double>(out, v);
    }
    return out;
}

Snapshot decode_snapshot(const std::vector<std::uint8_t>& bytes, double length) {
    if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) throw FormatError("not a snapshot (bad magic)");
    Reader r(bytes);
    for (int i = 0; i < 4; ++i) r.get<std::uint8_t>("magic");
    const auto version = r.get<std::uint32_t>("version");
    if (version != kSnapshotVersion)
        throw FormatError("snapshot version mismatch: expected " + std::to_string(kSnapshotVersion) + ", found " +
                          std::to_string(version));
    const int dim = r.get<std::uint8_t>("dim");
    if (dim != 1 && dim != 2) throw FormatError("snapshot dim must be 1 or 2, found " + std::to_string(dim));
    std::uint32_t n = 0;
    for (int a = 0; a < dim; ++a) {
        const auto na = r.get<std::uint32_t>("grid size");
        if (a > 0 && na != n) throw FormatError("snapshot axes differ in size");
        n = na;
    }
    if (n < 8 || n > (1u << 16)) throw FormatError("snapshot grid size out of range: " + std::to_string(n));
    Snapshot s;
    s.grid = PeriodicGrid(dim, static_cast<int>(n), length);
    s.time = r.get<double>("time");
    s.eps = r.get<double>("eps");
    const int count = r.get<std::uint8_t>("field count");
    for (int i = 0; i < count; ++i) {
        const auto t = r.get<std::uint8_t>("field tag");
        if (t > 4) throw FormatError("unknown snapshot field tag " + std::to_string(t));
        s.tags.push_back(static_cast<FieldTag>(t));
    }
    if (r.remaining() != static_cast<std::size_t>(count) * s.grid.size() * sizeof(double))
        throw FormatError("snapshot payload has " + std::to_string(r.remaining()) + " bytes, expected " +
                          std::to_string(static_cast<std::size_t>(count) * s.grid.size() * sizeof(double)));
    for (int i = 0; i < count; ++i) {
        std::vector<double> vals(s.grid.size());
        for (auto& v : vals) v = r.get<double>("payload");
        s.fields.emplace_back(s.grid, std::move(vals));
    }
    return s;
}

void write_snapshot(const std::string& path, const Snapshot& snap) {
    const auto bytes = encode_snapshot(snap);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IOError("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IOError("failed writing " + path);
}

Snapshot read_snapshot(const std::string& path, double length) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IOError("cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_snapshot(bytes, length);
}

std::string format_double(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string series_csv(const DiagnosticSeries& series) {
    std::string out;
    for (std::size_t c = 0; c < series.column_names.size(); ++c) {
        if (c) out += ',';
        out += series.column_names[c];
    }
    out += '\n';
    for (std::size_t k = 0; k < series.size(); ++k) {
        for (std::size_t c = 0; c < series.column_names.size(); ++c) {
            if (c) out += ',';
            out += format_double(series.column(c)[k]);
        }
        out += '\n';
    }
    return out;
}

std::string snapshot_csv(const Snapshot& snap) {
    std::string out = snap.grid.dim == 2 ? "x,y" : "x";
    for (FieldTag t : snap.tags) out += std::string(",") + field_name(t);
    out += '\n';
    for (std::size_t c = 0; c < snap.grid.size(); ++c) {
        out += format_double(snap.grid.center(c, 0));
        if (snap.grid.dim == 2) out += "," + format_double(snap.grid.center(c, 1));
        for (const auto& f : snap.fields) out += "," + format_double(f[c]);
        out += '\n';
    }
    return out;
}

SlabTrajectory trajectory_from_snapshots(const std::vector<Snapshot>& snaps, const VirialLaw& law) {
    if (snaps.empty()) throw ConfigError("no snapshots to diagnose");
    SlabTrajectory traj;
    traj.eps = snaps.front().eps;
    for (const auto& s : snaps) {
        if (!(s.grid == snaps.front().grid)) throw FormatError("snapshots are on different grids");
        if (!traj.times.empty() && !(s.time > traj.times.back()))
            throw FormatError("snapshot times are not increasing");
        HydroState h{s.field(FieldTag::rho), VectorField(s.grid), s.time};
        h.m[0] = s.field(FieldTag::m_x);
        if (s.grid.dim == 2) h.m[1] = s.field(FieldTag::m_y);
        traj.times.push_back(s.time);
        traj.rho.push_back(h.rho);
        traj.m.push_back(h.m);
        traj.u.push_back(velocity(h));
        traj.g.push_back(s.field(FieldTag::g));
        traj.theta.push_back(s.has(FieldTag::theta) ? s.field(FieldTag::theta)
                                                    : theta_field(traj.g.back(), h.rho, law, s.eps));
    }
    return traj;
}

}  // namespace nsfv
