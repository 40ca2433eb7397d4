#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nsfv/coupler.hpp"
#include "nsfv/diagnostics.hpp"
#include "nsfv/fields.hpp"

namespace nsfv {

enum class FieldTag : std::uint8_t { rho = 0, m_x = 1, m_y = 2, g = 3, theta = 4 };

const char* field_name(FieldTag tag);

inline constexpr std::uint32_t kSnapshotVersion = 1;

/// A set of fields on one grid at one time. The binary form is
///   "NSFV" | u32 version | u8 dim | u32 n per axis | f64 time | f64 eps |
///   u8 field count | u8 tag per field | f64 payload in tag order
/// all little-endian. The grid length is not stored; readers supply it.
struct Snapshot {
    PeriodicGrid grid;
    double time = 0.0;
    double eps = 0.0;
    std::vector<FieldTag> tags;
    std::vector<ScalarField> fields;

    /// Field by tag; throws IndexOutOfRange when absent.
    [[nodiscard]] const ScalarField& field(FieldTag tag) const;
    [[nodiscard]] bool has(FieldTag tag) const;
};

/// Sample k of a trajectory as (ρ, m, g, θ).
Snapshot snapshot_of(const SlabTrajectory& traj, std::size_t k);

std::vector<std::uint8_t> encode_snapshot(const Snapshot& snap);
/// Throws FormatError on bad magic, version, tags or truncation.
Snapshot decode_snapshot(const std::vector<std::uint8_t>& bytes, double length = 1.0);

/// Throws IOError when the file cannot be written or read.
void write_snapshot(const std::string& path, const Snapshot& snap);
Snapshot read_snapshot(const std::string& path, double length = 1.0);

/// Shortest round-trip decimal form, independent of the C++ locale.
std::string format_double(double v);

/// One row per sample, columns in DiagnosticSeries::column_names order.
std::string series_csv(const DiagnosticSeries& series);

/// One row per cell: cell-centre coordinates then every field.
std::string snapshot_csv(const Snapshot& snap);

/// Rebuilds a trajectory (ρ, m, u, g, θ) from time-ordered snapshots holding
/// at least ρ, m and g; θ is recomputed from (ρ, g) when absent.
SlabTrajectory trajectory_from_snapshots(const std::vector<Snapshot>& snaps, const VirialLaw& law);

}  // namespace nsfv
