#pragma once

#include <cstdint>
#include <filesystem>

#include "residlab/filters.hpp"
#include "residlab/solver.hpp"

namespace residlab {

// Binary container shared by trajectory checkpoints, force files and residual
// snapshots.  All integers and IEEE-754 doubles are little-endian on disk
// (swapped on big-endian hosts).  Layout:
//   offset  0:  8-byte magic ("RLABCKP1", "RLABFRC1" or "RLABRES1")
//   offset  8:  u32 version (1)
//   offset 12:  u32 grid_m
//   offset 16:  u32 kmax
//   offset 20:  u32 mode count = 2*kmax*(kmax+1)
//   offset 24:  u64 step index
//   offset 32:  f64 nu
//   offset 40:  f64 dt
//   offset 48:  u64 seed
//   offset 56:  f64 aux0   (force: ||f||;  residual: alpha0)
//   offset 64:  f64 aux1   (force: Grashof; residual: order, -1 for inf)
//   offset 72:  payload, mode count (re, im) f64 pairs in storage order
//               (k1 = 0, k2 = 1..K; then k1 = 1..K with k2 = -K..K).
// Reads verify magic, version, and that the file holds exactly the declared
// payload; round trips are bit-identical.

struct CheckpointMeta {
    std::uint32_t grid_m = 0;
    std::uint32_t kmax = 0;
    std::uint64_t step = 0;
    double nu = 0.0;
    double dt = 0.0;
    std::uint64_t seed = 0;
    double aux0 = 0.0;
    double aux1 = 0.0;
};

void write_state_file(const std::filesystem::path& path, const char magic[8],
                      const SpectralField& field, const CheckpointMeta& meta);
SpectralField read_state_file(const std::filesystem::path& path, const char magic[8],
                              CheckpointMeta& meta);

void write_checkpoint(const std::filesystem::path& path, const TrajectoryState& state,
                      const SolverParams& params, std::uint64_t seed);
TrajectoryState read_checkpoint(const std::filesystem::path& path, CheckpointMeta& meta);

void write_force_file(const std::filesystem::path& path, const ForcingField& force,
                      const SolverParams& params);
ForcingField read_force_file(const std::filesystem::path& path, CheckpointMeta& meta);

/// Residual snapshot: rho plus the filter identity and the phase step index.
struct ResidualSnapshot {
    FilterSpec spec;
    long n = 0;
    SpectralField rho;
};

void write_residual_snapshot(const std::filesystem::path& path, const ResidualSnapshot& snap,
                             const SolverParams& params);
ResidualSnapshot read_residual_snapshot(const std::filesystem::path& path);

}  // namespace residlab
