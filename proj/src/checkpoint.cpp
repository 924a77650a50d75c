#include "residlab/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <vector>

#include "residlab/errors.hpp"

namespace residlab {

namespace {

constexpr char kCheckpointMagic[8] = {'R', 'L', 'A', 'B', 'C', 'K', 'P', '1'};
constexpr char kForceMagic[8] = {'R', 'L', 'A', 'B', 'F', 'R', 'C', '1'};
constexpr char kResidualMagic[8] = {'R', 'L', 'A', 'B', 'R', 'E', 'S', '1'};
constexpr std::size_t kHeaderSize = 72;
constexpr std::uint32_t kVersion = 1;

template <typename T>
T to_little_endian(T v) {
    if constexpr (std::endian::native == std::endian::little) return v;
    T out;
    auto* src = reinterpret_cast<const unsigned char*>(&v);
    auto* dst = reinterpret_cast<unsigned char*>(&out);
    for (std::size_t i = 0; i < sizeof(T); ++i) dst[i] = src[sizeof(T) - 1 - i];
    return out;
}

struct Writer {
    std::vector<unsigned char> bytes;
    void raw(const void* p, std::size_t n) {
        const auto* c = static_cast<const unsigned char*>(p);
        bytes.insert(bytes.end(), c, c + n);
    }
    void u32(std::uint32_t v) {
        v = to_little_endian(v);
        raw(&v, 4);
    }
    void u64(std::uint64_t v) {
        v = to_little_endian(v);
        raw(&v, 8);
    }
    void f64(double v) { u64(to_little_endian(std::bit_cast<std::uint64_t>(v))); }
};

struct Reader {
    const unsigned char* p;
    const unsigned char* end;
    const std::string& path;
    void raw(void* dst, std::size_t n) {
        if (static_cast<std::size_t>(end - p) < n) throw IoError(path + ": truncated file");
        std::memcpy(dst, p, n);
        p += n;
    }
    std::uint32_t u32() {
        std::uint32_t v;
        raw(&v, 4);
        return to_little_endian(v);
    }
    std::uint64_t u64() {
        std::uint64_t v;
        raw(&v, 8);
        return to_little_endian(v);
    }
    double f64() { return std::bit_cast<double>(u64()); }
};

}  // namespace

void write_state_file(const std::filesystem::path& path, const char magic[8],
                      const SpectralField& field, const CheckpointMeta& meta) {
    Writer w;
    w.raw(magic, 8);
    w.u32(kVersion);
    w.u32(meta.grid_m);
    w.u32(meta.kmax);
    w.u32(static_cast<std::uint32_t>(field.size()));
    w.u64(meta.step);
    w.f64(meta.nu);
    w.f64(meta.dt);
    w.u64(meta.seed);
    w.f64(meta.aux0);
    w.f64(meta.aux1);
    for (const Complex& c : field.data()) {
        w.f64(c.real());
        w.f64(c.imag());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(w.bytes.data()),
              static_cast<std::streamsize>(w.bytes.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

SpectralField read_state_file(const std::filesystem::path& path, const char magic[8],
                              CheckpointMeta& meta) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    const std::string name = path.string();
    if (bytes.size() < kHeaderSize) throw IoError(name + ": file too small for header");
    if (std::memcmp(bytes.data(), magic, 8) != 0) throw IoError(name + ": wrong magic bytes");
    Reader r{bytes.data() + 8, bytes.data() + bytes.size(), name};
    const std::uint32_t version = r.u32();
    if (version != kVersion) throw IoError(name + ": unsupported format version");
    meta.grid_m = r.u32();
    meta.kmax = r.u32();
    const std::uint32_t count = r.u32();
    meta.step = r.u64();
    meta.nu = r.f64();
    meta.dt = r.f64();
    meta.seed = r.u64();
    meta.aux0 = r.f64();
    meta.aux1 = r.f64();
    if (meta.kmax < 1) throw IoError(name + ": bad truncation in header");
    SpectralField field(static_cast<int>(meta.kmax));
    if (count != field.size()) throw IoError(name + ": header mode count mismatch");
    if (bytes.size() != kHeaderSize + 16ull * count)
        throw IoError(name + ": payload size does not match header");
    auto coeffs = field.data();
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const double re = r.f64();
        const double im = r.f64();
        coeffs[i] = Complex(re, im);
    }
    return field;
}

void write_checkpoint(const std::filesystem::path& path, const TrajectoryState& state,
                      const SolverParams& params, std::uint64_t seed) {
    CheckpointMeta meta;
    meta.grid_m = static_cast<std::uint32_t>(params.grid);
    meta.kmax = static_cast<std::uint32_t>(params.truncation);
    meta.step = static_cast<std::uint64_t>(state.n);
    meta.nu = params.nu;
    meta.dt = params.h;
    meta.seed = seed;
    write_state_file(path, kCheckpointMagic, state.omega, meta);
}

TrajectoryState read_checkpoint(const std::filesystem::path& path, CheckpointMeta& meta) {
    SpectralField omega = read_state_file(path, kCheckpointMagic, meta);
    return TrajectoryState{static_cast<long>(meta.step), std::move(omega)};
}

void write_force_file(const std::filesystem::path& path, const ForcingField& force,
                      const SolverParams& params) {
    CheckpointMeta meta;
    meta.grid_m = static_cast<std::uint32_t>(params.grid);
    meta.kmax = static_cast<std::uint32_t>(force.g.truncation());
    meta.step = 0;
    meta.nu = params.nu;
    meta.dt = params.h;
    meta.seed = force.seed;
    meta.aux0 = force.fnorm;
    meta.aux1 = force.grashof;
    write_state_file(path, kForceMagic, force.g, meta);
}

ForcingField read_force_file(const std::filesystem::path& path, CheckpointMeta& meta) {
    ForcingField out;
    out.g = read_state_file(path, kForceMagic, meta);
    out.fnorm = meta.aux0;
    out.grashof = meta.aux1;
    out.seed = meta.seed;
    return out;
}

void write_residual_snapshot(const std::filesystem::path& path, const ResidualSnapshot& snap,
                             const SolverParams& params) {
    CheckpointMeta meta;
    meta.grid_m = static_cast<std::uint32_t>(params.grid);
    meta.kmax = static_cast<std::uint32_t>(snap.rho.truncation());
    meta.step = static_cast<std::uint64_t>(snap.n);
    meta.nu = params.nu;
    meta.dt = params.h;
    meta.aux0 = snap.spec.alpha0;
    meta.aux1 = snap.spec.order.is_infinite() ? -1.0 : static_cast<double>(snap.spec.order.value());
    write_state_file(path, kResidualMagic, snap.rho, meta);
}

ResidualSnapshot read_residual_snapshot(const std::filesystem::path& path) {
    CheckpointMeta meta;
    SpectralField rho = read_state_file(path, kResidualMagic, meta);
    ResidualSnapshot out;
    out.rho = std::move(rho);
    out.n = static_cast<long>(meta.step);
    out.spec.alpha0 = meta.aux0;
    out.spec.order =
        meta.aux1 < 0.0 ? FilterOrder::infinite() : FilterOrder::finite(static_cast<int>(meta.aux1));
    return out;
}

}  // namespace residlab
