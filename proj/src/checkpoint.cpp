#include "emhd/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace emhd {

namespace {

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}
void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out += static_cast<char>((v >> (8 * i)) & 0xff);
}
void put_i32(std::string& out, std::int32_t v) { put_u32(out, static_cast<std::uint32_t>(v)); }
void put_f64(std::string& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(out, bits);
}

struct Reader {
    const unsigned char* p;
    std::size_t left;

    void need(std::size_t nbytes) {
        if (left < nbytes) throw std::runtime_error("checkpoint: truncated file");
    }
    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
        p += 4;
        left -= 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
        p += 8;
        left -= 8;
        return v;
    }
    std::int32_t i32() { return static_cast<std::int32_t>(u32()); }
    double f64() {
        std::uint64_t bits = u64();
        double v;
        std::memcpy(&v, &bits, 8);
        return v;
    }
    std::uint8_t u8() {
        need(1);
        std::uint8_t v = *p++;
        --left;
        return v;
    }
};

}  // namespace

void write_checkpoint(const CheckpointData& data, const std::string& path) {
    const int n = data.B.n();
    std::string payload;
    data.B.for_each_mode([&](const Mode& k) {
        if (!is_canonical(k)) return;
        CVec3 v = data.B.vec(k);
        for (int c = 0; c < 3; ++c) {
            put_f64(payload, v[c].real());
            put_f64(payload, v[c].imag());
        }
    });
    for (const NoiseField& f : data.basis.fields) {
        put_i32(payload, f.m.x);
        put_i32(payload, f.m.y);
        put_i32(payload, f.m.z);
        for (int c = 0; c < 3; ++c) put_f64(payload, f.pol[c]);
        put_f64(payload, f.theta);
        payload += static_cast<char>(f.is_sine ? 1 : 0);
    }
    put_f64(payload, data.basis.gamma);
    put_f64(payload, data.basis.s);
    put_u64(payload, data.basis.seed);

    std::string head = "EMHD";
    put_u32(head, checkpoint_version);
    put_u32(head, static_cast<std::uint32_t>(n));
    put_u32(head, static_cast<std::uint32_t>(data.basis.K()));
    put_f64(head, data.alpha);
    put_f64(head, data.mu);
    put_f64(head, data.r);
    put_f64(head, data.s);
    put_f64(head, data.t);
    put_u64(head, data.seed);
    put_u64(head, data.path_id);
    put_u64(head, payload.size());

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("checkpoint: cannot open '" + path + "' for writing");
    out.write(head.data(), static_cast<std::streamsize>(head.size()));
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) throw std::runtime_error("checkpoint: write failed for '" + path + "'");
}

CheckpointData read_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("checkpoint: cannot open '" + path + "'");
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    Reader rd{bytes.data(), bytes.size()};

    rd.need(4);
    if (std::memcmp(rd.p, "EMHD", 4) != 0) throw std::runtime_error("checkpoint: bad magic");
    rd.p += 4;
    rd.left -= 4;
    std::uint32_t version = rd.u32();
    if (version != checkpoint_version)
        throw std::runtime_error("checkpoint: format version " + std::to_string(version) +
                                 " is not supported (expected " +
                                 std::to_string(checkpoint_version) + ")");
    const int n = static_cast<int>(rd.u32());
    const int K = static_cast<int>(rd.u32());
    CheckpointData data;
    data.alpha = rd.f64();
    data.mu = rd.f64();
    data.r = rd.f64();
    data.s = rd.f64();
    data.t = rd.f64();
    data.seed = rd.u64();
    data.path_id = rd.u64();
    std::uint64_t payload_len = rd.u64();
    if (payload_len != rd.left)
        throw std::runtime_error("checkpoint: payload length mismatch (corrupt or truncated)");

    data.B = SpectralField(n);
    data.B.for_each_mode([&](const Mode& k) {
        if (!is_canonical(k)) return;
        CVec3 v;
        for (int c = 0; c < 3; ++c) {
            double re = rd.f64();
            double im = rd.f64();
            v[c] = complexd(re, im);
        }
        data.B.set_vec(k, v);
        if (!(k == Mode{0, 0, 0})) data.B.set_vec(-k, conj(v));
    });

    data.basis.gamma = 0.0;
    data.basis.n = n;
    for (int j = 0; j < K; ++j) {
        NoiseField f;
        f.m.x = rd.i32();
        f.m.y = rd.i32();
        f.m.z = rd.i32();
        for (int c = 0; c < 3; ++c) f.pol[c] = rd.f64();
        f.theta = rd.f64();
        f.is_sine = rd.u8() != 0;
        data.basis.fields.push_back(f);
        data.basis.coeff_fields.push_back(noise_field_spectral(f, n));
    }
    data.basis.gamma = rd.f64();
    data.basis.s = rd.f64();
    data.basis.seed = rd.u64();
    if (rd.left != 0) throw std::runtime_error("checkpoint: trailing bytes after payload");
    return data;
}

}  // namespace emhd
