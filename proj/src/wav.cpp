#include "tvolap/wav.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "tvolap/errors.hpp"

namespace tvolap {

namespace {

struct Cursor {
    const std::vector<unsigned char>& bytes;
    std::size_t pos = 0;

    void need(std::size_t count, const char* what) const {
        if (pos + count > bytes.size())
            throw WavError(std::string("truncated data, expected ") + what, pos);
    }
    std::uint16_t u16() {
        need(2, "a 16-bit field");
        std::uint16_t v = static_cast<std::uint16_t>(bytes[pos] | (bytes[pos + 1] << 8));
        pos += 2;
        return v;
    }
    std::uint32_t u32() {
        need(4, "a 32-bit field");
        std::uint32_t v = static_cast<std::uint32_t>(bytes[pos]) |
                          (static_cast<std::uint32_t>(bytes[pos + 1]) << 8) |
                          (static_cast<std::uint32_t>(bytes[pos + 2]) << 16) |
                          (static_cast<std::uint32_t>(bytes[pos + 3]) << 24);
        pos += 4;
        return v;
    }
    bool tag(const char* id) {
        need(4, "a chunk id");
        const bool match = std::memcmp(bytes.data() + pos, id, 4) == 0;
        pos += 4;
        return match;
    }
};

constexpr std::uint16_t kPcm = 0x0001;
constexpr std::uint16_t kIeeeFloat = 0x0003;
constexpr std::uint16_t kExtensible = 0xFFFE;

void append_u16(std::vector<unsigned char>& v, std::uint16_t x) {
    v.push_back(static_cast<unsigned char>(x & 0xFF));
    v.push_back(static_cast<unsigned char>(x >> 8));
}

void append_u32(std::vector<unsigned char>& v, std::uint32_t x) {
    v.push_back(static_cast<unsigned char>(x & 0xFF));
    v.push_back(static_cast<unsigned char>((x >> 8) & 0xFF));
    v.push_back(static_cast<unsigned char>((x >> 16) & 0xFF));
    v.push_back(static_cast<unsigned char>((x >> 24) & 0xFF));
}

void append_tag(std::vector<unsigned char>& v, const char* id) {
    v.insert(v.end(), id, id + 4);
}

} // namespace

AudioBuffer read_wav(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw WavError("cannot open '" + path + "'", 0);
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)),
                                     std::istreambuf_iterator<char>());

    Cursor c{bytes};
    if (!c.tag("RIFF"))
        throw WavError("malformed header, missing RIFF magic", 0);
    c.u32();  // declared riff size; trust the actual file length instead
    if (!c.tag("WAVE"))
        throw WavError("malformed header, missing WAVE form type", 8);

    bool have_fmt = false;
    std::uint16_t format_code = 0, channels = 0, bits = 0, block_align = 0;
    std::uint32_t sample_rate = 0;
    std::size_t data_pos = 0, data_size = 0;
    bool have_data = false;

    while (c.pos < bytes.size()) {
        c.need(8, "a chunk header");
        const std::size_t id_pos = c.pos;
        char id[4];
        std::memcpy(id, bytes.data() + c.pos, 4);
        c.pos += 4;
        const std::uint32_t size = c.u32();

        if (std::memcmp(id, "fmt ", 4) == 0) {
            const std::size_t fmt_pos = c.pos;
            if (size < 16)
                throw WavError("malformed header, fmt chunk too small", id_pos);
            c.need(size, "the fmt chunk body");
            format_code = c.u16();
            channels = c.u16();
            sample_rate = c.u32();
            c.u32();  // byte rate
            block_align = c.u16();
            bits = c.u16();
            if (format_code == kExtensible) {
                if (size < 40)
                    throw WavError("malformed header, extensible fmt chunk too small", id_pos);
                c.u16();  // cbSize
                c.u16();  // valid bits
                c.u32();  // channel mask
                format_code = c.u16();  // first two bytes of the subformat GUID
            }
            have_fmt = true;
            c.pos = fmt_pos + size + (size & 1);
        } else if (std::memcmp(id, "data", 4) == 0) {
            data_pos = c.pos;
            data_size = size;
            if (data_pos + data_size > bytes.size())
                throw WavError("truncated data chunk", id_pos);
            have_data = true;
            c.pos = data_pos + size + (size & 1);
        } else {
            c.need(size + (size & 1), "a chunk body");
            c.pos += size + (size & 1);
        }
    }

    if (!have_fmt)
        throw WavError("malformed header, no fmt chunk", bytes.size());
    if (!have_data)
        throw WavError("malformed header, no data chunk", bytes.size());
    if (channels < 1 || channels > 16)
        throw WavError("unsupported channel count " + std::to_string(channels), data_pos);
    if (sample_rate == 0)
        throw WavError("malformed header, zero sample rate", data_pos);

    const bool pcm16 = format_code == kPcm && bits == 16;
    const bool pcm24 = format_code == kPcm && bits == 24;
    const bool f32 = format_code == kIeeeFloat && bits == 32;
    if (!pcm16 && !pcm24 && !f32)
        throw WavError("unsupported codec (format " + std::to_string(format_code) + ", " +
                           std::to_string(bits) + " bits)",
                       data_pos);

    const std::size_t bytes_per_sample = bits / 8;
    const std::size_t frame_bytes =
        block_align != 0 ? block_align : bytes_per_sample * channels;
    if (frame_bytes != bytes_per_sample * channels)
        throw WavError("malformed header, block alignment mismatch", data_pos);
    const std::size_t frames = data_size / frame_bytes;

    AudioBuffer buf;
    buf.sample_rate = static_cast<double>(sample_rate);
    buf.samples = Eigen::ArrayXXd::Zero(static_cast<Index>(frames), channels);

    const unsigned char* d = bytes.data() + data_pos;
    for (std::size_t t = 0; t < frames; ++t) {
        for (std::uint16_t ch = 0; ch < channels; ++ch) {
            const unsigned char* p = d + t * frame_bytes + ch * bytes_per_sample;
            double v = 0.0;
            if (pcm16) {
                const std::int16_t raw = static_cast<std::int16_t>(p[0] | (p[1] << 8));
                v = static_cast<double>(raw) / 32768.0;
            } else if (pcm24) {
                std::int32_t raw = p[0] | (p[1] << 8) | (p[2] << 16);
                if (raw & 0x800000)
                    raw -= 0x1000000;
                v = static_cast<double>(raw) / 8388608.0;
            } else {
                float raw;
                std::memcpy(&raw, p, 4);
                v = static_cast<double>(raw);
            }
            buf.samples(static_cast<Index>(t), ch) = v;
        }
    }
    return buf;
}

void write_wav(const std::string& path, const AudioBuffer& buf, WavFormat format) {
    if (buf.channels() < 1 || buf.channels() > 16)
        throw InvalidInputError("write_wav: channel count must be 1-16");
    if (!(buf.sample_rate > 0.0))
        throw InvalidInputError("write_wav: sample rate must be positive");

    const std::uint16_t channels = static_cast<std::uint16_t>(buf.channels());
    const std::uint16_t bits = format == WavFormat::Pcm16   ? 16
                               : format == WavFormat::Pcm24 ? 24
                                                            : 32;
    const std::uint16_t code = format == WavFormat::Float32 ? kIeeeFloat : kPcm;
    const std::uint32_t rate = static_cast<std::uint32_t>(std::llround(buf.sample_rate));
    const std::uint16_t frame_bytes = static_cast<std::uint16_t>(channels * bits / 8);
    const std::uint64_t n_frames = static_cast<std::uint64_t>(buf.frames());
    const std::uint64_t data_size = n_frames * frame_bytes;
    if (data_size > 0xFFFFFFFFull - 128)
        throw InvalidInputError("write_wav: buffer too large for a RIFF container");

    std::vector<unsigned char> out;
    out.reserve(static_cast<std::size_t>(data_size) + 64);

    const bool fact = code == kIeeeFloat;
    const std::uint32_t fmt_size = fact ? 18 : 16;
    const std::uint32_t riff_size = 4 + (8 + fmt_size) + (fact ? 12 : 0) +
                                    8 + static_cast<std::uint32_t>(data_size);
    append_tag(out, "RIFF");
    append_u32(out, riff_size);
    append_tag(out, "WAVE");
    append_tag(out, "fmt ");
    append_u32(out, fmt_size);
    append_u16(out, code);
    append_u16(out, channels);
    append_u32(out, rate);
    append_u32(out, rate * frame_bytes);
    append_u16(out, frame_bytes);
    append_u16(out, bits);
    if (fact) {
        append_u16(out, 0);  // cbSize
        append_tag(out, "fact");
        append_u32(out, 4);
        append_u32(out, static_cast<std::uint32_t>(n_frames));
    }
    append_tag(out, "data");
    append_u32(out, static_cast<std::uint32_t>(data_size));

    for (Index t = 0; t < buf.frames(); ++t) {
        for (Index ch = 0; ch < buf.channels(); ++ch) {
            const double v = buf.samples(t, ch);
            if (format == WavFormat::Pcm16) {
                long long q = std::llround(v * 32768.0);
                q = std::min<long long>(32767, std::max<long long>(-32768, q));
                append_u16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(q)));
            } else if (format == WavFormat::Pcm24) {
                long long q = std::llround(v * 8388608.0);
                q = std::min<long long>(8388607, std::max<long long>(-8388608, q));
                const std::uint32_t u = static_cast<std::uint32_t>(q) & 0xFFFFFF;
                out.push_back(static_cast<unsigned char>(u & 0xFF));
                out.push_back(static_cast<unsigned char>((u >> 8) & 0xFF));
                out.push_back(static_cast<unsigned char>((u >> 16) & 0xFF));
            } else {
                const float raw = static_cast<float>(v);
                unsigned char b[4];
                std::memcpy(b, &raw, 4);
                out.insert(out.end(), b, b + 4);
            }
        }
    }

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f)
        throw WavError("cannot open '" + path + "' for writing", 0);
    f.write(reinterpret_cast<const char*>(out.data()), static_cast<std::streamsize>(out.size()));
    if (!f)
        throw WavError("short write to '" + path + "'", out.size());
}

} // namespace tvolap
