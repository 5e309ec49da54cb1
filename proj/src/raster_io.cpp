#include "cloudfill/raster_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace cloudfill {

namespace {

// Accepts the stem, the .json header, or the .rasb payload path.
std::string stem_of(const std::string& path) {
    fs::path p(path);
    if (p.extension() == ".json" || p.extension() == ".rasb") p.replace_extension();
    return p.string();
}

void write_f32_le(std::ofstream& out, const std::vector<double>& values) {
    std::vector<unsigned char> buf(values.size() * 4);
    for (size_t i = 0; i < values.size(); ++i) {
        const float f = static_cast<float>(values[i]);
        uint32_t bits;
        std::memcpy(&bits, &f, 4);
        buf[4 * i + 0] = static_cast<unsigned char>(bits & 0xff);
        buf[4 * i + 1] = static_cast<unsigned char>((bits >> 8) & 0xff);
        buf[4 * i + 2] = static_cast<unsigned char>((bits >> 16) & 0xff);
        buf[4 * i + 3] = static_cast<unsigned char>((bits >> 24) & 0xff);
    }
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

std::vector<double> read_f32_le(const std::string& path, size_t expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open payload: " + path);
    std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
    if (buf.size() != expected * 4)
        throw Error("payload size mismatch in " + path + ": header implies " +
                    std::to_string(expected) + " values, file holds " +
                    std::to_string(buf.size() / 4) +
                    (buf.size() % 4 ? " and a partial value" : ""));
    std::vector<double> values(expected);
    for (size_t i = 0; i < expected; ++i) {
        const uint32_t bits = static_cast<uint32_t>(buf[4 * i]) |
                              (static_cast<uint32_t>(buf[4 * i + 1]) << 8) |
                              (static_cast<uint32_t>(buf[4 * i + 2]) << 16) |
                              (static_cast<uint32_t>(buf[4 * i + 3]) << 24);
        float f;
        std::memcpy(&f, &bits, 4);
        if (!std::isfinite(f))
            throw Error("non-finite value at index " + std::to_string(i) + " in " + path);
        values[i] = static_cast<double>(f);
    }
    return values;
}

}  // namespace

Raster load_raster(const std::string& path) {
    const std::string stem = stem_of(path);
    const std::string header_path = stem + ".json";
    std::ifstream hin(header_path);
    if (!hin) throw Error("cannot open header: " + header_path);
    json h;
    try {
        hin >> h;
    } catch (const json::exception& e) {
        throw Error("malformed header " + header_path + ": " + e.what());
    }
    for (const char* key : {"width", "height", "bands", "dtype"})
        if (!h.contains(key)) throw Error("header " + header_path + " missing field: " + key);
    if (h["dtype"] != "f32") throw Error("unsupported dtype in " + header_path);
    const int w = h["width"].get<int>();
    const int ht = h["height"].get<int>();
    const int b = h["bands"].get<int>();
    if (w < 1 || ht < 1 || b < 1)
        throw Error("header " + header_path + " declares degenerate dimensions");
    auto values = read_f32_le(stem + ".rasb",
                              static_cast<size_t>(w) * static_cast<size_t>(ht) * b);
    return Raster(w, ht, b, std::move(values));
}

void save_raster(const Raster& r, const std::string& path) {
    const std::string stem = stem_of(path);
    json h = {{"width", r.width()},
              {"height", r.height()},
              {"bands", r.bands()},
              {"dtype", "f32"},
              {"order", "band-sequential row-major"},
              {"byte_order", "little-endian"}};
    std::ofstream hout(stem + ".json");
    if (!hout) throw Error("cannot write header: " + stem + ".json");
    hout << h.dump(2) << "\n";
    std::ofstream pout(stem + ".rasb", std::ios::binary);
    if (!pout) throw Error("cannot write payload: " + stem + ".rasb");
    write_f32_le(pout, r.values());
    if (!pout) throw Error("write failed: " + stem + ".rasb");
}

Mask load_mask(const std::string& path) {
    Raster r = load_raster(path);
    if (r.bands() != 1) throw Error("mask file must be single-band: " + path);
    Mask m(r.width(), r.height());
    for (int i = 0; i < r.height(); ++i)
        for (int j = 0; j < r.width(); ++j) {
            const double v = r.at(0, i, j);
            if (v != 0.0 && v != 1.0)
                throw Error("mask value not 0/1 at (" + std::to_string(i) + "," +
                            std::to_string(j) + ") in " + path);
            m.set(i, j, v == 1.0);
        }
    return m;
}

void save_mask(const Mask& m, const std::string& path) {
    Raster r(m.width(), m.height(), 1);
    for (int i = 0; i < m.height(); ++i)
        for (int j = 0; j < m.width(); ++j) r.at(0, i, j) = m.at(i, j) ? 1.0 : 0.0;
    save_raster(r, path);
}

std::vector<PgmStretch> export_pgm(const Raster& r, const std::string& stem) {
    std::vector<PgmStretch> bounds;
    for (int b = 0; b < r.bands(); ++b) {
        double lo = r.at(b, 0, 0), hi = r.at(b, 0, 0);
        for (int i = 0; i < r.height(); ++i)
            for (int j = 0; j < r.width(); ++j) {
                lo = std::min(lo, r.at(b, i, j));
                hi = std::max(hi, r.at(b, i, j));
            }
        const double span = hi > lo ? hi - lo : 1.0;
        const std::string path = stem + "_b" + std::to_string(b) + ".pgm";
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot write " + path);
        out << "P5\n" << r.width() << " " << r.height() << "\n255\n";
        for (int i = 0; i < r.height(); ++i)
            for (int j = 0; j < r.width(); ++j) {
                const double t = (r.at(b, i, j) - lo) / span;
                out.put(static_cast<char>(std::clamp(static_cast<int>(std::lround(t * 255.0)), 0, 255)));
            }
        bounds.push_back({b, lo, hi});
    }
    return bounds;
}

}  // namespace cloudfill
