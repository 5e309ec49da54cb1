#include "cloudfill/raster.hpp"

namespace cloudfill {

std::vector<std::string> validate_bundle(const SceneBundle& b) {
    std::vector<std::string> errs;
    auto dims = [](const Raster& r) {
        return std::to_string(r.width()) + "x" + std::to_string(r.height());
    };
    if (b.ref_hr.width() != b.target_hr.width() || b.ref_hr.height() != b.target_hr.height())
        errs.push_back("ref_hr dimensions " + dims(b.ref_hr) + " != target_hr " + dims(b.target_hr));
    if (!b.mask.matches(b.target_hr))
        errs.push_back("mask dimensions " + std::to_string(b.mask.width()) + "x" +
                       std::to_string(b.mask.height()) + " != target_hr " + dims(b.target_hr));
    if (b.ref_lr.width() != b.target_lr.width() || b.ref_lr.height() != b.target_lr.height())
        errs.push_back("ref_lr dimensions " + dims(b.ref_lr) + " != target_lr " + dims(b.target_lr));
    if (b.scale < 1)
        errs.push_back("scale must be >= 1, got " + std::to_string(b.scale));
    else {
        if (b.target_hr.width() != b.ref_lr.width() * b.scale ||
            b.target_hr.height() != b.ref_lr.height() * b.scale)
            errs.push_back("hr dimensions " + dims(b.target_hr) + " != lr " + dims(b.ref_lr) +
                           " x scale " + std::to_string(b.scale));
    }
    for (const Raster* r : {&b.ref_hr, &b.ref_lr, &b.target_lr}) {
        if (r->bands() != b.target_hr.bands()) {
            errs.push_back("band counts differ: target_hr has " +
                           std::to_string(b.target_hr.bands()) + ", another raster has " +
                           std::to_string(r->bands()));
            break;
        }
    }
    return errs;
}

Raster block_downsample(const Raster& r, int scale) {
    if (scale < 1) throw Error("block_downsample: scale must be >= 1");
    if (r.width() % scale != 0 || r.height() % scale != 0)
        throw Error("block_downsample: dimensions " + std::to_string(r.width()) + "x" +
                    std::to_string(r.height()) + " not divisible by scale " +
                    std::to_string(scale));
    const int ow = r.width() / scale;
    const int oh = r.height() / scale;
    Raster out(ow, oh, r.bands());
    const double inv = 1.0 / (static_cast<double>(scale) * scale);
    for (int b = 0; b < r.bands(); ++b)
        for (int i = 0; i < oh; ++i)
            for (int j = 0; j < ow; ++j) {
                double sum = 0.0;
                for (int di = 0; di < scale; ++di)
                    for (int dj = 0; dj < scale; ++dj)
                        sum += r.at(b, i * scale + di, j * scale + dj);
                out.at(b, i, j) = sum * inv;
            }
    return out;
}

Raster upsample_nearest(const Raster& r, int scale) {
    if (scale < 1) throw Error("upsample_nearest: scale must be >= 1");
    Raster out(r.width() * scale, r.height() * scale, r.bands());
    for (int b = 0; b < r.bands(); ++b)
        for (int i = 0; i < out.height(); ++i)
            for (int j = 0; j < out.width(); ++j)
                out.at(b, i, j) = r.at(b, i / scale, j / scale);
    return out;
}

}  // namespace cloudfill
