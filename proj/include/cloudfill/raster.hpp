#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cloudfill {

/// Thrown for contract violations and I/O failures across the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Multi-band 2-D grid of reflectance values, band-sequential row-major.
/// Values are held as doubles in memory; the on-disk container is f32.
class Raster {
public:
    Raster(int width, int height, int bands)
        : width_(width), height_(height), bands_(bands) {
        check_dims(width, height, bands);
        values_.assign(static_cast<size_t>(width) * height * bands, 0.0);
    }

    Raster(int width, int height, int bands, std::vector<double> values)
        : width_(width), height_(height), bands_(bands), values_(std::move(values)) {
        check_dims(width, height, bands);
        if (values_.size() != static_cast<size_t>(width) * height * bands)
            throw Error("raster: values length " + std::to_string(values_.size()) +
                        " does not match " + std::to_string(width) + "x" +
                        std::to_string(height) + "x" + std::to_string(bands));
    }

    int width() const { return width_; }
    int height() const { return height_; }
    int bands() const { return bands_; }
    size_t cells_per_band() const { return static_cast<size_t>(width_) * height_; }

    size_t index(int band, int row, int col) const {
        return (static_cast<size_t>(band) * height_ + row) * width_ + col;
    }
    double at(int band, int row, int col) const { return values_[index(band, row, col)]; }
    double& at(int band, int row, int col) { return values_[index(band, row, col)]; }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    bool same_shape(const Raster& o) const {
        return width_ == o.width_ && height_ == o.height_ && bands_ == o.bands_;
    }

private:
    static void check_dims(int width, int height, int bands) {
        if (width < 1 || height < 1)
            throw Error("raster: zero-area rasters are rejected");
        if (bands < 1)
            throw Error("raster: band count must be >= 1");
    }

    int width_;
    int height_;
    int bands_;
    std::vector<double> values_;
};

/// Boolean grid marking cloud-contaminated (missing) cells.
/// True cells form the region Omega to reconstruct.
class Mask {
public:
    Mask(int width, int height) : width_(width), height_(height) {
        if (width < 1 || height < 1)
            throw Error("mask: zero-area masks are rejected");
        cells_.assign(static_cast<size_t>(width) * height, 0);
    }

    int width() const { return width_; }
    int height() const { return height_; }

    size_t index(int row, int col) const { return static_cast<size_t>(row) * width_ + col; }
    bool at(int row, int col) const { return cells_[index(row, col)] != 0; }
    void set(int row, int col, bool v) { cells_[index(row, col)] = v ? 1 : 0; }

    const std::vector<uint8_t>& cells() const { return cells_; }

    size_t count_true() const {
        size_t n = 0;
        for (uint8_t c : cells_) n += c;
        return n;
    }

    bool matches(const Raster& r) const {
        return width_ == r.width() && height_ == r.height();
    }

private:
    int width_;
    int height_;
    std::vector<uint8_t> cells_;
};

/// Five-image input of the proposed method: cloudy HR target at t0, its mask,
/// the clear HR/LR pair at t1, and the clear LR image near t0.
struct SceneBundle {
    Raster target_hr;
    Mask mask;
    Raster ref_hr;
    Raster ref_lr;
    Raster target_lr;
    int scale = 1;
};

/// Returns every violated bundle invariant; empty means valid.
std::vector<std::string> validate_bundle(const SceneBundle& b);

/// Block-mean downsampling; width and height must be divisible by scale.
Raster block_downsample(const Raster& r, int scale);

/// Replicates each cell into a scale x scale block.
Raster upsample_nearest(const Raster& r, int scale);

}  // namespace cloudfill
