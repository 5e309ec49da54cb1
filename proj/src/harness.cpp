#include "cloudfill/harness.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "cloudfill/raster_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace cloudfill {

bool LrBias::is_identity() const {
    for (double g : gain)
        if (g != 1.0) return false;
    for (double o : offset)
        if (o != 0.0) return false;
    return true;
}

bool ExperimentReport::all_ok() const {
    for (const auto& r : rows)
        if (!r.ok()) return false;
    return true;
}

namespace {

void require_keys(const json& obj, const std::string& where,
                  std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) throw Error("config: unknown key '" + it.key() + "' in " + where);
    }
}

std::vector<double> parse_broadcast(const json& v, const std::string& what) {
    std::vector<double> out;
    if (v.is_number())
        out.push_back(v.get<double>());
    else if (v.is_array())
        for (const auto& e : v) out.push_back(e.get<double>());
    else
        throw Error("config: " + what + " must be a number or array");
    if (out.empty()) throw Error("config: " + what + " must not be empty");
    return out;
}

MethodSpec parse_method(const json& mj) {
    if (!mj.contains("method")) throw Error("config: method block missing 'method'");
    MethodSpec spec;
    spec.id = method_from_name(mj["method"].get<std::string>());
    MethodParams& p = spec.params;
    switch (spec.id) {
        case MethodId::poisson:
            require_keys(mj, "poisson block", {"method", "tol", "max_iters"});
            p.solver.tol = mj.value("tol", p.solver.tol);
            p.solver.max_iters = mj.value("max_iters", p.solver.max_iters);
            break;
        case MethodId::wlr:
            require_keys(mj, "wlr block",
                         {"method", "window", "max_window", "min_samples", "n_similar"});
            p.wlr.initial_window = mj.value("window", p.wlr.initial_window);
            p.wlr.max_window = mj.value("max_window", p.wlr.max_window);
            p.wlr.min_samples = mj.value("min_samples", p.wlr.min_samples);
            p.wlr.n_similar = mj.value("n_similar", p.wlr.n_similar);
            break;
        case MethodId::stmrf:
            require_keys(mj, "stmrf block", {"method", "patch_radius", "search_stride",
                                            "lambda", "icm_iters", "candidates"});
            p.stmrf.patch_radius = mj.value("patch_radius", p.stmrf.patch_radius);
            p.stmrf.search_stride = mj.value("search_stride", p.stmrf.search_stride);
            p.stmrf.lambda_smooth = mj.value("lambda", p.stmrf.lambda_smooth);
            p.stmrf.icm_iters = mj.value("icm_iters", p.stmrf.icm_iters);
            p.stmrf.candidate_count = mj.value("candidates", p.stmrf.candidate_count);
            break;
        case MethodId::proposed:
            require_keys(mj, "proposed block", {"method", "fusion_window", "n_classes",
                                               "eps", "tol", "max_iters"});
            p.starfm.window = mj.value("fusion_window", p.starfm.window);
            p.starfm.n_classes = mj.value("n_classes", p.starfm.n_classes);
            p.starfm.eps = mj.value("eps", p.starfm.eps);
            p.solver.tol = mj.value("tol", p.solver.tol);
            p.solver.max_iters = mj.value("max_iters", p.solver.max_iters);
            break;
    }
    return spec;
}

std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt4(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

Raster biased(const Raster& lr, const LrBias& bias) {
    Raster out = lr;
    for (int b = 0; b < lr.bands(); ++b) {
        const double g = bias.band_gain(b), o = bias.band_offset(b);
        if (g == 1.0 && o == 0.0) continue;
        for (int i = 0; i < lr.height(); ++i)
            for (int j = 0; j < lr.width(); ++j) out.at(b, i, j) = g * lr.at(b, i, j) + o;
    }
    return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error("config: malformed JSON in " + path + ": " + e.what());
    }
    require_keys(j, "config",
                 {"target", "ref", "scale", "mask", "lr", "lr_bias", "methods", "out_dir"});
    ExperimentConfig cfg;
    for (const char* k : {"target", "ref", "mask", "methods", "out_dir"})
        if (!j.contains(k)) throw Error(std::string("config: missing field '") + k + "'");
    cfg.target_path = j["target"].get<std::string>();
    cfg.ref_path = j["ref"].get<std::string>();
    cfg.scale = j.value("scale", cfg.scale);
    cfg.out_dir = j["out_dir"].get<std::string>();

    const json& mj = j["mask"];
    if (mj.contains("path")) {
        require_keys(mj, "mask", {"path"});
        cfg.mask_path = mj["path"].get<std::string>();
    } else {
        require_keys(mj, "mask", {"coverage", "smoothness", "seed"});
        CloudShapeParams cp;
        cp.coverage_fraction = mj.value("coverage", cp.coverage_fraction);
        cp.smoothness = mj.value("smoothness", cp.smoothness);
        cp.seed = mj.value("seed", cp.seed);
        cfg.mask_params = cp;
    }

    if (j.contains("lr")) {
        const json& lj = j["lr"];
        require_keys(lj, "lr", {"mode", "ref_lr", "target_lr"});
        const std::string mode = lj.value("mode", "derive-from-hr");
        if (mode == "from-files") {
            cfg.lr_from_files = true;
            cfg.ref_lr_path = lj.at("ref_lr").get<std::string>();
            cfg.target_lr_path = lj.at("target_lr").get<std::string>();
        } else if (mode != "derive-from-hr") {
            throw Error("config: lr.mode must be derive-from-hr or from-files");
        }
    }
    if (j.contains("lr_bias")) {
        const json& bj = j["lr_bias"];
        require_keys(bj, "lr_bias", {"gain", "offset"});
        if (bj.contains("gain")) cfg.lr_bias.gain = parse_broadcast(bj["gain"], "lr_bias.gain");
        if (bj.contains("offset"))
            cfg.lr_bias.offset = parse_broadcast(bj["offset"], "lr_bias.offset");
    }
    for (const auto& mjj : j["methods"]) cfg.methods.push_back(parse_method(mjj));
    if (cfg.methods.empty()) throw Error("config: at least one method is required");
    return cfg;
}

std::pair<SceneBundle, Raster> build_scene(const ExperimentConfig& cfg) {
    Raster original = load_raster(cfg.target_path);
    Raster ref_hr = load_raster(cfg.ref_path);

    Mask mask = cfg.mask_path
                    ? load_mask(*cfg.mask_path)
                    : simulate_mask(original.width(), original.height(), *cfg.mask_params);

    Raster ref_lr(1, 1, 1), target_lr(1, 1, 1);
    if (cfg.lr_from_files) {
        ref_lr = load_raster(cfg.ref_lr_path);
        target_lr = load_raster(cfg.target_lr_path);
    } else {
        // Simulated LR sensor: block-mean of the HR truth, then the
        // radiometric bias.
        ref_lr = biased(block_downsample(ref_hr, cfg.scale), cfg.lr_bias);
        target_lr = biased(block_downsample(original, cfg.scale), cfg.lr_bias);
    }

    SceneBundle b{apply_mask(original, mask, 1.0), std::move(mask), std::move(ref_hr),
                  std::move(ref_lr), std::move(target_lr), cfg.scale};
    auto errs = validate_bundle(b);
    if (!errs.empty()) throw Error("build_scene: " + errs.front());
    return {std::move(b), std::move(original)};
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
    auto [bundle, original] = build_scene(cfg);
    fs::create_directories(cfg.out_dir);
    save_mask(bundle.mask, (fs::path(cfg.out_dir) / "mask").string());
    save_raster(bundle.target_hr, (fs::path(cfg.out_dir) / "cloudy").string());

    ExperimentReport rep;
    rep.mask_cells = bundle.mask.count_true();
    for (const MethodSpec& spec : cfg.methods) {
        MethodRow row;
        row.method = method_name(spec.id);
        try {
            ReconstructionResult res = reconstruct(spec.id, bundle, spec.params);
            row.diagnostics = res.diagnostics;
            row.wall_time_s = res.wall_time_s;
            const std::string stem = (fs::path(cfg.out_dir) / row.method).string();
            save_raster(res.output, stem);
            export_pgm(res.output, stem);
            // Metrics are computed on the f32-quantized values that were
            // written, so every CSV row recomputes exactly from the saved
            // raster.
            for (double& v : res.output.values()) v = static_cast<float>(v);
            row.report = evaluate(original, res.output, bundle.mask);
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rep.rows.push_back(std::move(row));
    }

    std::ofstream csv(fs::path(cfg.out_dir) / "metrics.csv");
    csv << report_csv(rep);
    std::ofstream js(fs::path(cfg.out_dir) / "report.json");
    js << report_json(cfg, rep);
    return rep;
}

std::string report_csv(const ExperimentReport& rep) {
    std::string out = "method,band,cc,nmse,uiqi\n";
    for (const MethodRow& row : rep.rows) {
        if (!row.ok()) continue;
        for (size_t b = 0; b < row.report.per_band.size(); ++b) {
            const BandMetrics& bm = row.report.per_band[b];
            if (!bm.ok()) continue;
            out += row.method + "," + std::to_string(b) + "," + fmt_full(bm.cc) + "," +
                   fmt_full(bm.nmse) + "," + fmt_full(bm.uiqi) + "\n";
        }
        out += row.method + ",mean," + fmt_full(row.report.mean_cc) + "," +
               fmt_full(row.report.mean_nmse) + "," + fmt_full(row.report.mean_uiqi) + "\n";
    }
    return out;
}

std::string report_json(const ExperimentConfig& cfg, const ExperimentReport& rep) {
    json j;
    j["config"] = {{"target", cfg.target_path},
                   {"ref", cfg.ref_path},
                   {"scale", cfg.scale},
                   {"out_dir", cfg.out_dir}};
    if (cfg.mask_params)
        j["config"]["mask"] = {{"coverage", cfg.mask_params->coverage_fraction},
                               {"smoothness", cfg.mask_params->smoothness},
                               {"seed", cfg.mask_params->seed}};
    else
        j["config"]["mask"] = {{"path", *cfg.mask_path}};
    j["config"]["lr_bias"] = {{"gain", cfg.lr_bias.gain}, {"offset", cfg.lr_bias.offset}};
    j["mask_cells"] = rep.mask_cells;
    j["methods"] = json::array();
    for (const MethodRow& row : rep.rows) {
        json rj = {{"method", row.method}};
        if (!row.ok()) {
            rj["error"] = row.error;
        } else {
            rj["mean"] = {{"cc", row.report.mean_cc},
                          {"nmse", row.report.mean_nmse},
                          {"uiqi", row.report.mean_uiqi}};
            rj["per_band"] = json::array();
            for (const BandMetrics& bm : row.report.per_band) {
                if (bm.ok())
                    rj["per_band"].push_back(
                        {{"cc", bm.cc}, {"nmse", bm.nmse}, {"uiqi", bm.uiqi}});
                else
                    rj["per_band"].push_back({{"error", bm.error}});
            }
            rj["n_cells"] = row.report.n_cells;
            rj["diagnostics"] = row.diagnostics;
        }
        j["methods"].push_back(std::move(rj));
    }
    return j.dump(2) + "\n";
}

std::string report_table(const ExperimentReport& rep) {
    std::string out = "method     CC       NMSE     UIQI\n";
    for (const MethodRow& row : rep.rows) {
        char line[128];
        if (row.ok())
            std::snprintf(line, sizeof line, "%-10s %s   %s   %s\n", row.method.c_str(),
                          fmt4(row.report.mean_cc).c_str(), fmt4(row.report.mean_nmse).c_str(),
                          fmt4(row.report.mean_uiqi).c_str());
        else
            std::snprintf(line, sizeof line, "%-10s FAILED: %s\n", row.method.c_str(),
                          row.error.c_str());
        out += line;
    }
    return out;
}

}  // namespace cloudfill
