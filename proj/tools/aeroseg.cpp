// aeroseg: synthetic aerial scenes, dual-pathway segmentation training,
// relaxed evaluation, threshold-tree optimisation, house counting.
//
// Every subcommand writes its resolved configuration (config.txt) and an
// index of produced files (outputs.txt) into the --out directory.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "aeroseg/arch/builders.hpp"
#include "aeroseg/combiner/tree.hpp"
#include "aeroseg/data/manifest.hpp"
#include "aeroseg/data/pnm.hpp"
#include "aeroseg/data/rawmap.hpp"
#include "aeroseg/experiments/ablate.hpp"
#include "aeroseg/experiments/train.hpp"
#include "aeroseg/nn/checkpoint.hpp"
#include "aeroseg/postproc/counting.hpp"
#include "aeroseg/postproc/morphology.hpp"
#include "aeroseg/util/hash.hpp"

namespace fs = std::filesystem;
using namespace aeroseg;

namespace {

struct OutDir {
    fs::path dir;
    KeyValueFile config;
    std::vector<std::string> outputs;

    explicit OutDir(const std::string& path) : dir(path) { fs::create_directories(dir); }

    std::string file(const std::string& name) {
        outputs.push_back(name);
        return (dir / name).string();
    }

    void finish() {
        config.save((dir / "config.txt").string());
        std::string index;
        for (const auto& o : outputs) index += o + "\n";
        write_text_file((dir / "outputs.txt").string(), index + "config.txt\noutputs.txt\n");
    }
};

data::Manifest manifest_for(const std::string& path) { return data::load_manifest(path); }

std::vector<data::Scene> scenes_for(const data::Manifest& m, const std::string& split) {
    auto scenes = experiments::load_split(m, split);
    if (scenes.empty()) throw std::runtime_error("no scenes with split '" + split + "' in manifest");
    return scenes;
}

// checkpoint sidecar: arch/profile/class needed to rebuild the network
nn::Network<float> load_network(const std::string& checkpoint) {
    const KeyValueFile side = KeyValueFile::load(checkpoint + ".cfg");
    const fs::path base = fs::path(checkpoint).parent_path();
    const arch::Profile profile =
        arch::Profile::from_keyvalues(KeyValueFile::load((base / side.get("profile_file")).string()));
    nn::Network<float> net = arch::build_by_name<float>(side.get("arch"), profile);
    Rng rng(1);
    net.init_params(rng); // shapes only; overwritten by the checkpoint
    nn::load_checkpoint(checkpoint, net);
    net.positive_class = side.get_or("class", "building");
    return net;
}

int cmd_synth(const std::string& out_path, std::uint64_t seed, int train_n, int val_n, int test_n,
              int size, int buildings, int clusters, double decoy_fraction, const std::string& cls,
              const std::string& params_file) {
    OutDir out(out_path);
    data::SynthParams base;
    if (!params_file.empty()) base = data::SynthParams::from_keyvalues(KeyValueFile::load(params_file));
    if (size > 0) base.height = base.width = size;
    if (buildings >= 0) base.buildings = buildings;
    if (clusters >= 0) base.clusters = clusters;
    if (decoy_fraction >= 0) base.decoy_fraction = decoy_fraction;
    base.positive_class = cls;

    data::Manifest manifest;
    const int total = train_n + val_n + test_n;
    for (int i = 0; i < total; ++i) {
        data::SynthParams p = base;
        p.seed = seed + static_cast<std::uint64_t>(i);
        const data::Scene scene = data::generate_scene(p);
        char id[32];
        std::snprintf(id, sizeof(id), "scene_%03d", i);
        const fs::path scene_dir = out.dir / id;
        data::save_scene(scene_dir.string(), scene);
        p.to_keyvalues().save((scene_dir / "params.txt").string());
        out.outputs.push_back(std::string(id) + "/image.ppm");
        out.outputs.push_back(std::string(id) + "/mask.pgm");
        out.outputs.push_back(std::string(id) + "/objects.txt");
        out.outputs.push_back(std::string(id) + "/params.txt");
        data::ManifestEntry e;
        e.scene_id = id;
        e.image_path = (scene_dir / "image.ppm").string();
        e.mask_path = (scene_dir / "mask.pgm").string();
        e.split = i < train_n ? "train" : (i < train_n + val_n ? "val" : "test");
        manifest.entries.push_back(e);
    }
    data::save_manifest(out.file("manifest.txt"), manifest);

    out.config = base.to_keyvalues();
    out.config.set_int("seed", static_cast<long long>(seed));
    out.config.set_int("scenes.train", train_n);
    out.config.set_int("scenes.val", val_n);
    out.config.set_int("scenes.test", test_n);
    out.finish();
    std::cout << "synth: wrote " << total << " scenes to " << out.dir << "\n";
    return 0;
}

int cmd_train(const std::string& manifest_path, const std::string& out_path,
              experiments::TrainConfig cfg) {
    OutDir out(out_path);
    const data::Manifest manifest = manifest_for(manifest_path);
    const auto train_scenes = scenes_for(manifest, "train");
    std::vector<data::Scene> val_scenes;
    if (!manifest.with_split("val").empty()) val_scenes = scenes_for(manifest, "val");

    const auto result = experiments::train(cfg, train_scenes, val_scenes);
    if (result.log.aborted_on_nan)
        std::cerr << "train: loss diverged; kept the last finite parameters\n";

    nn::Network<float> net = result.net;
    arch::Profile::named(cfg.profile).to_keyvalues().save(out.file("profile.txt"));
    const std::string ckpt = out.file("model.ckpt");
    nn::save_checkpoint(ckpt, net);
    KeyValueFile side;
    side.set("arch", cfg.arch);
    side.set("profile_file", "profile.txt");
    side.set("class", cfg.positive_class);
    side.save(out.file("model.ckpt.cfg"));

    write_text_file(out.file("train_loss.csv"), result.log.loss_csv());
    write_text_file(out.file("val_f.csv"), result.log.val_csv());
    KeyValueFile runlog;
    runlog.set_int("seed", static_cast<long long>(result.log.seed));
    runlog.set("config_hash", hex64(result.log.config_hash));
    runlog.set("runlog_hash", hex64(result.log.hash()));
    runlog.set_double("wall_seconds", result.log.wall_seconds);
    runlog.set_int("iterations", static_cast<long long>(result.log.iteration_loss.size()));
    runlog.set_double("best_val_f", result.log.best_val_f);
    runlog.set_int("best_iteration", result.log.best_iteration);
    runlog.set("aborted_on_nan", result.log.aborted_on_nan ? "true" : "false");
    runlog.save(out.file("runlog.txt"));

    out.config = cfg.to_keyvalues();
    out.config.set("manifest", manifest_path);
    out.finish();
    std::cout << "train: " << result.log.iteration_loss.size() << " iterations, best val F "
              << result.log.best_val_f << ", wall " << result.log.wall_seconds << " s\n";
    return result.log.aborted_on_nan ? 1 : 0;
}

int cmd_predict(const std::string& checkpoint, const std::string& manifest_path,
                const std::string& split, const std::string& out_path, int batch,
                const std::string& blank) {
    OutDir out(out_path);
    nn::Network<float> net = load_network(checkpoint);
    const data::Manifest manifest = manifest_for(manifest_path);
    const auto entries = manifest.with_split(split);
    if (entries.empty()) throw std::runtime_error("no scenes with split '" + split + "'");
    const auto mode = experiments::blank_from_name(blank);
    for (const auto& e : entries) {
        const data::Scene scene = data::load_scene(e.image_path, e.mask_path);
        const data::FloatMap map = experiments::predict_with_blank(net, scene, mode, batch);
        data::save_rawmap(out.file(e.scene_id + ".f32map"), map);
        data::save_pgm_map(out.file(e.scene_id + ".pgm"), map);
    }
    out.config.set("checkpoint", checkpoint);
    out.config.set("manifest", manifest_path);
    out.config.set("split", split);
    out.config.set("blank", blank);
    out.config.set_int("batch", batch);
    out.finish();
    std::cout << "predict: wrote " << entries.size() << " maps to " << out.dir << "\n";
    return 0;
}

int cmd_eval(const std::string& pred_dir, const std::string& manifest_path, const std::string& split,
             const std::string& out_path, int rho, double grid_step, bool pooled) {
    OutDir out(out_path);
    const data::Manifest manifest = manifest_for(manifest_path);
    const auto entries = manifest.with_split(split);
    if (entries.empty()) throw std::runtime_error("no scenes with split '" + split + "'");

    std::vector<data::FloatMap> maps;
    std::vector<data::Mask> gts;
    for (const auto& e : entries) {
        maps.push_back(data::load_rawmap((fs::path(pred_dir) / (e.scene_id + ".f32map")).string()));
        gts.push_back(data::load_pgm_mask(e.mask_path));
    }
    std::vector<std::pair<const data::FloatMap*, const data::Mask*>> pairs;
    for (std::size_t i = 0; i < maps.size(); ++i) pairs.emplace_back(&maps[i], &gts[i]);

    const eval::RelaxedParams params{rho};
    const auto grid = eval::threshold_grid(grid_step);
    std::vector<eval::ScoreRow> rows;
    double best_f = -1, best_t = 0;
    for (double t : grid) {
        // aggregate row: unweighted means over images (or pooled counts)
        double corr = 0, comp = 0;
        if (pooled) {
            const double f = eval::pooled_f(pairs, t, params);
            rows.push_back({t, 0, 0, f});
            if (f > best_f) best_f = f, best_t = t;
            continue;
        }
        for (const auto& [map, gt] : pairs) {
            const auto s = eval::relaxed_scores(eval::binarize(*map, t), map->crop_like_valid(*gt), params);
            corr += s.correctness;
            comp += s.completeness;
        }
        corr /= static_cast<double>(pairs.size());
        comp /= static_cast<double>(pairs.size());
        const double f = eval::mean_f(pairs, t, params);
        rows.push_back({t, corr, comp, f});
        if (f > best_f) best_f = f, best_t = t;
    }
    write_text_file(out.file("sweep.csv"), eval::scores_csv(rows));

    // per-image sweeps for inspection
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto image_rows = eval::sweep(*pairs[i].first, *pairs[i].second, grid, params);
        write_text_file(out.file(entries[i].scene_id + ".csv"), eval::scores_csv(image_rows));
    }

    out.config.set("pred", pred_dir);
    out.config.set("manifest", manifest_path);
    out.config.set("split", split);
    out.config.set_int("rho", rho);
    out.config.set_double("grid_step", grid_step);
    out.config.set("mode", pooled ? "pooled" : "mean");
    out.config.set_double("best_threshold", best_t);
    out.config.set_double("best_f", best_f);
    out.finish();
    std::cout << "eval: best " << (pooled ? "pooled" : "mean") << " F " << best_f << " at threshold "
              << best_t << "\n";
    return 0;
}

int cmd_tree_opt(const std::string& lseg_dir, const std::string& ra_dir,
                 const std::string& manifest_path, const std::string& split,
                 const std::string& out_path, int rho, double grid_step, bool refine) {
    OutDir out(out_path);
    const data::Manifest manifest = manifest_for(manifest_path);
    const auto entries = manifest.with_split(split);
    if (entries.empty()) throw std::runtime_error("no scenes with split '" + split + "'");

    std::vector<data::FloatMap> ra_maps, ls_maps;
    std::vector<data::Mask> gts;
    for (const auto& e : entries) {
        ls_maps.push_back(data::load_rawmap((fs::path(lseg_dir) / (e.scene_id + ".f32map")).string()));
        ra_maps.push_back(data::load_rawmap((fs::path(ra_dir) / (e.scene_id + ".f32map")).string()));
        gts.push_back(data::load_pgm_mask(e.mask_path));
    }
    std::vector<combiner::TreeInputs> dataset;
    std::vector<std::pair<const data::FloatMap*, const data::Mask*>> ra_pairs, ls_pairs;
    for (std::size_t i = 0; i < ra_maps.size(); ++i) {
        dataset.push_back({&ra_maps[i], &ls_maps[i], &gts[i]});
        ra_pairs.emplace_back(&ra_maps[i], &gts[i]);
        ls_pairs.emplace_back(&ls_maps[i], &gts[i]);
    }

    const eval::RelaxedParams params{rho};
    const auto grid = eval::threshold_grid(grid_step);
    const auto ra_best = combiner::standalone_best_threshold(ra_pairs, grid, params);
    const auto ls_best = combiner::standalone_best_threshold(ls_pairs, grid, params);
    combiner::OptimizeOptions options;
    options.half_step_refine = refine;
    const auto result =
        combiner::optimize_triplet(dataset, grid, ra_best.threshold, ls_best.threshold, params, options);

    write_text_file(out.file("trace.csv"), combiner::trace_csv(result.trace));
    KeyValueFile triplet;
    triplet.set_double("L1", result.triplet.l1);
    triplet.set_double("L2", result.triplet.l2);
    triplet.set_double("L3", result.triplet.l3);
    triplet.set_double("mean_f", result.mean_f);
    triplet.set_double("lseg_best_threshold", ls_best.threshold);
    triplet.set_double("lseg_best_mean_f", ls_best.mean_f);
    triplet.set_double("ra_best_threshold", ra_best.threshold);
    triplet.save(out.file("triplet.txt"));

    out.config.set("lseg", lseg_dir);
    out.config.set("ra", ra_dir);
    out.config.set("manifest", manifest_path);
    out.config.set("split", split);
    out.config.set_int("rho", rho);
    out.config.set_double("grid_step", grid_step);
    out.config.set("refine", refine ? "true" : "false");
    out.finish();
    std::cout << "tree-opt: (" << result.triplet.l1 << ", " << result.triplet.l2 << ", "
              << result.triplet.l3 << ") mean F " << result.mean_f << " (L-Seg alone "
              << ls_best.mean_f << ")\n";
    return 0;
}

int cmd_count(const std::string& pred_dir, const std::string& manifest_path, const std::string& split,
              const std::string& out_path, double threshold, const std::string& val_pred_dir,
              const std::string& val_split, int erode_radius, int min_area, int rho, double iou,
              int credit) {
    OutDir out(out_path);
    const data::Manifest manifest = manifest_for(manifest_path);
    const auto entries = manifest.with_split(split);
    if (entries.empty()) throw std::runtime_error("no scenes with split '" + split + "'");

    const eval::RelaxedParams params{rho};
    if (threshold < 0) {
        // threshold from the validation maps: mean per-image argmax-F
        if (val_pred_dir.empty())
            throw std::runtime_error("count: need --threshold or --val-pred for auto selection");
        const auto val_entries = manifest.with_split(val_split);
        if (val_entries.empty()) throw std::runtime_error("no scenes with split '" + val_split + "'");
        std::vector<data::FloatMap> vmaps;
        std::vector<data::Mask> vgts;
        for (const auto& e : val_entries) {
            vmaps.push_back(
                data::load_rawmap((fs::path(val_pred_dir) / (e.scene_id + ".f32map")).string()));
            vgts.push_back(data::load_pgm_mask(e.mask_path));
        }
        std::vector<std::pair<const data::FloatMap*, const data::Mask*>> vpairs;
        for (std::size_t i = 0; i < vmaps.size(); ++i) vpairs.emplace_back(&vmaps[i], &vgts[i]);
        threshold = postproc::select_threshold(vpairs, params);
    }

    postproc::CountingOptions copts;
    copts.iou_threshold = iou;
    copts.residential_credit = credit;

    std::string summary = "scene,human_count,detected_count,true_positives,false_positives,"
                          "false_negatives,residential_hits,precision,recall,f1\n";
    for (const auto& e : entries) {
        const data::FloatMap map =
            data::load_rawmap((fs::path(pred_dir) / (e.scene_id + ".f32map")).string());
        const data::Scene scene = data::load_scene(e.image_path, e.mask_path);
        const data::Mask bin = eval::binarize(map, threshold);
        const data::Mask eroded = postproc::erode(bin, erode_radius);
        const auto blobs = postproc::components(eroded, static_cast<std::size_t>(min_area));

        std::vector<postproc::Box> refs;
        for (const auto& o : scene.objects)
            if (o.cls == "building")
                refs.push_back({o.box_y0 - map.valid_y0, o.box_x0 - map.valid_x0,
                                o.box_y1 - map.valid_y0, o.box_x1 - map.valid_x0});
        const auto report = postproc::count_report(blobs, refs, copts);
        write_text_file(out.file(e.scene_id + "_report.csv"), postproc::count_report_csv(report, copts));

        const data::ImageF overlay = postproc::overlay_boxes(
            scene.image, blobs, refs, map.valid_y0, map.valid_x0);
        data::save_ppm(out.file(e.scene_id + "_overlay.ppm"), overlay);

        char row[256];
        std::snprintf(row, sizeof(row), "%s,%zu,%zu,%zu,%zu,%zu,%zu,%.6f,%.6f,%.6f\n",
                      e.scene_id.c_str(), report.human_count, report.detected_count,
                      report.true_positives, report.false_positives, report.false_negatives,
                      report.residential_hits, report.precision, report.recall, report.f1);
        summary += row;
    }
    write_text_file(out.file("counts.csv"), summary);

    out.config.set("pred", pred_dir);
    out.config.set("manifest", manifest_path);
    out.config.set("split", split);
    out.config.set_double("threshold", threshold);
    out.config.set_int("erode_radius", erode_radius);
    out.config.set_int("min_area", min_area);
    out.config.set_double("iou", iou);
    out.config.set_int("residential_credit", credit);
    out.finish();
    std::cout << "count: threshold " << threshold << ", reports in " << out.dir << "\n";
    return 0;
}

int cmd_ablate(const std::string& checkpoint, const std::string& manifest_path,
               const std::string& split, const std::string& out_path, int rho, double grid_step) {
    OutDir out(out_path);
    nn::Network<float> net = load_network(checkpoint);
    const data::Manifest manifest = manifest_for(manifest_path);
    const auto scenes = scenes_for(manifest, split);
    const auto report = experiments::run_ablation(net, scenes, eval::RelaxedParams{rho}, grid_step);
    write_text_file(out.file("ablation.csv"), experiments::ablation_csv(report));

    out.config.set("checkpoint", checkpoint);
    out.config.set("manifest", manifest_path);
    out.config.set("split", split);
    out.config.set_int("rho", rho);
    out.config.set_double("grid_step", grid_step);
    out.finish();
    std::cout << experiments::ablation_csv(report);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dual-pathway aerial segmentation workbench"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "generate synthetic scenes + manifest");
    std::uint64_t seed = 1;
    std::string out_dir, params_file, cls = "building";
    int train_n = 4, val_n = 1, test_n = 2, size = -1, buildings = -1, clusters = -1;
    double decoy_fraction = -1;
    synth->add_option("--seed", seed, "base RNG seed");
    synth->add_option("--out", out_dir, "output directory")->required();
    synth->add_option("--train", train_n, "training scenes");
    synth->add_option("--val", val_n, "validation scenes");
    synth->add_option("--test", test_n, "test scenes");
    synth->add_option("--size", size, "scene side length");
    synth->add_option("--buildings", buildings, "building-textured squares per scene");
    synth->add_option("--clusters", clusters, "residential clusters per scene");
    synth->add_option("--decoy-fraction", decoy_fraction, "fraction of squares placed as decoys");
    synth->add_option("--class", cls, "positive metadata class");
    synth->add_option("--params", params_file, "SynthParams key=value file");

    // train
    auto* train_cmd = app.add_subcommand("train", "train a network on a manifest");
    experiments::TrainConfig cfg;
    std::string manifest_path;
    train_cmd->add_option("--manifest", manifest_path, "dataset manifest")->required();
    train_cmd->add_option("--out", out_dir, "output directory")->required();
    train_cmd->add_option("--arch", cfg.arch, "lseg|gseg|ra|lgseg");
    train_cmd->add_option("--profile", cfg.profile, "desk|paper-shaped|profile file");
    train_cmd->add_option("--seed", cfg.seed, "RNG seed");
    train_cmd->add_option("--epochs", cfg.epochs, "max epochs");
    train_cmd->add_option("--iterations", cfg.max_iterations, "hard iteration cap (0 = epochs)");
    train_cmd->add_option("--batch", cfg.batch_size, "mini-batch size");
    train_cmd->add_option("--lr", cfg.lr, "learning rate");
    train_cmd->add_option("--momentum", cfg.momentum, "momentum");
    train_cmd->add_option("--weight-decay", cfg.weight_decay, "L2 weight decay");
    train_cmd->add_option("--class", cfg.positive_class, "positive metadata class");
    train_cmd->add_option("--triples", cfg.triples_per_scene, "patch triples per scene");
    train_cmd->add_option("--positive-fraction", cfg.positive_fraction, "positive patch fraction");
    train_cmd->add_option("--patience", cfg.patience, "early-stop patience (epochs)");
    train_cmd->add_option("--lr-decay", cfg.lr_decay, "step decay factor");
    train_cmd->add_option("--lr-decay-every", cfg.lr_decay_every, "iterations between decays");
    train_cmd->add_option("--rho", cfg.val_rho, "validation relaxation radius");
    train_cmd->add_option("--grid-step", cfg.val_grid_step, "validation threshold grid step");

    // predict
    auto* predict = app.add_subcommand("predict", "full-image probability maps");
    std::string checkpoint, split = "test", blank = "none";
    int batch = 16;
    predict->add_option("--checkpoint", checkpoint, "model checkpoint")->required();
    predict->add_option("--manifest", manifest_path, "dataset manifest")->required();
    predict->add_option("--split", split, "manifest split");
    predict->add_option("--out", out_dir, "output directory")->required();
    predict->add_option("--batch", batch, "patches per forward pass");
    predict->add_option("--blank", blank, "none|local|global pathway blanking");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "relaxed threshold sweep to CSV");
    std::string pred_dir;
    int rho = 3;
    double grid_step = 0.01;
    bool pooled = false;
    eval_cmd->add_option("--pred", pred_dir, "directory of .f32map predictions")->required();
    eval_cmd->add_option("--manifest", manifest_path, "dataset manifest")->required();
    eval_cmd->add_option("--split", split, "manifest split");
    eval_cmd->add_option("--out", out_dir, "output directory")->required();
    eval_cmd->add_option("--rho", rho, "relaxation radius in pixels");
    eval_cmd->add_option("--grid-step", grid_step, "threshold grid step");
    eval_cmd->add_flag("--pooled", pooled, "pool pixels across images instead of mean-F");

    // tree-opt
    auto* tree = app.add_subcommand("tree-opt", "optimise the (L1,L2,L3) classifier tree");
    std::string lseg_dir, ra_dir;
    bool refine = false;
    tree->add_option("--lseg", lseg_dir, "L-Seg prediction directory")->required();
    tree->add_option("--ra", ra_dir, "RA-Seg prediction directory")->required();
    tree->add_option("--manifest", manifest_path, "dataset manifest")->required();
    tree->add_option("--split", split, "manifest split");
    tree->add_option("--out", out_dir, "output directory")->required();
    tree->add_option("--rho", rho, "relaxation radius");
    tree->add_option("--grid-step", grid_step, "threshold grid step");
    tree->add_flag("--refine", refine, "half-step refinement pass after convergence");

    // count
    auto* count = app.add_subcommand("count", "threshold, erode, label, count buildings");
    double threshold = -1, iou = 0.3;
    int erode_radius = 1, min_area = 4, credit = 2;
    std::string val_pred_dir, val_split = "val";
    count->add_option("--pred", pred_dir, "prediction directory")->required();
    count->add_option("--manifest", manifest_path, "dataset manifest")->required();
    count->add_option("--split", split, "manifest split");
    count->add_option("--out", out_dir, "output directory")->required();
    count->add_option("--threshold", threshold, "binarization threshold (omit for auto)");
    count->add_option("--val-pred", val_pred_dir, "validation predictions for auto threshold");
    count->add_option("--val-split", val_split, "validation split name");
    count->add_option("--erode-radius", erode_radius, "erosion radius");
    count->add_option("--min-area", min_area, "minimum blob area");
    count->add_option("--rho", rho, "relaxation radius for auto threshold");
    count->add_option("--iou", iou, "box IoU match threshold");
    count->add_option("--credit", credit, "houses credited per residential hit");

    // ablate
    auto* ablate = app.add_subcommand("ablate", "pathway complementarity measurements");
    ablate->add_option("--checkpoint", checkpoint, "dual-mode checkpoint")->required();
    ablate->add_option("--manifest", manifest_path, "dataset manifest")->required();
    ablate->add_option("--split", split, "manifest split");
    ablate->add_option("--out", out_dir, "output directory")->required();
    ablate->add_option("--rho", rho, "relaxation radius");
    ablate->add_option("--grid-step", grid_step, "threshold grid step");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed())
            return cmd_synth(out_dir, seed, train_n, val_n, test_n, size, buildings, clusters,
                             decoy_fraction, cls, params_file);
        if (train_cmd->parsed()) return cmd_train(manifest_path, out_dir, cfg);
        if (predict->parsed())
            return cmd_predict(checkpoint, manifest_path, split, out_dir, batch, blank);
        if (eval_cmd->parsed())
            return cmd_eval(pred_dir, manifest_path, split, out_dir, rho, grid_step, pooled);
        if (tree->parsed())
            return cmd_tree_opt(lseg_dir, ra_dir, manifest_path, split, out_dir, rho, grid_step, refine);
        if (count->parsed())
            return cmd_count(pred_dir, manifest_path, split, out_dir, threshold, val_pred_dir,
                             val_split, erode_radius, min_area, rho, iou, credit);
        if (ablate->parsed()) return cmd_ablate(checkpoint, manifest_path, split, out_dir, rho, grid_step);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
