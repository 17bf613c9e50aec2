// seldkit command line: soundscape synthesis, channel-swap augmentation,
// label encoding, DoA validation and SELD scoring over STARSS23-convention
// files.
//
// Exit codes: 0 success, 1 operational or validation failure, 2 usage error.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "seldkit/augment.hpp"
#include "seldkit/doa_estimate.hpp"
#include "seldkit/errors.hpp"
#include "seldkit/foa.hpp"
#include "seldkit/fsio.hpp"
#include "seldkit/labels.hpp"
#include "seldkit/metadata.hpp"
#include "seldkit/metrics.hpp"
#include "seldkit/synth.hpp"

namespace fs = std::filesystem;
using namespace seldkit;

namespace {

int default_jobs() {
    if (const char* env = std::getenv("SELDKIT_JOBS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Work-queue parallelism across independent items; the first exception wins
// and is rethrown on the caller's thread.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
    if (count == 0) return;
    const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(count)));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

std::vector<fs::path> sorted_ppm_files(const fs::path& dir) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".ppm") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    return files;
}

std::string scene_stem(int index) {
    std::ostringstream s;
    s << "scene" << std::setw(4) << std::setfill('0') << index;
    return s.str();
}

// ---------------------------------------------------------------------------
// augment
// ---------------------------------------------------------------------------

struct AugmentArgs {
    std::string audio;
    std::string meta;
    std::string video;
    std::string out;
    bool float32 = false;
    int jobs = default_jobs();
};

int run_augment(const AugmentArgs& args) {
    const FoaClip clip = read_foa_wav(args.audio);
    const std::vector<SeldEvent> events = read_metadata(args.meta);
    const fs::path out_dir(args.out);
    fs::create_directories(out_dir);
    const std::string stem = fs::path(args.audio).stem().string();
    const auto set = augmentation_set();
    const WavFormat fmt = args.float32 ? WavFormat::kFloat32 : WavFormat::kPcm16;

    parallel_for(set.size(), args.jobs, [&](std::size_t i) {
        const AcsTransform& t = set[i];
        const std::string suffix = "_t" + std::to_string(i);
        write_foa_wav(out_dir / (stem + suffix + ".wav"), transform_foa(t, clip), fmt);
        write_metadata(transform_metadata(t, events), out_dir / (stem + suffix + ".csv"));
    });
    std::cerr << "seldkit augment: wrote 8 audio/metadata pairs for " << stem << "\n";

    if (!args.video.empty()) {
        const auto frames = sorted_ppm_files(args.video);
        if (frames.empty()) {
            throw std::runtime_error(args.video + ": no .ppm frames found");
        }
        const Image first = read_ppm(frames.front());
        if (first.width != 2 * first.height) {
            throw GeometryMismatchError(frames.front().string() +
                                        ": frames must be 2:1 equirectangular");
        }
        const FrameGeometry g(first.width, first.height);
        for (std::size_t i = 0; i < set.size(); ++i) {
            fs::create_directories(out_dir / (stem + "_t" + std::to_string(i)));
        }
        parallel_for(frames.size(), args.jobs, [&](std::size_t fi) {
            const Image img = read_ppm(frames[fi]);
            const std::string name = frames[fi].filename().string();
            for (std::size_t i = 0; i < set.size(); ++i) {
                write_ppm(out_dir / (stem + "_t" + std::to_string(i)) / name,
                          transform_frame(set[i], img, g));
            }
        });
        std::cerr << "seldkit augment: transformed " << frames.size() << " frames x 8\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------

struct SynthArgs {
    std::string out;
    std::string assets;
    std::string rirs = "anechoic";
    int count = 1;
    double duration = 30.0;
    int max_polyphony = 3;
    std::uint64_t seed = 0;
    int sample_rate = kDefaultSampleRate;
    double fps = kDefaultFps;
    bool video = false;
    int jobs = default_jobs();
};

int run_synth(const SynthArgs& args) {
    const auto assets = load_asset_manifest(args.assets);
    const RirBank bank = args.rirs == "anechoic" ? RirBank::anechoic_grid(args.sample_rate)
                                                 : RirBank::load_manifest(args.rirs);
    const fs::path out(args.out);
    fs::create_directories(out / "foa");
    fs::create_directories(out / "metadata");
    if (args.video) fs::create_directories(out / "video");

    parallel_for(static_cast<std::size_t>(args.count), args.jobs, [&](std::size_t i) {
        const std::string stem = scene_stem(static_cast<int>(i));
        SceneSpec spec = sample_scene(args.seed + i, assets, bank, args.duration,
                                      args.max_polyphony);
        spec.sample_rate = args.sample_rate;

        const RenderedAudio rendered = render_audio(spec, assets, bank);
        write_foa_wav(out / "foa" / (stem + ".wav"), rendered.audio);
        write_metadata(rendered.events, out / "metadata" / (stem + ".csv"));

        if (args.video) {
            const fs::path dir = out / "video" / stem;
            fs::create_directories(dir);
            const FrameGeometry g;
            int frames_written = 0;
            render_video(spec, assets, bank, g, args.fps, [&](int idx, const Image& img) {
                std::ostringstream name;
                name << "frame_" << std::setw(6) << std::setfill('0') << idx << ".ppm";
                write_ppm(dir / name.str(), img);
                ++frames_written;
            });
            nlohmann::json sidecar{{"width", g.width},
                                   {"height", g.height},
                                   {"fps", args.fps},
                                   {"frames", frames_written},
                                   {"pattern", "frame_%06d.ppm"},
                                   {"encode_hint",
                                    "ffmpeg -framerate <fps> -i frame_%06d.ppm -pix_fmt yuv420p "
                                    "out.mp4"}};
            write_file_atomic(dir / "stream.json", sidecar.dump(2) + "\n");
        }
        std::cerr << "seldkit synth: " << stem << " (" << spec.events.size() << " events)\n";
    });
    return 0;
}

// ---------------------------------------------------------------------------
// encode-accdoa / encode-visual
// ---------------------------------------------------------------------------

struct EncodeAccdoaArgs {
    std::string meta;
    std::string out;
    int frames = 0;  // 0: derive from the metadata
};

int run_encode_accdoa(const EncodeAccdoaArgs& args) {
    const auto events = read_metadata(args.meta);
    int frames = args.frames;
    if (frames <= 0) {
        frames = 1;
        for (const SeldEvent& e : events) frames = std::max(frames, e.frame + 1);
    }
    write_accdoa_tensor(args.out, encode_multi_accdoa(events, frames));
    std::cerr << "seldkit encode-accdoa: " << frames << " frames -> " << args.out << "\n";
    return 0;
}

struct EncodeVisualArgs {
    std::string boxes;
    std::string out;
};

int run_encode_visual(const EncodeVisualArgs& args) {
    const auto per_frame = read_boxes_csv(args.boxes);
    std::vector<VisualEmbedding> embeddings;
    embeddings.reserve(per_frame.size());
    std::size_t dropped_total = 0;
    for (const auto& boxes : per_frame) {
        std::size_t dropped = 0;
        embeddings.push_back(encode_visual_boxes(boxes, &dropped));
        dropped_total += dropped;
    }
    if (dropped_total > 0) {
        std::cerr << "seldkit encode-visual: warning: dropped " << dropped_total
                  << " boxes beyond the 6 largest per frame\n";
    }
    write_visual_tensor(args.out, embeddings);
    std::cerr << "seldkit encode-visual: " << embeddings.size() << " frames -> " << args.out
              << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalArgs {
    std::string ref;
    std::string pred;
    double threshold = 20.0;
    int segment = 10;
    std::string average = "macro";
    bool per_class = false;
    std::string csv;
};

std::string fmt_le(const std::optional<double>& le) {
    if (!le) return "undefined";
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << *le;
    return s.str();
}

void print_scores_row(std::ostream& os, const std::string& name, const SeldScores& s) {
    os << std::left << std::setw(28) << name << std::right << std::fixed << std::setprecision(3)
       << std::setw(8) << s.error_rate << std::setw(8) << s.f_score << std::setw(12)
       << fmt_le(s.localization_error) << std::setw(8) << s.localization_recall << "\n";
}

int run_eval(const EvalArgs& args) {
    EvalOptions options;
    options.doa_threshold_deg = args.threshold;
    options.segment_frames = args.segment;
    options.average = args.average == "micro" ? ClassAverage::kMicro : ClassAverage::kMacro;

    std::vector<std::pair<std::string, std::pair<fs::path, fs::path>>> pairs;
    if (fs::is_directory(args.ref)) {
        if (!fs::is_directory(args.pred)) {
            throw std::runtime_error("--ref is a directory, so --pred must be one too");
        }
        std::vector<fs::path> ref_files;
        for (const auto& entry : fs::directory_iterator(args.ref)) {
            if (entry.is_regular_file() && entry.path().extension() == ".csv") {
                ref_files.push_back(entry.path());
            }
        }
        std::sort(ref_files.begin(), ref_files.end());
        if (ref_files.empty()) {
            throw std::runtime_error(args.ref + ": no .csv metadata files");
        }
        for (const auto& rf : ref_files) {
            pairs.push_back({rf.stem().string(), {rf, fs::path(args.pred) / rf.filename()}});
        }
    } else {
        pairs.push_back({fs::path(args.ref).stem().string(), {args.ref, args.pred}});
    }

    SeldEvaluator aggregate(options);
    std::ostringstream csv;
    csv << "name,er20,f20,le,lr\n";

    std::cout << std::left << std::setw(28) << "file" << std::right << std::setw(8) << "ER20"
              << std::setw(8) << "F20" << std::setw(12) << "LE" << std::setw(8) << "LR"
              << "\n";
    for (const auto& [name, files] : pairs) {
        const auto ref_events = read_metadata(files.first);
        std::vector<SeldEvent> pred_events;
        if (fs::exists(files.second)) {
            pred_events = read_metadata(files.second);
        } else {
            std::cerr << "seldkit eval: warning: no predictions for " << name
                      << ", scoring as all deletions\n";
        }
        const SeldScores s = evaluate(ref_events, pred_events, options);
        aggregate.add(ref_events, pred_events);
        print_scores_row(std::cout, name, s);
        csv << name << ',' << s.error_rate << ',' << s.f_score << ','
            << (s.localization_error ? std::to_string(*s.localization_error) : "") << ','
            << s.localization_recall << "\n";
    }

    const EvalReport report = aggregate.report();
    print_scores_row(std::cout, "ALL", report.scores);
    csv << "ALL," << report.scores.error_rate << ',' << report.scores.f_score << ','
        << (report.scores.localization_error ? std::to_string(*report.scores.localization_error)
                                             : "")
        << ',' << report.scores.localization_recall << "\n";

    if (args.per_class) {
        std::cout << "\n" << std::left << std::setw(28) << "class" << std::right << std::setw(8)
                  << "F20" << std::setw(12) << "LE" << std::setw(8) << "LR" << std::setw(8)
                  << "refs" << "\n";
        for (const ClassScores& cs : report.per_class) {
            std::cout << std::left << std::setw(28) << ("class " + std::to_string(cs.class_idx))
                      << std::right << std::fixed << std::setprecision(3) << std::setw(8)
                      << cs.f_score() << std::setw(12) << fmt_le(cs.localization_error())
                      << std::setw(8)
                      << (cs.localization_recall() ? std::to_string(*cs.localization_recall())
                                                   : "undef")
                      << std::setw(8) << cs.ref_events << "\n";
        }
    }

    if (!args.csv.empty()) {
        write_file_atomic(args.csv, csv.str());
        std::cerr << "seldkit eval: scores -> " << args.csv << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------------------
// validate-doa
// ---------------------------------------------------------------------------

struct ValidateArgs {
    std::string audio;
    std::string meta;
    double tolerance = 5.0;
    int min_run_frames = 5;
};

int run_validate(const ValidateArgs& args) {
    const FoaClip clip = read_foa_wav(args.audio);
    const auto events = read_metadata(args.meta);
    const SceneValidation rep = validate_scene(clip, events, args.tolerance, args.min_run_frames);

    std::cout << std::left << std::setw(14) << "frames" << std::setw(8) << "class" << std::right
              << std::setw(18) << "labeled az/el" << std::setw(18) << "estimated az/el"
              << std::setw(10) << "err" << "  status\n";
    for (const DoaRunResult& r : rep.runs) {
        std::ostringstream span;
        span << r.start_frame << ".." << r.end_frame;
        std::ostringstream lab;
        lab << std::fixed << std::setprecision(0) << r.labeled.azimuth() << "/"
            << r.labeled.elevation();
        std::ostringstream est;
        est << std::fixed << std::setprecision(1) << r.estimated.azimuth() << "/"
            << r.estimated.elevation();
        std::cout << std::left << std::setw(14) << span.str() << std::setw(8) << r.class_idx
                  << std::right << std::setw(18) << lab.str() << std::setw(18) << est.str()
                  << std::setw(9) << std::fixed << std::setprecision(2) << r.error_deg << "  "
                  << (r.passed ? "pass" : "FAIL") << "\n";
    }
    int passed = 0;
    for (const auto& r : rep.runs) passed += r.passed ? 1 : 0;
    std::cout << "runs: " << rep.runs.size() << " evaluated, " << passed << " passed, "
              << rep.skipped_short << " skipped (short), " << rep.skipped_overlap
              << " skipped (overlap), tolerance " << args.tolerance << " deg\n";
    return rep.all_passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"seldkit: spatial audio-visual soundscape tooling"};
    app.require_subcommand(1);

    AugmentArgs aug;
    CLI::App* augment = app.add_subcommand(
        "augment", "Apply the 8 channel-swap/pixel-swap transforms to one recording");
    augment->add_option("--audio", aug.audio, "4-channel FOA WAV")->required();
    augment->add_option("--meta", aug.meta, "metadata CSV (frame,class,source,azimuth,elevation)")
        ->required();
    augment->add_option("--video", aug.video, "directory of equirectangular .ppm frames");
    augment->add_option("--out", aug.out, "output directory")->required();
    augment->add_flag("--float32", aug.float32, "write float32 WAVs instead of PCM16");
    augment->add_option("--jobs", aug.jobs, "worker threads (default: $SELDKIT_JOBS or cores)");

    SynthArgs synth;
    CLI::App* synth_cmd =
        app.add_subcommand("synth", "Generate synthetic audio-visual soundscapes");
    synth_cmd->add_option("--out", synth.out, "output root (foa/, metadata/, video/)")
        ->required();
    synth_cmd
        ->add_option("--assets", synth.assets,
                     "asset manifest: path,class_idx[,tile_frames_dir] per line")
        ->required();
    synth_cmd->add_option("--rirs", synth.rirs,
                          "RIR manifest (path,azimuth,elevation,distance,room_id) or 'anechoic'");
    synth_cmd->add_option("--count", synth.count, "number of scenes")->check(CLI::PositiveNumber);
    synth_cmd->add_option("--duration", synth.duration, "scene length in seconds")
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--max-polyphony", synth.max_polyphony,
                          "max concurrent events per 100 ms frame")
        ->check(CLI::PositiveNumber);
    synth_cmd->add_option("--seed", synth.seed, "base seed; scene i uses seed+i");
    synth_cmd->add_option("--sr", synth.sample_rate, "sample rate in Hz");
    synth_cmd->add_option("--fps", synth.fps, "video frame rate");
    synth_cmd->add_flag("--video", synth.video, "also render 1920x960 frame sequences");
    synth_cmd->add_option("--jobs", synth.jobs, "worker threads");

    EncodeAccdoaArgs acc;
    CLI::App* acc_cmd =
        app.add_subcommand("encode-accdoa", "Encode metadata into a multi-ACCDOA target tensor");
    acc_cmd->add_option("--meta", acc.meta, "metadata CSV")->required();
    acc_cmd->add_option("--out", acc.out, "output tensor file (T x 3 x 13 x 3 float32)")
        ->required();
    acc_cmd->add_option("--frames", acc.frames, "frame count T (default: last frame + 1)");

    EncodeVisualArgs vis;
    CLI::App* vis_cmd = app.add_subcommand(
        "encode-visual", "Encode detector boxes into Gaussian-like visual embeddings");
    vis_cmd->add_option("--boxes", vis.boxes, "CSV of frame,cx,cy,w,h (normalized)")->required();
    vis_cmd->add_option("--out", vis.out, "output tensor file (T x 2 x 6 x 37 float32)")
        ->required();

    EvalArgs eval_args;
    CLI::App* eval_cmd = app.add_subcommand("eval", "Score predictions with the SELD metrics");
    eval_cmd->add_option("--ref", eval_args.ref, "reference CSV file or directory")->required();
    eval_cmd->add_option("--pred", eval_args.pred, "prediction CSV file or directory")
        ->required();
    eval_cmd->add_option("--threshold", eval_args.threshold, "DoA gate in degrees (default 20)");
    eval_cmd->add_option("--segment", eval_args.segment, "segment length in frames (default 10)");
    eval_cmd->add_option("--average", eval_args.average, "macro or micro")
        ->check(CLI::IsMember({"macro", "micro"}));
    eval_cmd->add_flag("--per-class", eval_args.per_class, "print the per-class breakdown");
    eval_cmd->add_option("--csv", eval_args.csv, "write machine-readable scores here");

    ValidateArgs val;
    CLI::App* val_cmd = app.add_subcommand(
        "validate-doa", "Check rendered audio against metadata with the intensity estimator");
    val_cmd->add_option("--audio", val.audio, "4-channel FOA WAV")->required();
    val_cmd->add_option("--meta", val.meta, "metadata CSV")->required();
    val_cmd->add_option("--tolerance", val.tolerance, "pass threshold in degrees (default 5)");
    val_cmd->add_option("--min-run-frames", val.min_run_frames,
                        "shortest single-source run to evaluate (default 5)");

    int rc = 0;
    augment->callback([&] { rc = run_augment(aug); });
    synth_cmd->callback([&] { rc = run_synth(synth); });
    acc_cmd->callback([&] { rc = run_encode_accdoa(acc); });
    vis_cmd->callback([&] { rc = run_encode_visual(vis); });
    eval_cmd->callback([&] { rc = run_eval(eval_args); });
    val_cmd->callback([&] { rc = run_validate(val); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "seldkit: error: " << e.what() << "\n";
        return 1;
    }
    return rc;
}
