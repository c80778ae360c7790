// Copyright 2026 The evrec authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <cinttypes>
#include <fstream>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "evrec/degeneration.hpp"
#include "evrec/event_core.hpp"
#include "evrec/io_formats.hpp"
#include "evrec/metrics.hpp"
#include "evrec/parallel.hpp"
#include "evrec/recon.hpp"
#include "evrec/sim.hpp"
#include "evrec/sparse.hpp"

namespace fs = std::filesystem;
using namespace evrec;

namespace {

struct CommonOpts {
  int threads = 0;
  std::string config;
};

void add_common(CLI::App* sub, CommonOpts& opts) {
  sub->add_option("--threads", opts.threads,
                  "cap on data-parallel workers (0 = all cores)");
  sub->add_option("--config", opts.config,
                  "read 'key = value' defaults from a file");
}

// Apply config-file values to every option of the parsed subcommand that
// was not given on the command line, so the precedence is
// flag > config > default. Keys are named identically to the long flags.
void apply_config(CLI::App* sub, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error(path + ": cannot open config file");
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos) {
        throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                 ": expected 'key = value'");
      }
      continue;
    }
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || key == "config") continue;
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr) {
      throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                               ": no option named '" + key + "' for subcommand '" +
                               sub->get_name() + "'");
    }
    if (opt->count() == 0) {
      opt->add_result(value);
      opt->run_callback();
    }
  }
}

void echo(const std::string& key, const std::string& value) {
  std::fprintf(stderr, "%s = %s\n", key.c_str(), value.c_str());
}
void echo(const std::string& key, double value) {
  std::fprintf(stderr, "%s = %.17g\n", key.c_str(), value);
}
void echo(const std::string& key, int64_t value) {
  std::fprintf(stderr, "%s = %" PRId64 "\n", key.c_str(), value);
}

FrameSequence load_sequence(const fs::path& dir, double fps) {
  if (!(fps > 0.0)) throw std::runtime_error("frame rate must be positive");
  const auto files = list_images(dir);
  if (files.size() < 2) {
    throw std::runtime_error(dir.string() + ": need at least two frames");
  }
  FrameSequence seq;
  seq.frames.reserve(files.size());
  for (size_t i = 0; i < files.size(); ++i) {
    seq.frames.push_back(read_image(files[i]));
    seq.timestamps.push_back(static_cast<double>(i) / fps);
  }
  return seq;
}

std::string frame_name(int index, const std::string& ext) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%06d.%s", index, ext.c_str());
  return buf;
}

KernelBank load_dictionary(const std::string& spec) {
  if (spec == "identity") return KernelBank::identity();
  if (spec == "dct8") return KernelBank::dct8();
  return read_kernel_bank(spec);
}

// ---------------------------------------------------------------------------

struct SimulateOpts {
  std::string input;
  std::string output;
  double fps = 0.0;
  double threshold = 0.1;
  double floor = kDefaultIntensityFloor;
  int blur_first = 0;
  int blur_count = 17;
  std::string blur_output;
  CommonOpts common;
};

int run_simulate(const SimulateOpts& o) {
  set_thread_count(o.common.threads);
  echo("input", o.input);
  echo("fps", o.fps);
  echo("threshold", o.threshold);
  echo("floor", o.floor);
  echo("output", o.output);

  FrameSequence seq = load_sequence(o.input, o.fps);
  EventStream events = simulate_events(seq, o.threshold, o.floor);
  write_events(o.output, events);
  std::printf("%zu events over %.17g s\n", events.events.size(), events.duration);

  if (!o.blur_output.empty()) {
    BlurredFrame blur = synthesize_blur(seq, o.blur_first, o.blur_count);
    write_image(o.blur_output, blur.image);
    std::printf("blur window [%.17g, %.17g]\n", blur.t_start,
                blur.t_start + blur.duration);
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct DegradeOpts {
  std::string input;
  std::string output;
  double fps = 960.0;
  int scale = 4;
  std::string method = "bicubic";
  int blur_frames = 17;
  int stride = 0;
  double sigma = 4.0;
  double noise_events = 0.3;
  double threshold = 0.1;
  double floor = kDefaultIntensityFloor;
  std::string format = "pgm";
  uint64_t seed = 0;
  CommonOpts common;
};

int run_degrade(const DegradeOpts& o) {
  set_thread_count(o.common.threads);
  echo("input", o.input);
  echo("output", o.output);
  echo("fps", o.fps);
  echo("scale", static_cast<int64_t>(o.scale));
  echo("method", o.method);
  echo("blur-frames", static_cast<int64_t>(o.blur_frames));
  echo("stride", static_cast<int64_t>(o.stride ? o.stride : o.blur_frames));
  echo("sigma", o.sigma);
  echo("noise-events", o.noise_events);
  echo("threshold", o.threshold);
  echo("seed", static_cast<int64_t>(o.seed));
  echo("format", o.format);

  const DownsampleOp op{o.scale, o.method == "box"
                                     ? DownsampleMethod::box_average
                                     : DownsampleMethod::bicubic};
  FrameSequence hr = load_sequence(o.input, o.fps);
  FrameSequence lr;
  lr.timestamps = hr.timestamps;
  for (const Image& frame : hr.frames) lr.frames.push_back(downsample(frame, op));

  const fs::path root(o.output);
  for (const char* part : {"hr", "lr", "blur", "events"}) {
    fs::create_directories(root / part);
  }
  for (int i = 0; i < hr.frame_count(); ++i) {
    write_image(root / "hr" / frame_name(i, o.format), hr.frames[i]);
    write_image(root / "lr" / frame_name(i, o.format), lr.frames[i]);
  }

  const int stride = o.stride > 0 ? o.stride : o.blur_frames;
  IntegralField unit_field;
  unit_field.values = Image(lr.frames[0].width, lr.frames[0].height, 1.0);
  int window = 0;
  for (int first = 0; first + o.blur_frames <= lr.frame_count(); first += stride) {
    // per-window simulation: the event sequence of a blurry frame comes
    // from exactly the frames it averages
    FrameSequence sub;
    sub.frames.assign(lr.frames.begin() + first,
                      lr.frames.begin() + first + o.blur_frames);
    sub.timestamps.assign(lr.timestamps.begin() + first,
                          lr.timestamps.begin() + first + o.blur_frames);

    BlurredFrame blur = synthesize_blur(sub, 0, o.blur_frames);
    Image noisy = apply_forward(blur.image, unit_field,
                                {1, DownsampleMethod::box_average}, o.sigma,
                                o.seed + 1000003ull * window + 1);
    write_image(root / "blur" / frame_name(window, o.format), noisy);

    EventStream events = simulate_events(sub, o.threshold, o.floor);
    events = inject_noise_events(events, o.noise_events,
                                 o.seed + 1000003ull * window + 2);
    write_events(root / "events" / frame_name(window, "txt"), events);
    ++window;
  }
  std::printf("%d frames, %d degraded windows\n", hr.frame_count(), window);
  return 0;
}

// ---------------------------------------------------------------------------

struct ReconstructOpts {
  std::string image;
  std::string events;
  std::string method = "esl";
  double time = 0.0;
  int scale = 1;
  std::string dict = "dct8";
  std::string dict_hr;
  double lambda = 0.01;
  int iters = 20;
  double tolerance = 0.0;
  double lipschitz = 0.0;
  bool nonnegative = false;
  double threshold = 0.1;
  std::string output = "out.pgm";
  std::string dump_integral;
  CommonOpts common;
};

int run_reconstruct(const ReconstructOpts& o) {
  set_thread_count(o.common.threads);
  echo("image", o.image);
  echo("events", o.events);
  echo("method", o.method);
  echo("time", o.time);
  echo("scale", static_cast<int64_t>(o.scale));
  echo("dict", o.dict);
  echo("lambda", o.lambda);
  echo("iters", static_cast<int64_t>(o.iters));
  echo("threshold", o.threshold);
  echo("output", o.output);

  if (!(o.time >= 0.0 && o.time <= 1.0)) {
    throw std::runtime_error("--time must be a fraction of the exposure in [0, 1]");
  }
  const Image observed = read_image(o.image);
  const EventStream stream = read_events(o.events);
  if (stream.width != observed.width || stream.height != observed.height) {
    throw std::runtime_error("event stream and image dimensions differ");
  }
  const double t_ref = stream.t_start + o.time * stream.duration;

  if (!o.dump_integral.empty()) {
    write_text_grid(o.dump_integral,
                    double_integral(stream, o.threshold, t_ref).values);
  }

  Image out;
  if (o.method == "edi") {
    if (o.scale != 1) {
      throw std::runtime_error("the EDI baseline cannot super-resolve; use --scale 1");
    }
    out = edi_reconstruct(observed, double_integral(stream, o.threshold, t_ref));
  } else {
    SolverConfig cfg;
    cfg.lambda = o.lambda;
    cfg.iterations = o.iters;
    cfg.tolerance = o.tolerance;
    if (o.lipschitz > 0.0) cfg.lipschitz = o.lipschitz;
    cfg.nonnegative = o.nonnegative;
    const KernelBank lr_bank = load_dictionary(o.dict);
    const KernelBank hr_bank = o.dict_hr.empty()
                                   ? lr_bank.replicated(o.scale)
                                   : read_kernel_bank(o.dict_hr);
    out = esl_reconstruct(observed, stream, t_ref, o.threshold, lr_bank,
                          hr_bank, o.scale, cfg);
  }
  clamp_image(out, 0.0, 1.0);
  write_image(o.output, out);
  return 0;
}

// ---------------------------------------------------------------------------

struct VideoOpts {
  ReconstructOpts base;
  int frames = 21;
  bool reversal = false;
  std::string format = "pgm";
};

int run_video(const VideoOpts& o) {
  set_thread_count(o.base.common.threads);
  echo("image", o.base.image);
  echo("events", o.base.events);
  echo("frames", static_cast<int64_t>(o.frames));
  echo("scale", static_cast<int64_t>(o.base.scale));
  echo("dict", o.base.dict);
  echo("lambda", o.base.lambda);
  echo("iters", static_cast<int64_t>(o.base.iters));
  echo("threshold", o.base.threshold);
  echo("reversal", std::string(o.reversal ? "true" : "false"));
  echo("output", o.base.output);

  const Image observed = read_image(o.base.image);
  const EventStream stream = read_events(o.base.events);
  if (stream.width != observed.width || stream.height != observed.height) {
    throw std::runtime_error("event stream and image dimensions differ");
  }
  SolverConfig cfg;
  cfg.lambda = o.base.lambda;
  cfg.iterations = o.base.iters;
  cfg.tolerance = o.base.tolerance;
  if (o.base.lipschitz > 0.0) cfg.lipschitz = o.base.lipschitz;
  cfg.nonnegative = o.base.nonnegative;
  const KernelBank lr_bank = load_dictionary(o.base.dict);
  const KernelBank hr_bank = o.base.dict_hr.empty()
                                 ? lr_bank.replicated(o.base.scale)
                                 : read_kernel_bank(o.base.dict_hr);

  FrameSequence video = generate_video(
      observed, stream, o.frames, o.base.threshold, lr_bank, hr_bank,
      o.base.scale, cfg, o.reversal ? VideoMode::reversal : VideoMode::direct);

  fs::create_directories(o.base.output);
  for (int i = 0; i < video.frame_count(); ++i) {
    Image frame = video.frames[i];
    clamp_image(frame, 0.0, 1.0);
    write_image(fs::path(o.base.output) / frame_name(i, o.format), frame);
    std::printf("%d\t%.17g\n", i, video.timestamps[i]);
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct EvaluateOpts {
  std::string recon;
  std::string reference;
  int first = 0;
  int last = -1;
  CommonOpts common;
};

int run_evaluate(const EvaluateOpts& o) {
  set_thread_count(o.common.threads);
  echo("recon", o.recon);
  echo("reference", o.reference);
  echo("first", static_cast<int64_t>(o.first));
  echo("last", static_cast<int64_t>(o.last));

  const auto recon_files = list_images(o.recon);
  const auto ref_files = list_images(o.reference);
  if (recon_files.size() != ref_files.size()) {
    throw std::runtime_error("directories hold different frame counts");
  }
  const int count = static_cast<int>(recon_files.size());
  const int last = o.last < 0 ? count - 1 : std::min(o.last, count - 1);
  if (o.first < 0 || o.first > last) {
    throw std::runtime_error("empty frame range");
  }
  std::printf("frame\tpsnr\tssim\n");
  double psnr_sum = 0.0, ssim_sum = 0.0;
  int n = 0;
  for (int i = o.first; i <= last; ++i) {
    const Image a = read_image(recon_files[i]);
    const Image b = read_image(ref_files[i]);
    const double p = psnr(a, b);
    const double s = ssim(a, b);
    std::printf("%d\t%.4f\t%.6f\n", i, p, s);
    psnr_sum += p;
    ssim_sum += s;
    ++n;
  }
  std::printf("mean\t%.4f\t%.6f\n", psnr_sum / n, ssim_sum / n);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"event-enhanced image recovery toolkit"};
  app.require_subcommand(1);

  SimulateOpts sim_opts;
  CLI::App* sim = app.add_subcommand("simulate", "events from a frame directory");
  sim->add_option("--input", sim_opts.input, "directory of numbered frames")->required();
  sim->add_option("--fps", sim_opts.fps, "frame rate of the input sequence")->required();
  sim->add_option("--threshold", sim_opts.threshold, "contrast threshold c");
  sim->add_option("--floor", sim_opts.floor, "intensity floor before taking logs");
  sim->add_option("--output", sim_opts.output, "event text file to write")->required();
  sim->add_option("--blur-first", sim_opts.blur_first, "first frame of the optional blur");
  sim->add_option("--blur-count", sim_opts.blur_count, "frames averaged into the blur");
  sim->add_option("--blur-output", sim_opts.blur_output, "write the blurry image here");
  add_common(sim, sim_opts.common);

  DegradeOpts degrade_opts;
  CLI::App* degrade = app.add_subcommand("degrade", "synthesize the degraded dataset");
  degrade->add_option("--input", degrade_opts.input, "directory of HR frames")->required();
  degrade->add_option("--output", degrade_opts.output, "dataset root to write")->required();
  degrade->add_option("--fps", degrade_opts.fps, "frame rate of the input sequence");
  degrade->add_option("--scale", degrade_opts.scale, "downsampling factor");
  degrade->add_option("--method", degrade_opts.method, "box or bicubic")
      ->check(CLI::IsMember({"box", "bicubic"}));
  degrade->add_option("--blur-frames", degrade_opts.blur_frames, "frames per blurry exposure");
  degrade->add_option("--stride", degrade_opts.stride, "frames between windows (0 = blur-frames)");
  degrade->add_option("--sigma", degrade_opts.sigma, "Gaussian noise sigma on the 0-255 scale");
  degrade->add_option("--noise-events", degrade_opts.noise_events, "spurious event ratio");
  degrade->add_option("--threshold", degrade_opts.threshold, "contrast threshold c");
  degrade->add_option("--floor", degrade_opts.floor, "intensity floor before taking logs");
  degrade->add_option("--format", degrade_opts.format, "pgm or png")
      ->check(CLI::IsMember({"pgm", "png"}));
  degrade->add_option("--seed", degrade_opts.seed, "seed for every stochastic path");
  add_common(degrade, degrade_opts.common);

  ReconstructOpts rec_opts;
  CLI::App* rec = app.add_subcommand("reconstruct", "recover a latent image");
  rec->add_option("--image", rec_opts.image, "blurry observation")->required();
  rec->add_option("--events", rec_opts.events, "event text file")->required();
  rec->add_option("--method", rec_opts.method, "edi or esl")
      ->check(CLI::IsMember({"edi", "esl"}));
  rec->add_option("--time", rec_opts.time, "reference time as a fraction of the exposure");
  rec->add_option("--scale", rec_opts.scale, "super-resolution factor");
  rec->add_option("--dict", rec_opts.dict, "identity, dct8 or an ESLK file");
  rec->add_option("--dict-hr", rec_opts.dict_hr, "HR dictionary (default: replicated atoms)");
  rec->add_option("--lambda", rec_opts.lambda, "sparsity weight");
  rec->add_option("--iters", rec_opts.iters, "solver iterations");
  rec->add_option("--tolerance", rec_opts.tolerance, "early-stop threshold (0 = fixed count)");
  rec->add_option("--lipschitz", rec_opts.lipschitz, "fixed step bound (0 = auto)");
  rec->add_flag("--nonnegative", rec_opts.nonnegative, "nonnegative code");
  rec->add_option("--threshold", rec_opts.threshold, "contrast threshold c");
  rec->add_option("--output", rec_opts.output, "image file to write");
  rec->add_option("--dump-integral", rec_opts.dump_integral,
                  "write E(t_r) as a text grid for debugging");
  add_common(rec, rec_opts.common);

  VideoOpts video_opts;
  CLI::App* video = app.add_subcommand("video", "frames across the exposure");
  video->add_option("--image", video_opts.base.image, "blurry observation")->required();
  video->add_option("--events", video_opts.base.events, "event text file")->required();
  video->add_option("--frames", video_opts.frames, "number of frames to generate");
  video->add_option("--scale", video_opts.base.scale, "super-resolution factor");
  video->add_option("--dict", video_opts.base.dict, "identity, dct8 or an ESLK file");
  video->add_option("--dict-hr", video_opts.base.dict_hr, "HR dictionary");
  video->add_option("--lambda", video_opts.base.lambda, "sparsity weight");
  video->add_option("--iters", video_opts.base.iters, "solver iterations");
  video->add_option("--tolerance", video_opts.base.tolerance, "early-stop threshold");
  video->add_option("--lipschitz", video_opts.base.lipschitz, "fixed step bound (0 = auto)");
  video->add_flag("--nonnegative", video_opts.base.nonnegative, "nonnegative code");
  video->add_option("--threshold", video_opts.base.threshold, "contrast threshold c");
  video->add_flag("--reversal", video_opts.reversal,
                  "reverse events before t_r instead of direct evaluation");
  video->add_option("--output", video_opts.base.output, "directory for the frames")->required();
  video->add_option("--format", video_opts.format, "pgm or png")
      ->check(CLI::IsMember({"pgm", "png"}));
  add_common(video, video_opts.base.common);

  EvaluateOpts eval_opts;
  CLI::App* eval = app.add_subcommand("evaluate", "PSNR/SSIM against references");
  eval->add_option("--recon", eval_opts.recon, "reconstructed frames")->required();
  eval->add_option("--reference", eval_opts.reference, "ground-truth frames")->required();
  eval->add_option("--first", eval_opts.first, "first frame index to score");
  eval->add_option("--last", eval_opts.last, "last frame index to score (-1 = end)");
  add_common(eval, eval_opts.common);

  CLI11_PARSE(app, argc, argv);

  try {
    for (CLI::App* sub : {sim, degrade, rec, video, eval}) {
      if (sub->parsed()) {
        const std::string config = sub->get_option("--config")->as<std::string>();
        if (!config.empty()) apply_config(sub, config);
      }
    }
    if (sim->parsed()) return run_simulate(sim_opts);
    if (degrade->parsed()) return run_degrade(degrade_opts);
    if (rec->parsed()) return run_reconstruct(rec_opts);
    if (video->parsed()) return run_video(video_opts);
    if (eval->parsed()) return run_evaluate(eval_opts);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
