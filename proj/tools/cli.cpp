#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "dctfuse/dctfuse.hpp"

namespace dctfuse::cli {

namespace {

namespace fs = std::filesystem;

// Flag values as given on the command line; sigmas are in 8-bit units.
struct Settings {
  std::vector<std::string> inputs;
  std::string output;
  double sigma = 0.0;
  std::optional<double> sigma_fusion;
  double p = 7.0;
  double thresh = 2.7;
  int block = 8;
  int step = 2;
  int knn = 16;
  int search = 39;
  double sigma_l = 0.2;
  double sigma_g = 0.2;
  std::uint64_t seed = 0;
  bool deterministic = false;
  bool dump_weights = false;
  int threads = 0;
};

void add_pipeline_flags(CLI::App& cmd, Settings& s) {
  cmd.add_option("--sigma-fusion", s.sigma_fusion,
                 "Noise std of the fusion-stage threshold (8-bit units, joint mode)")
      ->check(CLI::NonNegativeNumber);
  cmd.add_option("--p", s.p, "Exponent of the magnitude weights")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--thresh", s.thresh, "Hard threshold multiplier T")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd.add_option("--block", s.block, "Patch size b")
      ->check(CLI::Range(1, 32))
      ->capture_default_str();
  cmd.add_option("--step", s.step, "Reference grid stride")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--knn", s.knn, "Number of similar 3D blocks per group")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--search", s.search, "Side of the (odd) block-matching window")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--sigma-l", s.sigma_l, "Width of the local exposedness term")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_option("--sigma-g", s.sigma_g, "Width of the global exposedness term")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd.add_flag("--deterministic", s.deterministic,
               "Run on a single worker for bit-reproducible output");
  cmd.add_option("--threads", s.threads, "Worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
}

PipelineConfig make_config(const Settings& s, Mode mode) {
  PipelineConfig cfg;
  cfg.mode = mode;
  cfg.fusion.p = s.p;
  cfg.fusion.threshold = s.thresh;
  cfg.fusion.sigma = s.sigma / 255.0;
  cfg.fusion.sigma_local = s.sigma_l;
  cfg.fusion.sigma_global = s.sigma_g;
  cfg.fusion.block = s.block;
  cfg.match.block = s.block;
  cfg.match.group_size = s.knn;
  cfg.match.search_window = s.search;
  cfg.step = s.step;
  cfg.deterministic = s.deterministic;
  cfg.threads = s.threads;
  if (s.sigma_fusion) cfg.fusion_sigma = *s.sigma_fusion / 255.0;
  return cfg;
}

ExposureSequence load_sequence(const std::vector<std::string>& paths) {
  std::vector<Image> images;
  images.reserve(paths.size());
  for (const auto& p : paths) images.push_back(load_png(p));
  for (std::size_t k = 1; k < images.size(); ++k) {
    if (!images[k].same_shape(images[0])) {
      throw std::runtime_error(
          paths[k] + ": dimensions differ from " + paths[0] +
          " (inputs must be registered images of equal size)");
    }
  }
  return ExposureSequence(std::move(images));
}

// Records the luma fusion weights of every reference patch, then writes one
// grayscale map per (exposure, frequency) with one pixel per grid position.
class WeightDump {
 public:
  WeightDump(int block, std::size_t exposures, FusionParams params,
             ExposureContext ctx)
      : block_(block), exposures_(exposures), params_(params), ctx_(std::move(ctx)) {}

  void record(const FusionEvent& e) {
    if (e.channel != 0 || !e.is_reference) return;
    const std::size_t nf = static_cast<std::size_t>(block_) * block_;
    std::vector<double> weights(exposures_ * nf);
    std::vector<double> mags(exposures_);
    std::vector<double> w(exposures_);
    for (std::size_t f = 0; f < nf; ++f) {
      for (std::size_t k = 0; k < exposures_; ++k) {
        const double c = e.inputs[k].coeffs[f];
        mags[k] = f == 0 ? c * ctx_.luma_scale / block_ : std::abs(c);
      }
      if (f == 0) {
        dc_weights_luma(mags, ctx_, params_.sigma_local, params_.sigma_global, w);
      } else {
        magnitude_weights(mags, params_.p, e.threshold, w);
      }
      for (std::size_t k = 0; k < exposures_; ++k) weights[k * nf + f] = w[k];
    }
    samples_[{e.position.y, e.position.x}] = std::move(weights);
  }

  void write(const fs::path& dir) const {
    fs::create_directories(dir);
    std::map<int, int> xs;
    std::map<int, int> ys;
    for (const auto& [pos, _] : samples_) {
      ys.emplace(pos.first, 0);
      xs.emplace(pos.second, 0);
    }
    int i = 0;
    for (auto& [_, idx] : xs) idx = i++;
    i = 0;
    for (auto& [_, idx] : ys) idx = i++;

    const std::size_t nf = static_cast<std::size_t>(block_) * block_;
    for (std::size_t k = 0; k < exposures_; ++k) {
      for (std::size_t f = 0; f < nf; ++f) {
        Image map(static_cast<int>(xs.size()), static_cast<int>(ys.size()), 1);
        for (const auto& [pos, weights] : samples_) {
          map.at(xs.at(pos.second), ys.at(pos.first), 0) = weights[k * nf + f];
        }
        const auto name = "weight_e" + std::to_string(k) + "_u" +
                          std::to_string(f / block_) + "_v" +
                          std::to_string(f % block_) + ".png";
        save_png(map, dir / name);
      }
    }
  }

 private:
  int block_;
  std::size_t exposures_;
  FusionParams params_;
  ExposureContext ctx_;
  std::map<std::pair<int, int>, std::vector<double>> samples_;
};

void run_fusion(const Settings& s, Mode mode, std::ostream& out) {
  const ExposureSequence seq = load_sequence(s.inputs);
  PipelineConfig cfg = make_config(s, mode);
  cfg.validate();

  std::optional<WeightDump> dump;
  if (s.dump_weights) {
    FusionParams params = cfg.fusion;
    if (mode == Mode::Joint) params.sigma = cfg.fusion_sigma.value_or(params.sigma);
    dump.emplace(cfg.fusion.block, seq.size(), params, compute_exposure_context(seq));
    cfg.observer = [&dump](const FusionEvent& e) { dump->record(e); };
  }

  const Image fused = process(seq, cfg);
  save_png(fused, s.output);
  out << "wrote " << s.output << " (" << fused.width() << "x" << fused.height()
      << ", " << seq.size() << " exposures)\n";

  if (dump) {
    fs::path dir = s.output;
    dir.replace_extension();
    dir += "_weights";
    dump->write(dir);
    out << "wrote weight maps to " << dir.string() << "\n";
  }
}

void run_bench(const Settings& s, std::ostream& out) {
  const ExposureSequence seq = load_sequence(s.inputs);
  const Mode mode = s.sigma > 0.0 ? Mode::Joint : Mode::FuseOnly;
  const PipelineConfig cfg = make_config(s, mode);
  cfg.validate();

  const CostReport report =
      estimate_cost(cfg, seq.width(), seq.height(), static_cast<int>(seq.size()));
  out << "mode " << (mode == Mode::Joint ? "denoise-fuse" : "fuse") << "\n";
  out << "image " << seq.width() << "x" << seq.height() << " exposures "
      << seq.size() << "\n";
  out << format_cost_report(report);

  const auto start = std::chrono::steady_clock::now();
  const Image fused = process(seq, cfg);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double megapixels = static_cast<double>(seq.width()) * seq.height() / 1e6;
  out << "wall_clock_seconds       " << seconds << "\n";
  out << "seconds_per_megapixel    " << seconds / megapixels << "\n";
  if (!s.output.empty()) save_png(fused, s.output);
}

std::string format_db(double db) {
  if (std::isinf(db)) return "inf";
  std::ostringstream os;
  os.precision(4);
  os << std::fixed << db;
  return os.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"DCT-domain multi-exposure fusion with joint collaborative denoising",
               "dctfuse"};
  app.require_subcommand(1);

  Settings fuse;
  auto* fuse_cmd = app.add_subcommand("fuse", "Fuse a registered exposure bracket");
  fuse_cmd->add_option("inputs", fuse.inputs, "Input PNGs ordered by exposure")
      ->required()
      ->check(CLI::ExistingFile);
  fuse_cmd->add_option("-o,--output", fuse.output, "Output PNG")->required();
  fuse_cmd->add_option("--sigma", fuse.sigma,
                       "Noise std (8-bit units); enables DCT hard thresholding")
      ->check(CLI::NonNegativeNumber);
  fuse_cmd->add_flag("--dump-weights", fuse.dump_weights,
                     "Write per-frequency luma weight maps next to the output");
  add_pipeline_flags(*fuse_cmd, fuse);

  Settings joint;
  auto* joint_cmd = app.add_subcommand(
      "denoise-fuse", "Jointly denoise and fuse a noisy exposure bracket");
  joint_cmd->add_option("inputs", joint.inputs, "Input PNGs ordered by exposure")
      ->required()
      ->check(CLI::ExistingFile);
  joint_cmd->add_option("-o,--output", joint.output, "Output PNG")->required();
  joint_cmd->add_option("--sigma", joint.sigma, "Noise std (8-bit units)")
      ->required()
      ->check(CLI::PositiveNumber);
  joint_cmd->add_flag("--dump-weights", joint.dump_weights,
                      "Write per-frequency luma weight maps next to the output");
  add_pipeline_flags(*joint_cmd, joint);

  Settings noise;
  auto* noise_cmd = app.add_subcommand("add-noise", "Add white Gaussian noise");
  noise_cmd->add_option("input", noise.inputs, "Input PNG")
      ->required()
      ->expected(1)
      ->check(CLI::ExistingFile);
  noise_cmd->add_option("-o,--output", noise.output, "Output PNG")->required();
  noise_cmd->add_option("--sigma", noise.sigma, "Noise std (8-bit units)")
      ->required()
      ->check(CLI::NonNegativeNumber);
  noise_cmd->add_option("--seed", noise.seed, "RNG seed")->capture_default_str();

  std::vector<std::string> psnr_inputs;
  auto* psnr_cmd = app.add_subcommand("psnr", "PSNR in dB between two images");
  psnr_cmd->add_option("images", psnr_inputs, "Two PNGs of equal size")
      ->required()
      ->expected(2)
      ->check(CLI::ExistingFile);

  Settings bench;
  auto* bench_cmd = app.add_subcommand(
      "bench", "Print the operation-count estimate and time one run");
  bench_cmd->add_option("inputs", bench.inputs, "Input PNGs ordered by exposure")
      ->required()
      ->check(CLI::ExistingFile);
  bench_cmd->add_option("-o,--output", bench.output, "Optional output PNG");
  bench_cmd->add_option("--sigma", bench.sigma,
                        "Noise std (8-bit units); > 0 benchmarks denoise-fuse")
      ->check(CLI::NonNegativeNumber);
  add_pipeline_flags(*bench_cmd, bench);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*fuse_cmd) {
      run_fusion(fuse, Mode::FuseOnly, out);
    } else if (*joint_cmd) {
      run_fusion(joint, Mode::Joint, out);
    } else if (*noise_cmd) {
      const Image img = load_png(noise.inputs.front());
      save_png(add_gaussian_noise(img, noise.sigma, noise.seed), noise.output);
      out << "wrote " << noise.output << "\n";
    } else if (*psnr_cmd) {
      const Image a = load_png(psnr_inputs[0]);
      const Image b = load_png(psnr_inputs[1]);
      out << format_db(psnr(a, b)) << "\n";
    } else if (*bench_cmd) {
      run_bench(bench, out);
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace dctfuse::cli
