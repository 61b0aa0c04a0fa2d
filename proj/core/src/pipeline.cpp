#include "dctfuse/pipeline.hpp"

#include <algorithm>
#include <memory>
#include <stdexcept>
#include <thread>
#include <vector>

#include "dctfuse/color.hpp"
#include "dctfuse/dct.hpp"

namespace dctfuse {

void PipelineConfig::validate() const {
  fusion.validate();
  match.validate();
  if (match.block != fusion.block) {
    throw std::invalid_argument("match and fusion block sizes differ");
  }
  if (step < 1 || step > fusion.block) {
    throw std::invalid_argument("grid step must satisfy 1 <= step <= block");
  }
  if (threads < 0) throw std::invalid_argument("thread count must be >= 0");
  if (fusion_sigma && !(*fusion_sigma >= 0.0)) {
    throw std::invalid_argument("fusion sigma must be non-negative");
  }
  if (mode == Mode::Joint && !(fusion.sigma > 0.0)) {
    throw std::invalid_argument("joint denoising and fusion requires sigma > 0");
  }
}

ExposureContext compute_exposure_context(const ExposureSequence& seq) {
  ExposureContext ctx;
  ctx.luma_scale = seq.channels() == 3 ? kLumaToUnit : 1.0;
  for (const auto& img : seq) {
    double total = 0.0;
    for (double v : img.data()) total += v;
    ctx.image_means.push_back(total / static_cast<double>(img.data().size()));
  }
  return ctx;
}

namespace {

// Input converted to the working space: YUV for RGB, unchanged for gray.
struct WorkingSet {
  std::vector<Image> images;
  int width;
  int height;
  int channels;
};

WorkingSet to_working(const ExposureSequence& seq) {
  WorkingSet ws{{}, seq.width(), seq.height(), seq.channels()};
  ws.images.reserve(seq.size());
  for (const auto& img : seq) {
    ws.images.push_back(img.channels() == 3 ? rgb_to_yuv(img) : img);
  }
  return ws;
}

Image to_output(const Image& fused) {
  Image out = fused.channels() == 3 ? yuv_to_rgb(fused) : fused;
  for (double& v : out.data()) v = std::clamp(v, 0.0, 1.0);
  return out;
}

int worker_count(const PipelineConfig& cfg, std::size_t items) {
  if (cfg.deterministic || cfg.observer) return 1;
  int n = cfg.threads > 0 ? cfg.threads
                          : static_cast<int>(std::thread::hardware_concurrency());
  n = std::max(n, 1);
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n),
                                                std::max<std::size_t>(items, 1)));
}

// Splits the grid into contiguous chunks, runs `work(begin, end, acc)` on
// each with a private accumulator, and merges the results in chunk order.
template <typename Work>
Image run_grid(const std::vector<Position>& grid, const WorkingSet& ws,
               const PipelineConfig& cfg, Work work) {
  const int workers = worker_count(cfg, grid.size());
  if (workers == 1) {
    Accumulator acc(ws.width, ws.height, ws.channels);
    work(std::size_t{0}, grid.size(), acc);
    return acc.finalize();
  }

  std::vector<std::unique_ptr<Accumulator>> accs;
  for (int w = 0; w < workers; ++w) {
    accs.push_back(std::make_unique<Accumulator>(ws.width, ws.height, ws.channels));
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  {
    std::vector<std::jthread> pool;
    const std::size_t n = grid.size();
    for (int w = 0; w < workers; ++w) {
      const std::size_t begin = n * static_cast<std::size_t>(w) / workers;
      const std::size_t end = n * static_cast<std::size_t>(w + 1) / workers;
      pool.emplace_back([&, w, begin, end] {
        try {
          work(begin, end, *accs[static_cast<std::size_t>(w)]);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (int w = 1; w < workers; ++w) accs.front()->merge(*accs[static_cast<std::size_t>(w)]);
  return accs.front()->finalize();
}

void fuse_stack(std::span<const DctPatch> stack, int channel,
                const ExposureContext& ctx, const FusionParams& params,
                DctPatch& fused) {
  if (channel == 0) {
    fuse_patch_luma(stack, ctx, params, fused);
  } else {
    fuse_patch_chroma(stack, params, fused);
  }
}

}  // namespace

Image fuse_sequence(const ExposureSequence& seq, const PipelineConfig& cfg) {
  cfg.validate();
  const WorkingSet ws = to_working(seq);
  const ExposureContext ctx = compute_exposure_context(seq);
  const int b = cfg.fusion.block;
  const auto grid = reference_grid(ws.width, ws.height, b, cfg.step);
  const std::size_t K = ws.images.size();
  const double threshold = cfg.fusion.threshold * cfg.fusion.sigma;

  auto work = [&](std::size_t begin, std::size_t end, Accumulator& acc) {
    const Dct2Plan plan(b);
    std::vector<DctPatch> stack(K, DctPatch({}, b));
    DctPatch fused({}, b);
    std::vector<double> block(static_cast<std::size_t>(b) * b);
    for (std::size_t g = begin; g < end; ++g) {
      const Position ref = grid[g];
      for (int c = 0; c < ws.channels; ++c) {
        for (std::size_t k = 0; k < K; ++k) {
          read_block(ws.images[k], c, ref, b, block);
          plan.forward(block, stack[k].coeffs);
          stack[k].origin = ref;
        }
        fuse_stack(stack, c, ctx, cfg.fusion, fused);
        if (cfg.observer) cfg.observer({ref, c, stack, fused, threshold, true});
        plan.inverse(fused.coeffs, block);
        acc.accumulate(ref, b, block, c);
      }
    }
  };
  return to_output(run_grid(grid, ws, cfg, work));
}

Image denoise_and_fuse(const ExposureSequence& seq, const PipelineConfig& cfg) {
  cfg.validate();
  if (!(cfg.fusion.sigma > 0.0)) {
    throw std::invalid_argument("joint denoising and fusion requires sigma > 0");
  }
  const WorkingSet ws = to_working(seq);
  const ExposureContext ctx = compute_exposure_context(seq);
  const int b = cfg.fusion.block;
  const auto grid = reference_grid(ws.width, ws.height, b, cfg.step);
  const std::size_t K = ws.images.size();

  std::vector<Image> luma_images;
  luma_images.reserve(K);
  for (const auto& img : ws.images) {
    Image y(ws.width, ws.height, 1);
    std::ranges::copy(img.plane(0), y.plane(0).begin());
    luma_images.push_back(std::move(y));
  }
  const ExposureSequence luma(std::move(luma_images));

  const double sigma = cfg.fusion.sigma;
  const double T = cfg.fusion.threshold;
  FusionParams fusion_params = cfg.fusion;
  fusion_params.sigma = cfg.fusion_sigma.value_or(cfg.fusion.sigma);
  const double fusion_threshold = fusion_params.threshold * fusion_params.sigma;

  std::vector<Dct1Plan> stack_plans;
  for (int n = 1; n <= cfg.match.group_size; ++n) stack_plans.emplace_back(n);

  auto work = [&](std::size_t begin, std::size_t end, Accumulator& acc) {
    const Dct2Plan plan(b);
    BlockMatcher matcher(luma, cfg.match);
    std::vector<BlockMatch> matches;
    const std::size_t group = static_cast<std::size_t>(cfg.match.group_size);
    // groups[k][j]: exposure k, j-th matched position, 2D-DCT domain.
    std::vector<std::vector<DctPatch>> groups(
        K, std::vector<DctPatch>(group, DctPatch({}, b)));
    std::vector<DctPatch> stack(K, DctPatch({}, b));
    DctPatch fused({}, b);
    std::vector<double> block(static_cast<std::size_t>(b) * b);

    for (std::size_t g = begin; g < end; ++g) {
      matcher.find(grid[g], matches);
      const std::size_t n = matches.size();
      const Dct1Plan& stack_plan = stack_plans[n - 1];
      for (int c = 0; c < ws.channels; ++c) {
        for (std::size_t k = 0; k < K; ++k) {
          for (std::size_t j = 0; j < n; ++j) {
            read_block(ws.images[k], c, matches[j].position, b, block);
            plan.forward(block, groups[k][j].coeffs);
            groups[k][j].origin = matches[j].position;
          }
          collaborative_filter(std::span(groups[k]).first(n), sigma, T, stack_plan);
        }
        for (std::size_t j = 0; j < n; ++j) {
          for (std::size_t k = 0; k < K; ++k) {
            std::ranges::copy(groups[k][j].coeffs, stack[k].coeffs.begin());
            stack[k].origin = matches[j].position;
          }
          fuse_stack(stack, c, ctx, fusion_params, fused);
          if (cfg.observer) {
            cfg.observer({matches[j].position, c, stack, fused, fusion_threshold,
                          j == 0});
          }
          plan.inverse(fused.coeffs, block);
          acc.accumulate(matches[j].position, b, block, c);
        }
      }
    }
  };
  return to_output(run_grid(grid, ws, cfg, work));
}

Image process(const ExposureSequence& seq, const PipelineConfig& cfg) {
  return cfg.mode == Mode::Joint ? denoise_and_fuse(seq, cfg)
                                 : fuse_sequence(seq, cfg);
}

}  // namespace dctfuse
