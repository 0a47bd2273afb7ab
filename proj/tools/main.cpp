#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

#include "depthkit/commands.hpp"

namespace {

std::optional<std::filesystem::path> config_or_env(const std::string& flag_value) {
  if (!flag_value.empty()) return std::filesystem::path(flag_value);
  if (const char* env = std::getenv("DEPTHKIT_CONFIG")) return std::filesystem::path(env);
  return std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"depthkit: sparse-scan simulation, distillation losses, and depth metrics"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "simulate a sparse scan from a dense depth file");
  std::string gen_mono, gen_image, gen_config, gen_out;
  std::uint64_t gen_seed = 0;
  bool gen_seed_set = false;
  int gen_threads = 0;
  bool gen_threads_set = false;
  bool gen_mesh = false;
  gen->add_option("--mono", gen_mono, "dense (monocular) depth file or directory")->required();
  gen->add_option("--image", gen_image, "companion RGB image (checked for existence only)");
  gen->add_option("--config", gen_config, "pipeline config file");
  gen->add_option("--out", gen_out, "output directory")->required();
  gen->add_option("--seed", gen_seed, "override the config seed")->each([&](const std::string&) {
    gen_seed_set = true;
  });
  gen->add_option("--threads", gen_threads, "worker threads (0 = hardware)")
      ->each([&](const std::string&) { gen_threads_set = true; });
  gen->add_flag("--export-mesh", gen_mesh, "also write the reconstructed mesh");

  // loss
  auto* loss = app.add_subcommand("loss", "evaluate the training objective on three depth files");
  std::string loss_pred, loss_gt, loss_mono, loss_config, loss_grad;
  loss->add_option("--pred", loss_pred, "prediction depth file")->required();
  loss->add_option("--gt", loss_gt, "sparse ground-truth depth file")->required();
  loss->add_option("--mono", loss_mono, "monocular depth file")->required();
  loss->add_option("--config", loss_config, "pipeline config file");
  loss->add_option("--dump-grad", loss_grad, "write the total gradient as a float map");

  // eval
  auto* eval = app.add_subcommand("eval", "depth metrics for files or directories");
  std::string eval_pred, eval_gt, eval_units = "kitti_mm", eval_config;
  eval->add_option("--pred", eval_pred, "prediction file or directory")->required();
  eval->add_option("--gt", eval_gt, "ground-truth file or directory")->required();
  eval->add_option("--units", eval_units, "kitti_mm or nyu_m")
      ->check(CLI::IsMember({"kitti_mm", "nyu_m"}));
  eval->add_option("--config", eval_config, "pipeline config file (codec settings)");

  // viz
  auto* viz = app.add_subcommand("viz", "render a depth file as a color image");
  std::string viz_in, viz_out, viz_config;
  bool viz_float = false;
  viz->add_option("--in", viz_in, "depth file")->required();
  viz->add_option("--out", viz_out, "output PNG")->required();
  viz->add_flag("--float", viz_float, "input is a float map rather than a 16-bit PNG");
  viz->add_option("--config", viz_config, "pipeline config file (codec settings)");

  // selftest
  app.add_subcommand("selftest", "run the built-in numerical checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : depthkit::kExitUsage;
  }

  if (gen->parsed()) {
    depthkit::GenArgs args;
    args.mono_path = gen_mono;
    if (!gen_image.empty()) args.image_path = gen_image;
    args.config_path = config_or_env(gen_config);
    args.out_dir = gen_out;
    if (gen_seed_set) args.seed = gen_seed;
    if (gen_threads_set) args.threads = gen_threads;
    args.export_mesh = gen_mesh;
    return depthkit::run_gen(args, std::cout, std::cerr);
  }
  if (loss->parsed()) {
    depthkit::LossArgs args;
    args.pred_path = loss_pred;
    args.gt_path = loss_gt;
    args.mono_path = loss_mono;
    args.config_path = config_or_env(loss_config);
    if (!loss_grad.empty()) args.dump_grad_path = loss_grad;
    return depthkit::run_loss(args, std::cout, std::cerr);
  }
  if (eval->parsed()) {
    depthkit::EvalArgs args;
    args.pred_path = eval_pred;
    args.gt_path = eval_gt;
    args.units = eval_units == "nyu_m" ? depthkit::MetricUnits::nyu_m
                                       : depthkit::MetricUnits::kitti_mm;
    args.config_path = config_or_env(eval_config);
    return depthkit::run_eval(args, std::cout, std::cerr);
  }
  if (viz->parsed()) {
    depthkit::VizArgs args;
    args.depth_path = viz_in;
    args.out_path = viz_out;
    args.float_input = viz_float;
    args.config_path = config_or_env(viz_config);
    return depthkit::run_viz(args, std::cout, std::cerr);
  }
  return depthkit::run_selftest(std::cout, std::cerr);
}
