#include <doctest.h>

#include <chrono>
#include <fstream>
#include <map>
#include <sstream>

#include "depthkit/commands.hpp"
#include "depthkit/config.hpp"
#include "depthkit/depth_io.hpp"
#include "depthkit/losses.hpp"
#include "depthkit/viz.hpp"
#include "test_support.hpp"

using namespace depthkit;

namespace {

std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    kv[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return kv;
}

void write_config(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

struct GenFixture {
  dk_test::TempDir tmp;
  std::filesystem::path mono_path;
  std::filesystem::path config_path;

  explicit GenFixture(int w = 160, int h = 64) {
    Rng rng(81);
    const DepthMap mono = dk_test::smooth_map(rng, w, h, 8.0, 1.0);
    mono_path = tmp.path() / "scene.f64";
    // the fixture file lives in inverse-depth space, matching the default codec
    write_depth(mono, mono_path, {DepthFileKind::float_map, MonoSpace::inverse_depth});
    config_path = tmp.path() / "config.txt";
    write_config(config_path, "seed = 5\n");
  }
};

std::vector<std::filesystem::path> files_in(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  if (!std::filesystem::exists(dir)) return out;
  for (const auto& e : std::filesystem::directory_iterator(dir)) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("gen writes byte-identical outputs across runs and thread counts") {
  GenFixture fx;
  std::ostringstream out, err;

  GenArgs args;
  args.mono_path = fx.mono_path;
  args.config_path = fx.config_path;
  args.export_mesh = true;

  std::vector<std::string> dirs = {"run1", "run8", "run8b"};
  std::vector<int> threads = {1, 8, 8};
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    args.out_dir = fx.tmp.path() / dirs[i];
    args.threads = threads[i];
    REQUIRE(run_gen(args, out, err) == kExitOk);
  }

  const auto run1 = files_in(fx.tmp.path() / "run1");
  REQUIRE(run1.size() == 4);  // simu, target, mesh, manifest
  for (const auto& f : run1) {
    const auto name = f.filename();
    const std::string a = dk_test::read_file_bytes(f);
    const std::string b = dk_test::read_file_bytes(fx.tmp.path() / "run8" / name);
    const std::string c = dk_test::read_file_bytes(fx.tmp.path() / "run8b" / name);
    CHECK(a == b);
    CHECK(b == c);
    CHECK(!a.empty());
  }
}

TEST_CASE("gen emits a manifest whose coverage matches the rendered map") {
  GenFixture fx;
  std::ostringstream out, err;
  GenArgs args;
  args.mono_path = fx.mono_path;
  args.config_path = fx.config_path;
  args.out_dir = fx.tmp.path() / "out";
  args.export_mesh = true;
  REQUIRE(run_gen(args, out, err) == kExitOk);

  const auto kv = parse_kv(dk_test::read_file_bytes(args.out_dir / "scene_manifest.txt"));
  CHECK(kv.count("seed"));
  CHECK(kv.count("fx"));
  CHECK(kv.count("coverage"));
  CHECK(kv.at("seed") == "5");

  const DepthMap simu = read_depth(args.out_dir / "scene_simu.png",
                                   {DepthFileKind::png16_kitti, MonoSpace::depth});
  CHECK(std::stod(kv.at("coverage")) == doctest::Approx(simu.valid_fraction()).epsilon(1e-12));

  const TriangleMesh mesh = import_mesh(args.out_dir / "scene_mesh.obj");
  CHECK(mesh.triangles.size() == std::stoull(kv.at("n_triangles")));
}

TEST_CASE("gen with the KITTI-like sample camera hits the documented sparsity") {
  dk_test::TempDir tmp;
  Rng rng(82);
  const DepthMap mono = dk_test::smooth_map(rng, 1216, 352, 15.0, 2.0);
  const auto mono_path = tmp.path() / "kitti.f64";
  write_depth(mono, mono_path, {DepthFileKind::float_map, MonoSpace::inverse_depth});
  const auto config_path = tmp.path() / "config.txt";
  write_config(config_path, "seed = 9\nfx_range = [480, 560]\nfy_range = [480, 560]\n");

  std::ostringstream out, err;
  GenArgs args;
  args.mono_path = mono_path;
  args.config_path = config_path;
  args.out_dir = tmp.path() / "out";
  args.threads = 8;
  REQUIRE(run_gen(args, out, err) == kExitOk);
  const auto kv = parse_kv(dk_test::read_file_bytes(args.out_dir / "kitti_manifest.txt"));
  const double coverage = std::stod(kv.at("coverage"));
  CHECK(coverage >= 0.03);
  CHECK(coverage <= 0.07);
}

TEST_CASE("gen batch mode derives one seed per input in listing order") {
  dk_test::TempDir tmp;
  Rng rng(83);
  const auto in_dir = tmp.path() / "in";
  std::filesystem::create_directories(in_dir);
  for (const char* name : {"a.f64", "b.f64"}) {
    write_depth(dk_test::smooth_map(rng, 64, 48, 6.0, 0.5), in_dir / name,
                {DepthFileKind::float_map, MonoSpace::inverse_depth});
  }
  std::ostringstream out, err;
  GenArgs args;
  args.mono_path = in_dir;
  args.out_dir = tmp.path() / "out";
  args.seed = 100;
  REQUIRE(run_gen(args, out, err) == kExitOk);
  const auto kv_a = parse_kv(dk_test::read_file_bytes(args.out_dir / "a_manifest.txt"));
  const auto kv_b = parse_kv(dk_test::read_file_bytes(args.out_dir / "b_manifest.txt"));
  CHECK(kv_a.at("seed") == "100");
  CHECK(kv_b.at("seed") == "101");
}

TEST_CASE("gen on a missing input exits with the io code and writes nothing") {
  dk_test::TempDir tmp;
  std::ostringstream out, err;
  GenArgs args;
  args.mono_path = tmp.path() / "missing.f64";
  args.out_dir = tmp.path() / "out";
  CHECK(run_gen(args, out, err) == kExitIo);
  CHECK(files_in(args.out_dir).empty());
  CHECK(err.str().find("missing.f64") != std::string::npos);
}

TEST_CASE("loss reports zero total on a simultaneously optimal fixture") {
  dk_test::TempDir tmp;
  Rng rng(84);
  const DepthMap mono = dk_test::random_map(rng, 24, 18, 1.0, 10.0);
  MaskedGrid pred_grid = mono.grid();
  for (std::size_t i = 0; i < pred_grid.size(); ++i) {
    pred_grid.values[i] = 2.0 * pred_grid.values[i] + 1.0;
  }
  const DepthMap pred = DepthMap::from_grid(std::move(pred_grid));
  MaskedGrid gt_grid(24, 18);
  for (std::size_t i = 0; i < gt_grid.size(); i += 7) {
    gt_grid.values[i] = pred.values()[i];
    gt_grid.valid[i] = 1;
  }

  const auto pred_path = tmp.path() / "pred.f64";
  const auto gt_path = tmp.path() / "gt.png";
  const auto mono_path = tmp.path() / "mono.f64";
  write_depth(pred, pred_path, {DepthFileKind::float_map, MonoSpace::depth});
  write_depth(DepthMap::from_grid(std::move(gt_grid)), gt_path,
              {DepthFileKind::png16_kitti, MonoSpace::depth});
  write_depth(mono, mono_path, {DepthFileKind::float_map, MonoSpace::depth});

  const auto config_path = tmp.path() / "config.txt";
  write_config(config_path, "mono_space = depth\ngt_codec = png16_kitti\n");

  std::ostringstream out, err;
  LossArgs args;
  args.pred_path = pred_path;
  args.gt_path = gt_path;
  args.mono_path = mono_path;
  args.config_path = config_path;
  REQUIRE(run_loss(args, out, err) == kExitOk);
  const auto kv = parse_kv(out.str());
  // gt went through png16 quantization, so "zero" means quantization-level
  CHECK(std::stod(kv.at("sup")) < 1e-3);
  CHECK(std::stod(kv.at("ssi")) < 1e-12);
  CHECK(std::stod(kv.at("reg")) < 1e-12);
  CHECK(std::stod(kv.at("align_s")) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(std::stod(kv.at("align_b")) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("loss with weights (1,0,0) equals the standalone masked L1") {
  dk_test::TempDir tmp;
  Rng rng(85);
  const DepthMap pred = dk_test::random_map(rng, 16, 16, 1.0, 10.0);
  const DepthMap gt = dk_test::random_map(rng, 16, 16, 1.0, 10.0, 0.4);
  const DepthMap mono = dk_test::random_map(rng, 16, 16, 1.0, 10.0);

  const auto pred_path = tmp.path() / "pred.f64";
  const auto gt_path = tmp.path() / "gt.f64";
  const auto mono_path = tmp.path() / "mono.f64";
  write_depth(pred, pred_path, {DepthFileKind::float_map, MonoSpace::depth});
  write_depth(gt, gt_path, {DepthFileKind::float_map, MonoSpace::depth});
  write_depth(mono, mono_path, {DepthFileKind::float_map, MonoSpace::depth});
  const auto config_path = tmp.path() / "config.txt";
  write_config(config_path,
               "mono_space = depth\ngt_codec = float_map\nw_sup = 1\nw_ssi = 0\nw_reg = 0\n");

  std::ostringstream out, err;
  LossArgs args;
  args.pred_path = pred_path;
  args.gt_path = gt_path;
  args.mono_path = mono_path;
  args.config_path = config_path;
  REQUIRE(run_loss(args, out, err) == kExitOk);
  const auto kv = parse_kv(out.str());
  const LossValue expect = l1_masked(pred, gt);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", expect.value);
  CHECK(kv.at("total") == buf);
}

TEST_CASE("loss distinguishes empty-mask and insufficient-data failures") {
  dk_test::TempDir tmp;
  Rng rng(86);
  const DepthMap pred = dk_test::random_map(rng, 8, 8, 1.0, 10.0);
  // gt valid only where pred is... everywhere, so make gt disjoint instead
  MaskedGrid gt_grid(8, 8);
  // no overlap: pred is dense, so an empty gt mask is impossible to disjoint;
  // instead make gt all-invalid except nothing -> use a pred with a hole
  MaskedGrid pred_grid(8, 8);
  pred_grid.set(0, 0, 2.0);
  pred_grid.set(1, 0, 3.0);
  gt_grid.set(2, 0, 4.0);
  const auto pred_path = tmp.path() / "p.f64";
  const auto gt_path = tmp.path() / "g.f64";
  const auto mono_path = tmp.path() / "m.f64";
  write_depth(DepthMap::from_grid(std::move(pred_grid)), pred_path,
              {DepthFileKind::float_map, MonoSpace::depth});
  write_depth(DepthMap::from_grid(std::move(gt_grid)), gt_path,
              {DepthFileKind::float_map, MonoSpace::depth});
  write_depth(dk_test::random_map(rng, 8, 8, 1.0, 10.0), mono_path,
              {DepthFileKind::float_map, MonoSpace::depth});
  const auto config_path = tmp.path() / "config.txt";
  write_config(config_path, "mono_space = depth\ngt_codec = float_map\n");

  std::ostringstream out, err;
  LossArgs args;
  args.pred_path = pred_path;
  args.gt_path = gt_path;
  args.mono_path = mono_path;
  args.config_path = config_path;
  CHECK(run_loss(args, out, err) == kExitData);  // disjoint pred/gt: empty mask

  // now overlap gt with pred but give mono a single joint pixel
  MaskedGrid gt2(8, 8);
  gt2.set(0, 0, 2.5);
  write_depth(DepthMap::from_grid(std::move(gt2)), gt_path,
              {DepthFileKind::float_map, MonoSpace::depth});
  MaskedGrid mono2(8, 8);
  mono2.set(1, 0, 5.0);
  mono2.set(5, 5, 6.0);  // not under pred's mask
  write_depth(DepthMap::from_grid(std::move(mono2)), mono_path,
              {DepthFileKind::float_map, MonoSpace::depth});
  std::ostringstream out2, err2;
  CHECK(run_loss(args, out2, err2) == kExitInsufficientData);
}

TEST_CASE("loss can dump the gradient as a float map") {
  dk_test::TempDir tmp;
  Rng rng(87);
  const auto t = dk_test::kink_free_triple(rng, 12, 12);
  const auto pred_path = tmp.path() / "p.f64";
  const auto gt_path = tmp.path() / "g.f64";
  const auto mono_path = tmp.path() / "m.f64";
  write_depth(t.pred, pred_path, {DepthFileKind::float_map, MonoSpace::depth});
  write_depth(t.gt, gt_path, {DepthFileKind::float_map, MonoSpace::depth});
  write_depth(t.mono, mono_path, {DepthFileKind::float_map, MonoSpace::depth});
  const auto config_path = tmp.path() / "config.txt";
  write_config(config_path, "mono_space = depth\ngt_codec = float_map\n");

  std::ostringstream out, err;
  LossArgs args;
  args.pred_path = pred_path;
  args.gt_path = gt_path;
  args.mono_path = mono_path;
  args.config_path = config_path;
  args.dump_grad_path = tmp.path() / "grad.f64";
  REQUIRE(run_loss(args, out, err) == kExitOk);

  const MaskedGrid dumped = read_float_map_grid(*args.dump_grad_path);
  const LossReport expect = combined_loss(t.pred, t.gt, t.mono);
  REQUIRE(dumped.values.size() == expect.grad_total.size());
  for (std::size_t i = 0; i < dumped.values.size(); ++i) {
    if (dumped.valid[i]) CHECK(dumped.values[i] == expect.grad_total[i]);
  }
}

TEST_CASE("loss report matches the committed golden values") {
  dk_test::TempDir tmp;
  Rng rng(93);
  const DepthMap pred = dk_test::random_map(rng, 20, 16, 1.0, 10.0);
  DepthMap gt = dk_test::random_map(rng, 20, 16, 1.0, 10.0, 0.3);
  const DepthMap mono = dk_test::random_map(rng, 20, 16, 1.0, 10.0);
  MaskedGrid q = gt.grid();  // pre-quantized so the png16 gt decodes bit-exactly
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (q.valid[i]) q.values[i] = std::llround(q.values[i] * 256.0) / 256.0;
  }
  gt = DepthMap::from_grid(std::move(q));

  const auto pred_path = tmp.path() / "pred.f64";
  const auto gt_path = tmp.path() / "gt.png";
  const auto mono_path = tmp.path() / "mono.f64";
  write_depth(pred, pred_path, {DepthFileKind::float_map, MonoSpace::depth});
  write_depth(gt, gt_path, {DepthFileKind::png16_kitti, MonoSpace::depth});
  write_depth(mono, mono_path, {DepthFileKind::float_map, MonoSpace::depth});
  const auto config_path = tmp.path() / "config.txt";
  write_config(config_path, "mono_space = depth\n");

  std::ostringstream out, err;
  LossArgs args;
  args.pred_path = pred_path;
  args.gt_path = gt_path;
  args.mono_path = mono_path;
  args.config_path = config_path;
  REQUIRE(run_loss(args, out, err) == kExitOk);
  const auto kv = parse_kv(out.str());
  CHECK(kv.at("sup") == "3.2691121779750367");
  CHECK(kv.at("ssi") == "2.2990028787575669");
  CHECK(kv.at("reg") == "6.6278984229412847");
  CHECK(kv.at("total") == "8.882064268203246");
  CHECK(kv.at("align_s") == "-0.0027247292634350827");
  CHECK(kv.at("align_b") == "5.4054812632302554");
  CHECK(kv.at("align_degenerate") == "false");
}

TEST_CASE("the CLI picks up the config from DEPTHKIT_CONFIG") {
  dk_test::TempDir tmp;
  Rng rng(94);
  const DepthMap pred = dk_test::random_map(rng, 8, 8, 1.0, 10.0);
  const DepthMap gt = dk_test::random_map(rng, 8, 8, 1.0, 10.0, 0.5);
  const DepthMap mono = dk_test::random_map(rng, 8, 8, 1.0, 10.0);
  const DepthCodec f64{DepthFileKind::float_map, MonoSpace::depth};
  write_depth(pred, tmp.path() / "p.f64", f64);
  write_depth(gt, tmp.path() / "g.f64", f64);
  write_depth(mono, tmp.path() / "m.f64", f64);
  write_config(tmp.path() / "env.cfg",
               "mono_space = depth\ngt_codec = float_map\nw_sup = 1\nw_ssi = 0\nw_reg = 0\n");

  const auto out_path = tmp.path() / "out.txt";
  const std::string cmd = "DEPTHKIT_CONFIG=" + (tmp.path() / "env.cfg").string() + " " +
                          DEPTHKIT_TEST_CLI " loss --pred " + (tmp.path() / "p.f64").string() +
                          " --gt " + (tmp.path() / "g.f64").string() + " --mono " +
                          (tmp.path() / "m.f64").string() + " > " + out_path.string();
  REQUIRE(std::system(cmd.c_str()) == 0);
  const auto kv = parse_kv(dk_test::read_file_bytes(out_path));
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", l1_masked(pred, gt).value);
  CHECK(kv.at("total") == buf);  // weights from the env-provided config applied
}

TEST_CASE("eval of a directory against itself is all zeros with delta one") {
  dk_test::TempDir tmp;
  Rng rng(88);
  const auto dir = tmp.path() / "maps";
  std::filesystem::create_directories(dir);
  for (const char* name : {"0.png", "1.png"}) {
    write_depth(dk_test::random_map(rng, 12, 10, 1.0, 80.0, 0.5), dir / name,
                {DepthFileKind::png16_kitti, MonoSpace::depth});
  }
  std::ostringstream out, err;
  EvalArgs args;
  args.pred_path = dir;
  args.gt_path = dir;
  REQUIRE(run_eval(args, out, err) == kExitOk);
  const std::string text = out.str();
  const auto mean_pos = text.find("[mean]");
  REQUIRE(mean_pos != std::string::npos);
  const auto kv = parse_kv(text.substr(mean_pos));
  CHECK(std::stod(kv.at("rmse")) == 0.0);
  CHECK(std::stod(kv.at("mae")) == 0.0);
  CHECK(std::stod(kv.at("delta_1.25")) == 1.0);
  CHECK(kv.at("n_images") == "2");
}

TEST_CASE("eval mean is the arithmetic mean of the per-image reports") {
  dk_test::TempDir tmp;
  const auto pred_dir = tmp.path() / "pred";
  const auto gt_dir = tmp.path() / "gt";
  std::filesystem::create_directories(pred_dir);
  std::filesystem::create_directories(gt_dir);
  const DepthCodec codec{DepthFileKind::png16_kitti, MonoSpace::depth};
  // image 0: perfect; image 1: the 1 m error hand example
  write_depth(DepthMap::dense(2, 1, {2.0, 2.0}), pred_dir / "0.png", codec);
  write_depth(DepthMap::dense(2, 1, {2.0, 2.0}), gt_dir / "0.png", codec);
  write_depth(DepthMap::dense(2, 1, {2.0, 2.0}), pred_dir / "1.png", codec);
  write_depth(DepthMap::dense(2, 1, {1.0, 3.0}), gt_dir / "1.png", codec);

  std::ostringstream out, err;
  EvalArgs args;
  args.pred_path = pred_dir;
  args.gt_path = gt_dir;
  REQUIRE(run_eval(args, out, err) == kExitOk);
  const auto kv = parse_kv(out.str().substr(out.str().find("[mean]")));
  CHECK(std::stod(kv.at("rmse")) == doctest::Approx(500.0).epsilon(1e-12));
  CHECK(std::stod(kv.at("mae")) == doctest::Approx(500.0).epsilon(1e-12));
}

TEST_CASE("eval reports the corrupt file by name") {
  dk_test::TempDir tmp;
  Rng rng(89);
  const auto pred_dir = tmp.path() / "pred";
  const auto gt_dir = tmp.path() / "gt";
  std::filesystem::create_directories(pred_dir);
  std::filesystem::create_directories(gt_dir);
  const DepthCodec codec{DepthFileKind::png16_kitti, MonoSpace::depth};
  const DepthMap map = dk_test::random_map(rng, 6, 6, 1.0, 20.0);
  write_depth(map, gt_dir / "x.png", codec);
  std::ofstream(pred_dir / "x.png", std::ios::binary) << "not a png at all";

  std::ostringstream out, err;
  EvalArgs args;
  args.pred_path = pred_dir;
  args.gt_path = gt_dir;
  CHECK(run_eval(args, out, err) == kExitIo);
  CHECK(err.str().find("x.png") != std::string::npos);
}

TEST_CASE("eval rejects mismatched file lists") {
  dk_test::TempDir tmp;
  Rng rng(90);
  const auto pred_dir = tmp.path() / "pred";
  const auto gt_dir = tmp.path() / "gt";
  std::filesystem::create_directories(pred_dir);
  std::filesystem::create_directories(gt_dir);
  const DepthCodec codec{DepthFileKind::png16_kitti, MonoSpace::depth};
  write_depth(dk_test::random_map(rng, 4, 4, 1.0, 9.0), pred_dir / "a.png", codec);
  write_depth(dk_test::random_map(rng, 4, 4, 1.0, 9.0), gt_dir / "b.png", codec);
  std::ostringstream out, err;
  EvalArgs args;
  args.pred_path = pred_dir;
  args.gt_path = gt_dir;
  CHECK(run_eval(args, out, err) != kExitOk);
}

TEST_CASE("viz renders constant maps to a single hue with deterministic bytes") {
  dk_test::TempDir tmp;
  const auto depth_path = tmp.path() / "c.png";
  write_depth(DepthMap::constant(8, 6, 5.0), depth_path,
              {DepthFileKind::png16_kitti, MonoSpace::depth});

  VizArgs args;
  args.depth_path = depth_path;
  for (const char* name : {"a.png", "b.png"}) {
    std::ostringstream out, err;
    args.out_path = tmp.path() / name;
    REQUIRE(run_viz(args, out, err) == kExitOk);
  }
  const std::string a = dk_test::read_file_bytes(tmp.path() / "a.png");
  CHECK(a == dk_test::read_file_bytes(tmp.path() / "b.png"));

  int w = 0, h = 0;
  const auto rgb = read_rgb_png(tmp.path() / "a.png", w, h);
  REQUIRE(w == 8);
  REQUIRE(h == 6);
  for (std::size_t i = 3; i < rgb.size(); i += 3) {
    CHECK(rgb[i] == rgb[0]);
    CHECK(rgb[i + 1] == rgb[1]);
    CHECK(rgb[i + 2] == rgb[2]);
  }
}

TEST_CASE("viz paints invalid pixels black") {
  dk_test::TempDir tmp;
  MaskedGrid grid(6, 5);
  for (int y = 1; y < 4; ++y)
    for (int x = 1; x < 5; ++x) grid.set(x, y, 1.0 + x + y);
  const auto depth_path = tmp.path() / "d.f64";
  write_depth(DepthMap::from_grid(std::move(grid)), depth_path,
              {DepthFileKind::float_map, MonoSpace::depth});

  std::ostringstream out, err;
  VizArgs args;
  args.depth_path = depth_path;
  args.out_path = tmp.path() / "d_viz.png";
  args.float_input = true;
  REQUIRE(run_viz(args, out, err) == kExitOk);

  int w = 0, h = 0;
  const auto rgb = read_rgb_png(args.out_path, w, h);
  for (int x = 0; x < w; ++x) {  // top row is invalid -> black
    CHECK(rgb[3 * x] == 0);
    CHECK(rgb[3 * x + 1] == 0);
    CHECK(rgb[3 * x + 2] == 0);
  }
  // an interior valid pixel is not black
  const std::size_t mid = 3 * (2 * w + 2);
  CHECK(static_cast<int>(rgb[mid]) + rgb[mid + 1] + rgb[mid + 2] > 0);
}

TEST_CASE("viz matches the committed golden image") {
  dk_test::TempDir tmp;
  // deterministic fixture: gradient with a two-pixel invalid border
  MaskedGrid grid(32, 24);
  for (int y = 2; y < 22; ++y)
    for (int x = 2; x < 30; ++x) grid.set(x, y, 2.0 + 0.1 * x + 0.05 * y);
  const auto depth_path = tmp.path() / "fixture.f64";
  write_depth(DepthMap::from_grid(std::move(grid)), depth_path,
              {DepthFileKind::float_map, MonoSpace::depth});

  std::ostringstream out, err;
  VizArgs args;
  args.depth_path = depth_path;
  args.out_path = tmp.path() / "fixture_viz.png";
  args.float_input = true;
  REQUIRE(run_viz(args, out, err) == kExitOk);

  int gw = 0, gh = 0, rw = 0, rh = 0;
  const auto golden =
      read_rgb_png(std::filesystem::path(DEPTHKIT_TEST_DATA_DIR) / "golden_viz.png", gw, gh);
  const auto rendered = read_rgb_png(args.out_path, rw, rh);
  REQUIRE(gw == rw);
  REQUIRE(gh == rh);
  CHECK(golden == rendered);
}

TEST_CASE("selftest passes quickly") {
  const auto start = std::chrono::steady_clock::now();
  std::ostringstream out, err;
  CHECK(run_selftest(out, err) == kExitOk);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(seconds < 60.0);
  CHECK(out.str().find("[pass] fd-gradients") != std::string::npos);
  CHECK(out.str().find("[pass] bvh-oracle") != std::string::npos);
  CHECK(out.str().find("[pass] round-trip") != std::string::npos);
  CHECK(out.str().find("[pass] affine-invariance") != std::string::npos);
}
