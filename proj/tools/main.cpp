// Copyright 2026 The ssir Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "ssir/error.hpp"

namespace {

struct ArchFlags {
  std::string shared = "2x256";
  std::string siamese = "1x128";
};

void add_compress(CLI::App& app, ssir::cli::CompressOptions& o, ArchFlags& arch,
                  bool& no_quant, bool& no_normalize, double& alpha, double& n_std) {
  auto* c = app.add_subcommand("compress", "Fit a network to a WAV file and write a .ssir container");
  c->add_option("input", o.input, "Input WAV (PCM16 or float32)")->required()->check(CLI::ExistingFile);
  c->add_option("output", o.output, "Output .ssir file")->required();
  c->add_option("--shared", arch.shared, "Shared trunk layers, NxW notation")->capture_default_str();
  c->add_option("--siamese", arch.siamese, "Layers per siamese head, NxW notation (0 = single head)")
      ->capture_default_str();
  c->add_option("--omega0", o.net.omega0, "Frequency scale of the first sine layer")
      ->capture_default_str()->check(CLI::PositiveNumber);
  c->add_option("--omega", o.net.omega, "Frequency scale of later sine layers")
      ->capture_default_str()->check(CLI::PositiveNumber);
  c->add_option("--pe-frequencies,-L", o.net.pe.num_frequencies, "Positional-encoding frequencies (0 = raw t)")
      ->capture_default_str()->check(CLI::Range(0, 30));
  c->add_option("--sigma", o.net.pe.sigma, "Positional-encoding frequency base")
      ->capture_default_str()->check(CLI::PositiveNumber);
  c->add_option("--iters", o.train.iterations, "Training iterations")
      ->capture_default_str()->check(CLI::Range(1, 100000000));
  c->add_option("--lr", o.train.learning_rate, "Adam learning rate")
      ->capture_default_str()->check(CLI::PositiveNumber);
  c->add_option("--wd", o.train.weight_decay, "Decoupled weight decay")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  c->add_option("--batch", o.train.batch_size, "Mini-batch size (0 = full batch)")->capture_default_str();
  c->add_option("--seed", o.train.seed, "RNG seed")->capture_default_str();
  c->add_option("--threads", o.train.workers, "Worker threads (0 = all cores)")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  c->add_option("--crop", o.crop_seconds, "Keep the first N seconds")
      ->capture_default_str()->check(CLI::PositiveNumber);
  c->add_option("--sample-rate", o.sample_rate, "Resample input to this rate before fitting (0 = keep)")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  c->add_option("--peak", o.peak, "Peak amplitude after normalization")
      ->capture_default_str()->check(CLI::Range(1e-6, 1.0));
  c->add_flag("--no-normalize", no_normalize, "Skip peak normalization");
  c->add_flag("--no-quant", no_quant, "Store float32 weights instead of int8");
  c->add_option("--alpha", alpha, "Noise-estimate amplitude stored for decoding")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  c->add_option("--n-std", n_std, "Gate threshold in standard deviations stored for decoding")
      ->capture_default_str();
  c->add_option("--log-every", o.log_every, "Log the loss every N iterations")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ssir: audio compression with siamese sine networks"};
  app.require_subcommand(1);

  ssir::cli::CompressOptions comp;
  ArchFlags arch;
  bool no_quant = false;
  bool no_normalize = false;
  double alpha = 2.0;
  double n_std = 1.5;
  comp.net.shared = {256, 256};
  add_compress(app, comp, arch, no_quant, no_normalize, alpha, n_std);

  ssir::cli::DecompressOptions dec;
  bool no_denoise = false;
  std::string head = "0";
  std::string format = "float32";
  double dec_alpha = 0.0;
  int dec_rate = 0;
  auto* d = app.add_subcommand("decompress", "Decode a .ssir container to WAV");
  d->add_option("input", dec.input, "Input .ssir file")->required()->check(CLI::ExistingFile);
  d->add_option("output", dec.output, "Output WAV")->required();
  d->add_flag("--no-denoise", no_denoise, "Skip spectral gating");
  auto* alpha_opt = d->add_option("--alpha", dec_alpha, "Override the stored noise-estimate amplitude")
                        ->check(CLI::NonNegativeNumber);
  d->add_option("--head", head, "Output head: 0, 1 or mean")
      ->capture_default_str()->check(CLI::IsMember({"0", "1", "mean"}));
  auto* rate_opt = d->add_option("--sample-rate", dec_rate, "Render at this rate (default: training rate)")
                       ->check(CLI::PositiveNumber);
  d->add_option("--format", format, "WAV sample format: float32 or pcm16")
      ->capture_default_str()->check(CLI::IsMember({"float32", "pcm16"}));

  std::string ref_path, test_path, ssir_path;
  bool json = false;
  auto* e = app.add_subcommand("eval", "Compare two WAV files (mse, snr_db, lsd)");
  e->add_option("reference", ref_path, "Reference WAV")->required()->check(CLI::ExistingFile);
  e->add_option("test", test_path, "Test WAV")->required()->check(CLI::ExistingFile);
  auto* ssir_opt = e->add_option("--ssir", ssir_path, "Also report compression ratio for this container")
                       ->check(CLI::ExistingFile);
  e->add_flag("--json", json, "Print JSON instead of key=value");

  std::string spec_in, spec_out;
  int n_mels = 128;
  auto* s = app.add_subcommand("spectrogram", "Render a log-mel spectrogram as an 8-bit PGM");
  s->add_option("input", spec_in, "Input WAV")->required()->check(CLI::ExistingFile);
  s->add_option("output", spec_out, "Output PGM")->required();
  s->add_option("--n-mels", n_mels, "Mel bands")->capture_default_str()->check(CLI::Range(1, 1024));

  ssir::cli::NoiseDemoOptions demo;
  std::string pgm_prefix;
  auto* n = app.add_subcommand("add-noise", "Add Gaussian noise and compare waveform vs spectrogram error");
  n->add_option("input", demo.input, "Input WAV")->required()->check(CLI::ExistingFile);
  n->add_option("output", demo.output, "Noisy output WAV")->required();
  n->add_option("--variance", demo.variance, "Noise variance")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  n->add_option("--seed", demo.seed, "RNG seed")->capture_default_str();
  auto* pgm_opt = n->add_option("--pgm-prefix", pgm_prefix, "Write <prefix>_clean.pgm and <prefix>_noisy.pgm");
  n->add_option("--n-mels", demo.n_mels, "Mel bands")->capture_default_str()->check(CLI::Range(1, 1024));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : static_cast<int>(ssir::ErrorCode::kInvalidArgument);
  }

  try {
    if (app.got_subcommand("compress")) {
      comp.net.shared = ssir::cli::parse_layers(arch.shared);
      comp.net.siamese = ssir::cli::parse_layers(arch.siamese);
      comp.quantize = !no_quant;
      comp.normalize = !no_normalize;
      comp.decode.alpha = static_cast<float>(alpha);
      comp.decode.n_std_thresh = static_cast<float>(n_std);
      ssir::cli::compress(comp, std::cerr);
    } else if (app.got_subcommand("decompress")) {
      dec.decode.denoise = !no_denoise;
      if (*alpha_opt) dec.decode.alpha = dec_alpha;
      if (*rate_opt) dec.decode.sample_rate = dec_rate;
      dec.decode.head = head == "1"      ? ssir::cli::HeadSelect::kHead1
                        : head == "mean" ? ssir::cli::HeadSelect::kMean
                                         : ssir::cli::HeadSelect::kHead0;
      dec.format = format == "pcm16" ? ssir::SampleFormat::kPcm16 : ssir::SampleFormat::kFloat32;
      ssir::cli::decompress(dec, std::cerr);
    } else if (app.got_subcommand("eval")) {
      std::optional<std::filesystem::path> container;
      if (*ssir_opt) container = ssir_path;
      const auto r = ssir::cli::eval(ref_path, test_path, container);
      std::cout << (json ? ssir::cli::format_json(r) : ssir::format_key_value(r)) << "\n";
    } else if (app.got_subcommand("spectrogram")) {
      ssir::cli::spectrogram(spec_in, spec_out, n_mels);
    } else if (app.got_subcommand("add-noise")) {
      if (*pgm_opt) demo.pgm_prefix = pgm_prefix;
      const auto r = ssir::cli::noise_demo(demo, std::cerr);
      std::cout << ssir::format_key_value(r) << "\n";
    }
  } catch (const ssir::Error& err) {
    std::cerr << "error: " << err.what() << "\n";
    return static_cast<int>(err.code());
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 1;
  }
  return 0;
}
