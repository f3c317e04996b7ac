// Copyright 2026 The hopfilter Authors
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


// Command-line driver. Machine output goes to files, each paired with a
// <file>.manifest.json; stdout carries a short human-readable summary.
//
// Exit codes: 0 success, 2 usage or parse error, 3 infeasible, 4 I/O error,
// 5 numerical failure (solver breakdown or ill-conditioned certificate).

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hopfilter/energy.hpp"
#include "hopfilter/error.hpp"
#include "hopfilter/hop_net.hpp"
#include "hopfilter/io.hpp"
#include "hopfilter/lmi_synthesis.hpp"
#include "hopfilter/svg_chart.hpp"
#include "hopfilter/tradeoff.hpp"

namespace fs = std::filesystem;
using hopfilter::Error;
using hopfilter::ErrorCode;
using hopfilter::io::Json;

namespace {

enum Exit { kOk = 0, kUsage = 2, kInfeasible = 3, kIo = 4, kNumerical = 5 };

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInfeasible:
    case ErrorCode::kBaselineInfeasible:
      return kInfeasible;
    case ErrorCode::kFileNotFound:
    case ErrorCode::kIoError:
      return kIo;
    case ErrorCode::kSolverFailure:
    case ErrorCode::kIllConditioned:
      return kNumerical;
    default:
      return kUsage;
  }
}

// Writes an artifact and its manifest.
void emit(const fs::path& path, const std::string& content, const std::string& command, const Json& config,
          std::optional<std::uint64_t> seed, const std::vector<fs::path>& all_outputs) {
  hopfilter::io::write_file(path, content);
  Json manifest;
  manifest["command"] = command;
  manifest["tool_version"] = HOPFILTER_VERSION;
  manifest["seed"] = seed ? Json(*seed) : Json(nullptr);
  manifest["config"] = config;
  Json outs = Json::array();
  for (const auto& p : all_outputs) outs.push_back(p.generic_string());
  manifest["outputs"] = std::move(outs);
  hopfilter::io::write_file(fs::path(path.string() + ".manifest.json"), manifest.dump(2) + "\n");
}

std::optional<int> parse_cap(const std::string& text) {
  if (text == "inf" || text == "unbounded") return std::nullopt;
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size()) throw Error(ErrorCode::kInvalidArgument, "-L expects an integer or \"inf\"");
  return v;
}

hopfilter::SynthesisOptions synthesis_options(std::optional<double> epsilon) {
  hopfilter::SynthesisOptions o;
  o.epsilon = epsilon;
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"H-infinity filtering over lossy multi-hop links: synthesis, transport simulation, energy sweeps"};
  app.set_version_flag("--version", HOPFILTER_VERSION);
  app.require_subcommand(1);

  // synthesize
  std::string model_path, out_path, gains_path, config_path, svg_path, plant_path, per_trial_path, radio_path;
  std::optional<double> epsilon;
  auto* synth = app.add_subcommand("synthesize", "Design the minimum-norm filter for a model file");
  synth->add_option("--model", model_path, "Model JSON")->required();
  synth->add_option("--out", out_path, "Result JSON")->required();
  synth->add_option("--epsilon", epsilon, "Strictness margin (default 1e-7*(1+max|A|))");

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Certified squared-norm bound of given filter gains");
  analyze->add_option("--model", model_path, "Model JSON")->required();
  analyze->add_option("--gains", gains_path, "Synthesis result JSON holding \"gains\"")->required();
  analyze->add_option("--out", out_path, "Result JSON");
  analyze->add_option("--epsilon", epsilon, "Strictness margin");

  // netsim
  double p = 0.5;
  std::string cap_text = "3";
  int hops = 10;
  std::uint64_t trials = 100000;
  std::uint64_t seed = hopfilter::kDefaultSeed;
  bool acks = false;
  auto* netsim = app.add_subcommand("netsim", "Monte Carlo of hop-by-hop retransmission");
  netsim->add_option("-p", p, "Per-attempt link delivery probability")->check(CLI::Range(0.0, 1.0));
  netsim->add_option("-L", cap_text, "Max transmissions per hop, or \"inf\"");
  netsim->add_option("-N", hops, "Links on the path")->check(CLI::PositiveNumber);
  netsim->add_option("--trials", trials, "Packets to simulate")->check(CLI::PositiveNumber);
  netsim->add_option("--seed", seed, "Random seed");
  netsim->add_option("--out", out_path, "Stats JSON")->required();
  netsim->add_option("--per-trial", per_trial_path, "Optional per-trial CSV");
  netsim->add_flag("--acks", acks, "Count one acknowledgement per successful hop");

  // energy
  auto* energy = app.add_subcommand("energy", "Expected packet energy, power and energy ratio");
  double ts = 0.05;
  energy->add_option("-p", p, "Per-attempt link delivery probability")->check(CLI::Range(0.0, 1.0));
  energy->add_option("-L", cap_text, "Max transmissions per hop, or \"inf\"");
  energy->add_option("-N", hops, "Links on the path")->check(CLI::PositiveNumber);
  energy->add_option("--ts", ts, "Seconds between packets");
  energy->add_option("--config", radio_path, "JSON with a \"radio\" object");
  energy->add_option("--trials", trials, "Monte Carlo packets (0 = closed form only)");
  energy->add_option("--seed", seed, "Random seed");
  energy->add_option("--out", out_path, "Result JSON");

  // sweep
  std::optional<std::uint64_t> sweep_seed, sweep_trials;
  auto* sweep_cmd = app.add_subcommand("sweep", "Trade-off sweep over (p, L) to CSV");
  sweep_cmd->add_option("--config", config_path, "Sweep config JSON")->required();
  sweep_cmd->add_option("--out", out_path, "CSV output")->required();
  sweep_cmd->add_option("--svg", svg_path, "Optional SVG chart");
  sweep_cmd->add_option("--seed", sweep_seed, "Overrides the config seed");
  sweep_cmd->add_option("--trials", sweep_trials, "Overrides the config Monte Carlo trials");

  // loss-model
  double ps = 0.9;
  auto* loss = app.add_subcommand("loss-model", "Two-mode packet-loss model of a plant");
  loss->add_option("--plant", plant_path, "Plant model JSON (default: pendulum fixture)");
  loss->add_option("--ps", ps, "End-to-end delivery probability")->check(CLI::Range(0.0, 1.0));
  loss->add_option("-p", p, "Link probability (with -L, -N instead of --ps)");
  loss->add_option("-L", cap_text, "Max transmissions per hop");
  loss->add_option("-N", hops, "Links on the path");
  loss->add_option("--out", out_path, "Model JSON")->required();

  // fixture
  auto* fixture = app.add_subcommand("fixture", "Write the pendulum fixture plant");
  fixture->add_option("--out", out_path, "Model JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*synth) {
      const auto file = hopfilter::io::load_model(model_path);
      Json cfg;
      cfg["model"] = model_path;
      cfg["epsilon"] = epsilon ? Json(*epsilon) : Json(nullptr);
      const auto result = hopfilter::synthesize(file.model, synthesis_options(epsilon));
      const auto report = hopfilter::check_certificate(file.model, result, result.epsilon);
      emit(out_path, hopfilter::io::synthesis_to_json(result, report).dump(2) + "\n", "synthesize", cfg,
           std::nullopt, {out_path});
      std::cout << "hinf_norm " << result.hinf_norm << "  gamma " << result.gamma << "  certificate "
                << (report.pass ? "pass" : "FAIL") << "\n";
      return kOk;
    }
    if (*analyze) {
      const auto file = hopfilter::io::load_model(model_path);
      const Json doc = Json::parse(hopfilter::io::read_file(gains_path), nullptr, false);
      if (doc.is_discarded()) throw Error(ErrorCode::kParseError, "malformed JSON in " + gains_path);
      const auto gains = hopfilter::io::gains_from_json(doc, file.model);
      const double gamma = hopfilter::analyze_fixed_filter(file.model, gains, synthesis_options(epsilon));
      std::cout << "gamma " << gamma << "  norm bound " << std::sqrt(gamma) << "\n";
      if (!out_path.empty()) {
        Json cfg;
        cfg["model"] = model_path;
        cfg["gains"] = gains_path;
        Json out;
        out["gamma"] = gamma;
        out["hinf_norm"] = std::sqrt(gamma);
        emit(out_path, out.dump(2) + "\n", "analyze", cfg, std::nullopt, {out_path});
      }
      return kOk;
    }
    if (*netsim) {
      hopfilter::HopNetworkConfig net{p, parse_cap(cap_text), hops, acks};
      net.validate();
      const auto stats = hopfilter::monte_carlo(net, trials, seed);
      const Json cfg = hopfilter::io::network_to_json(net);
      std::vector<fs::path> outputs{out_path};
      if (!per_trial_path.empty()) outputs.emplace_back(per_trial_path);
      emit(out_path, hopfilter::io::stats_to_json(stats, net).dump(2) + "\n", "netsim", cfg, seed, outputs);
      if (!per_trial_path.empty()) {
        std::string csv = "trial,delivered,tx,rx,sw\n";
        for (std::uint64_t t = 0; t < trials; ++t) {
          hopfilter::CounterStream stream(seed, t);
          const auto o = hopfilter::simulate_packet(net, stream);
          csv += std::to_string(t) + "," + (o.delivered ? "1" : "0") + "," + std::to_string(o.tx_count) + "," +
                 std::to_string(o.rx_count) + "," + std::to_string(o.sw_count) + "\n";
        }
        emit(per_trial_path, csv, "netsim", cfg, seed, outputs);
      }
      std::cout << "delivery_rate " << stats.delivery_rate << " (closed form " << hopfilter::success_probability(net)
                << ")  mean_tx " << stats.mean_tx << "  mean_rx " << stats.mean_rx << "\n";
      return kOk;
    }
    if (*energy) {
      hopfilter::HopNetworkConfig net{p, parse_cap(cap_text), hops};
      net.validate();
      hopfilter::RadioEnergyParams radio;
      if (!radio_path.empty()) {
        const Json doc = Json::parse(hopfilter::io::read_file(radio_path), nullptr, false);
        if (doc.is_discarded()) throw Error(ErrorCode::kParseError, "malformed JSON in " + radio_path);
        radio = hopfilter::io::radio_from_json(doc.contains("radio") ? doc.at("radio") : doc);
      }
      const auto e = hopfilter::expected_packet_energy(net, radio);
      const auto ue = hopfilter::upsilon_e(net, radio, trials, seed);
      const double power = hopfilter::power_per_time_unit(e.total, ts);
      std::cout << "expected energy " << e.total << " J  power " << power << " W  upsilon_e " << ue.value << "\n";
      if (!out_path.empty()) {
        Json cfg;
        cfg["network"] = hopfilter::io::network_to_json(net);
        cfg["radio"] = hopfilter::io::radio_to_json(radio);
        cfg["Ts"] = ts;
        cfg["trials"] = trials;
        Json out;
        out["e_tx"] = e.e_tx;
        out["e_rx"] = e.e_rx;
        out["e_sw"] = e.e_sw;
        out["total"] = e.total;
        out["power_w"] = power;
        out["upsilon_e"] = ue.value;
        if (ue.monte_carlo) {
          out["upsilon_e_monte_carlo"] = *ue.monte_carlo;
          out["upsilon_e_standard_error"] = *ue.standard_error;
        }
        emit(out_path, out.dump(2) + "\n", "energy", cfg, trials > 0 ? std::optional(seed) : std::nullopt,
             {out_path});
      }
      return kOk;
    }
    if (*sweep_cmd) {
      const fs::path cfg_path(config_path);
      auto cfg = hopfilter::io::parse_sweep_config(hopfilter::io::read_file(cfg_path), cfg_path.parent_path());
      if (sweep_seed) cfg.seed = *sweep_seed;
      if (sweep_trials) cfg.trials = *sweep_trials;
      const auto result = hopfilter::sweep(cfg);
      Json snapshot = hopfilter::io::sweep_config_to_json(cfg);
      snapshot["metric_note"] = "upsilon_h is a ratio of norms (square roots of the certified bounds)";
      std::vector<fs::path> outputs{out_path};
      if (!svg_path.empty()) outputs.emplace_back(svg_path);
      emit(out_path, hopfilter::sweep_csv(result), "sweep", snapshot, cfg.seed, outputs);
      if (!svg_path.empty()) emit(svg_path, hopfilter::sweep_svg(result), "sweep", snapshot, cfg.seed, outputs);
      int feasible = 0;
      for (const auto& pt : result.points) feasible += pt.feasible ? 1 : 0;
      std::cout << result.points.size() << " points (" << feasible << " feasible), lossless norm "
                << result.lossless_norm << "\n";
      return kOk;
    }
    if (*loss) {
      const hopfilter::LtiPlant plant = plant_path.empty()
                                            ? hopfilter::fixture_pendulum()
                                            : hopfilter::io::plant_from_model(hopfilter::io::load_model(plant_path));
      Json cfg;
      cfg["plant"] = plant_path.empty() ? "fixture" : plant_path;
      if (loss->count("-p") + loss->count("-L") + loss->count("-N") > 0) {
        hopfilter::HopNetworkConfig net{p, parse_cap(cap_text), hops};
        ps = hopfilter::success_probability(net);
        cfg["network"] = hopfilter::io::network_to_json(net);
      }
      cfg["ps"] = ps;
      const auto model = hopfilter::build_loss_model(plant, ps);
      emit(out_path, hopfilter::io::model_to_json(model, plant.ts).dump(2) + "\n", "loss-model", cfg, std::nullopt,
           {out_path});
      std::cout << "loss model at P_S = " << ps << "\n";
      return kOk;
    }
    if (*fixture) {
      emit(out_path, hopfilter::io::plant_to_json(hopfilter::fixture_pendulum()).dump(2) + "\n", "fixture",
           Json::object(), std::nullopt, {out_path});
      return kOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
