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


#include "hopfilter/io.hpp"

#include <fstream>
#include <sstream>

#include "hopfilter/error.hpp"

namespace hopfilter::io {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw Error(ErrorCode::kFileNotFound, path.string());
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::kIoError, "cannot read " + path.string());
  return ss.str();
}

void write_file(const fs::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.close();
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

[[noreturn]] void parse_error(std::string_view what) { throw Error(ErrorCode::kParseError, std::string(what)); }

const Json& field(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) parse_error(std::string("missing key \"") + key + "\"");
  return obj.at(key);
}

int int_field(const Json& obj, const char* key) {
  const Json& v = field(obj, key);
  if (!v.is_number_integer()) parse_error(std::string("\"") + key + "\" must be an integer");
  return v.get<int>();
}

double number(const Json& v, std::string_view what) {
  if (!v.is_number()) parse_error(std::string(what) + " must be a number");
  return v.get<double>();
}

}  // namespace

Matrix matrix_from_json(const Json& value, int rows, int cols, std::string_view what) {
  if (!value.is_array()) parse_error(std::string(what) + " must be an array of rows");
  Matrix m(rows, cols);
  if (rows == 0 || cols == 0) {
    // [] or rows of empty arrays.
    if (!(value.empty() || static_cast<int>(value.size()) == rows)) {
      parse_error(std::string(what) + " has the wrong number of rows");
    }
    return m;
  }
  if (static_cast<int>(value.size()) != rows) parse_error(std::string(what) + " has the wrong number of rows");
  for (int i = 0; i < rows; ++i) {
    const Json& row = value[i];
    if (!row.is_array() || static_cast<int>(row.size()) != cols) {
      parse_error(std::string(what) + " row " + std::to_string(i) + " has the wrong length");
    }
    for (int j = 0; j < cols; ++j) m(i, j) = number(row[j], what);
  }
  return m;
}

ModelFile parse_model(std::string_view text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    parse_error(e.what());
  }
  const int n = int_field(doc, "n");
  const int m = int_field(doc, "m");
  const int q = int_field(doc, "q");
  const int r = int_field(doc, "r");
  if (n < 1 || m < 1 || q < 0 || r < 1) parse_error("dimensions must satisfy n, m, r >= 1 and q >= 0");
  const Json& modes_json = field(doc, "modes");
  if (!modes_json.is_array() || modes_json.empty()) parse_error("\"modes\" must be a non-empty array");
  std::vector<ModeMatrices> modes;
  for (std::size_t i = 0; i < modes_json.size(); ++i) {
    const Json& mj = modes_json[i];
    const std::string tag = "mode " + std::to_string(i) + " ";
    ModeMatrices mm;
    mm.a = matrix_from_json(field(mj, "A"), n, n, tag + "A");
    mm.j = matrix_from_json(field(mj, "J"), n, m, tag + "J");
    mm.cy = matrix_from_json(field(mj, "Cy"), q, n, tag + "Cy");
    mm.ey = matrix_from_json(field(mj, "Ey"), q, m, tag + "Ey");
    mm.cz = matrix_from_json(field(mj, "Cz"), r, n, tag + "Cz");
    mm.ez = matrix_from_json(field(mj, "Ez"), r, m, tag + "Ez");
    modes.push_back(std::move(mm));
  }
  const int nm = static_cast<int>(modes.size());
  Matrix chain = doc.contains("chain") ? matrix_from_json(doc.at("chain"), nm, nm, "chain") : Matrix::Ones(1, 1);
  if (!doc.contains("chain") && nm != 1) parse_error("\"chain\" is required for more than one mode");
  std::vector<int> clusters;
  if (doc.contains("clusters")) {
    const Json& cj = doc.at("clusters");
    if (!cj.is_array() || static_cast<int>(cj.size()) != nm) parse_error("\"clusters\" needs one entry per mode");
    for (const Json& c : cj) {
      if (!c.is_number_integer()) parse_error("cluster indices must be integers");
      clusters.push_back(c.get<int>());
    }
  } else {
    for (int i = 0; i < nm; ++i) clusters.push_back(i);
  }
  std::optional<double> ts;
  if (doc.contains("Ts")) ts = number(doc.at("Ts"), "Ts");
  return {MjlsModel(std::move(modes), MarkovChain(chain), ClusterMap(clusters)), ts};
}

ModelFile load_model(const fs::path& path) { return parse_model(read_file(path)); }

Json model_to_json(const MjlsModel& model, std::optional<double> ts) {
  const Dimensions d = model.dims();
  Json doc;
  doc["n"] = d.n;
  doc["m"] = d.m;
  doc["q"] = d.q;
  doc["r"] = d.r;
  Json modes = Json::array();
  for (const auto& mm : model.modes()) {
    Json mj;
    mj["A"] = matrix_to_json(mm.a);
    mj["J"] = matrix_to_json(mm.j);
    mj["Cy"] = matrix_to_json(mm.cy);
    mj["Ey"] = matrix_to_json(mm.ey);
    mj["Cz"] = matrix_to_json(mm.cz);
    mj["Ez"] = matrix_to_json(mm.ez);
    modes.push_back(std::move(mj));
  }
  doc["modes"] = std::move(modes);
  doc["chain"] = matrix_to_json(model.chain().transition());
  doc["clusters"] = model.clusters().assignment();
  if (ts) doc["Ts"] = *ts;
  return doc;
}

Json plant_to_json(const LtiPlant& plant) { return model_to_json(single_mode_model(plant), plant.ts); }

LtiPlant plant_from_model(const ModelFile& file) {
  if (file.model.num_modes() != 1) throw Error(ErrorCode::kInvalidArgument, "a plant file holds exactly one mode");
  if (!file.ts) throw Error(ErrorCode::kInvalidArgument, "a plant file needs \"Ts\"");
  LtiPlant plant{file.model.mode(0), *file.ts};
  plant.validate();
  return plant;
}

Json gains_to_json(const FilterGains& gains) {
  Json out = Json::array();
  for (const auto& c : gains.clusters) {
    Json cj;
    cj["Bf"] = matrix_to_json(c.bf);
    cj["Df"] = matrix_to_json(c.df);
    out.push_back(std::move(cj));
  }
  return out;
}

FilterGains gains_from_json(const Json& value, const MjlsModel& model) {
  const Json& arr = value.is_object() ? field(value, "gains") : value;
  if (!arr.is_array() || static_cast<int>(arr.size()) != model.clusters().num_clusters()) {
    parse_error("\"gains\" needs one entry per cluster");
  }
  const Dimensions d = model.dims();
  std::vector<Matrix> bf, df;
  for (std::size_t l = 0; l < arr.size(); ++l) {
    const std::string tag = "cluster " + std::to_string(l) + " ";
    bf.push_back(matrix_from_json(field(arr[l], "Bf"), d.n, d.q, tag + "Bf"));
    df.push_back(matrix_from_json(field(arr[l], "Df"), d.r, d.q, tag + "Df"));
  }
  return make_gains(model, bf, df);
}

Json synthesis_to_json(const SynthesisResult& result, const CertificateReport& report) {
  Json out;
  out["status"] = result.status;
  out["gamma"] = result.gamma;
  out["hinf_norm"] = result.hinf_norm;
  out["margin"] = result.margin;
  out["epsilon"] = result.epsilon;
  out["relative_gap"] = result.relative_gap;
  out["iterations"] = result.iterations;
  out["gains"] = gains_to_json(result.gains);
  Json cert;
  Json h = Json::array();
  for (const auto& hi : result.certificates.h) h.push_back(hi.size() == 0 ? Json(nullptr) : matrix_to_json(hi));
  cert["H"] = std::move(h);
  cert["X"] = matrix_to_json(result.certificates.x);
  Json f = Json::array(), k = Json::array();
  for (const auto& fl : result.certificates.f) f.push_back(matrix_to_json(fl));
  for (const auto& kl : result.certificates.k) k.push_back(matrix_to_json(kl));
  cert["F"] = std::move(f);
  cert["K"] = std::move(k);
  out["certificates"] = std::move(cert);
  Json check;
  check["pass"] = report.pass;
  check["mode_min_eigen"] = report.mode_min_eigen;
  check["coupling_max_eigen"] = report.coupling_max_eigen;
  check["x_min_eigen"] = report.x_min_eigen;
  out["certificate_check"] = std::move(check);
  return out;
}

Json network_to_json(const HopNetworkConfig& config) {
  Json out;
  out["p"] = config.p;
  if (config.max_attempts) {
    out["L"] = *config.max_attempts;
  } else {
    out["L"] = "unbounded";
  }
  out["N"] = config.hops;
  out["count_acks"] = config.count_acks;
  return out;
}

Json stats_to_json(const TransportStats& stats, const HopNetworkConfig& config) {
  Json out;
  out["config"] = network_to_json(config);
  out["trials"] = stats.trials;
  out["seed"] = stats.seed;
  out["delivered"] = stats.delivered;
  out["delivery_rate"] = stats.delivery_rate;
  out["mean_tx"] = stats.mean_tx;
  out["mean_rx"] = stats.mean_rx;
  out["mean_sw"] = stats.mean_sw;
  out["var_tx"] = stats.var_tx;
  out["var_rx"] = stats.var_rx;
  out["var_sw"] = stats.var_sw;
  if (config.count_acks) {
    out["mean_ack"] = stats.mean_ack;
    out["var_ack"] = stats.var_ack;
  }
  const ExpectedCounts e = expected_counts(config);
  Json closed;
  closed["success_probability"] = success_probability(config);
  closed["expected_tx"] = e.tx;
  closed["expected_rx"] = e.rx;
  closed["expected_sw"] = e.sw;
  out["closed_form"] = std::move(closed);
  return out;
}

RadioEnergyParams radio_from_json(const Json& value) {
  RadioEnergyParams p;
  if (value.is_null()) return p;
  if (!value.is_object()) parse_error("\"radio\" must be an object");
  try {
    if (value.contains("voltage_v")) p.voltage = number(value.at("voltage_v"), "voltage_v");
    if (value.contains("i_tx_ma_by_dbm")) {
      const Json& m = value.at("i_tx_ma_by_dbm");
      if (!m.is_object() || m.empty()) parse_error("\"i_tx_ma_by_dbm\" must be a non-empty object");
      p.i_tx_by_dbm.clear();
      for (const auto& [key, amps] : m.items()) {
        std::size_t used = 0;
        const int dbm = std::stoi(key, &used);
        if (used != key.size()) parse_error("power level keys must be integers (dBm)");
        p.i_tx_by_dbm[dbm] = number(amps, "i_tx_ma_by_dbm entry") * 1e-3;
      }
    }
    if (value.contains("i_rx_ma")) p.i_rx = number(value.at("i_rx_ma"), "i_rx_ma") * 1e-3;
    if (value.contains("i_sw_ma")) p.i_sw = number(value.at("i_sw_ma"), "i_sw_ma") * 1e-3;
    if (value.contains("t_sw_s")) p.t_sw = number(value.at("t_sw_s"), "t_sw_s");
    if (value.contains("byte_time_s")) p.byte_time = number(value.at("byte_time_s"), "byte_time_s");
    if (value.contains("packet_bytes")) p.packet_bytes = int_field(value, "packet_bytes");
    if (value.contains("p_out_dbm")) p.p_out_dbm = int_field(value, "p_out_dbm");
    if (value.contains("ack_bytes")) p.ack_bytes = int_field(value, "ack_bytes");
  } catch (const std::logic_error&) {
    parse_error("power level keys must be integers (dBm)");
  }
  p.validate();
  return p;
}

Json radio_to_json(const RadioEnergyParams& params) {
  Json out;
  out["voltage_v"] = params.voltage;
  Json tx;
  for (const auto& [dbm, amps] : params.i_tx_by_dbm) tx[std::to_string(dbm)] = amps * 1e3;
  out["i_tx_ma_by_dbm"] = std::move(tx);
  out["i_rx_ma"] = params.i_rx * 1e3;
  out["i_sw_ma"] = params.i_sw * 1e3;
  out["t_sw_s"] = params.t_sw;
  out["byte_time_s"] = params.byte_time;
  out["packet_bytes"] = params.packet_bytes;
  out["p_out_dbm"] = params.p_out_dbm;
  out["ack_bytes"] = params.ack_bytes;
  return out;
}

SweepConfig parse_sweep_config(std::string_view text, const fs::path& base_dir) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    parse_error(e.what());
  }
  if (!doc.is_object()) parse_error("sweep config must be an object");
  SweepConfig cfg;
  const Json plant = doc.contains("plant") ? doc.at("plant") : Json("fixture");
  if (plant.is_string()) {
    const std::string ref = plant.get<std::string>();
    if (ref == "fixture") {
      cfg.plant = fixture_pendulum();
    } else {
      fs::path path(ref);
      if (path.is_relative()) path = base_dir / path;
      cfg.plant = plant_from_model(load_model(path));
    }
  } else if (plant.is_object()) {
    cfg.plant = plant_from_model(parse_model(plant.dump()));
  } else {
    parse_error("\"plant\" must be \"fixture\", a path, or a model object");
  }
  const Json& grid = field(doc, "p");
  if (!grid.is_array()) parse_error("\"p\" must be an array");
  for (const Json& v : grid) cfg.p_grid.push_back(number(v, "p entry"));
  const Json& l = field(doc, "L");
  if (!l.is_array() || l.size() != 2 || !l[0].is_number_integer() || !l[1].is_number_integer()) {
    parse_error("\"L\" must be [min, max]");
  }
  cfg.l_min = l[0].get<int>();
  cfg.l_max = l[1].get<int>();
  if (doc.contains("N")) cfg.hops = int_field(doc, "N");
  cfg.ts = doc.contains("Ts") ? number(doc.at("Ts"), "Ts") : cfg.plant.ts;
  if (doc.contains("radio")) cfg.radio = radio_from_json(doc.at("radio"));
  if (doc.contains("trials")) {
    if (!doc.at("trials").is_number_unsigned()) parse_error("\"trials\" must be a non-negative integer");
    cfg.trials = doc.at("trials").get<std::uint64_t>();
  }
  if (doc.contains("seed")) {
    if (!doc.at("seed").is_number_unsigned()) parse_error("\"seed\" must be a non-negative integer");
    cfg.seed = doc.at("seed").get<std::uint64_t>();
  }
  if (doc.contains("threads")) cfg.threads = static_cast<unsigned>(int_field(doc, "threads"));
  cfg.validate();
  return cfg;
}

Json sweep_config_to_json(const SweepConfig& config) {
  Json out;
  out["plant"] = plant_to_json(config.plant);
  out["p"] = config.p_grid;
  out["L"] = {config.l_min, config.l_max};
  out["N"] = config.hops;
  out["Ts"] = config.ts;
  out["radio"] = radio_to_json(config.radio);
  out["trials"] = config.trials;
  out["seed"] = config.seed;
  return out;
}

Json sweep_to_json(const SweepResult& result) {
  Json out;
  out["lossless_norm"] = result.lossless_norm;
  Json pts = Json::array();
  for (const auto& pt : result.points) {
    Json pj;
    pj["p"] = pt.p;
    pj["L"] = pt.l;
    pj["N"] = pt.n;
    pj["P_S"] = pt.ps;
    pj["hinf_norm"] = pt.hinf_norm ? Json(*pt.hinf_norm) : Json(nullptr);
    pj["upsilon_h"] = pt.upsilon_h ? Json(*pt.upsilon_h) : Json(nullptr);
    pj["upsilon_e"] = pt.upsilon_e;
    if (pt.upsilon_e_mc) {
      pj["upsilon_e_monte_carlo"] = *pt.upsilon_e_mc;
      pj["upsilon_e_standard_error"] = *pt.upsilon_e_se;
    }
    pj["feasible"] = pt.feasible;
    pj["status"] = pt.status;
    pts.push_back(std::move(pj));
  }
  out["points"] = std::move(pts);
  return out;
}

}  // namespace hopfilter::io
