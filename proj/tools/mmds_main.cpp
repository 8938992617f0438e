// mmds command-line front end. Talks to the library exclusively through the
// C API in mmds.h. Numeric output is fixed to 17 significant digits and '\n'
// line endings so identical flags and seed reproduce byte-identical files.
//
// Exit codes: 0 success, 2 input error, 3 numeric error, 4 stability
// inequality violation.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mmds.h"

namespace {

constexpr int kSchemaVersion = 1;

int exit_code_for(mmds_status st) {
  switch (st) {
    case MMDS_OK:
      return 0;
    case MMDS_ERR_CONVERGENCE:
    case MMDS_ERR_NO_CONVERGENCE:
    case MMDS_ERR_OVERFLOW:
      return 3;
    default:
      return 2;
  }
}

[[noreturn]] void die(mmds_status st) {
  std::cerr << "error: " << mmds_last_error() << "\n";
  std::exit(exit_code_for(st));
}

void check(mmds_status st) {
  if (st != MMDS_OK) die(st);
}

std::string fmt17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Minimal ordered JSON writer; keys appear in insertion order and doubles are
// printed with fmt17 (nlohmann would re-format them).
class JsonObject {
 public:
  JsonObject& field(const std::string& key, double v) {
    return raw(key, fmt17(v));
  }
  JsonObject& field(const std::string& key, int v) {
    return raw(key, std::to_string(v));
  }
  JsonObject& field(const std::string& key, std::uint64_t v) {
    return raw(key, std::to_string(v));
  }
  JsonObject& field(const std::string& key, bool v) {
    return raw(key, v ? "true" : "false");
  }
  JsonObject& field(const std::string& key, const std::string& v) {
    return raw(key, "\"" + v + "\"");
  }
  JsonObject& field(const std::string& key, const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) s += ",";
      s += fmt17(v[i]);
    }
    return raw(key, s + "]");
  }
  JsonObject& raw(const std::string& key, const std::string& value) {
    parts_.push_back("\"" + key + "\":" + value);
    return *this;
  }
  std::string str() const {
    std::string s = "{";
    for (std::size_t i = 0; i < parts_.size(); ++i) {
      if (i) s += ",";
      s += parts_[i];
    }
    return s + "}";
  }

 private:
  std::vector<std::string> parts_;
};

void write_text(const std::optional<std::string>& path, const std::string& text) {
  if (!path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << *path << "\n";
    std::exit(2);
  }
  out << text;
}

std::string csv_matrix(const std::vector<double>& buf, int rows, int cols,
                       const std::string& header = "") {
  std::string s = header;
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      if (j) s += ",";
      s += fmt17(buf[static_cast<std::size_t>(i) * cols + j]);
    }
    s += "\n";
  }
  return s;
}

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("MDS_MEASURE_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

struct SpaceArgs {
  std::string input;
  std::string format = "csv";
  std::string weights;
};

void add_space_options(CLI::App* cmd, SpaceArgs& args) {
  cmd->add_option("--input", args.input, "distance CSV or edge list")->required();
  cmd->add_option("--format", args.format, "csv | edges")
      ->check(CLI::IsMember({"csv", "edges"}));
  cmd->add_option("--weights", args.weights, "weights file, one mass per line");
}

mmds_space* load_space_args(const SpaceArgs& args) {
  mmds_space* s = nullptr;
  const char* wpath = args.weights.empty() ? nullptr : args.weights.c_str();
  if (args.format == "edges") {
    check(mmds_space_load_edges(args.input.c_str(), wpath, &s));
  } else {
    check(mmds_space_load_csv(args.input.c_str(), wpath, &s));
  }
  return s;
}

mmds_mode parse_mode(const std::string& mode) {
  return mode == "measure" ? MMDS_MODE_MEASURE : MMDS_MODE_MATRIX;
}

std::string spectrum_json(mmds_spectrum* spec, const std::string& mode) {
  const int n = mmds_spectrum_size(spec);
  std::vector<double> ev(n);
  check(mmds_spectrum_eigenvalues(spec, ev.data()));
  double tn = 0, neg = 0;
  check(mmds_spectrum_trace_norm(spec, &tn));
  check(mmds_spectrum_negative_trace(spec, &neg));
  JsonObject obj;
  obj.field("schema_version", kSchemaVersion)
      .field("mode", mode)
      .field("n", n)
      .field("zero_tol", mmds_spectrum_zero_tol(spec))
      .field("pr", mmds_spectrum_pr(spec))
      .field("nr", mmds_spectrum_nr(spec))
      .field("trace_norm", tn)
      .field("negative_trace", neg)
      .field("eigenvalues", ev);
  return obj.str() + "\n";
}

std::string oracle_json(mmds_oracle* o, const std::string& space,
                        const std::string& extra_fields = "") {
  const int count = mmds_oracle_entry_count(o);
  std::vector<int> orders(count);
  std::vector<double> values(count);
  std::vector<long long> mults(count);
  check(mmds_oracle_entries(o, orders.data(), values.data(), mults.data()));
  std::string entries = "[";
  for (int i = 0; i < count; ++i) {
    if (i) entries += ",";
    entries += "{\"n\":" + std::to_string(orders[i]) +
               ",\"value\":" + fmt17(values[i]) +
               ",\"multiplicity\":" + std::to_string(mults[i]) + "}";
  }
  entries += "]";
  JsonObject obj;
  obj.field("schema_version", kSchemaVersion)
      .field("space", space)
      .field("truncation_order", mmds_oracle_truncation_order(o))
      .field("tail_estimate", mmds_oracle_tail_estimate(o))
      .field("positive_sum", mmds_oracle_positive_sum(o))
      .field("negative_sum", mmds_oracle_negative_sum(o))
      .field("trace_norm", mmds_oracle_trace_norm(o))
      .raw("entries", entries);
  std::string s = obj.str();
  if (!extra_fields.empty()) {
    s.back() = ',';
    s += extra_fields + "}";
  }
  return s + "\n";
}

/* ---------- commands ---------- */

int cmd_embed(const SpaceArgs& sargs, int k, const std::string& mode,
              double zero_tol, double euclid_tol,
              const std::optional<std::string>& out) {
  mmds_space* space = load_space_args(sargs);
  mmds_kernel* kern = nullptr;
  check(mmds_kernel_centered(space, parse_mode(mode), &kern));
  mmds_spectrum* spec = nullptr;
  check(mmds_spectrum_compute(kern, zero_tol, &spec));
  mmds_embedding* emb = nullptr;
  check(mmds_embedding_create(spec, k, &emb));

  const int n = mmds_embedding_rows(emb);
  std::vector<double> coords(static_cast<std::size_t>(n) * k);
  check(mmds_embedding_coords(emb, coords.data()));

  double dis_k = 0;
  check(mmds_embedding_distortion(space, emb, &dis_k));
  const int pr = mmds_spectrum_pr(spec);
  double dis_full = 0.0;
  if (pr >= 1) {
    mmds_embedding* full = nullptr;
    check(mmds_embedding_create(spec, pr, &full));
    check(mmds_embedding_distortion(space, full, &dis_full));
    mmds_embedding_free(full);
  }
  double tr_neg = 0;
  check(mmds_spectrum_negative_trace(spec, &tr_neg));
  int embeddable = 0;
  double min_eig = 0;
  check(mmds_space_is_euclidean(space, euclid_tol, &embeddable, &min_eig));

  std::vector<double> ev(mmds_spectrum_size(spec));
  check(mmds_spectrum_eigenvalues(spec, ev.data()));
  JsonObject report;
  report.field("schema_version", kSchemaVersion)
      .field("mode", mode)
      .field("n", n)
      .field("k", k)
      .field("pr", pr)
      .field("nr", mmds_spectrum_nr(spec))
      .field("eigenvalues", ev)
      .field("dis_k", dis_k)
      .field("dis", dis_full)
      .field("tr_neg", tr_neg)
      .field("embeddable", embeddable != 0)
      .field("min_eigenvalue", min_eig);

  if (out) {
    write_text(*out + "_coords.csv", csv_matrix(coords, n, k));
    write_text(*out + "_spectrum.json", spectrum_json(spec, mode));
    write_text(*out + "_report.json", report.str() + "\n");
  } else {
    std::cout << report.str() << "\n";
  }

  mmds_embedding_free(emb);
  mmds_spectrum_free(spec);
  mmds_kernel_free(kern);
  mmds_space_free(space);
  return 0;
}

int cmd_spectrum(const SpaceArgs& sargs, const std::string& mode,
                 double zero_tol, const std::optional<std::string>& out) {
  mmds_space* space = load_space_args(sargs);
  mmds_kernel* kern = nullptr;
  check(mmds_kernel_centered(space, parse_mode(mode), &kern));
  mmds_spectrum* spec = nullptr;
  check(mmds_spectrum_compute(kern, zero_tol, &spec));
  write_text(out, spectrum_json(spec, mode));
  mmds_spectrum_free(spec);
  mmds_kernel_free(kern);
  mmds_space_free(space);
  return 0;
}

std::vector<double> angle_grid(int count) {
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i) {
    grid[i] = M_PI * i / (count - 1);
  }
  return grid;
}

int cmd_oracle(const std::string& which, int d, int max_order, int m, int q,
               int factors, const std::string& mode, const std::string& profile,
               const std::optional<std::string>& out) {
  mmds_oracle* o = nullptr;
  std::string extra;
  if (which == "circle") {
    check(mmds_oracle_circle(max_order, &o));
    const auto grid = angle_grid(20);
    double err = 0;
    check(mmds_sphere_metric_identity(2, max_order, grid.data(),
                                      static_cast<int>(grid.size()), &err));
    extra = "\"metric_identity_max_error\":" + fmt17(err);
  } else if (which == "sphere") {
    check(mmds_oracle_sphere(d, max_order, &o));
    double pos_sum, trace, neg_id, neg_partial, diam2_sq, pos_tail, neg_tail;
    check(mmds_sphere_summaries(d, max_order, &pos_sum, &trace, &neg_id,
                                &neg_partial, &diam2_sq, &pos_tail, &neg_tail,
                                nullptr));
    const auto grid = angle_grid(20);
    double err = 0;
    check(mmds_sphere_metric_identity(d, max_order, grid.data(),
                                      static_cast<int>(grid.size()), &err));
    JsonObject s;
    s.field("pos_sum", pos_sum)
        .field("trace", trace)
        .field("neg_trace_identity", neg_id)
        .field("neg_trace_partial", neg_partial)
        .field("diam2_sq", diam2_sq)
        .field("pos_tail_estimate", pos_tail)
        .field("neg_tail_estimate", neg_tail)
        .field("metric_identity_max_error", err);
    extra = "\"summaries\":" + s.str();
  } else if (which == "polygon") {
    check(mmds_oracle_polygon(m, &o));
  } else if (which == "paley") {
    check(mmds_oracle_paley(q, parse_mode(mode), &o));
  } else if (which == "torus") {
    check(mmds_oracle_torus(factors, max_order, &o));
  } else {  // s2f
    const int prof = profile == "sqrt-euclidean" ? MMDS_S2F_SQRT_EUCLIDEAN
                                                 : MMDS_S2F_GEODESIC;
    check(mmds_oracle_s2_transform(prof, max_order, &o));
  }
  write_text(out, oracle_json(o, which, extra));
  mmds_oracle_free(o);
  return 0;
}

int cmd_sample(const std::string& type, int n, int d, int q, int factors,
               int per_factor, std::vector<int> qs, double a, double b,
               std::uint64_t seed, const std::string& out) {
  mmds_space* space = nullptr;
  mmds_cloud* cloud = nullptr;
  const bool randomized =
      type == "sphere" || type == "ellipse" || type == "random";
  if (type == "polygon") {
    check(mmds_space_polygon(n, &space));
  } else if (type == "paley") {
    check(mmds_space_paley(q, &space));
  } else if (type == "sphere") {
    check(mmds_space_sphere_sample(d, n, seed, &space));
  } else if (type == "torus") {
    check(mmds_space_torus_grid(factors, per_factor, &space));
  } else if (type == "glued-paley") {
    if (qs.empty()) {
      std::cerr << "error: --qs required for glued-paley\n";
      return 2;
    }
    check(mmds_space_glued_paley(qs.data(), static_cast<int>(qs.size()), &space));
  } else if (type == "ellipse") {
    check(mmds_cloud_ellipse(a, b, n, seed, &cloud));
    check(mmds_cloud_to_space(cloud, &space));
  } else {  // random
    check(mmds_space_random_metric(n, seed, &space));
  }

  const int size = mmds_space_size(space);
  std::vector<double> dist(static_cast<std::size_t>(size) * size);
  check(mmds_space_distances(space, dist.data()));
  std::string header;
  if (randomized) header = "# seed=" + std::to_string(seed) + "\n";
  write_text(out + "_dist.csv", header + csv_matrix(dist, size, size));

  std::vector<double> w(size);
  check(mmds_space_weights(space, w.data()));
  bool uniform = true;
  for (double v : w) uniform = uniform && std::abs(v - 1.0 / size) <= 1e-15;
  if (!uniform) {
    std::string ws = header;
    for (double v : w) ws += fmt17(v) + "\n";
    write_text(out + "_weights.csv", ws);
  }
  if (cloud) {
    const int dim = mmds_cloud_dim(cloud);
    std::vector<double> pts(static_cast<std::size_t>(size) * dim);
    check(mmds_cloud_points(cloud, pts.data()));
    write_text(out + "_points.csv", header + csv_matrix(pts, size, dim));
    mmds_cloud_free(cloud);
  }
  mmds_space_free(space);
  return 0;
}

int cmd_graph(const std::string& input, const std::optional<std::string>& out) {
  mmds_space* space = nullptr;
  check(mmds_space_load_edges(input.c_str(), nullptr, &space));
  const int n = mmds_space_size(space);
  std::vector<double> dist(static_cast<std::size_t>(n) * n);
  check(mmds_space_distances(space, dist.data()));
  write_text(out, csv_matrix(dist, n, n));
  mmds_space_free(space);
  return 0;
}

int cmd_product(const SpaceArgs& first, const SpaceArgs& second,
                const std::string& out) {
  mmds_space* x = load_space_args(first);
  mmds_space* y = load_space_args(second);
  mmds_space* p = nullptr;
  check(mmds_space_product(x, y, &p));
  const int n = mmds_space_size(p);
  std::vector<double> dist(static_cast<std::size_t>(n) * n);
  check(mmds_space_distances(p, dist.data()));
  write_text(out + "_dist.csv", csv_matrix(dist, n, n));
  std::vector<double> w(n);
  check(mmds_space_weights(p, w.data()));
  bool uniform = true;
  for (double v : w) uniform = uniform && std::abs(v - 1.0 / n) <= 1e-15;
  if (!uniform) {
    std::string ws;
    for (double v : w) ws += fmt17(v) + "\n";
    write_text(out + "_weights.csv", ws);
  }
  mmds_space_free(p);
  mmds_space_free(y);
  mmds_space_free(x);
  return 0;
}

struct ChainRow {
  std::string label;
  double gw, lhs, rhs, projected, raw, diam_lb;
  bool holds;
};

ChainRow run_chain(mmds_space* x, mmds_space* y, mmds_coupling* c,
                   const std::string& label, double slack) {
  ChainRow row;
  row.label = label;
  int h1 = 0, h2 = 0;
  check(mmds_gw_cost(x, y, c, 2.0, &row.gw));
  check(mmds_kernel_gap_check(x, y, c, &row.lhs, &row.rhs, &h1));
  check(mmds_projection_stability_check(x, y, c, &row.projected, &row.raw, &h2));
  double dx = 0, dy = 0;
  check(mmds_space_diam(x, 2.0, &dx));
  check(mmds_space_diam(y, 2.0, &dy));
  row.diam_lb = 0.5 * std::abs(dx - dy);
  // chained: projected <= raw <= rhs, and the diameter gap lower-bounds the
  // coupling cost
  row.holds = row.projected <= row.raw + slack && row.lhs <= row.rhs + slack &&
              row.diam_lb <= row.gw + slack;
  return row;
}

int cmd_stability(const std::optional<SpaceArgs>& input_a,
                  const std::optional<SpaceArgs>& input_b, int n, int trials,
                  int permutations, std::uint64_t seed,
                  const std::string& strategy, double slack, int threads,
                  const std::optional<std::string>& out) {
  std::vector<ChainRow> rows;
  std::string gw_note;

  if (input_a && input_b) {
    mmds_space* x = load_space_args(*input_a);
    mmds_space* y = load_space_args(*input_b);
    mmds_coupling* c = nullptr;
    check(mmds_coupling_product(x, y, &c));
    rows.push_back(run_chain(x, y, c, "product", slack));
    mmds_coupling_free(c);
    if (strategy == "enumerate") {
      double cost = 0;
      std::vector<int> perm(mmds_space_size(x));
      check(mmds_gw_upper_bound(x, y, MMDS_GW_ENUMERATE, threads, &cost,
                                perm.data()));
      mmds_coupling* best = nullptr;
      check(mmds_coupling_permutation(x, y, perm.data(), &best));
      rows.push_back(run_chain(x, y, best, "best-permutation", slack));
      mmds_coupling_free(best);
      gw_note = fmt17(cost);
    }
    mmds_space_free(y);
    mmds_space_free(x);
  } else {
    // randomized property run: pairs of random metrics on n points
    for (int t = 0; t < trials; ++t) {
      mmds_space* x = nullptr;
      mmds_space* y = nullptr;
      check(mmds_space_random_metric(n, seed + 2 * static_cast<std::uint64_t>(t),
                                     &x));
      check(mmds_space_random_metric(
          n, seed + 2 * static_cast<std::uint64_t>(t) + 1, &y));
      mmds_coupling* c = nullptr;
      check(mmds_coupling_product(x, y, &c));
      rows.push_back(
          run_chain(x, y, c, "trial" + std::to_string(t) + "/product", slack));
      mmds_coupling_free(c);

      // deterministic permutation couplings from the trial seed
      std::vector<int> perm(n);
      std::uint64_t state = seed * 6364136223846793005ULL +
                            static_cast<std::uint64_t>(t) + 1442695040888963407ULL;
      for (int rep = 0; rep < permutations; ++rep) {
        for (int i = 0; i < n; ++i) perm[i] = i;
        for (int i = n; i > 1; --i) {
          state = state * 6364136223846793005ULL + 1442695040888963407ULL;
          const int j = static_cast<int>((state >> 33) % static_cast<std::uint64_t>(i));
          std::swap(perm[i - 1], perm[j]);
        }
        mmds_coupling* pc = nullptr;
        check(mmds_coupling_permutation(x, y, perm.data(), &pc));
        rows.push_back(run_chain(
            x, y, pc, "trial" + std::to_string(t) + "/perm" + std::to_string(rep),
            slack));
        mmds_coupling_free(pc);
      }
      mmds_space_free(y);
      mmds_space_free(x);
    }
  }

  std::string csv = "# seed=" + std::to_string(seed) + "\n";
  csv += "coupling,gw_cost,kernel_gap,kernel_bound,projected_gap,raw_gap,"
         "diam_gap_lb,holds\n";
  bool all_hold = true;
  double worst_slack = std::numeric_limits<double>::infinity();
  for (const auto& r : rows) {
    all_hold = all_hold && r.holds;
    worst_slack = std::min({worst_slack, r.rhs - r.lhs, r.raw - r.projected,
                            r.gw - r.diam_lb});
    csv += r.label + "," + fmt17(r.gw) + "," + fmt17(r.lhs) + "," +
           fmt17(r.rhs) + "," + fmt17(r.projected) + "," + fmt17(r.raw) + "," +
           fmt17(r.diam_lb) + "," + (r.holds ? "1" : "0") + "\n";
  }
  JsonObject summary;
  summary.field("schema_version", kSchemaVersion)
      .field("seed", seed)
      .field("checks", static_cast<int>(rows.size()))
      .field("holds_all", all_hold)
      .field("worst_slack", worst_slack);
  if (!gw_note.empty()) summary.raw("gw_upper_bound", gw_note);

  if (out) {
    write_text(*out + "_rows.csv", csv);
    write_text(*out + "_summary.json", summary.str() + "\n");
  } else {
    std::cout << csv << summary.str() << "\n";
  }
  return all_hold ? 0 : 4;
}

int cmd_consistency(const std::string& target, int d, std::vector<int> sizes,
                    std::uint64_t seed, int top_k,
                    const std::optional<std::string>& out) {
  if (sizes.empty()) {
    std::cerr << "error: --sizes must not be empty\n";
    return 2;
  }
  mmds_table* table = nullptr;
  check(mmds_consistency_run(
      target == "circle" ? MMDS_TARGET_CIRCLE : MMDS_TARGET_SPHERE, d,
      sizes.data(), static_cast<int>(sizes.size()), seed, top_k, &table));
  std::string csv = "# seed=" + std::to_string(seed) + "\n";
  const int cols = mmds_table_cols(table);
  for (int c = 0; c < cols; ++c) {
    if (c) csv += ",";
    csv += mmds_table_column_name(table, c);
  }
  csv += "\n";
  for (int r = 0; r < mmds_table_rows(table); ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c) csv += ",";
      csv += fmt17(mmds_table_value(table, r, c));
    }
    csv += "\n";
  }
  write_text(out, csv);
  mmds_table_free(table);
  return 0;
}

int cmd_thickness(const std::string& input, const std::string& weights,
                  const std::optional<std::string>& out) {
  mmds_cloud* cloud = nullptr;
  check(mmds_cloud_load_csv(input.c_str(),
                            weights.empty() ? nullptr : weights.c_str(), &cloud));
  double th = 0;
  check(mmds_cloud_thickness(cloud, &th));
  const int dim = mmds_cloud_dim(cloud);
  std::vector<double> cov(dim);
  check(mmds_cloud_covariance_eigenvalues(cloud, cov.data()));
  JsonObject obj;
  obj.field("schema_version", kSchemaVersion)
      .field("n", mmds_cloud_size(cloud))
      .field("dim", dim)
      .field("thickness", th)
      .field("covariance_eigenvalues", cov);
  write_text(out, obj.str() + "\n");
  mmds_cloud_free(cloud);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized classical MDS on finite metric measure spaces"};
  app.require_subcommand(1);

  std::string mode = "matrix";
  double zero_tol = -1.0;
  double euclid_tol = -1.0;
  double slack = 1e-9;
  int threads_flag = 0;
  std::optional<std::string> out;

  // embed
  auto* embed = app.add_subcommand("embed", "cMDS embedding with reports");
  SpaceArgs embed_space;
  add_space_options(embed, embed_space);
  int embed_k = 2;
  embed->add_option("--k", embed_k, "target dimension")->required();
  embed->add_option("--mode", mode)->check(CLI::IsMember({"matrix", "measure"}));
  embed->add_option("--zero-tol", zero_tol, "zero eigenvalue threshold");
  embed->add_option("--euclid-tol", euclid_tol, "Schoenberg test tolerance");
  embed->add_option("--out", out, "output prefix");

  // spectrum
  auto* spectrum = app.add_subcommand("spectrum", "kernel spectrum as JSON");
  SpaceArgs spectrum_space;
  add_space_options(spectrum, spectrum_space);
  spectrum->add_option("--mode", mode)->check(CLI::IsMember({"matrix", "measure"}));
  spectrum->add_option("--zero-tol", zero_tol);
  spectrum->add_option("--out", out);

  // oracle
  auto* oracle = app.add_subcommand("oracle", "closed-form spectra");
  std::string oracle_kind;
  int oracle_d = 3, oracle_max = 50, oracle_m = 1, oracle_q = 5, oracle_factors = 2;
  std::string oracle_profile = "geodesic";
  oracle->add_option("kind", oracle_kind, "circle|sphere|polygon|paley|torus|s2f")
      ->required()
      ->check(CLI::IsMember({"circle", "sphere", "polygon", "paley", "torus", "s2f"}));
  oracle->add_option("--d", oracle_d);
  oracle->add_option("--max-order", oracle_max);
  oracle->add_option("--m", oracle_m);
  oracle->add_option("--q", oracle_q);
  oracle->add_option("--factors", oracle_factors);
  oracle->add_option("--mode", mode)->check(CLI::IsMember({"matrix", "measure"}));
  oracle->add_option("--profile", oracle_profile)
      ->check(CLI::IsMember({"geodesic", "sqrt-euclidean"}));
  oracle->add_option("--out", out);

  // sample
  auto* sample = app.add_subcommand("sample", "generate spaces");
  std::string sample_type;
  int sample_n = 6, sample_d = 3, sample_q = 5, sample_factors = 2, sample_per = 6;
  std::vector<int> sample_qs;
  double sample_a = 2.0, sample_b = 1.0;
  std::uint64_t seed = 0;
  std::string sample_out;
  sample->add_option("--type", sample_type)
      ->required()
      ->check(CLI::IsMember(
          {"polygon", "paley", "sphere", "torus", "glued-paley", "ellipse", "random"}));
  sample->add_option("--n", sample_n);
  sample->add_option("--d", sample_d);
  sample->add_option("--q", sample_q);
  sample->add_option("--factors", sample_factors);
  sample->add_option("--per-factor", sample_per);
  sample->add_option("--qs", sample_qs)->delimiter(',');
  sample->add_option("--a", sample_a);
  sample->add_option("--b", sample_b);
  sample->add_option("--seed", seed);
  sample->add_option("--out", sample_out, "output prefix")->required();

  // graph
  auto* graph = app.add_subcommand("graph", "edge list to distance matrix");
  std::string graph_input;
  graph->add_option("--input", graph_input)->required();
  graph->add_option("--out", out);

  // product
  auto* product = app.add_subcommand("product", "l2 product of two spaces");
  SpaceArgs prod_a, prod_b;
  std::string product_out;
  product->add_option("--input-a", prod_a.input)->required();
  product->add_option("--input-b", prod_b.input)->required();
  product->add_option("--weights-a", prod_a.weights);
  product->add_option("--weights-b", prod_b.weights);
  product->add_option("--format-a", prod_a.format)->check(CLI::IsMember({"csv", "edges"}));
  product->add_option("--format-b", prod_b.format)->check(CLI::IsMember({"csv", "edges"}));
  product->add_option("--out", product_out)->required();

  // stability
  auto* stability = app.add_subcommand("stability", "GW stability chain checks");
  SpaceArgs stab_a, stab_b;
  int stab_n = 6, stab_trials = 100, stab_perms = 10;
  std::string stab_strategy = "product";
  stability->add_option("--input-a", stab_a.input);
  stability->add_option("--input-b", stab_b.input);
  stability->add_option("--weights-a", stab_a.weights);
  stability->add_option("--weights-b", stab_b.weights);
  stability->add_option("--n", stab_n, "points per random space");
  stability->add_option("--trials", stab_trials);
  stability->add_option("--permutations", stab_perms);
  stability->add_option("--seed", seed);
  stability->add_option("--strategy", stab_strategy)
      ->check(CLI::IsMember({"product", "enumerate"}));
  stability->add_option("--slack", slack, "inequality slack (default 1e-9)");
  stability->add_option("--threads", threads_flag);
  stability->add_option("--out", out, "output prefix");

  // consistency
  auto* consistency = app.add_subcommand("consistency", "sampling convergence");
  std::string cons_target = "circle";
  int cons_d = 3, cons_topk = 5;
  std::vector<int> cons_sizes;
  consistency->add_option("--target", cons_target)
      ->check(CLI::IsMember({"circle", "sphere"}));
  consistency->add_option("--d", cons_d);
  consistency->add_option("--sizes", cons_sizes)->delimiter(',');
  consistency->add_option("--seed", seed);
  consistency->add_option("--top-k", cons_topk);
  consistency->add_option("--out", out);

  // thickness
  auto* thickness = app.add_subcommand("thickness", "cloud thickness report");
  std::string thick_input, thick_weights;
  thickness->add_option("--input", thick_input)->required();
  thickness->add_option("--weights", thick_weights);
  thickness->add_option("--out", out);

  CLI11_PARSE(app, argc, argv);

  const int threads = resolve_threads(threads_flag);
  try {
    if (embed->parsed()) {
      return cmd_embed(embed_space, embed_k, mode, zero_tol, euclid_tol, out);
    }
    if (spectrum->parsed()) {
      return cmd_spectrum(spectrum_space, mode, zero_tol, out);
    }
    if (oracle->parsed()) {
      return cmd_oracle(oracle_kind, oracle_d, oracle_max, oracle_m, oracle_q,
                        oracle_factors, mode, oracle_profile, out);
    }
    if (sample->parsed()) {
      return cmd_sample(sample_type, sample_n, sample_d, sample_q,
                        sample_factors, sample_per, sample_qs, sample_a,
                        sample_b, seed, sample_out);
    }
    if (graph->parsed()) return cmd_graph(graph_input, out);
    if (product->parsed()) return cmd_product(prod_a, prod_b, product_out);
    if (stability->parsed()) {
      std::optional<SpaceArgs> a, b;
      if (!stab_a.input.empty()) a = stab_a;
      if (!stab_b.input.empty()) b = stab_b;
      if (a.has_value() != b.has_value()) {
        std::cerr << "error: --input-a and --input-b must be given together\n";
        return 2;
      }
      return cmd_stability(a, b, stab_n, stab_trials, stab_perms, seed,
                           stab_strategy, slack, threads, out);
    }
    if (consistency->parsed()) {
      return cmd_consistency(cons_target, cons_d, cons_sizes, seed, cons_topk,
                             out);
    }
    if (thickness->parsed()) return cmd_thickness(thick_input, thick_weights, out);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
