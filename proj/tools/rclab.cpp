#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <future>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "rclab/counterexamples.hpp"
#include "rclab/csv.hpp"
#include "rclab/io.hpp"

namespace {

using rclab::CsvTable;
using OJson = nlohmann::ordered_json;

// Rows carried as ordered JSON objects so the CSV and JSON emissions
// share one source and one column order.
struct Table {
  std::vector<std::string> cols;
  std::vector<OJson> rows;

  explicit Table(std::vector<std::string> cols_) : cols(std::move(cols_)) {}

  void add(OJson row) { rows.push_back(std::move(row)); }

  std::string to_csv() const {
    CsvTable t(cols);
    for (const auto& r : rows) {
      std::vector<std::string> cells;
      cells.reserve(cols.size());
      for (const auto& c : cols) {
        const auto& v = r.at(c);
        if (v.is_number_float()) {
          cells.push_back(CsvTable::fmt(v.get<double>()));
        } else if (v.is_number_integer()) {
          cells.push_back(CsvTable::fmt(v.get<long>()));
        } else if (v.is_string()) {
          cells.push_back(v.get<std::string>());
        } else {
          cells.push_back(v.dump());
        }
      }
      t.add_row(std::move(cells));
    }
    return t.str();
  }

  std::string to_json() const {
    OJson arr = OJson::array();
    for (const auto& r : rows) arr.push_back(r);
    return arr.dump(2) + "\n";
  }
};

std::string output_path(const std::string& base, const std::string& emit) {
  std::string stem = base;
  const std::string suffix = ".json";
  if (stem.size() > suffix.size() &&
      stem.compare(stem.size() - suffix.size(), suffix.size(), suffix) == 0) {
    stem.resize(stem.size() - suffix.size());
  }
  return stem + (emit == "json" ? ".out.json" : ".out.csv");
}

void emit_table(const Table& table, const std::string& path,
                const std::string& emit) {
  rclab::write_text_file(path,
                         emit == "json" ? table.to_json() : table.to_csv());
  std::cout << "wrote " << path << "\n";
}

const char* method_name(rclab::SolveMethod m) {
  switch (m) {
    case rclab::SolveMethod::subgradient:
      return "subgradient";
    case rclab::SolveMethod::grid:
      return "grid";
    case rclab::SolveMethod::hybrid:
      return "hybrid";
  }
  return "unknown";
}

int run_solve(const std::string& instance_path, double tol, bool tol_set,
              int resolution, bool resolution_set, const std::string& emit) {
  const rclab::Json j = rclab::load_json_file(instance_path);
  rclab::SolveInstance inst = rclab::solve_instance_from_json(j);
  const double use_tol = tol_set ? tol : inst.tol;
  const int cloud_res = resolution_set ? resolution : 0;
  const rclab::CenterSolution sol =
      rclab::restricted_radius(inst.subspace, inst.set, use_tol, cloud_res);

  std::vector<std::string> cols = {"radius", "cluster_tol", "iterations",
                                   "method", "cloud_size"};
  for (int i = 0; i < inst.space.dim; ++i) {
    cols.push_back("center" + std::to_string(i));
  }
  Table table(cols);
  OJson row;
  row["radius"] = sol.radius;
  row["cluster_tol"] = sol.cluster_tol;
  row["iterations"] = sol.iterations;
  row["method"] = method_name(sol.method);
  row["cloud_size"] = static_cast<long>(sol.minimizers.size());
  const rclab::Point& c = sol.minimizers.points.front();
  for (int i = 0; i < inst.space.dim; ++i) {
    row["center" + std::to_string(i)] = c[i];
  }
  table.add(std::move(row));

  std::printf("radius %.12g  cloud %zu points  (%s, %ld evaluations)\n",
              sol.radius, sol.minimizers.size(), method_name(sol.method),
              sol.iterations);
  emit_table(table, output_path(instance_path, emit), emit);
  return 0;
}

int run_verify_product(const std::string& instance_path, double tol,
                       const std::string& emit) {
  const rclab::Json j = rclab::load_json_file(instance_path);
  const rclab::ProductInstance inst = rclab::product_instance_from_json(j);

  const rclab::ProductCenterCloud comp = rclab::product_center(inst, tol);
  const rclab::DirectSolveResult direct =
      rclab::direct_product_solve(inst, tol);

  const rclab::Space flat = rclab::flatten_space(inst);
  const rclab::BoundedSet flat_set = rclab::materialize_product_set(inst);

  Table table({"quantity", "componentwise", "direct", "abs_gap"});
  auto add = [&table](const char* q, double a, double b) {
    OJson row;
    row["quantity"] = q;
    row["componentwise"] = a;
    row["direct"] = b;
    row["abs_gap"] = std::abs(a - b);
    table.add(std::move(row));
  };

  add("radius", comp.radius, direct.radius);

  const rclab::ProductPoint zero = rclab::product_zero(inst);
  add("farthest_radius_at_zero",
      rclab::product_farthest_radius(inst, zero),
      rclab::farthest_radius(flat, rclab::flatten_point(inst, zero),
                             flat_set));
  add("farthest_radius_at_center",
      rclab::product_farthest_radius(inst, comp.best),
      rclab::farthest_radius(flat, rclab::flatten_point(inst, comp.best),
                             flat_set));
  add("center_value", rclab::product_farthest_radius(inst, comp.best),
      rclab::product_farthest_radius(inst, direct.minimizer));

  const double mdist = rclab::product_dist(inst, comp.best, direct.minimizer);
  std::printf(
      "componentwise radius %.12g  direct radius %.12g  minimizer distance "
      "%.6g\n",
      comp.radius, direct.radius, mdist);
  emit_table(table, output_path(instance_path, emit), emit);
  return 0;
}

int run_modulus(const std::string& kind, const std::string& instance_path,
                const std::vector<double>& eps, int anchor, double tol,
                int resolution, const std::string& emit) {
  if (eps.empty()) {
    throw rclab::ValidationError("--eps requires at least one value");
  }
  const rclab::Json j = rclab::load_json_file(instance_path);
  rclab::ModulusCurve curve;
  if (kind == "p1") {
    rclab::SolveInstance inst = rclab::solve_instance_from_json(j);
    curve = rclab::p1_modulus(inst.subspace, inst.set, eps, resolution, tol);
  } else {
    rclab::FamilyInstance inst = rclab::family_instance_from_json(j);
    if (kind == "p2") {
      curve = rclab::p2_modulus(inst.subspace, inst.family, eps, resolution,
                                tol);
    } else {
      if (anchor < 0 ||
          anchor >= static_cast<int>(inst.family.members.size())) {
        throw rclab::ValidationError("--anchor index out of range");
      }
      curve = rclab::lp2_modulus(inst.subspace, inst.family,
                                 inst.family.members[anchor], eps, resolution,
                                 tol);
    }
  }

  Table table({"eps", "delta"});
  for (const auto& [e, d] : curve.entries) {
    OJson row;
    row["eps"] = e;
    row["delta"] = d;
    table.add(std::move(row));
    std::printf("eps %.6g -> delta %.12g\n", e, d);
  }
  emit_table(table, output_path(instance_path, emit), emit);
  return 0;
}

int run_probe(const std::string& kind, const std::string& instance_path,
              const std::vector<double>& eps, int samples, int grid,
              const std::string& emit) {
  if (eps.empty()) {
    throw rclab::ValidationError("--eps requires at least one value");
  }
  const rclab::Json j = rclab::load_json_file(instance_path);
  const rclab::Space space = rclab::space_from_json(
      j.contains("space") ? j["space"] : rclab::Json(), "instance.space");

  if (kind == "qur") {
    const rclab::Subspace sub = rclab::subspace_from_json(
        space,
        j.contains("subspace") ? j["subspace"]
                               : throw rclab::ValidationError(
                                     "instance: missing field 'subspace'"),
        "instance.subspace");
    std::vector<std::string> cols = {"eps", "delta_estimate"};
    for (int i = 0; i < space.dim; ++i) {
      cols.push_back("witness" + std::to_string(i));
    }
    Table table(cols);
    rclab::SamplerCfg cfg;
    cfg.points_per_axis = grid;
    for (const double e : eps) {
      const rclab::QurResult res =
          rclab::qur_probe(space, sub, e, samples, cfg);
      OJson row;
      row["eps"] = e;
      row["delta_estimate"] = res.delta_estimate;
      for (int i = 0; i < space.dim; ++i) {
        if (res.witness) {
          row["witness" + std::to_string(i)] = (*res.witness)[i];
        } else {
          row["witness" + std::to_string(i)] = "";
        }
      }
      table.add(std::move(row));
      std::printf("eps %.6g -> delta %.6g%s\n", e, res.delta_estimate,
                  res.witness ? "  (witness found)" : "");
    }
    emit_table(table, output_path(instance_path, emit), emit);
    return 0;
  }

  // ured
  if (!j.contains("direction")) {
    throw rclab::ValidationError("instance: missing field 'direction'");
  }
  rclab::Point dir(space.dim);
  {
    const rclab::Json& dj = j["direction"];
    if (!dj.is_array() || static_cast<int>(dj.size()) != space.dim) {
      throw rclab::ValidationError(
          "instance.direction: expected an array matching the space "
          "dimension");
    }
    for (int i = 0; i < space.dim; ++i) {
      if (!dj[i].is_number()) {
        throw rclab::ValidationError("instance.direction: expected numbers");
      }
      dir[i] = dj[i].get<double>();
    }
  }
  const rclab::UredReport rep = rclab::ured_probe(space, dir, eps, samples);
  std::vector<std::string> cols = {"eps", "modulus"};
  for (int i = 0; i < space.dim; ++i) cols.push_back("x" + std::to_string(i));
  for (int i = 0; i < space.dim; ++i) cols.push_back("y" + std::to_string(i));
  Table table(cols);
  for (const auto& d : rep.details) {
    OJson row;
    row["eps"] = d.eps;
    row["modulus"] = d.modulus;
    for (int i = 0; i < space.dim; ++i) {
      row["x" + std::to_string(i)] = d.x[i];
    }
    for (int i = 0; i < space.dim; ++i) {
      row["y" + std::to_string(i)] = d.y[i];
    }
    table.add(std::move(row));
    std::printf("eps %.6g -> modulus %.12g\n", d.eps, d.modulus);
  }
  emit_table(table, output_path(instance_path, emit), emit);
  return 0;
}

int run_demo_p2(int nmax, double p, double tol, int workers,
                const std::string& emit, std::string out) {
  if (nmax < 1) throw rclab::ValidationError("--nmax must be >= 1");
  if (workers < 1) throw rclab::ValidationError("--workers must be >= 1");
  std::vector<rclab::UniformFailureRow> rows(nmax);
  if (workers == 1) {
    const auto all = rclab::measure_p2_failure(nmax, p, tol);
    rows = all;
  } else {
    // Rows are independent; shard them deterministically and reassemble
    // in order so the output is identical for any worker count.
    std::vector<std::future<std::vector<rclab::UniformFailureRow>>> futs;
    const int shard = (nmax + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const int lo = w * shard + 1;
      const int hi = std::min(nmax, (w + 1) * shard);
      if (lo > hi) break;
      futs.push_back(std::async(std::launch::async, [lo, hi, p, tol]() {
        std::vector<rclab::UniformFailureRow> part;
        for (int n = lo; n <= hi; ++n) {
          auto r = rclab::measure_p2_failure(n, p, tol);
          part.push_back(r.back());
        }
        return part;
      }));
    }
    rows.clear();
    for (auto& f : futs) {
      for (auto& r : f.get()) rows.push_back(r);
    }
  }

  Table table({"n", "rad", "r_wn", "gap", "dist_to_center"});
  for (const auto& r : rows) {
    OJson row;
    row["n"] = r.n;
    row["rad"] = r.rad;
    row["r_wn"] = r.r_witness;
    row["gap"] = r.gap;
    row["dist_to_center"] = r.dist_to_center;
    table.add(std::move(row));
  }
  std::printf("n=%d blocks: gap shrinks to %.6g while center distance stays "
              "%.6g\n",
              nmax, rows.back().gap, rows.back().dist_to_center);
  if (out.empty()) out = std::string("p2-failure.out.") + emit;
  rclab::write_text_file(out, emit == "json" ? table.to_json()
                                             : table.to_csv());
  std::cout << "wrote " << out << "\n";
  return 0;
}

int run_demo_lhsc(const std::vector<int>& ks, double tol, int resolution,
                  const std::string& emit, std::string out) {
  if (ks.empty()) throw rclab::ValidationError("--k requires at least one value");
  const rclab::ProjectionCollapseReport rep =
      rclab::run_lhsc_failure(ks, tol, resolution);
  Table table({"k", "d_anchor", "proj_k0", "proj_k1", "proj_k2",
               "anchor_cloud_size", "lhsc_gap", "uhsc_gap"});
  for (const auto& r : rep.rows) {
    OJson row;
    row["k"] = r.k;
    row["d_anchor"] = r.input_hausdorff;
    row["proj_k0"] = r.projection[0];
    row["proj_k1"] = r.projection[1];
    row["proj_k2"] = r.projection[2];
    row["anchor_cloud_size"] =
        static_cast<long>(rep.anchor_solution.minimizers.size());
    row["lhsc_gap"] = r.lhsc_gap;
    row["uhsc_gap"] = r.uhsc_gap;
    table.add(std::move(row));
    std::printf("k=%d: input distance %.6g, projection jump %.6g\n", r.k,
                r.input_hausdorff, r.lhsc_gap);
  }
  std::printf("anchor projects onto a %zu-point segment cloud of radius "
              "%.6g\n",
              rep.anchor_solution.minimizers.size(),
              rep.anchor_solution.radius);
  if (out.empty()) out = std::string("lhsc-failure.out.") + emit;
  rclab::write_text_file(out, emit == "json" ? table.to_json()
                                             : table.to_csv());
  std::cout << "wrote " << out << "\n";
  return 0;
}

int run_validate(const std::string& instance_path) {
  const rclab::Json j = rclab::load_json_file(instance_path);
  const rclab::InstanceKind kind = rclab::detect_instance_kind(j);
  switch (kind) {
    case rclab::InstanceKind::solve: {
      const rclab::SolveInstance inst = rclab::solve_instance_from_json(j);
      std::printf("valid solve instance: dim %d, subspace dim %d, %zu set "
                  "points\n",
                  inst.space.dim, inst.subspace.subspace_dim(),
                  inst.set.size());
      break;
    }
    case rclab::InstanceKind::product: {
      const rclab::ProductInstance inst =
          rclab::product_instance_from_json(j);
      std::printf("valid product instance: p %.6g, %zu components, total dim "
                  "%d\n",
                  inst.p, inst.size(), inst.total_dim());
      break;
    }
    case rclab::InstanceKind::family: {
      const rclab::FamilyInstance inst = rclab::family_instance_from_json(j);
      std::printf("valid family instance: dim %d, %zu members\n",
                  inst.space.dim, inst.family.members.size());
      break;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "rclab: restricted Chebyshev centers of finite sets relative to "
      "subspaces, direct-sum decomposition checks, and collapse-property "
      "probes"};
  app.require_subcommand(1);

  std::string instance_path;
  double tol = 1e-6;
  int resolution = 101;
  long seed = 0;
  std::string emit = "csv";
  int workers = std::max(1, static_cast<int>(std::thread::hardware_concurrency()));

  // validate
  auto* validate = app.add_subcommand("validate", "Parse and check an instance file");
  validate->add_option("--instance", instance_path, "instance JSON file")
      ->required();

  // solve
  auto* solve = app.add_subcommand("solve", "Solve a restricted center problem");
  solve->add_option("--instance", instance_path)->required();
  solve->add_option("--tol", tol, "solver tolerance");
  solve->add_option("--resolution", resolution, "near-minimizer grid per axis")
      ->check(CLI::Range(11, 100000));
  solve->add_option("--seed", seed, "reserved; kept for reproducible runs");
  solve->add_option("--emit", emit)->check(CLI::IsMember({"csv", "json"}));

  // verify-product
  auto* verify = app.add_subcommand(
      "verify-product", "Check componentwise identities against a direct solve");
  verify->add_option("--instance", instance_path)->required();
  verify->add_option("--tol", tol);
  verify->add_option("--emit", emit)->check(CLI::IsMember({"csv", "json"}));

  // modulus
  auto* modulus = app.add_subcommand("modulus", "Collapse modulus curves");
  std::string mkind;
  std::vector<double> eps;
  int anchor = 0;
  modulus->add_option("--kind", mkind)->required()
      ->check(CLI::IsMember({"p1", "p2", "lp2"}));
  modulus->add_option("--instance", instance_path)->required();
  modulus->add_option("--eps", eps, "eps grid")->required()->delimiter(',');
  modulus->add_option("--anchor", anchor, "member index anchoring lp2");
  modulus->add_option("--tol", tol);
  modulus->add_option("--resolution", resolution)
      ->check(CLI::Range(11, 100000));
  modulus->add_option("--emit", emit)->check(CLI::IsMember({"csv", "json"}));

  // probe
  auto* probe = app.add_subcommand("probe", "Rotundity probes");
  std::string pkind;
  int samples = 48;
  int grid = 41;
  probe->add_option("--kind", pkind)->required()
      ->check(CLI::IsMember({"qur", "ured"}));
  probe->add_option("--instance", instance_path)->required();
  probe->add_option("--eps", eps)->required()->delimiter(',');
  probe->add_option("--samples", samples, "probe directions / points");
  probe->add_option("--grid", grid, "ball sampling points per axis")
      ->check(CLI::Range(5, 401));
  probe->add_option("--emit", emit)->check(CLI::IsMember({"csv", "json"}));

  // demo
  auto* demo = app.add_subcommand("demo", "Built-in counterexample tables");
  demo->require_subcommand(1);
  auto* demo_p2 = demo->add_subcommand(
      "p2-failure", "Uniform collapse failure across growing block index");
  int nmax = 40;
  double outer_p = 2.0;
  std::string out_path;
  demo_p2->add_option("--nmax", nmax, "largest block index");
  demo_p2->add_option("--p", outer_p, "outer exponent");
  demo_p2->add_option("--tol", tol);
  demo_p2->add_option("--workers", workers)->check(CLI::Range(1, 64));
  demo_p2->add_option("--emit", emit)->check(CLI::IsMember({"csv", "json"}));
  demo_p2->add_option("--out", out_path, "output file (default p2-failure.out.csv)");

  auto* demo_lhsc = demo->add_subcommand(
      "lhsc-failure", "Nearest-point map discontinuity under perturbation");
  std::vector<int> ks = {1, 10, 100};
  demo_lhsc->add_option("--k", ks, "perturbation indices")->delimiter(',');
  demo_lhsc->add_option("--tol", tol);
  demo_lhsc->add_option("--resolution", resolution)
      ->check(CLI::Range(11, 100000));
  demo_lhsc->add_option("--emit", emit)->check(CLI::IsMember({"csv", "json"}));
  demo_lhsc->add_option("--out", out_path, "output file (default lhsc-failure.out.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*validate) return run_validate(instance_path);
    if (*solve) {
      return run_solve(instance_path, tol, solve->count("--tol") > 0,
                       resolution, solve->count("--resolution") > 0, emit);
    }
    if (*verify) return run_verify_product(instance_path, tol, emit);
    if (*modulus) {
      return run_modulus(mkind, instance_path, eps, anchor, tol, resolution,
                         emit);
    }
    if (*probe) return run_probe(pkind, instance_path, eps, samples, grid, emit);
    if (*demo) {
      if (*demo_p2) {
        return run_demo_p2(nmax, outer_p, tol, workers, emit, out_path);
      }
      if (*demo_lhsc) {
        return run_demo_lhsc(ks, tol,
                             demo_lhsc->count("--resolution") > 0 ? resolution
                                                                  : 401,
                             emit, out_path);
      }
    }
  } catch (const rclab::SolveError& e) {
    std::cerr << "solver failed to converge: " << e.what()
              << " (best value " << e.best_value() << ")\n";
    return 3;
  } catch (const rclab::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const rclab::UnsupportedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
