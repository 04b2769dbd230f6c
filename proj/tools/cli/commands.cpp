#include "commands.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <json.hpp>

#include "io.hpp"
#include "spdsr/errors.hpp"

namespace spdsr::cli {

namespace {

using ojson = nlohmann::ordered_json;

/// Domain error tied to an input record.
class RecordError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Runs fn(i) for i in [0, n) on up to thread_count() workers.  Results land
// in input order; the first failure in input order is rethrown.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F fn) {
  std::vector<std::optional<T>> slots(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        slots[i].emplace(fn(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers = std::min<std::size_t>(thread_count(), n);
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  std::vector<T> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    out.push_back(std::move(*slots[i]));
  }
  return out;
}

void require_spd(const MatrixRecord& r) {
  if (!r.m.is_spd()) throw RecordError(r.label + ": matrix is not symmetric positive definite");
}

void check_pairs(const std::vector<PairRecord>& pairs) {
  for (const auto& p : pairs) {
    require_spd(p.x);
    require_spd(p.y);
  }
}

// ---- formatting helpers

ojson mat_json(const Mat& m) {
  ojson rows = ojson::array();
  for (int i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

ojson vec_json(const Vec& v) {
  ojson a = ojson::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

ojson frame_json(const Frame& f) { return {{"U", mat_json(f.U.matrix())}, {"D", vec_json(f.D.values())}}; }

ojson partition_json(const Partition& p) {
  ojson a = ojson::array();
  for (const auto& b : p.blocks()) {
    ojson block = ojson::array();
    for (int i : b) block.push_back(i + 1);
    a.push_back(block);
  }
  return a;
}

std::string partition_text(const Partition& p) {
  std::string s = "{";
  for (std::size_t b = 0; b < p.blocks().size(); ++b) {
    s += b ? ",{" : "{";
    for (std::size_t i = 0; i < p.blocks()[b].size(); ++i) s += (i ? "," : "") + std::to_string(p.blocks()[b][i] + 1);
    s += "}";
  }
  return s + "}";
}

ojson velocity_json(const Tangent& v) {
  ojson a;
  if (v.A.p() == 2) {
    a["angle"] = v.A.coeffs()(0);
  } else {
    const double angle = v.A.angle();
    a["axis"] = angle > 0.0 ? vec_json(Vec(v.A.coeffs() / angle)) : ojson(nullptr);
    a["angle"] = angle;
  }
  return {{"A", a}, {"L", vec_json(v.L.values())}};
}

std::string num(double v) { return format_number(v); }

void emit(const JobConfig& cfg, const std::string& stem, const std::string& body, std::ostream& out) {
  if (cfg.output_dir.empty()) {
    out << body;
    return;
  }
  std::filesystem::create_directories(cfg.output_dir);
  const std::string ext = cfg.format == OutputFormat::kJson ? ".json" : ".csv";
  const auto path = std::filesystem::path(cfg.output_dir) / (stem + ext);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << body;
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

const char* character(const Tangent& v) {
  const bool rot = frob_norm(v.A.matrix()) > 1e-9;
  const bool scale = v.L.values().norm() > 1e-9;
  if (rot && scale) return "mixed";
  if (rot) return "pure-rotation";
  if (scale) return "pure-scaling";
  return "none";
}

std::vector<std::string> matrix_columns(int p) {
  if (p == 2) return {"m11", "m12", "m22"};
  return {"m11", "m12", "m13", "m22", "m23", "m33"};
}

}  // namespace

void JobConfig::validate() const {
  if (!(k > 0.0)) throw ParseError("--k must be positive");
  if (!(tol_eq > 0.0) || !(tol_tie > 0.0) || !(tol_g > 0.0)) throw ParseError("tolerances must be positive");
  if (max_iter < 1) throw ParseError("--max-iter must be at least 1");
  if (n_samples < 2) throw ParseError("--samples must be at least 2");
  if (schemes.empty()) throw ParseError("--schemes must name at least one scheme");
}

SrConfig JobConfig::sr_config(double k_override) const {
  SrConfig c;
  c.metric = MetricConfig(k_override > 0.0 ? k_override : k);
  c.tol_eq = tol_eq;
  c.tol_tie = tol_tie;
  c.tol_g = tol_g;
  c.max_iter = max_iter;
  return c;
}

unsigned thread_count() {
  if (const char* env = std::getenv("SPDSR_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int cmd_distance(const JobConfig& cfg, std::ostream& out) {
  const auto pairs = read_pairs(cfg.input);
  check_pairs(pairs);
  const SrConfig sc = cfg.sr_config();
  const auto results =
      parallel_map<MinimalPairResult>(pairs.size(), [&](std::size_t i) { return sr_distance(pairs[i].x.m, pairs[i].y.m, sc); });

  if (cfg.format == OutputFormat::kJson) {
    ojson list = ojson::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& r = results[i];
      list.push_back({{"pair", i + 1},
                      {"record", pairs[i].label},
                      {"p", r.x_frame.p()},
                      {"distance", r.distance},
                      {"x_class", to_string(r.x_class.kind)},
                      {"y_class", to_string(r.y_class.kind)},
                      {"x_partition", partition_json(r.x_class.partition)},
                      {"y_partition", partition_json(r.y_class.partition)},
                      {"x_frame", frame_json(r.x_frame)},
                      {"y_frame", frame_json(r.y_frame)},
                      {"curve", velocity_json(r.curve.velocity)},
                      {"ties", r.ties.size()},
                      {"involution", r.involution},
                      {"near_multiplicity", r.near_multiplicity}});
    }
    emit(cfg, "distance", dump({{"command", "distance"}, {"k", cfg.k}, {"results", list}}), out);
  } else {
    std::ostringstream s;
    s << "pair,p,distance,x_class,y_class,rotation_angle,scaling_norm,ties,involution,near_multiplicity\n";
    for (std::size_t i = 0; i < results.size(); ++i) {
      const auto& r = results[i];
      s << i + 1 << ',' << r.x_frame.p() << ',' << num(r.distance) << ',' << to_string(r.x_class.kind) << ','
        << to_string(r.y_class.kind) << ',' << num(r.curve.velocity.A.angle()) << ','
        << num(r.curve.velocity.L.values().norm()) << ',' << r.ties.size() << ',' << (r.involution ? 1 : 0) << ','
        << (r.near_multiplicity ? 1 : 0) << '\n';
    }
    emit(cfg, "distance", s.str(), out);
  }
  return 0;
}

int cmd_interpolate(const JobConfig& cfg, std::ostream& out) {
  const auto pairs = read_pairs(cfg.input);
  check_pairs(pairs);
  const SrConfig sc = cfg.sr_config();
  struct Job {
    std::size_t pair;
    Scheme scheme;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < pairs.size(); ++i)
    for (Scheme s : cfg.schemes) jobs.push_back({i, s});
  const auto trajs = parallel_map<Trajectory>(jobs.size(), [&](std::size_t j) {
    return make_trajectory(pairs[jobs[j].pair].x.m, pairs[jobs[j].pair].y.m, jobs[j].scheme, cfg.n_samples, sc);
  });

  std::string combined;
  ojson combined_json = ojson::array();
  ojson effects_json = ojson::array();
  std::ostringstream effects_csv;
  effects_csv << "pair,scheme,swelling,fattening,shrinking\n";
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const Trajectory& tr = trajs[j];
    const int p = pairs[jobs[j].pair].x.m.p();
    const auto cols = matrix_columns(p);
    const std::string stem = fmt::format("pair{}_{}", jobs[j].pair + 1, to_string(tr.scheme));
    std::string body;
    if (cfg.format == OutputFormat::kCsv) {
      std::ostringstream s;
      s << 't';
      for (const auto& c : cols) s << ',' << c;
      s << ",det,fa,md,angle\n";
      for (const auto& smp : tr.samples) {
        s << num(smp.t);
        for (double v : smp.m.upper()) s << ',' << num(v);
        s << ',' << num(smp.s.det) << ',' << num(smp.s.fa) << ',' << num(smp.s.md) << ',';
        if (smp.angle) s << num(*smp.angle);
        s << '\n';
      }
      body = s.str();
    } else {
      ojson rows = ojson::array();
      for (const auto& smp : tr.samples) {
        ojson row;
        row["t"] = smp.t;
        const auto up = smp.m.upper();
        for (std::size_t c = 0; c < cols.size(); ++c) row[cols[c]] = up[c];
        row["det"] = smp.s.det;
        row["fa"] = smp.s.fa;
        row["md"] = smp.s.md;
        row["angle"] = smp.angle ? ojson(*smp.angle) : ojson(nullptr);
        rows.push_back(row);
      }
      const ojson doc = {{"pair", jobs[j].pair + 1}, {"scheme", to_string(tr.scheme)}, {"p", p}, {"samples", rows}};
      body = dump(doc);
      combined_json.push_back(doc);
    }
    const Effects e = effect_report(tr);
    effects_csv << jobs[j].pair + 1 << ',' << to_string(tr.scheme) << ',' << e.swelling << ',' << e.fattening << ','
                << e.shrinking << '\n';
    effects_json.push_back({{"pair", jobs[j].pair + 1},
                            {"scheme", to_string(tr.scheme)},
                            {"swelling", e.swelling},
                            {"fattening", e.fattening},
                            {"shrinking", e.shrinking}});
    if (cfg.output_dir.empty()) {
      if (cfg.format == OutputFormat::kCsv) combined += fmt::format("# pair {} scheme {}\n", jobs[j].pair + 1, to_string(tr.scheme)) + body;
    } else {
      emit(cfg, stem, body, out);
    }
  }
  if (cfg.output_dir.empty()) {
    out << (cfg.format == OutputFormat::kCsv ? combined : dump({{"trajectories", combined_json}, {"effects", effects_json}}));
  } else {
    emit(cfg, "effects", cfg.format == OutputFormat::kCsv ? effects_csv.str() : dump(effects_json), out);
  }
  return 0;
}

int cmd_versions(const JobConfig& cfg, std::ostream& out) {
  const auto mats = read_matrices(cfg.input);
  for (const auto& m : mats) require_spd(m);

  struct Listing {
    std::vector<Frame> versions;
    std::optional<Partition> infinite;
  };
  const auto listings = parallel_map<Listing>(mats.size(), [&](std::size_t i) {
    try {
      return Listing{enumerate_versions(mats[i].m, cfg.tol_eq), std::nullopt};
    } catch (const MultiplicityError& e) {
      return Listing{{}, Partition(e.blocks())};
    }
  });

  if (cfg.format == OutputFormat::kJson) {
    ojson list = ojson::array();
    for (std::size_t i = 0; i < listings.size(); ++i) {
      ojson item = {{"matrix", i + 1}, {"record", mats[i].label}, {"p", mats[i].m.p()}};
      if (listings[i].infinite) {
        item["infinite_fiber"] = true;
        item["partition"] = partition_json(*listings[i].infinite);
        item["message"] = "repeated eigenvalues, infinite fiber with partition " + partition_text(*listings[i].infinite);
      } else {
        item["infinite_fiber"] = false;
        item["count"] = listings[i].versions.size();
        ojson vs = ojson::array();
        for (const auto& f : listings[i].versions) vs.push_back(frame_json(f));
        item["versions"] = vs;
      }
      list.push_back(item);
    }
    emit(cfg, "versions", dump({{"command", "versions"}, {"results", list}}), out);
  } else {
    std::ostringstream s;
    s << "matrix,version,p,u11,u12,u13,u21,u22,u23,u31,u32,u33,d1,d2,d3\n";
    for (std::size_t i = 0; i < listings.size(); ++i) {
      if (listings[i].infinite) {
        s << "# matrix " << i + 1 << ": repeated eigenvalues, infinite fiber with partition "
          << partition_text(*listings[i].infinite) << '\n';
        continue;
      }
      for (std::size_t v = 0; v < listings[i].versions.size(); ++v) {
        const Frame& f = listings[i].versions[v];
        const int p = f.p();
        s << i + 1 << ',' << v + 1 << ',' << p;
        for (int r = 0; r < 3; ++r)
          for (int c = 0; c < 3; ++c) s << ',' << (r < p && c < p ? num(f.U.matrix()(r, c)) : "");
        for (int d = 0; d < 3; ++d) s << ',' << (d < p ? num(f.D[d]) : "");
        s << '\n';
      }
    }
    emit(cfg, "versions", s.str(), out);
  }
  return 0;
}

int cmd_ksweep(const JobConfig& cfg, std::ostream& out) {
  if (cfg.k_grid.empty()) throw ParseError("ksweep needs --k-grid");
  const auto pairs = read_pairs(cfg.input);
  check_pairs(pairs);
  const std::size_t nk = cfg.k_grid.size();
  const auto results = parallel_map<MinimalPairResult>(pairs.size() * nk, [&](std::size_t j) {
    const auto& pr = pairs[j / nk];
    return sr_distance(pr.x.m, pr.y.m, cfg.sr_config(cfg.k_grid[j % nk]));
  });

  if (cfg.format == OutputFormat::kJson) {
    ojson rows = ojson::array();
    for (std::size_t j = 0; j < results.size(); ++j) {
      const auto& v = results[j].curve.velocity;
      rows.push_back({{"pair", j / nk + 1},
                      {"k", cfg.k_grid[j % nk]},
                      {"distance", results[j].distance},
                      {"rotation_angle", v.A.angle()},
                      {"scaling_norm", v.L.values().norm()},
                      {"character", character(v)}});
    }
    emit(cfg, "ksweep", dump({{"command", "ksweep"}, {"rows", rows}}), out);
  } else {
    std::ostringstream s;
    s << "pair,k,distance,rotation_angle,scaling_norm,character\n";
    for (std::size_t j = 0; j < results.size(); ++j) {
      const auto& v = results[j].curve.velocity;
      s << j / nk + 1 << ',' << num(cfg.k_grid[j % nk]) << ',' << num(results[j].distance) << ','
        << num(v.A.angle()) << ',' << num(v.L.values().norm()) << ',' << character(v) << '\n';
    }
    emit(cfg, "ksweep", s.str(), out);
  }
  return 0;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Scaling-rotation distance and interpolation of SPD matrices", "spdsr"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "spdsr 0.1.0");

  JobConfig cfg;
  std::string format = "json";
  std::string schemes = "SR,E,LE,AI";
  std::string k_grid;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--input", cfg.input, "JSON or CSV file of upper-triangle matrices")->required();
    sub->add_option("--k", cfg.k, "rotation weight k > 0")->capture_default_str();
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    sub->add_option("--output", cfg.output_dir, "output directory (stdout when omitted)");
    sub->add_option("--tol-eq", cfg.tol_eq, "relative eigenvalue equality tolerance")->capture_default_str();
    sub->add_option("--tol-tie", cfg.tol_tie, "distance tie tolerance")->capture_default_str();
    sub->add_option("--tol-g", cfg.tol_g, "maximize_G stopping tolerance")->capture_default_str();
    sub->add_option("--max-iter", cfg.max_iter, "maximize_G sweep limit")->capture_default_str();
  };
  CLI::App* distance = app.add_subcommand("distance", "scaling-rotation distance and minimal pair per input pair");
  CLI::App* interpolate = app.add_subcommand("interpolate", "sampled interpolation trajectories per pair and scheme");
  CLI::App* versions = app.add_subcommand("versions", "all eigen-decompositions of each input matrix");
  CLI::App* ksweep = app.add_subcommand("ksweep", "distance as a function of k");
  for (CLI::App* sub : {distance, interpolate, versions, ksweep}) common(sub);
  interpolate->add_option("--samples", cfg.n_samples, "samples on [0, 1]")->capture_default_str();
  interpolate->add_option("--schemes", schemes, "comma list of SR, E, LE, AI")->capture_default_str();
  ksweep->add_option("--k-grid", k_grid, "start:stop:step or k1,k2,...")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "spdsr: " << e.what() << '\n';
    if (auto* sub = app.get_subcommands().empty() ? nullptr : app.get_subcommands().front()) err << sub->help();
    return 2;
  }

  try {
    cfg.format = format == "csv" ? OutputFormat::kCsv : OutputFormat::kJson;
    cfg.schemes.clear();
    std::istringstream ss(schemes);
    for (std::string s; std::getline(ss, s, ',');) {
      try {
        cfg.schemes.push_back(parse_scheme(s));
      } catch (const InvalidInput& e) {
        throw ParseError(std::string("--schemes: ") + e.what());
      }
    }
    if (ksweep->parsed()) cfg.k_grid = parse_k_grid(k_grid);
    cfg.validate();

    if (distance->parsed()) return cmd_distance(cfg, out);
    if (interpolate->parsed()) return cmd_interpolate(cfg, out);
    if (versions->parsed()) return cmd_versions(cfg, out);
    return cmd_ksweep(cfg, out);
  } catch (const ParseError& e) {
    err << "spdsr: parse error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidInput& e) {
    err << "spdsr: invalid input: " << e.what() << '\n';
    return 2;
  } catch (const ConvergenceError& e) {
    err << "spdsr: " << e.what() << '\n';
    return 4;
  } catch (const DomainError& e) {
    err << "spdsr: domain error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "spdsr: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace spdsr::cli
