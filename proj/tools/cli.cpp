#include "cli.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "quiverloop/action.hpp"
#include "quiverloop/bootstrap.hpp"
#include "quiverloop/error.hpp"
#include "quiverloop/gww.hpp"
#include "quiverloop/haar_mc.hpp"
#include "quiverloop/job.hpp"
#include "quiverloop/loop_equations.hpp"

namespace quiverloop::cli {
namespace {

struct JobArgs {
  std::string job;
  std::optional<std::int64_t> dim_override;
  std::optional<std::string> x;
};

void add_job_args(CLI::App* cmd, JobArgs& a) {
  cmd->add_option("job", a.job, "Job file, or builtin:triangle")->required();
  cmd->add_option("--dim-override", a.dim_override,
                  "Replace the network by one U(N) per edge (needs l = 1, r = (1) everywhere)");
  cmd->add_option("--x", a.x, "Triangle coupling x = 3 f_3 (builtin:triangle only), e.g. 0.2 or 1/5");
}

Job load(const JobArgs& a) {
  Job job;
  if (a.job == "builtin:triangle") {
    const Rational x = a.x ? parse_rational(*a.x) : Rational(1, 5);
    job = parse_job(builtin_triangle_json(a.dim_override.value_or(3), x), a.job);
  } else {
    if (a.x) throw JobError("--x applies to builtin:triangle only; edit the action of the job file");
    job = load_job(a.job);
    if (a.dim_override) override_dimension(job, *a.dim_override);
  }
  return job;
}

// Writes to `path`, or to `out` when the path is empty or "-".
void emit(const std::string& path, std::ostream& out, const std::string& text) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
  if (!f) throw Error("failed writing '" + path + "'");
}

EdgeWord resolve_loop(const Job& job, const std::string& text) {
  if (text.empty()) {
    if (job.loops.empty()) throw JobError("no --loop given and the job file lists no loops");
    return job.loops.front();
  }
  return job.quiver.parse_word(text);
}

bool is_triangle(const Quiver& q) {
  if (q.vertex_count() != 3 || q.edge_count() != 3) return false;
  std::vector<int> out(3), in(3);
  for (const Edge& e : q.edges()) {
    if (e.is_self_loop()) return false;
    ++out[e.source];
    ++in[e.target];
  }
  for (int v = 0; v < 3; ++v) {
    if (out[v] != 1 || in[v] != 1) return false;
  }
  return true;
}

std::string render_table(const Quiver& q, const PlaquetteTable& t) {
  std::ostringstream s;
  s << "constant: " << to_string(t.constant()) << " N\n";
  for (const auto& [gamma, g] : t.entries) s << to_string(g) << "\t" << q.format(gamma.word()) << "\n";
  return s.str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral-action matrix models on quivers: loop equations, bootstrap, GWW, Monte Carlo",
               "quiverloop"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  // validate
  JobArgs validate_job;
  bool validate_json = false;
  auto* validate = app.add_subcommand("validate", "Check a job file; print N and the Dirac ensemble");
  add_job_args(validate, validate_job);
  validate->add_flag("--json", validate_json, "Print JSON instead of text");

  // expand
  JobArgs expand_job;
  std::string expand_out;
  bool expand_json = false;
  auto* expand = app.add_subcommand("expand", "Expand Tr f(D) into plaquette coefficients");
  add_job_args(expand, expand_job);
  expand->add_flag("--json", expand_json, "Print JSON instead of text");
  expand->add_option("--out", expand_out, "Output file (default: stdout)");

  // loopeq
  JobArgs loopeq_job;
  std::string loopeq_loop, loopeq_root, loopeq_out;
  bool loopeq_large = false, loopeq_json = false;
  auto* loopeq = app.add_subcommand("loopeq", "Generate the loop equation of a Wilson loop at a root edge");
  add_job_args(loopeq, loopeq_job);
  loopeq->add_option("--loop", loopeq_loop, "Closed word such as \"e1+ e2+ e3+\" (default: first job loop)");
  loopeq->add_option("--root", loopeq_root, "Root edge id")->required();
  loopeq->add_flag("--large-n", loopeq_large, "Factorize into large-N moments");
  loopeq->add_flag("--json", loopeq_json, "Print JSON instead of text");
  loopeq->add_option("--out", loopeq_out, "Output file (default: stdout)");

  // bootstrap
  JobArgs boot_job;
  std::size_t boot_order = 7;
  GridSpec grid;
  std::vector<double> grid_list;
  double boot_tol = 1e-10;
  std::string boot_out, boot_svg, boot_moments;
  unsigned boot_threads = 1;
  auto* boot = app.add_subcommand("bootstrap", "Scan Toeplitz moment-matrix positivity for the triangle model");
  add_job_args(boot, boot_job);
  boot->add_option("--max-order", boot_order, "Largest moment-matrix size")->capture_default_str();
  boot->add_option("--grid", grid_list, "xmin,xmax,xpoints,ymin,ymax,ypoints")
      ->expected(6)
      ->delimiter(',');
  boot->add_option("--xmin", grid.x_min, "Smallest coupling x")->capture_default_str();
  boot->add_option("--xmax", grid.x_max, "Largest coupling x")->capture_default_str();
  boot->add_option("--xpoints", grid.x_points, "Grid points in x")->capture_default_str();
  boot->add_option("--ymin", grid.y_min, "Smallest moment y")->capture_default_str();
  boot->add_option("--ymax", grid.y_max, "Largest moment y")->capture_default_str();
  boot->add_option("--ypoints", grid.y_points, "Grid points in y")->capture_default_str();
  boot->add_option("--tol", boot_tol, "Minors >= -tol count as nonnegative")->capture_default_str();
  boot->add_option("--out", boot_out, "CSV file (default: stdout)");
  boot->add_option("--svg", boot_svg, "Also write an SVG heat map here");
  boot->add_option("--moments-json", boot_moments, "Also dump m_0 .. m_{max-order - 1} as JSON here");
  boot->add_option("--threads", boot_threads, "Worker threads")->capture_default_str();

  // gww
  int gww_dim = 3;
  double gww_xmin = -3.0, gww_xmax = 3.0;
  std::size_t gww_points = 301;
  std::string gww_out;
  unsigned gww_threads = 1;
  auto* gww = app.add_subcommand("gww", "Exact Z_N(x) and y_N(x) of the Gross-Witten-Wadia model");
  gww->add_option("--dim", gww_dim, "Matrix size N")->capture_default_str();
  gww->add_option("--xmin", gww_xmin, "First coupling")->capture_default_str();
  gww->add_option("--xmax", gww_xmax, "Last coupling")->capture_default_str();
  gww->add_option("--points", gww_points, "Number of couplings")->capture_default_str();
  gww->add_option("--out", gww_out, "CSV file (default: stdout)");
  gww->add_option("--threads", gww_threads, "Worker threads")->capture_default_str();

  // mc
  JobArgs mc_job;
  std::string mc_loop, mc_root, mc_out, mc_method = "reweight";
  bool mc_check = false;
  McOptions mc_opt;
  auto* mc = app.add_subcommand("mc", "Monte Carlo Wilson loop or loop-equation residual");
  add_job_args(mc, mc_job);
  mc->add_option("--loop", mc_loop, "Closed word (default: first job loop)");
  mc->add_flag("--check-eq", mc_check, "Estimate lhs - rhs of the loop equation at --root");
  mc->add_option("--root", mc_root, "Root edge for --check-eq");
  mc->add_option("--samples", mc_opt.samples, "Number of samples")->capture_default_str();
  mc->add_option("--seed", mc_opt.seed, "Master seed")->capture_default_str();
  mc->add_option("--method", mc_method, "reweight or metropolis")
      ->check(CLI::IsMember({"reweight", "metropolis"}))
      ->capture_default_str();
  mc->add_option("--burnin", mc_opt.burnin, "Metropolis burn-in sweeps")->capture_default_str();
  mc->add_option("--thin", mc_opt.thin, "Metropolis sweeps per measurement")->capture_default_str();
  mc->add_option("--threads", mc_opt.threads, "Worker threads (reweighting)")->capture_default_str();
  mc->add_option("--out", mc_out, "JSON file (default: stdout)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*validate) {
      const Job job = load(validate_job);
      const EnsembleDescriptor d = dirac_ensemble(job.network);
      if (validate_json) {
        nlohmann::json j = {{"N", job.network.dimension()}, {"ensemble", to_json(d, job.quiver)}};
        out << j.dump(2) << "\n";
      } else {
        out << "N=" << job.network.dimension() << "\n";
        for (EdgeIndex e = 0; e < d.edges.size(); ++e) {
          out << job.quiver.edge(e).id << ":";
          for (const auto& b : d.edges[e]) out << " U(" << b.size << ")x" << b.multiplicity;
          out << "\n";
        }
      }
    } else if (*expand) {
      const Job job = load(expand_job);
      const PlaquetteTable t = expand_action(job.quiver, job.action);
      emit(expand_out, out,
           expand_json ? to_json(job.quiver, t).dump(2) + "\n" : render_table(job.quiver, t));
    } else if (*loopeq) {
      const Job job = load(loopeq_job);
      const EdgeWord beta = resolve_loop(job, loopeq_loop);
      const EdgeIndex root = job.quiver.edge_index(loopeq_root);
      const PlaquetteTable t = expand_action(job.quiver, job.action);
      const LoopEquation eq = generate_loop_equation(job.quiver, t, beta, root,
                                                     loopeq_large ? LoopMode::kLargeN : LoopMode::kFiniteN);
      std::string text;
      if (loopeq_large) {
        const MomentEquation m = factorize_large_N(eq);
        std::optional<CyclicWord> generator;
        if (is_triangle(job.quiver)) {
          // m_k names powers of the 3-cycle through the root.
          EdgeWord zeta;
          EdgeIndex e = root;
          for (int k = 0; k < 3; ++k) {
            zeta += EdgeWord({Step{e, Orientation::kForward}});
            for (EdgeIndex f = 0; f < job.quiver.edge_count(); ++f) {
              if (job.quiver.edge(f).source == job.quiver.edge(e).target) {
                e = f;
                break;
              }
            }
          }
          generator = cyclic_canonical(job.quiver, zeta);
        }
        if (loopeq_json) {
          nlohmann::json j = to_json(job.quiver, eq);
          j["factorized"] = to_json(job.quiver, m);
          text = j.dump(2) + "\n";
        } else {
          text = render(job.quiver, m, generator) + "\n";
        }
      } else {
        text = loopeq_json ? to_json(job.quiver, eq).dump(2) + "\n" : render(job.quiver, eq) + "\n";
      }
      emit(loopeq_out, out, text);
    } else if (*boot) {
      const Job job = load(boot_job);
      if (!is_triangle(job.quiver)) {
        throw BootstrapError("the moment bootstrap is implemented for the triangle quiver only");
      }
      if (!grid_list.empty()) {
        grid.x_min = grid_list[0];
        grid.x_max = grid_list[1];
        grid.x_points = static_cast<std::size_t>(grid_list[2]);
        grid.y_min = grid_list[3];
        grid.y_max = grid_list[4];
        grid.y_points = static_cast<std::size_t>(grid_list[5]);
      }
      const FeasibilityMap map = scan_region(grid, boot_order, boot_tol, boot_threads);
      std::ostringstream csv;
      write_csv(csv, map);
      emit(boot_out, out, csv.str());
      if (!boot_svg.empty()) {
        std::ostringstream svg;
        write_svg(svg, map);
        emit(boot_svg, out, svg.str());
      }
      if (!boot_moments.empty()) emit(boot_moments, out, moment_table_json(boot_order).dump(2) + "\n");
      if (!boot_out.empty() && boot_out != "-") {
        for (std::size_t k = 1; k <= boot_order; ++k) {
          out << "order " << k << ": " << map.count_feasible(k) << " feasible cells\n";
        }
      }
    } else if (*gww) {
      const std::vector<double> xs = uniform_grid(gww_xmin, gww_xmax, gww_points);
      const GwwCurve curve = first_moment_curve(gww_dim, xs, gww_threads);
      std::ostringstream csv;
      write_csv(csv, curve);
      emit(gww_out, out, csv.str());
      for (const auto& s : curve.samples) {
        if (!s.ok) err << "warning: x=" << format_double(s.x) << ": " << s.note << "\n";
      }
    } else if (*mc) {
      const Job job = load(mc_job);
      mc_opt.method = mc_method == "metropolis" ? McMethod::kMetropolis : McMethod::kReweight;
      const EdgeWord beta = resolve_loop(job, mc_loop);
      const PlaquetteTable t = expand_action(job.quiver, job.action);
      nlohmann::json j;
      j["N"] = job.network.dimension();
      j["loop"] = job.quiver.format(beta);
      j["method"] = mc_method;
      j["seed"] = mc_opt.seed;
      if (mc_check) {
        if (mc_root.empty()) throw JobError("--check-eq needs --root");
        const LoopEquation eq =
            generate_loop_equation(job.quiver, t, beta, job.quiver.edge_index(mc_root));
        const ResidualResult r = check_loop_equation(job.network, t, eq, mc_opt);
        j["root"] = mc_root;
        j["equation"] = render(job.quiver, eq);
        j["lhs"] = to_json(r.lhs);
        j["rhs"] = to_json(r.rhs);
        j["residual"] = to_json(r.residual);
      } else {
        j["estimate"] = to_json(estimate_wilson(job.network, t, beta, mc_opt));
      }
      emit(mc_out, out, j.dump(2) + "\n");
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kDomainError;
  }
  return kOk;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace quiverloop::cli
