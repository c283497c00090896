#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "flatlens/covers.hpp"
#include "flatlens/experiments.hpp"
#include "flatlens/iet.hpp"
#include "flatlens/io.hpp"

using namespace flatlens;

namespace {

constexpr int kUsage = 1;
constexpr int kCheckFailed = 2;

Vec2 parse_pair(const std::string& s) {
  auto k = s.find(',');
  if (k == std::string::npos) throw Error(Errc::BadInput, "expected x,y but got " + s);
  return Vec2(std::stod(s.substr(0, k)), std::stod(s.substr(k + 1)));
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(Errc::BadInput, "cannot write " + path);
  out << text;
}

void emit(const json& j, const std::string& out) {
  std::string s = j.dump(2) + "\n";
  if (out.empty())
    std::cout << s;
  else
    write_file(out, s);
}

struct ModelSource {
  std::string builtin, skeleton, lenses;
  void add(CLI::App* c) {
    c->add_option("--builtin", builtin, "built-in model: " + model_name_list());
    c->add_option("--skeleton", skeleton, "skeleton JSON file");
    c->add_option("--lenses", lenses, "lens configuration JSON file");
  }
  std::shared_ptr<const Model> make(double theta, Lattice* lat) const {
    if (!skeleton.empty()) {
      Skeleton sk = skeleton_from_json(read_json_file(skeleton));
      if (lat) *lat = sk.lattice ? *sk.lattice : make_lattice(Vec2(1, 0), Vec2(0, 1));
      return std::make_shared<Model>(sk);
    }
    if (!lenses.empty()) {
      auto cfg = lenses_from_json(read_json_file(lenses));
      if (lat) *lat = cfg.lattice;
      return std::make_shared<Model>(cfg);
    }
    if (builtin.empty()) throw Error(Errc::BadInput, "one of --builtin, --skeleton, --lenses is required");
    return builtin_model(builtin, theta, lat);
  }
  Skeleton torus_skeleton() const {
    if (!skeleton.empty()) return skeleton_from_json(read_json_file(skeleton));
    if (builtin.empty()) throw Error(Errc::BadInput, "a skeleton is required (--builtin or --skeleton)");
    return builtin_skeleton(builtin);
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"flatlens: Eaton lens fields, slit-fold skeletons and pillowcase covers"};
  app.require_subcommand(1);
  int rc = 0;

  // covers
  auto* covers = app.add_subcommand("covers", "cyclic pillowcase covers");
  covers->require_subcommand(1);
  auto* c_table = covers->add_subcommand("table", "genus-one covers of degree 3, 4 and 6");
  c_table->callback([&] {
    std::cout << "d  wh wv  n1 n2 n3  genus\n";
    for (const auto& r : cover_table())
      std::cout << std::setw(1) << r.d << "  " << std::setw(2) << r.wh << ' ' << std::setw(2) << r.wv << "  " << std::setw(2) << r.n1 << ' '
                << std::setw(2) << r.n2 << ' ' << std::setw(2) << r.n3 << "  " << genus(make_cover(r.d, r.wh, r.wv)) << '\n';
  });
  int dmax = 12;
  auto* c_oracle = covers->add_subcommand("oracle", "genus formula against the glued complex");
  c_oracle->add_option("--dmax", dmax)->check(CLI::Range(2, 200));
  c_oracle->callback([&] {
    int checked = 0, bad = 0;
    for (int d = 2; d <= dmax; ++d)
      for (int wh = 0; wh < d; ++wh)
        for (int wv = 0; wv < d; ++wv) {
          CyclicCover c = make_cover(d, wh, wv);
          if (!connected(c) || !branched_over_three(c)) continue;
          ++checked;
          GluedComplex g = build_complex(c);
          if (2 - 2 * genus(c) != euler_char(g) || fiber_counts(c) != complex_fiber_counts(g)) {
            ++bad;
            std::cout << "mismatch d=" << d << " wh=" << wh << " wv=" << wv << '\n';
          }
        }
    std::cout << (bad ? "FAIL " : "OK ") << bad << " mismatches (" << checked << " covers)\n";
    if (bad) rc = kCheckFailed;
  });
  int od = 6, owh = 3, owv = 1;
  auto* c_orbit = covers->add_subcommand("orbit", "SL2(Z) orbit of the weights");
  c_orbit->add_option("d", od)->required();
  c_orbit->add_option("wh", owh)->required();
  c_orbit->add_option("wv", owv)->required();
  c_orbit->callback([&] {
    for (const auto& c : sl2z_orbit(make_cover(od, owh, owv)))
      std::cout << "X_" << c.d << '(' << c.wh << ',' << c.wv << ")  Ph -> (" << sl2z_step(c, Sl2Gen::Ph).wh << ','
                << sl2z_step(c, Sl2Gen::Ph).wv << ")  Pv -> (" << sl2z_step(c, Sl2Gen::Pv).wh << ',' << sl2z_step(c, Sl2Gen::Pv).wv << ")\n";
  });
  auto* c_genus = covers->add_subcommand("genus", "genus and fibers of one cover");
  c_genus->add_option("d", od)->required();
  c_genus->add_option("wh", owh)->required();
  c_genus->add_option("wv", owv)->required();
  c_genus->callback([&] {
    CyclicCover c = make_cover(od, owh, owv);
    auto f = fiber_counts(c);
    std::cout << "genus " << genus(c) << "  fibers " << f[0] << ' ' << f[1] << ' ' << f[2] << "  census";
    for (double a : cover_census(c)) std::cout << ' ' << a;
    std::cout << '\n';
  });

  // config
  auto* config = app.add_subcommand("config", "lens configurations");
  config->require_subcommand(1);
  double theta = 0.125;
  std::string json_in, out;
  auto* g_w = config->add_subcommand("gamma-w", "lens configuration on the ergodic curve");
  g_w->add_option("--theta", theta, "direction in units of pi")->required();
  g_w->add_option("--out", out);
  g_w->callback([&] { emit(lenses_to_json(gamma_w(M_PI * theta)), out); });
  auto* g_adm = config->add_subcommand("check-admissible", "pairwise disjoint interiors");
  g_adm->add_option("--json", json_in, "lens configuration JSON");
  g_adm->add_option("--theta", theta, "check the curve point at this direction instead");
  g_adm->callback([&] {
    LensConfiguration cfg = json_in.empty() ? gamma_w(M_PI * theta) : lenses_from_json(read_json_file(json_in));
    auto a = is_admissible(cfg);
    std::cout << (a.ok ? "admissible" : "not admissible") << " worst_gap " << a.worst_gap << '\n';
    if (!a.ok) rc = kCheckFailed;
  });
  auto* g_slits = config->add_subcommand("to-slits", "flat counterpart for one direction");
  g_slits->add_option("--json", json_in, "lens configuration JSON");
  g_slits->add_option("--theta", theta, "direction in units of pi")->required();
  g_slits->add_option("--out", out);
  g_slits->callback([&] {
    LensConfiguration cfg = json_in.empty() ? gamma_w(M_PI * theta) : lenses_from_json(read_json_file(json_in));
    emit(skeleton_to_json(to_skeleton(lens_to_slits(cfg, M_PI * theta))), out);
  });
  std::string wstr = "0,1";
  auto* g_sep = config->add_subcommand("separated", "separation of a slit configuration by a lattice vector");
  g_sep->add_option("--json", json_in, "slit configuration JSON (default: the two-slit example)");
  g_sep->add_option("--w", wstr, "lattice vector x,y");
  g_sep->callback([&] {
    SlitConfiguration s = json_in.empty() ? separated_two_slit() : slits_from_json(read_json_file(json_in));
    bool sep = is_separated(s, parse_pair(wstr));
    std::cout << (sep ? "separated" : "not separated") << '\n';
    if (!sep) rc = kCheckFailed;
  });

  // trace
  ModelSource src;
  double path = 1000;
  int checkpoints = 1024;
  std::string start = "0.1234,0.5678", prefix = "trace";
  auto* tr = app.add_subcommand("trace", "trace one leaf");
  src.add(tr);
  tr->add_option("--theta", theta, "direction in units of pi")->required();
  tr->add_option("--path", path)->check(CLI::PositiveNumber);
  tr->add_option("--start", start, "x,y");
  tr->add_option("--checkpoints", checkpoints);
  tr->add_option("--out", prefix, "output prefix for .csv and .svg");
  tr->callback([&] {
    auto m = src.make(M_PI * theta, nullptr);
    FlowState st{parse_pair(start), 1, M_PI * theta, 0};
    if (m->inside_lens(st.pos)) throw Error(Errc::BadInput, "start lies inside a lens");
    TraceOptions opt;
    opt.checkpoints = checkpoints;
    Trajectory t = trace(st, *m, path, opt);
    write_file(prefix + ".csv", trajectory_csv(t, *m));
    write_file(prefix + ".svg", trajectory_svg(t, *m));
    std::cout << "events " << t.event_count << " cells " << t.cell_count << " terminated " << t.terminated << '\n';
  });

  // experiment
  auto* ex = app.add_subcommand("experiment", "direction sweeps");
  ex->require_subcommand(1);
  SweepConfig sc;
  std::string curve = "gamma-w";
  double cutoff = -1, required = -1;
  long long min_cells = 50;
  int rays = 1000;
  auto sweep_opts = [&](CLI::App* c) {
    c->add_option("--thetas", sc.thetas)->check(CLI::PositiveNumber);
    c->add_option("--path", sc.path)->check(CLI::PositiveNumber);
    c->add_option("--seed", sc.seed);
    c->add_option("--out", out, "summary JSON path");
  };
  auto* e_trap = ex->add_subcommand("trapping", "growth of the narrowest displacement width");
  src.add(e_trap);
  sweep_opts(e_trap);
  e_trap->add_option("--cutoff", cutoff);
  e_trap->add_option("--required", required);
  e_trap->callback([&] {
    if (src.builtin.empty()) src.builtin = "single-lens";
    json j = run_trapping(src.builtin, sc, cutoff < 0 ? 0.1 : cutoff, required < 0 ? 0.8 : required);
    emit(j, out);
    if (!j["pass"].get<bool>()) rc = kCheckFailed;
  });
  auto* e_erg = ex->add_subcommand("ergodic", "spreading along the ergodic curve");
  sweep_opts(e_erg);
  e_erg->add_option("--curve", curve)->check(CLI::IsMember({"gamma-w"}));
  e_erg->add_option("--cutoff", cutoff);
  e_erg->add_option("--min-cells", min_cells);
  e_erg->add_option("--required", required);
  e_erg->callback([&] {
    json j = run_ergodic(sc, cutoff < 0 ? 0.3 : cutoff, min_cells, required < 0 ? 0.6 : required);
    emit(j, out);
    if (!j["pass"].get<bool>()) rc = kCheckFailed;
  });
  auto* e_cmp = ex->add_subcommand("compare", "lens field against its slit-fold counterpart");
  int cmp_n = 20;
  double cmp_path = 100;
  e_cmp->add_option("--thetas", cmp_n);
  e_cmp->add_option("--rays", rays);
  e_cmp->add_option("--path", cmp_path);
  e_cmp->add_option("--seed", sc.seed);
  e_cmp->add_option("--out", out);
  e_cmp->callback([&] {
    json j = run_compare(compare_thetas(cmp_n), rays, cmp_path, sc.seed);
    emit(j, out);
    if (!j["pass"].get<bool>()) rc = kCheckFailed;
  });
  auto* e_pc = ex->add_subcommand("pillow-chip", "pillow-fold against its chip replacement");
  int pc_rays = 500;
  double pc_path = 200;
  e_pc->add_option("--rays", pc_rays);
  e_pc->add_option("--path", pc_path);
  e_pc->add_option("--seed", sc.seed);
  e_pc->add_option("--out", out);
  e_pc->callback([&] {
    json j = run_pillow_chip(pillow_chip_thetas(), pc_rays, pc_path, sc.seed);
    emit(j, out);
    if (!j["pass"].get<bool>()) rc = kCheckFailed;
  });

  // iet
  auto* iet = app.add_subcommand("iet", "return maps to a closed transversal");
  iet->require_subcommand(1);
  std::string origin, wvec;
  auto iet_common = [&](CLI::App* c) {
    src.add(c);
    c->add_option("--theta", theta, "direction in units of pi")->required();
    c->add_option("--origin", origin, "section origin x,y");
    c->add_option("--w", wvec, "section lattice vector x,y");
  };
  auto section_for = [&](const Skeleton& sk) {
    SectionSpec s = default_section(sk);
    if (!origin.empty()) s.origin = parse_pair(origin);
    if (!wvec.empty()) s.w = parse_pair(wvec);
    return s;
  };
  auto* i_ex = iet->add_subcommand("extract", "interval exchange with homology classes");
  iet_common(i_ex);
  i_ex->add_option("--out", out);
  i_ex->callback([&] {
    Skeleton sk = src.torus_skeleton();
    auto r = extract_iet(sk, M_PI * theta, section_for(sk));
    emit(iet_to_json(r), out);
  });
  long long hmax = 200;
  double rtol = 0.02, mfloor = 0.01;
  int samples = 20000;
  bool control = false;
  auto* i_rig = iet->add_subcommand("rigidity", "rigidity-time scan for essential values");
  iet_common(i_rig);
  i_rig->get_option("--theta")->required(false);
  i_rig->add_option("--hmax", hmax);
  i_rig->add_option("--tol", rtol);
  i_rig->add_option("--floor", mfloor);
  i_rig->add_option("--samples", samples);
  i_rig->add_flag("--golden-control", control, "use the golden rotation control instead of a skeleton");
  i_rig->add_option("--out", out);
  i_rig->callback([&] {
    IetWithCocycle base;
    PsiTable psi;
    if (control) {
      std::tie(base, psi) = golden_rotation_control();
    } else {
      Skeleton sk = src.torus_skeleton();
      base = extract_iet(sk, M_PI * theta, section_for(sk));
      psi = standard_cocycle(base);
    }
    json j{{"h_max", hmax}, {"rigid_tol", rtol}, {"measure_floor", mfloor}, {"samples", samples}, {"estimate", "monte-carlo"}};
    try {
      auto res = rigidity_scan(base, psi, hmax, rtol, mfloor, samples);
      j["candidates"] = json::array();
      for (const auto& c : res.candidates)
        j["candidates"].push_back({{"g", c.g}, {"h", c.h}, {"measure", c.measure}, {"sup_displacement", c.sup_displacement}});
      j["subgroup_basis"] = res.subgroup_basis;
      j["subgroup_index"] = res.subgroup_index;
    } catch (const Error& e) {
      if (e.code != Errc::ExactPeriodicity) throw;
      j["exact_periodicity"] = e.what();
    }
    emit(j, out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return rc;
}
