#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include "levelplan.h"

namespace {

// Verdicts use 0/1; 2 covers usage, parse, and unsupported-input problems;
// 3 means an exhaustive search refused the input size.
int exit_for(lvp_status s) { return s == LVP_ERR_BUDGET ? 3 : 2; }

int complain(lvp_status s) {
  std::cerr << "levelplan: " << lvp_last_error() << "\n";
  return exit_for(s);
}

bool read_file(const std::string& path, std::string& out) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return false;
  std::ostringstream buf;
  buf << in.rdbuf();
  out = buf.str();
  return true;
}

struct GraphDel {
  void operator()(lvp_graph* g) const { lvp_graph_free(g); }
};
struct WitnessDel {
  void operator()(lvp_witness* w) const { lvp_witness_free(w); }
};
struct BetwDel {
  void operator()(lvp_betweenness* b) const { lvp_betweenness_free(b); }
};
struct StrDel {
  void operator()(char* s) const { lvp_string_free(s); }
};
using GraphPtr = std::unique_ptr<lvp_graph, GraphDel>;
using WitnessPtr = std::unique_ptr<lvp_witness, WitnessDel>;
using BetwPtr = std::unique_ptr<lvp_betweenness, BetwDel>;
using StrPtr = std::unique_ptr<char, StrDel>;

int load_graph(const std::string& path, GraphPtr& out) {
  std::string text;
  if (!read_file(path, text)) {
    std::cerr << "levelplan: cannot read " << path << "\n";
    return 2;
  }
  lvp_graph* g = nullptr;
  lvp_status s = lvp_graph_parse(text.c_str(), &g);
  if (s != LVP_OK) return complain(s);
  out.reset(g);
  return 0;
}

lvp_surface surface_of(const std::string& name) {
  if (name == "torus") return LVP_SURFACE_TORUS;
  if (name == "cyclic") return LVP_SURFACE_CYCLIC;
  return LVP_SURFACE_RADIAL;
}

int run_test(const std::string& file, const std::string& surface, bool dump) {
  GraphPtr g;
  if (int rc = load_graph(file, g)) return rc;

  if (dump) {
    char* text = nullptr;
    lvp_status s = lvp_instance_dump(g.get(), &text);
    if (s != LVP_OK) return complain(s);
    StrPtr d(text);
    std::cout << d.get();
  }

  int planar = 0;
  lvp_witness* w = nullptr;
  lvp_status s = lvp_test(g.get(), surface_of(surface), &planar, &w);
  if (s != LVP_OK) return complain(s);
  WitnessPtr wp(w);

  std::cout << surface << ": " << (planar ? "planar" : "nonplanar") << "\n";
  if (planar && wp) {
    char* text = nullptr;
    s = lvp_witness_text(wp.get(), &text);
    if (s != LVP_OK) return complain(s);
    StrPtr t(text);
    std::cout << t.get();
  }
  return planar ? 0 : 1;
}

int run_sim_test(const std::string& file) {
  GraphPtr g;
  if (int rc = load_graph(file, g)) return rc;
  int planar = 0;
  lvp_witness* w = nullptr;
  lvp_status s = lvp_sim_test(g.get(), &planar, &w);
  if (s != LVP_OK) return complain(s);
  WitnessPtr wp(w);
  std::cout << "sim: " << (planar ? "planar" : "nonplanar") << "\n";
  if (planar && wp) {
    char* text = nullptr;
    s = lvp_witness_text(wp.get(), &text);
    if (s != LVP_OK) return complain(s);
    StrPtr t(text);
    std::cout << t.get();
  }
  return planar ? 0 : 1;
}

int run_gen(const std::string& family, const std::string& file) {
  std::string text;
  if (!read_file(file, text)) {
    std::cerr << "levelplan: cannot read " << file << "\n";
    return 2;
  }
  lvp_betweenness* b = nullptr;
  lvp_status s = lvp_betweenness_parse(text.c_str(), &b);
  if (s != LVP_OK) return complain(s);
  BetwPtr bp(b);

  lvp_graph* g = nullptr;
  s = lvp_gen_gadget(
      bp.get(),
      family == "betweenness-3x2" ? LVP_GADGET_3X2 : LVP_GADGET_2X3, &g);
  if (s != LVP_OK) return complain(s);
  GraphPtr gp(g);

  char* out = nullptr;
  s = lvp_graph_to_text(gp.get(), &out);
  if (s != LVP_OK) return complain(s);
  StrPtr t(out);
  std::cout << t.get();
  return 0;
}

int run_oracle(const std::string& file, const std::string& surface) {
  GraphPtr g;
  if (int rc = load_graph(file, g)) return rc;
  int planar = 0;
  lvp_status s = lvp_oracle_test(g.get(), surface_of(surface), &planar);
  if (s != LVP_OK) return complain(s);
  std::cout << surface << " oracle: " << (planar ? "planar" : "nonplanar")
            << "\n";
  return planar ? 0 : 1;
}

int run_render(const std::string& file, const std::string& out_path) {
  GraphPtr g;
  if (int rc = load_graph(file, g)) return rc;
  int planar = 0;
  lvp_witness* w = nullptr;
  lvp_status s = lvp_test(g.get(), LVP_SURFACE_TORUS, &planar, &w);
  if (s != LVP_OK) return complain(s);
  WitnessPtr wp(w);
  if (!planar) {
    std::cerr << "levelplan: not torus-planar, nothing to draw\n";
    return 1;
  }
  char* svg = nullptr;
  s = lvp_witness_svg(wp.get(), &svg);
  if (s != LVP_OK) return complain(s);
  StrPtr t(svg);
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "levelplan: cannot write " << out_path << "\n";
    return 2;
  }
  out << t.get();
  return 0;
}

int run_selfcheck() {
  int ok = 0;
  char* report = nullptr;
  lvp_status s = lvp_selfcheck(&ok, &report);
  if (s != LVP_OK) return complain(s);
  StrPtr r(report);
  std::cout << r.get();
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"level-planarity tests on the torus and its cylinders"};
  app.require_subcommand(1);

  std::string file, surface, family, out_path;
  bool dump = false;

  auto* test = app.add_subcommand("test", "decide planarity on a surface");
  test->add_option("--surface", surface, "torus, cyclic, or radial")
      ->required()
      ->check(CLI::IsMember({"torus", "cyclic", "radial"}));
  test->add_option("file", file, "level graph file")->required();
  test->add_flag("--dump-instance", dump,
                 "print the ordering-constraint instance first");

  auto* sim = app.add_subcommand(
      "sim-test", "two graphs on two shared levels, drawn in the plane");
  sim->add_option("file", file, "level graph file with graph tags")
      ->required();

  auto* gen = app.add_subcommand(
      "gen", "emit the hardness instance for a betweenness input");
  gen->add_option("family", family, "gadget family")
      ->required()
      ->check(CLI::IsMember({"betweenness-3x2", "betweenness-2x3"}));
  gen->add_option("file", file, "betweenness file")->required();

  auto* oracle =
      app.add_subcommand("oracle", "same verdict by exhaustive search");
  oracle->add_option("--surface", surface, "torus, cyclic, or radial")
      ->required()
      ->check(CLI::IsMember({"torus", "cyclic", "radial"}));
  oracle->add_option("file", file, "level graph file")->required();

  auto* render =
      app.add_subcommand("render", "draw a torus witness as an SVG file");
  render->add_option("file", file, "level graph file")->required();
  render->add_option("-o,--output", out_path, "output SVG path")->required();

  auto* selfcheck = app.add_subcommand(
      "selfcheck", "run the built-in solver-vs-oracle corpus");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "levelplan: " << e.what() << "\n";
    return 2;
  }

  if (*test) return run_test(file, surface, dump);
  if (*sim) return run_sim_test(file);
  if (*gen) return run_gen(family, file);
  if (*oracle) return run_oracle(file, surface);
  if (*render) return run_render(file, out_path);
  if (*selfcheck) return run_selfcheck();
  return 2;
}
