#include "levelplan.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "level_graph.hpp"
#include "oracle.hpp"
#include "pq_tree.hpp"
#include "render.hpp"
#include "selfcheck.hpp"
#include "sim_level.hpp"
#include "torus.hpp"

struct lvp_graph {
  lvp::LevelGraph g{1};
};

struct lvp_betweenness {
  lvp::sim::BetweennessInstance b;
};

struct lvp_witness {
  enum class Kind { Embedding, Cyclic, Sim };
  Kind kind = Kind::Embedding;
  lvp::torus::Witness tw;      // Embedding and Cyclic
  lvp::oracle::SimWitness sw;  // Sim
};

namespace {

thread_local std::string t_err;

lvp_status fail(lvp_status s, const std::string& msg) {
  t_err = msg;
  return s;
}

template <typename F>
lvp_status guarded(F&& f) {
  try {
    return f();
  } catch (const lvp::Error& e) {
    switch (e.kind()) {
      case lvp::ErrKind::Parse:
        return fail(LVP_ERR_PARSE, e.what());
      case lvp::ErrKind::Budget:
        return fail(LVP_ERR_BUDGET, e.what());
      case lvp::ErrKind::Precondition:
        return fail(LVP_ERR_PRECONDITION, e.what());
    }
    return fail(LVP_ERR_INTERNAL, e.what());
  } catch (const std::bad_alloc&) {
    return fail(LVP_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(LVP_ERR_INTERNAL, e.what());
  }
}

lvp_status give_string(const std::string& s, char** out) {
  char* mem = static_cast<char*>(std::malloc(s.size() + 1));
  if (!mem) return fail(LVP_ERR_INTERNAL, "out of memory");
  std::memcpy(mem, s.c_str(), s.size() + 1);
  *out = mem;
  return LVP_OK;
}

void put_line(std::ostringstream& out, const char* tag, int index,
              const std::vector<std::string>& items) {
  out << tag << " " << index << ":";
  for (std::size_t i = 0; i < items.size(); ++i)
    out << (i ? ", " : " ") << items[i];
  out << "\n";
}

std::string witness_to_text(const lvp_witness& w) {
  std::ostringstream out;
  switch (w.kind) {
    case lvp_witness::Kind::Embedding:
      for (const auto& [lvl, o] : w.tw.display.level_orders)
        put_line(out, "level", lvl, o.canonical().elems());
      for (const auto& [lvl, o] : w.tw.embedding.layer_orders)
        put_line(out, "layer", lvl, o.canonical().elems());
      break;
    case lvp_witness::Kind::Cyclic:
      for (const auto& [lvl, seq] : w.tw.display_linear)
        put_line(out, "level", lvl, seq);
      break;
    case lvp_witness::Kind::Sim:
      for (const auto& [lvl, seq] : w.sw) put_line(out, "level", lvl, seq);
      break;
  }
  return out.str();
}

}  // namespace

extern "C" {

const char* lvp_last_error(void) { return t_err.c_str(); }

void lvp_string_free(char* s) { std::free(s); }

lvp_status lvp_graph_parse(const char* text, lvp_graph** out) {
  if (!text || !out) return fail(LVP_ERR_PRECONDITION, "null argument");
  return guarded([&] {
    auto g = lvp::LevelGraph::parse_text(text);
    *out = new lvp_graph{std::move(g)};
    return LVP_OK;
  });
}

void lvp_graph_free(lvp_graph* g) { delete g; }

lvp_status lvp_graph_to_text(const lvp_graph* g, char** out) {
  if (!g || !out) return fail(LVP_ERR_PRECONDITION, "null argument");
  return guarded([&] { return give_string(g->g.to_text(), out); });
}

lvp_status lvp_test(const lvp_graph* g, lvp_surface surface, int* planar,
                    lvp_witness** out_witness) {
  if (!g || !planar) return fail(LVP_ERR_PRECONDITION, "null argument");
  return guarded([&]() -> lvp_status {
    std::optional<lvp::torus::Witness> w;
    switch (surface) {
      case LVP_SURFACE_TORUS:
        w = lvp::torus::test_torus(g->g);
        break;
      case LVP_SURFACE_CYCLIC:
        w = lvp::torus::test_cyclic(g->g);
        break;
      case LVP_SURFACE_RADIAL:
        w = lvp::torus::test_radial(g->g);
        break;
      default:
        return fail(LVP_ERR_PRECONDITION, "unknown surface");
    }
    *planar = w.has_value() ? 1 : 0;
    if (out_witness) {
      *out_witness = nullptr;
      if (w) {
        auto* h = new lvp_witness;
        h->kind = surface == LVP_SURFACE_CYCLIC ? lvp_witness::Kind::Cyclic
                                                : lvp_witness::Kind::Embedding;
        h->tw = std::move(*w);
        *out_witness = h;
      }
    }
    return LVP_OK;
  });
}

lvp_status lvp_sim_test(const lvp_graph* g, int* planar,
                        lvp_witness** out_witness) {
  if (!g || !planar) return fail(LVP_ERR_PRECONDITION, "null argument");
  return guarded([&] {
    auto w = lvp::sim::test_sim_2x2(g->g);
    *planar = w.has_value() ? 1 : 0;
    if (out_witness) {
      *out_witness = nullptr;
      if (w) {
        auto* h = new lvp_witness;
        h->kind = lvp_witness::Kind::Sim;
        h->sw = std::move(*w);
        *out_witness = h;
      }
    }
    return LVP_OK;
  });
}

lvp_status lvp_oracle_test(const lvp_graph* g, lvp_surface surface,
                           int* planar) {
  if (!g || !planar) return fail(LVP_ERR_PRECONDITION, "null argument");
  return guarded([&]() -> lvp_status {
    const lvp::LevelGraph& in = g->g;
    if (in.edges().empty()) {
      // Vertices alone never cross, whatever the surface.
      *planar = 1;
      return LVP_OK;
    }
    switch (surface) {
      case LVP_SURFACE_TORUS:
        *planar =
            lvp::oracle::brute_torus(in.make_proper().graph).has_value() ? 1
                                                                         : 0;
        return LVP_OK;
      case LVP_SURFACE_CYCLIC: {
        if (in.levels() == 1) in.make_proper();  // raises the k=1 diagnostic
        auto aug = cyclic_to_torus(in).make_proper().graph;
        *planar = lvp::oracle::brute_torus(aug).has_value() ? 1 : 0;
        return LVP_OK;
      }
      case LVP_SURFACE_RADIAL: {
        if (in.levels() == 1) in.make_proper();
        for (const lvp::Edge& e : in.edges())
          if (in.level_of(e.from) >= in.level_of(e.to)) {
            *planar = 0;
            return LVP_OK;
          }
        auto aug = radial_to_torus(in).make_proper().graph;
        *planar = lvp::oracle::brute_torus(aug).has_value() ? 1 : 0;
        return LVP_OK;
      }
      default:
        return fail(LVP_ERR_PRECONDITION, "unknown surface");
    }
  });
}

void lvp_witness_free(lvp_witness* w) { delete w; }

lvp_status lvp_witness_text(const lvp_witness* w, char** out) {
  if (!w || !out) return fail(LVP_ERR_PRECONDITION, "null argument");
  return guarded([&] { return give_string(witness_to_text(*w), out); });
}

lvp_status lvp_witness_svg(const lvp_witness* w, char** out) {
  if (!w || !out) return fail(LVP_ERR_PRECONDITION, "null argument");
  return guarded([&]() -> lvp_status {
    if (w->kind == lvp_witness::Kind::Sim)
      return fail(LVP_ERR_PRECONDITION,
                  "witness has no torus embedding to draw");
    return give_string(
        lvp::render::render_svg(w->tw.proper_graph, w->tw.embedding), out);
  });
}

lvp_status lvp_instance_dump(const lvp_graph* g, char** out) {
  if (!g || !out) return fail(LVP_ERR_PRECONDITION, "null argument");
  return guarded([&] {
    auto inst = lvp::torus::build_instance(g->g.make_proper().graph);
    return give_string(inst.dump(), out);
  });
}

lvp_status lvp_betweenness_parse(const char* text, lvp_betweenness** out) {
  if (!text || !out) return fail(LVP_ERR_PRECONDITION, "null argument");
  return guarded([&] {
    auto b = lvp::sim::BetweennessInstance::parse_text(text);
    *out = new lvp_betweenness{std::move(b)};
    return LVP_OK;
  });
}

void lvp_betweenness_free(lvp_betweenness* b) { delete b; }

lvp_status lvp_gen_gadget(const lvp_betweenness* b, lvp_gadget_family family,
                          lvp_graph** out) {
  if (!b || !out) return fail(LVP_ERR_PRECONDITION, "null argument");
  return guarded([&]() -> lvp_status {
    lvp::LevelGraph g{1};
    switch (family) {
      case LVP_GADGET_3X2:
        g = lvp::sim::gen_gadget_3x2(b->b);
        break;
      case LVP_GADGET_2X3:
        g = lvp::sim::gen_gadget_2x3(b->b);
        break;
      default:
        return fail(LVP_ERR_PRECONDITION, "unknown gadget family");
    }
    *out = new lvp_graph{std::move(g)};
    return LVP_OK;
  });
}

lvp_status lvp_selfcheck(int* ok, char** report) {
  if (!ok) return fail(LVP_ERR_PRECONDITION, "null argument");
  return guarded([&]() -> lvp_status {
    auto r = lvp::selfcheck::run();
    if (report) {
      lvp_status s = give_string(r.text, report);
      if (s != LVP_OK) return s;
    }
    *ok = r.ok ? 1 : 0;
    return LVP_OK;
  });
}

}  // extern "C"
