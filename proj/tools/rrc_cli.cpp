// Command-line front end. Talks to the library only through rrc.h.
// Nodes and racks are 1-based here and 0-based below the C boundary.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rrc/rrc.h"

namespace {

struct Failure {
  rrc_status status;
};

void check(rrc_status s) {
  if (s != RRC_OK) throw Failure{s};
}

struct Owned {
  char* p = nullptr;
  ~Owned() { rrc_string_free(p); }
};

struct CodeHandle {
  rrc_code* p = nullptr;
  ~CodeHandle() { rrc_code_free(p); }
};

const char* family_name(rrc_family f) {
  switch (f) {
    case RRC_ALPHA1: return "alpha1";
    case RRC_HYBRID_MSRR: return "hybrid";
    case RRC_MBRR: return "mbrr";
  }
  return "?";
}

void print_info(const rrc_code* code) {
  rrc_code_info info{};
  check(rrc_code_get_info(code, &info));
  std::cout << "family=" << family_name(info.family) << " n=" << info.n << " k=" << info.k
            << " r=" << info.r << " d=" << info.d << " alpha=" << info.alpha
            << " B=" << info.file_size << " field=" << info.modulus << " seed=" << info.seed
            << " attempts=" << info.attempts << '\n';
}

void write_text(const std::string& path, const char* text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    std::cerr << "error: cannot write " << path << '\n';
    throw Failure{RRC_IO};
  }
}

struct Shape {
  int n = 0, k = 0, r = 0, d = -1;
  void add(CLI::App* app, bool need) {
    auto* on = app->add_option("--n", n, "nodes");
    auto* ok = app->add_option("--k", k, "nodes needed to decode");
    auto* orr = app->add_option("--r", r, "racks");
    app->add_option("--d", d, "helper racks per repair (default r-1, alpha1: floor(kr/n))");
    if (need) {
      on->required();
      ok->required();
      orr->required();
    }
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rack-aware regenerating code tool"};
  app.require_subcommand(1);

  // search
  auto* search = app.add_subcommand("search", "construct a code and save the code object");
  Shape s_shape;
  std::string s_family = "mbrr", s_out = "code.json";
  std::uint32_t s_field = 65537;
  std::uint64_t s_seed = 1;
  int s_attempts = 1000;
  search->add_option("--family", s_family, "alpha1, hybrid or mbrr")->capture_default_str();
  s_shape.add(search, true);
  search->add_option("--field", s_field, "prime modulus")->capture_default_str();
  search->add_option("--seed", s_seed)->capture_default_str();
  search->add_option("--attempts", s_attempts, "search draws")->capture_default_str();
  search->add_option("--out", s_out, "code object path")->capture_default_str();

  // encode
  auto* encode = app.add_subcommand("encode", "split a file into one chunk per node");
  Shape e_shape;
  std::string e_input, e_out, e_code, e_family = "alpha1";
  std::uint32_t e_field = 65537;
  encode->add_option("input", e_input, "file to encode")->required();
  encode->add_option("--out", e_out, "chunk directory")->required();
  encode->add_option("--code", e_code, "saved code object (required for hybrid/mbrr)");
  encode->add_option("--family", e_family)->capture_default_str();
  e_shape.add(encode, false);
  encode->add_option("--field", e_field)->capture_default_str();

  // repair
  auto* repair = app.add_subcommand("repair", "rebuild one lost chunk from helper racks");
  std::string r_dir;
  int r_node = 0;
  std::vector<int> r_helpers;
  bool r_generic = false;
  repair->add_option("dir", r_dir, "chunk directory")->required();
  repair->add_option("--node", r_node, "failed node, 1-based")->required();
  repair->add_option("--helpers", r_helpers, "helper racks, 1-based")->delimiter(',');
  repair->add_flag("--allow-generic", r_generic,
                   "rebuild hybrid parity nodes by full projection (reads B symbols)");

  // decode
  auto* decode = app.add_subcommand("decode", "reassemble the file from surviving chunks");
  std::string d_dir, d_out;
  decode->add_option("dir", d_dir, "chunk directory")->required();
  decode->add_option("--out", d_out, "output file")->required();

  // analyze
  auto* analyze = app.add_subcommand("analyze", "trade-off, min-cut and field-size analysis");
  analyze->require_subcommand(1);
  auto* tradeoff = analyze->add_subcommand("tradeoff", "CSV of the trade-off curves");
  int t_n = 0, t_k = 0, t_d = -1, t_steps = 4;
  std::vector<int> t_r;
  std::string t_b = "1", t_csv;
  tradeoff->add_option("--n", t_n)->required();
  tradeoff->add_option("--k", t_k)->required();
  tradeoff->add_option("--r", t_r, "one or more rack counts")->required()->delimiter(',');
  tradeoff->add_option("--d", t_d, "default r-1");
  tradeoff->add_option("--file-size", t_b, "B as a rational")->capture_default_str();
  tradeoff->add_option("--steps", t_steps, "points inside each segment")->capture_default_str();
  tradeoff->add_option("--csv", t_csv, "output path (default stdout)");

  auto* mincut = analyze->add_subcommand("mincut", "certify the capacity bound on the flow graph");
  Shape m_shape;
  std::string m_alpha = "1", m_beta = "1", m_out;
  std::size_t m_budget = 200000;
  std::uint64_t m_seed = 1;
  m_shape.add(mincut, true);
  mincut->add_option("--alpha", m_alpha)->capture_default_str();
  mincut->add_option("--beta", m_beta)->capture_default_str();
  mincut->add_option("--budget", m_budget, "scenarios before sampling")->capture_default_str();
  mincut->add_option("--seed", m_seed)->capture_default_str();
  mincut->add_option("--out", m_out, "report path (default stdout)");

  auto* bounds = analyze->add_subcommand("bounds", "sufficient field size of a construction");
  Shape b_shape;
  std::string b_family = "mbrr";
  bounds->add_option("--family", b_family)->capture_default_str();
  b_shape.add(bounds, true);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*search) {
      CodeHandle code;
      check(rrc_code_search(s_family.c_str(), s_shape.n, s_shape.k, s_shape.r, s_shape.d, s_field,
                            s_seed, s_attempts, &code.p));
      int ok = 0;
      check(rrc_code_verify(code.p, &ok));
      if (!ok) {
        std::cerr << "error: constructed code failed verification\n";
        return 1;
      }
      check(rrc_code_save(code.p, s_out.c_str()));
      print_info(code.p);
      std::cout << "saved " << s_out << '\n';
    } else if (*encode) {
      CodeHandle code;
      check(rrc_code_resolve(e_code.empty() ? nullptr : e_code.c_str(), e_family.c_str(),
                             e_shape.n, e_shape.k, e_shape.r, e_shape.d, e_field, &code.p));
      check(rrc_encode_file(code.p, e_input.c_str(), e_out.c_str()));
      print_info(code.p);
      std::cout << "wrote chunks to " << e_out << '\n';
    } else if (*repair) {
      std::vector<int> helpers;
      for (int h : r_helpers) helpers.push_back(h - 1);
      rrc_bandwidth bw{};
      check(rrc_repair_file(r_dir.c_str(), r_node - 1, helpers.empty() ? nullptr : helpers.data(),
                            helpers.size(), r_generic ? 1 : 0, &bw));
      std::cout << "repaired node " << r_node << (bw.generic ? " (generic projection)" : "") << '\n'
                << "stripes=" << bw.stripes << '\n'
                << "symbol_bytes=" << bw.symbol_bytes << '\n'
                << "cross_rack_symbols_per_stripe=" << bw.cross_per_stripe << '\n'
                << "intra_rack_symbols_per_stripe=" << bw.intra_per_stripe << '\n'
                << "cross_rack_symbols=" << bw.cross_rack_symbols << '\n'
                << "intra_rack_symbols=" << bw.intra_rack_symbols << '\n'
                << "cross_rack_bytes=" << bw.cross_rack_bytes << '\n'
                << "intra_rack_bytes=" << bw.intra_rack_bytes << '\n';
      for (int i = 0; i < bw.helper_count; ++i) {
        std::cout << "rack " << bw.helpers[i] + 1 << ": " << bw.helper_symbols[i]
                  << " symbols/stripe\n";
      }
    } else if (*decode) {
      check(rrc_decode_file(d_dir.c_str(), d_out.c_str()));
      std::cout << "decoded to " << d_out << '\n';
    } else if (*tradeoff) {
      std::string all;
      for (int r : t_r) {
        Owned csv;
        check(rrc_analyze_tradeoff(t_n, t_k, r, t_d, t_b.c_str(), t_steps, &csv.p));
        std::string text = csv.p;
        if (!all.empty()) text.erase(0, text.find('\n') + 1);  // one header
        all += text;
      }
      write_text(t_csv, all.c_str());
    } else if (*mincut) {
      Owned report;
      int certified = 0;
      check(rrc_analyze_mincut(m_shape.n, m_shape.k, m_shape.r, m_shape.d, m_alpha.c_str(),
                               m_beta.c_str(), m_budget, m_seed, &certified, &report.p));
      write_text(m_out, (std::string(report.p) + '\n').c_str());
      return certified ? 0 : 1;
    } else if (*bounds) {
      Owned value;
      check(rrc_analyze_bounds(b_family.c_str(), b_shape.n, b_shape.k, b_shape.r, b_shape.d,
                               &value.p));
      std::cout << value.p << '\n';
    }
  } catch (const Failure& f) {
    const char* msg = rrc_last_error();
    // library messages already start with the status name
    std::cerr << "error: " << (*msg ? msg : rrc_status_name(f.status)) << '\n';
    return 1;
  }
  return 0;
}
