#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "synclab.hpp"

using namespace synclab;

namespace {

constexpr const char* kSchema = "synclab/1";

struct Globals {
  std::string format = "table";
  std::uint64_t seed = 0;
  int threads = 1;
  bool json() const { return format == "json"; }
};

std::string pi_multiple(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4fπ", x / std::numbers::pi + 0.0);
  return buf;
}

std::string point_string(const Vector& x) {
  std::string out = "(";
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) out += ", ";
    out += pi_multiple(x(i));
  }
  return out + ")";
}

std::string counts_string(const ComponentCounts& k) {
  // printed order: c(G+), c(G-), c(G)
  return "(" + std::to_string(k.c_gplus) + "," + std::to_string(k.c_gminus) + "," + std::to_string(k.c_g) + ")";
}

std::string interval_string(const Interval& i) { return "[" + std::to_string(i.lo) + "," + std::to_string(i.hi) + "]"; }

json classes_json(const Partition& p) {
  json out = json::array();
  for (const auto& block : p.blocks()) {
    json b = json::array();
    for (int c : block) b.push_back(c + 1);
    out.push_back(b);
  }
  return out;
}

json vector_json(const Vector& x) { return std::vector<double>(x.data(), x.data() + x.size()); }

json interval_json(const Interval& i) { return {{"lo", i.lo}, {"hi", i.hi}}; }

json spectrum_json(const SignedSpectrumReport& s) {
  return {
      {"signature", {{"n_plus", s.signature.n_plus}, {"n_zero", s.signature.n_zero}, {"n_minus", s.signature.n_minus}}},
      {"counts", {{"c_gplus", s.counts.c_gplus}, {"c_gminus", s.counts.c_gminus}, {"c_g", s.counts.c_g}}},
      {"bounds",
       {{"n_plus", interval_json(s.bounds.n_plus)},
        {"n_minus", interval_json(s.bounds.n_minus)},
        {"n_zero", interval_json(s.bounds.n_zero)}}},
      {"eigenvalues", s.eigenvalues},
      {"within_bounds", s.within_bounds},
      {"zero_tol", s.zero_tol},
      {"edge_tol", s.edge_tol},
  };
}

void emit(const json& doc) {
  json out = doc;
  out["schema"] = kSchema;
  std::cout << out.dump(2) << "\n";
}

std::vector<double> parse_csv_doubles(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (tok.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad number '" + tok + "'");
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

int cmd_fixtures(const Globals& g) {
  const auto list = list_fixtures();
  if (g.json()) {
    json arr = json::array();
    for (const auto& f : list) arr.push_back({{"name", std::string(kFixturePrefix) + f.name}, {"kind", f.kind}, {"description", f.description}});
    emit({{"fixtures", arr}});
    return 0;
  }
  for (const auto& f : list)
    std::printf("%-22s %-7s %s\n", (std::string(kFixturePrefix) + f.name).c_str(), f.kind.c_str(), f.description.c_str());
  return 0;
}

int cmd_synchrony(const Globals& g, const std::string& graph_ref, bool include_trivial) {
  const auto graph = resolve_graph(graph_ref);
  EnumerateOptions eo;
  eo.include_trivial = include_trivial;
  eo.threads = g.threads;
  const auto lattice = enumerate_synchrony(graph, eo);
  if (g.json()) {
    json patterns = json::array();
    for (const auto& p : lattice.patterns) patterns.push_back({{"classes", classes_json(p.partition)}, {"balanced", true}});
    json edges = json::array();
    for (const auto& [a, b] : lattice.refinement_edges) edges.push_back({a, b});
    emit({{"patterns", patterns}, {"refinements", edges}});
    return 0;
  }
  std::printf("%zu balanced patterns\n", lattice.patterns.size());
  for (std::size_t i = 0; i < lattice.patterns.size(); ++i)
    std::printf("%4zu  %-24s %d classes\n", i, lattice.patterns[i].partition.to_string().c_str(),
                lattice.patterns[i].partition.n_classes());
  std::printf("refinements:");
  for (const auto& [a, b] : lattice.refinement_edges) std::printf(" %d<%d", a, b);
  std::printf("\n");
  return 0;
}

int cmd_automorphisms(const Globals& g, const std::string& graph_ref) {
  const auto graph = resolve_graph(graph_ref);
  const auto aut = find_automorphisms(graph);
  std::vector<std::string> gens;
  for (const auto& p : aut.generators) gens.push_back(p.cycles());
  if (g.json()) {
    std::vector<std::string> elements;
    for (const auto& p : aut.elements) elements.push_back(p.cycles());
    emit({{"order", aut.order()}, {"generators", gens}, {"elements", elements}, {"element_count", aut.elements.size()}});
    return 0;
  }
  std::printf("order %zu\n", aut.order());
  std::printf("generators:");
  for (const auto& s : gens) std::printf(" %s", s.c_str());
  std::printf("\nelements: %zu\n", aut.elements.size());
  return 0;
}

// Known exotic counts for fixtures. nullopt: no expectation.
struct ExoticExpectation {
  std::optional<int> exact;
  int at_least = 0;
  std::optional<Partition> must_flag;
};

std::optional<ExoticExpectation> exotic_expectation(const std::string& ref, int n) {
  if (!is_fixture_ref(ref)) return std::nullopt;
  const std::string name = ref.substr(std::string(kFixturePrefix).size());
  if (name.rfind("ring", 0) == 0) return ExoticExpectation{0, 0, std::nullopt};
  if (name == "fig1") return ExoticExpectation{std::nullopt, 1, Partition::parse(n, "1,4|2,5|3,6")};
  if (name == "fig5") return ExoticExpectation{0, 0, std::nullopt};
  if (name.rfind("g", 0) == 0) {
    if ((n >= 5 && n <= 9) || n == 11) return ExoticExpectation{0, 0, std::nullopt};
    if (n == 10 || n == 12) return ExoticExpectation{std::nullopt, 1, std::nullopt};
  }
  return std::nullopt;
}

int cmd_exotic(const Globals& g, const std::string& graph_ref, bool slow) {
  const auto graph = resolve_graph(graph_ref);
  if (graph.n_cells() > 10 && !slow)
    throw Error(ErrorCode::InvalidArgument, "graphs with more than 10 cells need --slow");
  const auto aut = find_automorphisms(graph);
  EnumerateOptions eo;
  eo.threads = g.threads;
  const auto lattice = enumerate_synchrony(graph, eo);
  int exotic = 0;
  json rows = json::array();
  std::vector<Partition> flagged;
  for (const auto& p : lattice.patterns) {
    const auto v = detect_exotic(graph, p.partition, aut);
    std::vector<std::string> witness;
    for (const auto& w : v.witness_generators) witness.push_back(w.cycles());
    if (v.exotic) {
      ++exotic;
      flagged.push_back(p.partition);
    }
    rows.push_back({{"classes", classes_json(p.partition)},
                    {"verdict", v.exotic ? "exotic" : "symmetric"},
                    {"witness_generators", witness},
                    {"stabilizer_order", v.stabilizer.size()}});
  }

  bool ok = true;
  std::string mismatch;
  if (const auto e = exotic_expectation(graph_ref, graph.n_cells())) {
    if (e->exact && exotic != *e->exact) {
      ok = false;
      mismatch = "expected " + std::to_string(*e->exact) + " exotic patterns";
    }
    if (exotic < e->at_least) {
      ok = false;
      mismatch = "expected at least " + std::to_string(e->at_least) + " exotic patterns";
    }
    if (e->must_flag && std::find(flagged.begin(), flagged.end(), *e->must_flag) == flagged.end()) {
      ok = false;
      mismatch = "expected " + e->must_flag->to_string() + " to be exotic";
    }
  }

  if (g.json()) {
    json doc{{"patterns", rows}, {"exotic_count", exotic}, {"aut_order", aut.order()}, {"matches_expectation", ok}};
    if (!ok) doc["mismatch"] = mismatch;
    emit(doc);
  } else {
    for (const auto& r : rows) {
      std::string classes;
      for (const auto& b : r["classes"]) {
        if (!classes.empty()) classes += '|';
        std::string s;
        for (const auto& c : b) s += (s.empty() ? "" : ",") + std::to_string(c.get<int>());
        classes += s;
      }
      std::string witness;
      for (const auto& w : r["witness_generators"]) witness += " " + w.get<std::string>();
      std::printf("%-24s %-9s%s\n", classes.c_str(), r["verdict"].get<std::string>().c_str(), witness.c_str());
    }
    std::printf("%d exotic patterns\n", exotic);
    if (!ok) std::printf("MISMATCH: %s\n", mismatch.c_str());
  }
  return ok ? 0 : 1;
}

Matrix read_matrix(const std::string& path) {
  const json doc = detail::parse_json_text(detail::read_file(path), path);
  try {
    const int n = doc.at("n").get<int>();
    const auto& rows = doc.at("rows");
    if (n < 1 || static_cast<int>(rows.size()) != n)
      throw Error(ErrorCode::MalformedDocument, "matrix: expected " + std::to_string(n) + " rows");
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
      const auto& row = rows.at(static_cast<std::size_t>(i));
      if (static_cast<int>(row.size()) != n)
        throw Error(ErrorCode::MalformedDocument, "matrix: row " + std::to_string(i + 1) + " has the wrong length");
      for (int j = 0; j < n; ++j) m(i, j) = row.at(static_cast<std::size_t>(j)).get<double>();
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::MalformedDocument, std::string("matrix: ") + e.what());
  }
}

int cmd_bounds(const Globals& g, const std::string& path, double zero_tol) {
  const auto lap = validate_laplacian(read_matrix(path));
  SpectrumOptions so;
  so.zero_tol = zero_tol;
  const auto s = eigen_signature(lap, so);
  const auto verdict = verdict_for(s.signature);
  if (g.json()) {
    json doc = spectrum_json(s);
    doc["verdict"] = to_string(verdict);
    emit(doc);
    return 0;
  }
  std::printf("signature (n+, n0, n-) = (%d, %d, %d)\n", s.signature.n_plus, s.signature.n_zero, s.signature.n_minus);
  std::printf("counts (c(G+), c(G-), c(G)) = %s\n", counts_string(s.counts).c_str());
  std::printf("n+ in %s   n- in %s   n0 in %s\n", interval_string(s.bounds.n_plus).c_str(),
              interval_string(s.bounds.n_minus).c_str(), interval_string(s.bounds.n_zero).c_str());
  std::printf("within bounds: %s\n", s.within_bounds ? "yes" : "no");
  std::printf("verdict: %s\n", to_string(verdict).c_str());
  std::printf("eigenvalues:");
  for (double e : s.eigenvalues) std::printf(" %.6g", e);
  std::printf("\nzero_tol %.3g  edge_tol %.3g\n", s.zero_tol, s.edge_tol);
  return 0;
}

int cmd_equilibria(const Globals& g, const std::string& system_ref, const std::string& pattern_text, int grid,
                   double box) {
  const auto sys = resolve_system(system_ref);
  const bool torus = sys.torus_reducible();
  EquilibriumOptions eo;
  eo.grid = grid;
  eo.box = box;
  eo.threads = g.threads;

  std::vector<Partition> patterns;
  if (!pattern_text.empty()) {
    patterns.push_back(Partition::parse(sys.n(), pattern_text));
  } else {
    EnumerateOptions en;
    en.include_trivial = false;
    en.threads = g.threads;
    for (const auto& p : enumerate_synchrony(sys.graph(), en).patterns) patterns.push_back(p.partition);
    // coarse charts first so each point is reported once, in its smallest chart
    std::stable_sort(patterns.begin(), patterns.end(),
                     [](const Partition& a, const Partition& b) { return a.n_classes() < b.n_classes(); });
  }

  std::vector<std::pair<Partition, EquilibriumRecord>> found;
  for (const auto& p : patterns)
    for (auto& rec : find_equilibria(sys, p, eo)) {
      const bool seen = std::any_of(found.begin(), found.end(), [&](const auto& f) {
        return detail::close_points(f.second.point, rec.point, torus, eo.dedup_tol);
      });
      if (!seen) found.emplace_back(p, std::move(rec));
    }

  if (g.json()) {
    json arr = json::array();
    for (const auto& [chart, r] : found)
      arr.push_back({{"chart", classes_json(chart)},
                     {"point", vector_json(r.point)},
                     {"pattern", classes_json(r.pattern)},
                     {"spectrum", spectrum_json(r.spectrum)},
                     {"verdict", to_string(r.verdict)},
                     {"family_hint", r.family_hint},
                     {"residual", r.residual}});
    emit({{"torus", torus}, {"equilibria", arr}});
    return 0;
  }
  std::printf("%zu equilibria%s\n", found.size(), torus ? " (mod 2π)" : "");
  std::printf("%-60s %-14s %-10s %-8s %s\n", "point", "(c+,c-,c)", "n+ bound", "n+", "verdict");
  for (const auto& [chart, r] : found) {
    std::string verdict = to_string(r.verdict);
    if (r.family_hint) verdict += " (family?)";
    std::printf("%-60s %-14s %-10s %-8d %s\n", point_string(r.point).c_str(), counts_string(r.spectrum.counts).c_str(),
                interval_string(r.spectrum.bounds.n_plus).c_str(), r.spectrum.signature.n_plus, verdict.c_str());
  }
  return 0;
}

int cmd_simulate(const Globals& g, const std::string& system_ref, const std::string& x0_text, double t_end, double dt,
                 const std::string& out_path, int record_every) {
  const auto sys = resolve_system(system_ref);
  const auto x0v = parse_csv_doubles(x0_text);
  const Vector x0 = Eigen::Map<const Vector>(x0v.data(), static_cast<Eigen::Index>(x0v.size()));
  IntegrateOptions io;
  io.record_every = record_every;
  const auto tr = integrate(sys, x0, t_end, dt, io);

  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw Error(ErrorCode::InvalidArgument, "cannot write '" + out_path + "'");
  }
  std::ostream& csv = out_path.empty() ? std::cout : file;
  csv << "t";
  for (int c = 1; c <= sys.n(); ++c) csv << ",x" << c;
  csv << ",potential\n";
  char buf[64];
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", tr.times[i]);
    csv << buf;
    for (Eigen::Index c = 0; c < tr.states[i].size(); ++c) {
      std::snprintf(buf, sizeof buf, ",%.17g", tr.states[i](c));
      csv << buf;
    }
    std::snprintf(buf, sizeof buf, ",%.17g\n", tr.potentials[i]);
    csv << buf;
  }
  if (out_path.empty()) return 0;

  const Vector& xf = tr.states.back();
  if (g.json()) {
    emit({{"out", out_path},
          {"rows", tr.times.size()},
          {"final_state", vector_json(xf)},
          {"final_potential", tr.potentials.back()},
          {"final_spread", spread(xf)}});
  } else {
    std::printf("wrote %zu rows to %s\n", tr.times.size(), out_path.c_str());
    std::printf("final state %s\n", point_string(xf).c_str());
    std::printf("potential %.10g -> %.10g, spread %.3g\n", tr.potentials.front(), tr.potentials.back(), spread(xf));
  }
  return 0;
}

int cmd_table1(const Globals& g, int grid) {
  Table1Options to;
  to.grid = grid;
  to.threads = g.threads;
  const auto report = table1_report(to);
  const bool ok = report.matches();

  if (g.json()) {
    json rows = json::array();
    for (const auto& row : report.rows) {
      json lines = json::array();
      for (const auto& line : row.golden.lines) {
        json pts = json::array();
        const auto& lc = row.lines[static_cast<std::size_t>(&line - row.golden.lines.data())];
        for (const auto& pc : lc.points) {
          json p{{"label", pc.golden.label}, {"x", pc.golden.x}, {"ok", pc.ok()}};
          if (pc.record) {
            p["counts"] = {pc.record->spectrum.counts.c_gplus, pc.record->spectrum.counts.c_gminus,
                           pc.record->spectrum.counts.c_g};
            p["n_plus_bounds"] = interval_json(pc.record->spectrum.bounds.n_plus);
            p["n_plus"] = pc.record->spectrum.signature.n_plus;
          }
          pts.push_back(p);
        }
        lines.push_back({{"printed_counts", {line.counts.c_gplus, line.counts.c_gminus, line.counts.c_g}},
                         {"printed_n_plus", interval_json(line.n_plus)},
                         {"points", pts},
                         {"ok", lc.ok()}});
      }
      json census = json::array();
      for (const auto& t : row.census)
        census.push_back({{"counts", {t.counts.c_gplus, t.counts.c_gminus, t.counts.c_g}},
                          {"n_plus_bounds", interval_json(t.n_plus_bounds)},
                          {"n_plus", t.n_plus},
                          {"occurrences", t.occurrences},
                          {"example", vector_json(t.example)},
                          {"printed", t.printed}});
      rows.push_back({{"row", row.golden.number},
                      {"generator", row.golden.generator},
                      {"pattern", classes_json(row.pattern)},
                      {"balanced", row.balanced},
                      {"lines", lines},
                      {"census", census},
                      {"ok", row.ok()}});
    }
    emit({{"rows", rows},
          {"conjugacy_classes", report.n_conjugacy_classes},
          {"rows_match_classes", report.rows_match_classes},
          {"census_size", report.census_size},
          {"census_bound_violations", report.census_bound_violations},
          {"census_stable_off_diagonal", report.census_stable_off_diagonal},
          {"notes", report.notes},
          {"matches", ok}});
    return ok ? 0 : 1;
  }

  std::printf("%-4s %-18s %-18s %-46s %-10s %-10s %-10s %s\n", "row", "generator", "pattern", "point", "(c+,c-,c)",
              "n+ bound", "printed", "n+");
  for (const auto& row : report.rows) {
    if (row.lines.empty())
      std::printf("%-4d %-18s %-18s %-46s\n", row.golden.number, row.golden.generator.c_str(),
                  row.pattern.to_string().c_str(), "(no representative)");
    for (const auto& lc : row.lines)
      for (const auto& pc : lc.points) {
        std::string got = "-", bound = "-", nplus = "-";
        if (pc.record) {
          got = counts_string(pc.record->spectrum.counts);
          bound = interval_string(pc.record->spectrum.bounds.n_plus);
          nplus = std::to_string(pc.record->spectrum.signature.n_plus);
        }
        const std::string printed = counts_string(lc.golden.counts) + interval_string(lc.golden.n_plus);
        std::printf("%-4d %-18s %-18s %-46s %-10s %-10s %-10s %s%s\n", row.golden.number,
                    row.golden.generator.c_str(), row.pattern.to_string().c_str(), pc.golden.label.c_str(),
                    got.c_str(), bound.c_str(), printed.c_str(), nplus.c_str(), pc.ok() ? "" : "  MISMATCH");
      }
  }
  std::printf("\nconjugacy classes of nontrivial balanced patterns: %d (rows map one-to-one: %s)\n",
              report.n_conjugacy_classes, report.rows_match_classes ? "yes" : "no");
  std::printf("census: %d equilibria, %d bound violations, %d stable off the diagonal\n", report.census_size,
              report.census_bound_violations, report.census_stable_off_diagonal);
  for (const auto& note : report.notes) std::printf("note: %s\n", note.c_str());
  std::printf("%s\n", ok ? "table matches" : "table MISMATCH");
  return ok ? 0 : 1;
}

int cmd_verify(const Globals& g, int fuzz_cases) {
  SuiteOptions so;
  so.seed = g.seed;
  so.fuzz_cases = fuzz_cases;
  const auto results = run_property_suite(so);
  bool ok = true;
  for (const auto& r : results) ok = ok && r.passed;
  if (g.json()) {
    json arr = json::array();
    // timings left out: structured output must not depend on the machine
    for (const auto& r : results) arr.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
    emit({{"seed", g.seed}, {"checks", arr}, {"passed", ok}});
  } else {
    for (const auto& r : results)
      std::printf("%-4s %-62s %7.2fs  %s\n", r.passed ? "ok" : "FAIL", r.name.c_str(), r.seconds, r.detail.c_str());
    std::printf("%s\n", ok ? "all checks passed" : "some checks FAILED");
  }
  return ok ? 0 : 1;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SYNCHRONY_LAB_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, std::string("SYNCHRONY_LAB_SEED is not an integer: ") + env);
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Globals g;
  try {
    g.seed = default_seed();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  g.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  CLI::App app{"Synchrony patterns, Laplacian spectra and equilibria of coupled cell networks"};
  app.set_help_all_flag("--help-all", "Expand all help");
  bool show_fixtures = false;
  app.add_flag("--fixtures", show_fixtures, "List embedded fixtures (use as fixture:<name>)");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"table", "json"}));
  app.add_option("--seed", g.seed, "Seed for randomized checks (env SYNCHRONY_LAB_SEED)");
  app.add_option("--threads", g.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.require_subcommand(0, 1);

  std::string graph_ref, matrix_path, system_ref, pattern_text, x0_text, out_path;
  bool include_trivial = false, slow = false;
  double zero_tol = -1.0, box = kTwoPi, t_end = 100.0, dt = 0.01;
  int grid = 8, record_every = 1, fuzz_cases = 10000;

  auto* synchrony = app.add_subcommand("synchrony", "Lattice of balanced patterns");
  synchrony->add_option("--graph", graph_ref, "Graph file or fixture:<name>")->required();
  synchrony->add_flag("--include-trivial", include_trivial, "Include the singleton partition");

  auto* automorphisms = app.add_subcommand("automorphisms", "Automorphism group of the graph");
  automorphisms->add_option("--graph", graph_ref, "Graph file or fixture:<name>")->required();

  auto* exotic = app.add_subcommand("exotic", "Classify balanced patterns as symmetric or exotic");
  exotic->add_option("--graph", graph_ref, "Graph file or fixture:<name>")->required();
  exotic->add_flag("--slow", slow, "Allow graphs with more than 10 cells");

  auto* bounds = app.add_subcommand("bounds", "Eigenvalue signature and component bounds of a Laplacian");
  bounds->add_option("--matrix", matrix_path, "Matrix file {\"n\":..,\"rows\":[[..],..]}")->required();
  bounds->add_option("--zero-tol", zero_tol, "Eigenvalue zero tolerance (default scales with the matrix)");

  auto* equilibria = app.add_subcommand("equilibria", "Equilibria inside synchrony subspaces");
  equilibria->add_option("--system", system_ref, "System file or fixture:<name>")->required();
  equilibria->add_option("--pattern", pattern_text, "Balanced pattern, e.g. \"1,4|2,5|3,6\" (default: all)");
  equilibria->add_option("--grid", grid, "Starting points per free coordinate")->check(CLI::PositiveNumber);
  equilibria->add_option("--box", box, "Half-width of the search box for non-periodic systems")
      ->check(CLI::PositiveNumber);

  auto* simulate = app.add_subcommand("simulate", "Integrate the gradient flow and write CSV");
  simulate->add_option("--system", system_ref, "System file or fixture:<name>")->required();
  simulate->add_option("--x0", x0_text, "Initial state, comma separated")->required();
  simulate->add_option("--t-end", t_end, "Final time");
  simulate->add_option("--dt", dt, "Step size")->check(CLI::PositiveNumber);
  simulate->add_option("--out", out_path, "CSV path (default: stdout)");
  simulate->add_option("--record-every", record_every, "Write every k-th step")->check(CLI::PositiveNumber);

  auto* table1 = app.add_subcommand("table1", "Reproduce the Kuramoto G6 stability table");
  table1->add_option("--grid", grid, "Starting points per free coordinate in the census")->check(CLI::PositiveNumber);

  auto* verify = app.add_subcommand("verify", "Run the property suite");
  verify->add_option("--fuzz-cases", fuzz_cases, "Random Laplacians in the spectral fuzz")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (show_fixtures) return cmd_fixtures(g);
    if (*synchrony) return cmd_synchrony(g, graph_ref, include_trivial);
    if (*automorphisms) return cmd_automorphisms(g, graph_ref);
    if (*exotic) return cmd_exotic(g, graph_ref, slow);
    if (*bounds) return cmd_bounds(g, matrix_path, zero_tol);
    if (*equilibria) return cmd_equilibria(g, system_ref, pattern_text, grid, box);
    if (*simulate) return cmd_simulate(g, system_ref, x0_text, t_end, dt, out_path, record_every);
    if (*table1) return cmd_table1(g, grid);
    if (*verify) return cmd_verify(g, fuzz_cases);
    std::cout << app.help();
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
