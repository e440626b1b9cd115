// Command line front end: barycenter approximation, non-mass-split recovery,
// iterative improvement, exact desk-scale barycenters, transport costs,
// measure rendering, and the brute-force oracle.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bary/bary.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitCap = 3;
constexpr int kExitSolver = 4;

struct GlobalArgs {
  std::string arith = "rational";
  double tol = 1e-9;
  std::vector<std::string> lambda;
  std::string mini_exact = "on";
  std::size_t centroid_cap = 1000000;
  std::size_t max_iter = 100;
  std::string out;
  std::string transport_out;
};

struct Command {
  std::string name;
  std::vector<std::string> measure_files;
  std::string candidate_file;   // cost
  std::string input_file;       // recover
  std::string input_transport;  // recover
  std::string render_file;      // render
  int refine = 1;
  std::string canvas;
  std::string format = "p2";
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw bary::data_error("cannot open '" + path + "'");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw bary::data_error("cannot write '" + path + "'");
  return out;
}

template <class T>
std::vector<bary::Measure<T>> load_measures(const std::vector<std::string>& files) {
  std::vector<bary::Measure<T>> ms;
  for (const auto& f : files) {
    std::ifstream in = open_input(f);
    try {
      ms.push_back(bary::parse_measure<T>(in));
    } catch (const bary::data_error& e) {
      throw bary::data_error(f + ": " + e.what());
    }
    if (!ms.empty() && ms.back().dim() != ms.front().dim())
      throw bary::data_error(f + ": dimension differs from the first measure");
  }
  return ms;
}

template <class T>
bary::Weights<T> load_lambda(const GlobalArgs& g, std::size_t n) {
  if (g.lambda.empty()) return bary::Weights<T>::uniform(n);
  if (g.lambda.size() != n)
    throw bary::data_error("--lambda needs exactly " + std::to_string(n) + " weights");
  std::vector<T> w;
  w.reserve(n);
  for (const auto& s : g.lambda) w.push_back(bary::parse_number<T>(s));
  return bary::Weights<T>::normalized(std::move(w));
}

template <class T>
void write_result_files(const GlobalArgs& g, const bary::Measure<T>& measure,
                        const bary::TransportPlan<T>& plan) {
  if (!g.out.empty()) {
    auto out = open_output(g.out);
    bary::write_measure(out, measure);
    std::cout << "measure written to " << g.out << "\n";
  }
  if (!g.transport_out.empty()) {
    auto out = open_output(g.transport_out);
    bary::write_transport(out, plan);
    std::cout << "transport written to " << g.transport_out << "\n";
  }
}

template <class T>
void print_measure_summary(const bary::Measure<T>& measure) {
  std::cout << "support: " << measure.size() << " atoms\n";
  for (const auto& a : measure.atoms()) {
    std::cout << "  " << bary::format_number(a.mass) << " @ (";
    for (std::size_t t = 0; t < measure.dim(); ++t) {
      if (t) std::cout << ", ";
      std::cout << bary::format_number(a.point[t]);
    }
    std::cout << ")\n";
  }
}

bary::CanvasSpec parse_canvas(const std::string& spec) {
  auto x = spec.find('x');
  if (x == std::string::npos) throw bary::data_error("--canvas expects WxH");
  try {
    int w = std::stoi(spec.substr(0, x));
    int h = std::stoi(spec.substr(x + 1));
    if (w < 1 || h < 1) throw bary::data_error("--canvas expects positive sizes");
    return {w, h};
  } catch (const bary::data_error&) {
    throw;
  } catch (const std::exception&) {
    throw bary::data_error("--canvas expects WxH");
  }
}

template <class T>
int run_typed(const Command& cmd, const GlobalArgs& g) {
  using namespace bary;
  IterateOptions iter_opts;
  iter_opts.mini_exact = g.mini_exact == "on";
  iter_opts.max_iterations = g.max_iter;
  iter_opts.centroid_cap = g.centroid_cap;
  RecoverOptions rec_opts{iter_opts.mini_exact, iter_opts.centroid_cap, iter_opts.solver};

  if (cmd.name == "render") {
    std::ifstream in = open_input(cmd.render_file);
    Measure<T> m = parse_measure<T>(in);
    bool snapped = false;
    GridImage img = render_measure(m, cmd.refine, parse_canvas(cmd.canvas), 255, &snapped);
    if (snapped) std::cerr << "warning: atoms off the refined lattice were snapped\n";
    if (g.out.empty()) {
      write_pgm_p2(std::cout, img);
    } else {
      auto out = open_output(g.out);
      if (cmd.format == "p5")
        write_pgm_p5(out, img);
      else
        write_pgm_p2(out, img);
      std::cout << "image written to " << g.out << "\n";
    }
    return 0;
  }

  std::vector<Measure<T>> measures = load_measures<T>(cmd.measure_files);
  Weights<T> lambda = load_lambda<T>(g, measures.size());

  if (cmd.name == "approx") {
    auto res = approx_barycenter(union_support(measures), measures, lambda);
    std::cout << "phi: " << format_number(res.phi) << "\n";
    std::cout << "non-mass-splitting: " << (is_non_mass_splitting(res.plan) ? "yes" : "no")
              << "\n";
    print_measure_summary(res.measure);
    write_result_files(g, res.measure, res.plan);
  } else if (cmd.name == "exact") {
    auto res = exact_barycenter(measures, lambda, g.centroid_cap);
    std::cout << "phi: " << format_number(res.phi) << "\n";
    print_measure_summary(res.measure);
    write_result_files(g, res.measure, res.plan);
  } else if (cmd.name == "cost") {
    std::ifstream in = open_input(cmd.candidate_file);
    Measure<T> candidate = parse_measure<T>(in);
    auto res = transport_cost(candidate, measures, lambda);
    std::cout << "phi: " << format_number(res.phi) << "\n";
    for (std::size_t i = 0; i < res.w2.size(); ++i)
      std::cout << "W2^2 to measure " << i << ": " << format_number(res.w2[i]) << "\n";
    write_result_files(g, candidate, res.plan);
  } else if (cmd.name == "recover") {
    std::ifstream in = open_input(cmd.input_file);
    Measure<T> input = parse_measure<T>(in);
    TransportPlan<T> plan;
    if (!cmd.input_transport.empty()) {
      std::ifstream tin = open_input(cmd.input_transport);
      plan = parse_transport<T>(tin, input, measures);
      if (!plan.marginals_valid())
        throw data_error("input transport does not match the measure marginals");
    } else {
      plan = transport_cost(input, measures, lambda).plan;
    }
    ApproxResult<T> start{input, plan, plan.cost(lambda), input.support()};
    auto rec = recover_non_mass_split(start, measures, lambda, rec_opts);
    std::cout << "phi before: " << format_number(start.phi) << "\n";
    std::cout << "phi after:  " << format_number(rec.plan.cost(lambda)) << "\n";
    std::cout << "non-mass-splitting: " << (is_non_mass_splitting(rec.plan) ? "yes" : "no")
              << "\n";
    print_measure_summary(rec.measure);
    write_result_files(g, rec.measure, rec.plan);
  } else if (cmd.name == "improve") {
    auto trace = iterate_local_improvement(measures, lambda, iter_opts);
    for (std::size_t it = 0; it < trace.iterations.size(); ++it) {
      const auto& s = trace.iterations[it];
      std::cout << "iteration " << it + 1 << ": phi " << format_number(s.phi_after_optimize)
                << " -> " << format_number(s.phi_after_recovery) << " (" << s.support_size
                << " atoms, stage bound "
                << format_number(T(2) * s.phi_after_recovery /
                                 (num<T>::is_zero(trace.iterations[0].phi_after_optimize)
                                      ? T(1)
                                      : trace.iterations[0].phi_after_optimize))
                << ")\n";
    }
    if (trace.hit_iteration_cap)
      std::cout << "iteration cap reached, returning best measure so far\n";
    std::cout << "phi: " << format_number(trace.final.phi) << "\n";
    std::cout << "certified ratio bound: " << format_number(trace.certified_ratio_bound) << "\n";
    std::cout << "non-mass-splitting: "
              << (is_non_mass_splitting(trace.final.plan) ? "yes" : "no") << "\n";
    print_measure_summary(trace.final.measure);
    write_result_files(g, trace.final.measure, trace.final.plan);
  } else {
    throw data_error("unknown command");
  }
  return 0;
}

template <class T>
int run_verify() {
  using namespace bary;
  auto frac = [](long p, long q) { return num<T>::from_fraction(p, q); };
  auto point = [](std::vector<T> c) { return Point<T>(std::move(c)); };

  std::vector<Measure<T>> ex1;
  ex1.emplace_back(std::vector<Atom<T>>{{point({T(0), T(1)}), frac(1, 4)},
                                        {point({T(1), T(0)}), frac(1, 2)},
                                        {point({T(2), T(1)}), frac(1, 4)}});
  ex1.emplace_back(std::vector<Atom<T>>{{point({T(0), T(0)}), frac(1, 4)},
                                        {point({T(1), T(1)}), frac(1, 2)},
                                        {point({T(2), T(0)}), frac(1, 4)}});
  Weights<T> half = Weights<T>::uniform(2);

  Measure<T> ex1_bary(std::vector<Atom<T>>{{point({T(0), frac(1, 2)}), frac(1, 4)},
                                           {point({T(1), frac(1, 2)}), frac(1, 2)},
                                           {point({T(2), frac(1, 2)}), frac(1, 4)}});
  std::cout << "phi of the three-atom barycenter (oracle, D=4): "
            << format_number(oracle::brute_force_phi(ex1_bary, ex1, half, 4)) << "\n";

  Measure<T> ex1_two(std::vector<Atom<T>>{{point({T(1), T(0)}), frac(1, 2)},
                                          {point({T(1), T(1)}), frac(1, 2)}});
  std::cout << "phi of the two-atom union-support optimum (oracle, D=4): "
            << format_number(oracle::brute_force_phi(ex1_two, ex1, half, 4)) << "\n";

  Measure<T> top(std::vector<Atom<T>>{{point({T(1), T(1)}), frac(1, 2)}}, MeasureKind::partial);
  Measure<T> wings(std::vector<Atom<T>>{{point({T(0), T(1)}), frac(1, 4)},
                                        {point({T(2), T(1)}), frac(1, 4)}},
                   MeasureKind::partial);
  std::cout << "W2^2 of the split atom against its two receivers (oracle, D=4): "
            << format_number(oracle::brute_force_w2(top, wings, 4)) << "\n";

  std::vector<Measure<T>> singles;
  singles.emplace_back(std::vector<Atom<T>>{{point({T(0), T(0)}), T(1)}});
  singles.emplace_back(std::vector<Atom<T>>{{point({T(1), T(0)}), T(1)}});
  Measure<T> either(std::vector<Atom<T>>{{point({T(0), T(0)}), T(1)}});
  Measure<T> mid(std::vector<Atom<T>>{{point({frac(1, 2), T(0)}), T(1)}});
  std::cout << "two singletons, union support candidate (oracle, D=2): "
            << format_number(oracle::brute_force_phi(either, singles, half, 2)) << "\n";
  std::cout << "two singletons, midpoint (oracle, D=2): "
            << format_number(oracle::brute_force_phi(mid, singles, half, 2)) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"discrete barycenter approximation toolkit"};
  app.require_subcommand(1);

  GlobalArgs g;
  Command cmd;

  auto add_common = [&](CLI::App* sub, bool with_lambda = true) {
    sub->add_option("--arith", g.arith, "arithmetic mode: rational|float")
        ->check(CLI::IsMember({"rational", "float"}));
    sub->add_option("--tol", g.tol, "float-mode relative comparison tolerance");
    sub->add_option("--out", g.out, "output file for the resulting measure");
    if (with_lambda)
      sub->add_option("--lambda", g.lambda, "weights w1,...,wN (normalized)")->delimiter(',');
  };

  CLI::App* approx = app.add_subcommand("approx", "optimal measure on the union of supports");
  approx->add_option("measures", cmd.measure_files, "measure files")->required();
  add_common(approx);
  approx->add_option("--transport-out", g.transport_out, "output file for the transport");

  CLI::App* recover = app.add_subcommand("recover", "non-mass-split recovery of a measure");
  recover->add_option("measures", cmd.measure_files, "measure files")->required();
  recover->add_option("--input", cmd.input_file, "measure to recover from")->required();
  recover->add_option("--input-transport", cmd.input_transport,
                      "its transport (recomputed optimally when omitted)");
  add_common(recover);
  recover->add_option("--transport-out", g.transport_out, "output file for the transport");
  recover->add_option("--mini-exact", g.mini_exact, "exact barycenters for small cells: on|off")
      ->check(CLI::IsMember({"on", "off"}));
  recover->add_option("--centroid-cap", g.centroid_cap, "centroid set enumeration cap");

  CLI::App* improve = app.add_subcommand("improve", "iterative local improvement");
  improve->add_option("measures", cmd.measure_files, "measure files")->required();
  add_common(improve);
  improve->add_option("--transport-out", g.transport_out, "output file for the transport");
  improve->add_option("--mini-exact", g.mini_exact, "exact barycenters for small cells: on|off")
      ->check(CLI::IsMember({"on", "off"}));
  improve->add_option("--centroid-cap", g.centroid_cap, "centroid set enumeration cap");
  improve->add_option("--max-iter", g.max_iter, "iteration cap");

  CLI::App* exact = app.add_subcommand("exact", "exact barycenter over the centroid set");
  exact->add_option("measures", cmd.measure_files, "measure files")->required();
  add_common(exact);
  exact->add_option("--transport-out", g.transport_out, "output file for the transport");
  exact->add_option("--centroid-cap", g.centroid_cap, "centroid set enumeration cap");

  CLI::App* cost = app.add_subcommand("cost", "transport cost of a candidate measure");
  cost->add_option("candidate", cmd.candidate_file, "candidate measure file")->required();
  cost->add_option("measures", cmd.measure_files, "measure files")->required();
  add_common(cost);
  cost->add_option("--transport-out", g.transport_out, "output file for the transport");

  CLI::App* render = app.add_subcommand("render", "render a 2d measure to PGM");
  render->add_option("measure", cmd.render_file, "measure file")->required();
  render->add_option("--refine", cmd.refine, "lattice refinement factor")->required();
  render->add_option("--canvas", cmd.canvas, "canvas size WxH")->required();
  render->add_option("--format", cmd.format, "pgm flavor: p2|p5")
      ->check(CLI::IsMember({"p2", "p5"}));
  add_common(render, false);

  CLI::App* verify = app.add_subcommand("verify", "recompute oracle reference values");
  verify->add_option("--arith", g.arith, "arithmetic mode: rational|float")
      ->check(CLI::IsMember({"rational", "float"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitUsage;
  }

  for (CLI::App* sub : app.get_subcommands()) cmd.name = sub->get_name();

  try {
    bary::float_tolerance() = g.tol;
    if (cmd.name == "verify")
      return g.arith == "float" ? run_verify<double>() : run_verify<bary::Rat>();
    if (g.arith == "float") return run_typed<double>(cmd, g);
    return run_typed<bary::Rat>(cmd, g);
  } catch (const bary::cap_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const bary::solver_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const bary::data_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
