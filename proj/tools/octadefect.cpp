// Command-line front end for the octadefect library.
//
// Every subcommand reads a lattice document (see io.hpp; "-" reads stdin) and
// writes a JSON report to stdout. Failures print one line
//   error: kind=<kind> code=<exit code> message=<text>
// to stderr and exit with the code listed in errors.hpp.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "octadefect/admissibility.hpp"
#include "octadefect/experiment.hpp"
#include "octadefect/io.hpp"
#include "octadefect/squarefree.hpp"
#include "octadefect/witness.hpp"

namespace {

using namespace octadefect;

LatticeDocument load(const std::string& path) {
  if (path == "-") return read_lattice_document(std::cin);
  std::ifstream in(path);
  if (!in) fail(ErrorKind::invalid_input, "cannot open " + path);
  return read_lattice_document(in);
}

void emit(const Json& doc) { std::cout << doc.dump(2) << '\n'; }

Json coset_to_json(const CosetElement& c) {
  Json nums = Json::array();
  for (auto v : c.numerators) nums.push_back(v);
  return Json{{"numerators", nums}, {"q", c.q}};
}

Json witness_to_json(const DefectWitness& w) {
  Json rounds = Json::array();
  for (const auto& r : w.rounds) {
    Json active = Json::array();
    for (std::size_t a = 0; a < r.active_primes.size(); ++a)
      active.push_back({{"prime_index", r.active_primes[a] + 1},
                        {"extension_set", index_set_to_json(r.extension_sets[a])},
                        {"chosen", r.chosen[a] + 1}});
    Json picks = Json::array();
    for (auto v : r.picks) picks.push_back(v + 1);
    rounds.push_back({{"round", r.round}, {"active", active}, {"scr_picks", picks}});
  }
  Json finals = Json::array();
  for (const auto& V : w.per_prime_final) finals.push_back(index_set_to_json(V));
  return Json{{"M", index_set_to_json(w.M)},
              {"bound", w.bound},
              {"M_prime", index_set_to_json(w.M_prime)},
              {"M_star", index_set_to_json(w.M_star)},
              {"rounds", rounds},
              {"per_prime_independent_sets", finals},
              {"basis", rational_matrix_to_json(w.basis)}};
}

int cmd_defect(const std::string& path, const Guards& guards) {
  const auto doc = load(path);
  const DefectResult r = exact_defect(doc.lattice, guards);
  emit({{"defect", r.defect},
        {"kept_frame", index_set_to_json(r.keep)},
        {"basis", rational_matrix_to_json(r.basis)}});
  return 0;
}

int cmd_witness(const std::string& path, bool reduce, const Guards& guards) {
  const auto doc = load(path);
  RationalLattice lattice = normalize(doc.lattice);
  Json out;
  if (!lattice.has_square_free_denominator()) {
    if (!reduce)
      fail(ErrorKind::not_square_free, "q = " + lattice.q().get_str() +
                                           " is not square-free; pass --reduce");
    ReductionCertificate cert = squarefree_reduce(lattice, guards);
    out["reduced"] = lattice_to_json(cert.reduced);
    lattice = cert.reduced;
  }
  const DefectWitness w = build_witness(lattice);
  out["primes"] = Json::array();
  for (const auto& p : lattice.primes()) out["primes"].push_back(integer_to_json(p));
  out["witness"] = witness_to_json(w);
  if (lattice.n() <= guards.max_defect_dim) {
    const std::size_t d = exact_defect(lattice, guards).defect;
    out["oracle_defect"] = d;
    ensure(d <= w.bound, "witness bound " + std::to_string(w.bound) +
                             " is below the exact defect " + std::to_string(d));
  }
  emit(out);
  return 0;
}

int cmd_admissible(const std::string& path, bool strict, const Guards& guards) {
  const auto doc = load(path);
  const AdmissibilityReport r = is_admissible(doc.lattice, strict, guards);
  Json out{{"admissible", r.admissible}, {"strict", r.strict}};
  if (r.shortest) {
    out["min_norm"] = rational_to_json(r.shortest->norm);
    out["witness"] = coset_to_json(r.shortest->witness);
    out["representative"] = rational_vector_to_json(r.shortest->witness.shortest_representative());
  } else {
    out["min_norm"] = nullptr;
  }
  emit(out);
  return 0;
}

int cmd_reduce(const std::string& path, const Guards& guards) {
  const auto doc = load(path);
  const ReductionCertificate cert = squarefree_reduce(doc.lattice, guards);
  Json witnesses = Json::array();
  for (const auto& [I, w] : cert.per_subset_witnesses)
    witnesses.push_back({{"subset", index_set_to_json(I)},
                         {"x", rational_vector_to_json(w.x)},
                         {"q", integer_to_json(w.q)},
                         {"p", integer_to_json(w.p)},
                         {"u", integer_to_json(w.u)}});
  emit({{"reduced", lattice_to_json(cert.reduced, doc.label)},
        {"certificate",
         {{"defect_original", cert.defect_original},
          {"defect_reduced", cert.defect_reduced},
          {"witnesses", witnesses}}}});
  return 0;
}

int cmd_detformula(const std::string& path) {
  const auto doc = load(path);
  const RationalLattice lattice = normalize(doc.lattice);
  const bool holds = check_det_formula(lattice);
  Json ranks = Json::array();
  for (const auto& p : lattice.primes())
    ranks.push_back({{"p", integer_to_json(p)}, {"rank", rank_mod_p(lattice.A(), p)}});
  emit({{"det", rational_to_json(det(lattice))}, {"ranks", ranks}, {"holds", holds}});
  ensure(holds, "determinant formula failed");
  return 0;
}

int cmd_counterexample(unsigned long p, const Guards& guards) {
  const CounterexampleReport r = reproduce_counterexample(Integer(p), guards);
  emit({{"p", integer_to_json(r.p)},
        {"lattice", lattice_to_json(r.lattice)},
        {"exact_defect", r.exact_defect},
        {"ring_independent_size", r.ring_independent_size},
        {"old_claim_refuted", r.old_claim_refuted},
        {"contains_generator_difference", r.contains_difference},
        {"reduced", lattice_to_json(r.reduction.reduced)},
        {"corrected_M", index_set_to_json(r.corrected.M)},
        {"corrected_bound", r.corrected.bound},
        {"corrected_bound_valid", r.corrected_bound_valid}});
  ensure(r.old_claim_refuted && r.corrected_bound_valid, "counterexample did not reproduce");
  return 0;
}

std::vector<std::uint64_t> parse_primes(const std::string& list) {
  std::vector<std::uint64_t> primes;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      primes.push_back(std::stoull(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      fail(ErrorKind::invalid_input, "--primes: cannot parse '" + item + "'");
    }
  }
  return primes;
}

int cmd_experiment(ExperimentConfig config, const std::string& primes, const std::string& out_path) {
  config.primes = parse_primes(primes);
  const auto records = run_experiment(config);
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) fail(ErrorKind::invalid_input, "cannot write " + out_path);
  }
  std::ostream& out = out_path.empty() ? std::cout : file;
  out << csv_header() << '\n';
  std::size_t violations = 0;
  for (const auto& r : records) {
    out << to_csv_row(r) << '\n';
    if (r.has_violation()) ++violations;
  }
  out.flush();
  ensure(violations == 0, std::to_string(violations) + " instance(s) violated a guaranteed property");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact defect computation and certification for rational centerings of Z^n"};
  app.require_subcommand(1);

  Guards guards;
  auto add_guards = [&](CLI::App* sub) {
    sub->add_option("--guard-cosets", guards.max_cosets, "Largest coset group to enumerate");
    sub->add_option("--guard-n", guards.max_defect_dim, "Largest dimension for exhaustive defect");
  };

  std::string path;
  bool reduce = false, strict = false;
  unsigned long p = 2;
  ExperimentConfig config;
  std::string primes = "2,3";
  std::string out_path;

  auto* defect = app.add_subcommand("defect", "Exact defect with a completed basis");
  defect->add_option("file", path, "Lattice document")->required();
  add_guards(defect);

  auto* witness = app.add_subcommand("witness", "Constructive witness set M and certificate");
  witness->add_option("file", path, "Lattice document")->required();
  witness->add_flag("--reduce", reduce, "Reduce a non-square-free denominator first");
  add_guards(witness);

  auto* admissible = app.add_subcommand("admissible", "Octahedron admissibility report");
  admissible->add_option("file", path, "Lattice document")->required();
  admissible->add_flag("--strict", strict, "Require every non-integer point to have norm > 1");
  add_guards(admissible);

  auto* reduce_cmd = app.add_subcommand("reduce", "Square-free reduction with certificate");
  reduce_cmd->add_option("file", path, "Lattice document")->required();
  add_guards(reduce_cmd);

  auto* detformula = app.add_subcommand("detformula", "Check det = prod p^-rank");
  detformula->add_option("file", path, "Lattice document")->required();

  auto* counter = app.add_subcommand("counterexample", "Ring-rank counterexample for prime p");
  counter->add_option("--p", p, "Prime")->required();
  add_guards(counter);

  auto* experiment = app.add_subcommand("experiment", "Seeded random sweep written as CSV");
  experiment->add_option("--n", config.n, "Dimension")->required();
  experiment->add_option("--m", config.m, "Number of added generators")->required();
  experiment->add_option("--primes", primes, "Comma-separated distinct primes of q");
  experiment->add_option("--count", config.count, "Number of instances");
  experiment->add_option("--seed", config.seed, "Base seed; instance i uses seed + i");
  experiment->add_option("--out", out_path, "CSV output path (default stdout)");
  experiment->add_option("--jobs", config.jobs, "Worker threads");
  experiment->add_flag("--admissible-only", config.admissible_only,
                       "Keep only lattices with an admissible octahedron");
  experiment->add_flag("--timing", config.options.timing,
                       "Fill runtime_ms (otherwise 0, keeping output reproducible)");
  add_guards(experiment);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : static_cast<int>(ErrorKind::invalid_input);
  }

  try {
    if (*defect) return cmd_defect(path, guards);
    if (*witness) return cmd_witness(path, reduce, guards);
    if (*admissible) return cmd_admissible(path, strict, guards);
    if (*reduce_cmd) return cmd_reduce(path, guards);
    if (*detformula) return cmd_detformula(path);
    if (*counter) return cmd_counterexample(p, guards);
    if (*experiment) {
      config.options.guards = guards;
      return cmd_experiment(config, primes, out_path);
    }
  } catch (const Error& e) {
    std::cerr << "error: kind=" << to_string(e.kind()) << " code=" << e.exit_code()
              << " message=" << e.what() << '\n';
    return e.exit_code();
  }
  return 0;
}
