#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "modsep/construct.hpp"
#include "modsep/decide.hpp"
#include "modsep/games.hpp"
#include "modsep/translate.hpp"

namespace fs = std::filesystem;
using namespace modsep;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File contents with '#' comments removed.
std::string read_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) out << line.substr(0, line.find('#')) << '\n';
  return out.str();
}

Formula read_formula(const std::string& path) {
  try {
    return parse_formula(read_input(path));
  } catch (const ParseError& e) {
    throw UsageError(path + ": " + e.what());
  }
}

std::string write_tree(const fs::path& dir, const std::string& stem, const std::string& side, const KripkeTree& t) {
  fs::create_directories(dir);
  fs::path file = dir / (stem + ".witness-" + side + ".tree");
  std::ofstream out(file);
  if (!out) throw UsageError("cannot write " + file.string());
  out << to_string(t) << '\n';
  return file.string();
}

std::string degree_text(int d) { return d < 0 ? "unbounded" : std::to_string(d); }

void print_verdict(const Verdict& v, const std::string& problem, const std::string& cls, const fs::path& witness_dir,
                   const std::string& stem) {
  std::cout << "verdict: " << v.label << '\n';
  std::cout << "decision: " << (v.decision ? "yes" : "no") << '\n';
  std::cout << "problem: " << problem << '\n';
  if (!cls.empty()) std::cout << "class: " << cls << '\n';
  std::cout << "degree: " << degree_text(v.trace.degree) << '\n';
  std::cout << "bound_m: " << v.trace.bound << '\n';
  std::cout << "depth_bound: " << v.trace.depth_bound << '\n';
  std::cout << "stabilized_at: " << v.trace.stabilized_at << '\n';
  if (v.separator) {
    std::cout << "separator: " << to_string(*v.separator) << '\n';
    std::cout << "separator_verified: " << (v.verified ? "yes" : "no") << '\n';
  }
  if (v.evidence) {
    std::cout << "witness_depth: " << v.evidence->n << '\n';
    std::cout << "witness_sigma: " << v.evidence->sigma.to_string() << '\n';
    std::cout << "witness_left: " << write_tree(witness_dir, stem, "left", v.evidence->left) << '\n';
    std::cout << "witness_right: " << write_tree(witness_dir, stem, "right", v.evidence->right) << '\n';
  }
  if (v.counterexample)
    std::cout << "counterexample: " << write_tree(witness_dir, stem, "counterexample", *v.counterexample) << '\n';
  std::cout << "---\n";
  std::cout << v.label;
  if (v.separator) std::cout << (v.decision ? " with witness " : " ") << to_string(*v.separator);
  std::cout << '\n';
  for (const auto& note : v.trace.notes) std::cout << "  " << note << '\n';
  if (v.evidence)
    std::cout << "  left  " << to_string(v.evidence->left) << "\n  right " << to_string(v.evidence->right) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Modal separability and definability of mu-calculus formulas"};
  app.require_subcommand(1);

  std::string model_file, formula_file;
  auto* check = app.add_subcommand("check", "Model-check a formula on a finite tree");
  check->add_option("--model", model_file, "tree file")->required();
  check->add_option("--formula", formula_file, "formula file")->required();

  std::string problem, cls = "all", left_file, right_file, sig_text, witness_dir = ".";
  bool graded_separator = false;
  auto* decide = app.add_subcommand("decide", "Decide a separation problem");
  decide->add_option("problem", problem, "definability|separability|interpolant|craig-sep|graded-sep|graded-def")
      ->required()
      ->check(CLI::IsMember({"definability", "separability", "interpolant", "craig-sep", "graded-sep", "graded-def"}));
  decide->add_option("--class", cls, "all|words|binary|dary:<d>|finite:<class>");
  decide->add_option("--left", left_file, "left formula file")->required();
  decide->add_option("--right", right_file, "right formula file");
  decide->add_option("--sig", sig_text, "separator signature, e.g. a,b");
  decide->add_flag("--graded-separator", graded_separator, "allow graded modalities in the separator");
  decide->add_option("--witness-dir", witness_dir, "directory for witness trees");

  std::string out_file;
  auto* construct = app.add_subcommand("construct", "Construct a separator");
  construct->add_option("--class", cls, "model class");
  construct->add_option("--left", left_file, "left formula file")->required();
  construct->add_option("--right", right_file, "right formula file")->required();
  construct->add_option("--sig", sig_text, "separator signature");
  construct->add_option("--out", out_file, "write the separator here");

  std::string separator_file;
  auto* verify = app.add_subcommand("verify", "Check that a formula separates two formulas");
  verify->add_option("--class", cls, "model class");
  verify->add_option("--left", left_file, "left formula file")->required();
  verify->add_option("--right", right_file, "right formula file")->required();
  verify->add_option("--separator", separator_file, "separator formula file")->required();

  int gadget_index = 1;
  auto* gadget_cmd = app.add_subcommand("gadget", "Print a gadget formula pair");
  gadget_cmd->add_option("--i", gadget_index, "index")->required()->check(CLI::Range(1, 64));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  Budget budget = Budget::from_env();
  try {
    if (*check) {
      KripkeTree m = parse_tree(read_input(model_file));
      Formula f = read_formula(formula_file);
      bool holds = model_check(m, normalize(f));
      std::cout << "verdict: " << (holds ? "HOLDS" : "FAILS") << "\n---\n"
                << to_string(f) << (holds ? " holds at the root" : " fails at the root") << '\n';
      return 0;
    }
    const ModelClass model_class = ModelClass::parse(cls);
    std::optional<Signature> sigma;
    if (!sig_text.empty()) sigma = parse_signature_list(sig_text);
    if (*decide) {
      Formula left = read_formula(left_file);
      const bool needs_right = problem != "definability" && problem != "graded-def";
      if (needs_right && right_file.empty()) throw UsageError(problem + " needs --right");
      Formula right = needs_right ? read_formula(right_file) : Formula::top();
      const std::string stem = fs::path(left_file).stem().string();
      Verdict v;
      if (problem == "definability") {
        v = decide_definability(left, model_class, budget);
      } else if (problem == "separability") {
        v = decide_separability(left, right, model_class, sigma, budget);
      } else if (problem == "interpolant") {
        if (model_class.finite_only()) throw UsageError("interpolant existence is decided over all, words or d-ary trees");
        v = decide_interpolant_existence(left, right, model_class.degree(), budget);
      } else if (problem == "craig-sep") {
        v = decide_craig_separability(left, right, model_class, budget);
      } else if (problem == "graded-sep") {
        v = decide_graded_separability(left, right, graded_separator, budget);
      } else {
        GradedDefinability g = decide_mu_definability_graded(left, budget);
        v = g.mu;
        if (g.ml) {
          print_verdict(v, problem, "", witness_dir, stem);
          std::cout << "modal: " << g.ml->label << '\n';
          if (g.ml->separator) std::cout << "modal_equivalent: " << to_string(*g.ml->separator) << '\n';
          return 0;
        }
      }
      print_verdict(v, problem, problem == "graded-sep" || problem == "graded-def" ? "" : model_class.to_string(),
                    witness_dir, stem);
      return 0;
    }
    if (*construct) {
      Verdict v = decide_separability(read_formula(left_file), read_formula(right_file), model_class, sigma, budget);
      if (!v.decision) {
        std::cout << "verdict: NOT_SEPARABLE\n---\nno separator exists over " << model_class.to_string() << '\n';
        return 0;
      }
      if (!v.separator || !v.verified) {
        std::cout << "verdict: SEPARABLE\nseparator: none\n---\nseparable, but no verified separator was built\n";
        return 0;
      }
      const std::string text = to_string(*v.separator);
      if (!out_file.empty()) {
        std::ofstream out(out_file);
        if (!out) throw UsageError("cannot write " + out_file);
        out << text << '\n';
      }
      std::cout << "verdict: SEPARABLE\nseparator: " << text << "\nseparator_size: " << formula_size(*v.separator)
                << "\nseparator_depth: " << modal_depth(*v.separator);
      if (!out_file.empty()) std::cout << "\nseparator_file: " << out_file;
      std::cout << "\n---\n" << text << '\n';
      return 0;
    }
    if (*verify) {
      Formula psi = read_formula(separator_file);
      if (!is_modal_logic(psi)) throw UsageError("the separator must be a modal formula");
      auto result = verify_separator(read_formula(left_file), read_formula(right_file), psi, model_class, budget);
      std::cout << "verdict: " << (result.holds() ? "VALID" : "INVALID") << '\n';
      std::cout << "left_entails: " << (result.left_ok ? "yes" : "no") << '\n';
      std::cout << "right_excluded: " << (result.right_ok ? "yes" : "no") << '\n';
      if (result.countermodel) std::cout << "countermodel: " << to_string(*result.countermodel) << '\n';
      std::cout << "---\n" << to_string(psi) << (result.holds() ? " separates" : " does not separate") << " over "
                << model_class.to_string() << '\n';
      return 0;
    }
    if (*gadget_cmd) {
      GadgetPair g = gadget(gadget_index);
      std::cout << "left: " << to_string(g.left) << "\nright: " << to_string(g.right) << '\n';
      return 0;
    }
  } catch (const BudgetExceeded& e) {
    std::cout << "verdict: BUDGET_EXHAUSTED\nbudget: " << budget.limit() << "\n---\n" << e.what() << '\n';
    return kExitBudget;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnsupportedFormula& e) {
    std::cerr << "unsupported: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return 0;
}
