#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nilprod/cli/commands.hpp"

namespace {

const char* describe(const std::string& verb) {
  static const std::map<std::string, const char*> d{
      {"order", "order of EXPR"},
      {"tensor", "Ab(EXPR) (x) Ab(ARG1), or the tensor part of a nil2 expression"},
      {"abelianization", "invariant factors of Ab(EXPR)"},
      {"derived", "order and structure of [G,G]"},
      {"lcs", "orders along the lower central series and the nilpotency class"},
      {"mult", "product ARG1 * ARG2 of two element literals"},
      {"inv", "inverse of the element literal ARG1"},
      {"support", "support of a family or wreath base element ARG1"},
      {"iso-check", "search for an isomorphism EXPR -> ARG1 (orders <= 64)"},
      {"verify", "run the claim battery; optional arguments restrict it to the listed criteria"},
      {"cnd-report", "exact u(x) for a wreath base element ARG1, with consistency checks"}};
  return d.at(verb);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Second nilpotent products of groups: orders, tensor parts, derived series, element arithmetic, "
               "isomorphism checks and the verification battery."};
  app.require_subcommand(1);
  bool json = false;
  nilprod::cli::CommandOptions opt;
  app.add_flag("--json", json, "print the JSON report instead of text");
  app.add_option("--seed", opt.seed, "seed for sampled checks")->capture_default_str();
  app.add_option("--samples", opt.samples, "sample count for sampled checks (default: per verb)");
  app.add_option("--max-order", opt.max_order, "largest group the enumerating verbs will build")->capture_default_str();

  struct Invocation {
    std::string expr;
    std::vector<std::string> args;
    std::optional<std::string> first, second;
  };
  std::vector<Invocation> inv(nilprod::cli::verbs().size());
  for (std::size_t i = 0; i < inv.size(); ++i) {
    const std::string& verb = nilprod::cli::verbs()[i];
    auto* sub = app.add_subcommand(verb, describe(verb));
    sub->fallthrough();
    if (verb == "verify") {
      sub->add_option("criteria", inv[i].args, "criterion numbers 1-12");
    } else {
      sub->add_option("expr", inv[i].expr, "group expression, e.g. nil2(Z/4, D3)")->required();
      // scalar positionals: a vector option would split "[a; b; t]" literals
      sub->add_option("arg1", inv[i].first, "element literal or second expression");
      sub->add_option("arg2", inv[i].second, "second element literal (mult)");
    }
  }

  CLI11_PARSE(app, argc, argv);

  for (std::size_t i = 0; i < inv.size(); ++i) {
    const std::string& verb = nilprod::cli::verbs()[i];
    if (!app.got_subcommand(verb)) continue;
    for (const auto* a : {&inv[i].first, &inv[i].second})
      if (*a) inv[i].args.push_back(**a);
    auto r = nilprod::cli::run_command(verb, inv[i].expr, inv[i].args, opt);
    if (json)
      std::cout << r.json.dump(2) << "\n";
    else
      std::cout << r.text << "\n";
    return r.ok ? 0 : 1;
  }
  return 1;
}
