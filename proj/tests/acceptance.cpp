// Prints one PASS/FAIL line per acceptance criterion; exits nonzero on any failure.
#include <chrono>
#include <cstdio>
#include <map>
#include <random>

#include "nilprod/claims.hpp"
#include "nilprod/cli/expr.hpp"
#include "test_support.hpp"

using namespace nilprod;

namespace {

/// All numeric checks in criteria 1-12 are exact; rationals compare with zero slack.
constexpr long kExactTolerance = 0;
constexpr std::size_t kRoundTripAsts = 10'000;
constexpr std::size_t kFuzzInputs = 100'000;
constexpr std::uint64_t kParserSeed = 20240611;

struct Outcome {
  bool pass = true;
  std::size_t checks = 0;
  std::string first_failure;
};

Outcome parser_robustness() {
  Outcome o;
  std::mt19937_64 rng(kParserSeed);
  auto fail = [&o](std::string why) {
    if (o.pass) o.first_failure = std::move(why);
    o.pass = false;
  };
  for (std::size_t i = 0; i < kRoundTripAsts; ++i, ++o.checks) {
    const cli::GroupExpr e = testkit::random_expr(rng, 3);
    const std::string canonical = cli::to_string(e);
    try {
      if (!(cli::parse_expr(canonical) == e) || !(cli::parse_expr(testkit::spaced(canonical, rng)) == e))
        fail("round trip differs: " + canonical);
    } catch (const std::exception& err) {
      fail("round trip threw on " + canonical + ": " + err.what());
    }
  }
  for (std::size_t i = 0; i < kFuzzInputs; ++i, ++o.checks) {
    const std::string input = testkit::fuzz_input(rng);
    try {
      cli::GroupExpr e = cli::parse_expr(input);
      if (!(cli::parse_expr(cli::to_string(e)) == e)) fail("accepted input does not round trip");
    } catch (const cli::ParseError& err) {
      if (err.offset() > input.size()) fail("diagnostic offset past end of input");
    } catch (const std::exception& err) {
      fail(std::string("non-diagnostic exception: ") + err.what());
    }
  }
  return o;
}

}  // namespace

int main() {
  static_assert(kExactTolerance == 0);
  const auto start = std::chrono::steady_clock::now();
  SuiteOptions opt;
  opt.parallel = true;
  std::map<int, Outcome> by_criterion;
  for (int c = 1; c <= 12; ++c) by_criterion[c];
  for (const auto& r : claim_suite(opt)) {
    Outcome& o = by_criterion[r.criterion];
    ++o.checks;
    if (!r.pass && o.pass) o.first_failure = r.claim_id + ": computed " + r.computed + ", expected " + r.expected;
    o.pass = o.pass && r.pass;
  }
  by_criterion[13] = parser_robustness();

  bool all = true;
  for (const auto& [c, o] : by_criterion) {
    const bool ok = o.pass && o.checks > 0;
    all = all && ok;
    std::printf("criterion %2d: %s (%zu checks)%s%s\n", c, ok ? "PASS" : "FAIL", o.checks, ok ? "" : " ",
                ok ? "" : (o.checks ? o.first_failure.c_str() : "no checks ran"));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%s in %.1f s\n", all ? "all criteria pass" : "some criteria FAIL", secs);
  return all ? 0 : 1;
}
