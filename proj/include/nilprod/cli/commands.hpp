#pragma once

// Verb dispatch shared by the command-line tool and the golden corpus.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "nilprod/claims.hpp"
#include "nilprod/cli/eval.hpp"
#include "nilprod/haagerup.hpp"
#include "nilprod/oracle.hpp"

namespace nilprod::cli {

struct CommandOptions {
  std::uint64_t seed = SuiteOptions{}.seed;
  std::optional<std::size_t> samples;  // each verb has its own default
  std::size_t max_order = kMaxEnumeration;
};

/// `ok` is false on errors and on failed checks; `text` is the human
/// readable answer (one line for the simple verbs).
struct CommandResult {
  bool ok = true;
  std::string text;
  nlohmann::json json;
};

class CommandError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace detail {

using nilprod::detail::finite_size;
using nilprod::detail::random_family_element;
using nilprod::detail::str;

inline void want_args(const std::string& verb, const std::vector<std::string>& args, std::size_t lo, std::size_t hi) {
  if (args.size() < lo || args.size() > hi) {
    std::string want = lo == hi ? std::to_string(lo) : std::to_string(lo) + "-" + std::to_string(hi);
    throw CommandError(verb + " takes " + want + " argument(s), got " + std::to_string(args.size()));
  }
}

inline void want_finite(const GroupHandle& g, std::size_t max_order) {
  if (!g.is_finite()) throw CommandError(g.name() + " is infinite");
  if (g.order().value() > max_order)
    throw CommandError(g.name() + " has order " + g.order().str() + " > --max-order " + std::to_string(max_order));
}

inline GroupElement element(const GroupHandle& g, const std::string& text) {
  GroupElement x = g.parse(text);
  if (!g.contains(x)) throw CommandError("'" + text + "' is not an element of " + g.name());
  return x;
}

inline FamElement base_element(const Evaluated& ev, const std::string& text) {
  if (ev.family) return ev.family->decode(element(ev.group, text));
  if (ev.wreath) {
    const std::string_view t = nilprod::detail::trim(text);
    if (!t.empty() && t.front() == '(') return ev.wreath->decode(element(ev.group, text)).base;
    FamElement x = ev.wreath->base().parse(t);
    if (!ev.wreath->base().contains(x)) throw CommandError("'" + text + "' is not in the base group");
    return x;
  }
  throw CommandError("support needs a nil(...) family or a wreath(...) product");
}

inline std::string key_set(const FamilyGroup& fam, const std::set<IndexKey>& s) {
  std::string out = "{";
  for (auto k : s) out += (out.size() > 1 ? ", " : "") + fam.format_key(k);
  return out + "}";
}

inline CommandResult simple(std::string text) {
  CommandResult r;
  r.text = text;
  r.json = {{"result", std::move(text)}};
  return r;
}

inline CommandResult run_verify(const std::vector<std::string>& args, const CommandOptions& opt) {
  SuiteOptions so;
  so.seed = opt.seed;
  if (opt.samples) so.samples = *opt.samples;
  std::set<int> only;
  for (const auto& a : args) only.insert(static_cast<int>(nilprod::detail::parse_int(a)));
  auto claims = claim_suite(so, only);
  CommandResult r;
  r.json = nlohmann::json::array();
  std::size_t passed = 0;
  std::ostringstream os;
  for (const auto& c : claims) {
    passed += c.pass;
    r.json.push_back({{"claim_id", c.claim_id},
                      {"criterion", c.criterion},
                      {"statement", c.statement},
                      {"computed", c.computed},
                      {"expected", c.expected},
                      {"status", c.pass ? "pass" : "fail"}});
    os << (c.pass ? "PASS " : "FAIL ") << c.claim_id << ": " << c.computed;
    if (!c.pass) os << " (expected " << c.expected << ")";
    os << "\n";
  }
  os << passed << "/" << claims.size() << " claims pass";
  r.ok = passed == claims.size();
  r.text = os.str();
  return r;
}

/// Windows larger than this are listed as skipped in the properness table.
inline constexpr std::uint64_t kMaxReportWindow = 100000;

inline CommandResult run_cnd_report(const Evaluated& ev, const std::vector<std::string>& args,
                                    const CommandOptions& opt) {
  if (!ev.wreath) throw CommandError("cnd-report needs a wreath(H, G) expression");
  if (!ev.wreath->H().is_finite()) throw CommandError("cnd-report needs a finite H, got " + ev.wreath->H().name());
  want_args("cnd-report", args, 0, 1);
  const FamilyGroup& fam = ev.wreath->base();
  const GroupHandle& G = ev.wreath->G();
  HaagerupFunction u(ev.wreath->base_ptr());
  const std::size_t samples = opt.samples.value_or(1000);
  std::mt19937_64 rng(opt.seed);

  std::vector<IndexKey> keys;
  const std::uint64_t window_keys = G.is_finite() ? std::min<std::uint64_t>(finite_size(G.order(), G.name()), 9) : 9;
  for (IndexKey k = 0; k < window_keys; ++k) keys.push_back(k);
  auto random_g = [&] { return G.unrank(std::uniform_int_distribution<std::uint64_t>(0, window_keys - 1)(rng)); };

  std::size_t invariance_failures = 0, gram_failures = 0;
  Rational max_q = 0;
  bool have_q = false;
  std::uniform_int_distribution<std::int64_t> coef(-5, 5);
  for (std::size_t s = 0; s < samples; ++s) {
    FamElement x = random_family_element(fam, keys, rng);
    if (u.u(shift(fam, random_g(), x)) != u.u(x)) ++invariance_failures;
    std::vector<FamElement> pts;
    std::vector<Rational> c;
    Rational sum = 0;
    const std::size_t k = 2 + s % 4;
    for (std::size_t i = 0; i < k; ++i) {
      pts.push_back(random_family_element(fam, keys, rng));
      c.push_back(i + 1 < k ? Rational(coef(rng)) : -sum);
      sum += c.back();
    }
    Rational q = cnd_gram_check(u, pts, c);
    if (!have_q || q > max_q) max_q = q;
    have_q = true;
    if (q > 0) ++gram_failures;
  }

  nlohmann::json tables = nlohmann::json::array();
  bool contained = true;
  const std::vector<IndexKey> pool(keys.begin(), keys.begin() + std::min<std::size_t>(keys.size(), 4));
  for (std::uint32_t mask = 1; mask < (1u << pool.size()); ++mask) {
    if (std::popcount(mask) > 3) continue;
    std::set<IndexKey> F;
    for (std::size_t i = 0; i < pool.size(); ++i)
      if (mask >> i & 1u) F.insert(pool[i]);
    nlohmann::json fkeys = nlohmann::json::array();
    for (auto k : F) fkeys.push_back(fam.format_key(k));
    if (fam.restricted(F)->order().value() > kMaxReportWindow) {
      tables.push_back({{"F", fkeys}, {"skipped", "window larger than " + std::to_string(kMaxReportWindow)}});
      continue;
    }
    for (const Rational& M : {Rational(1, 4), Rational(1, 2), Rational(1), Rational(2)}) {
      PropernessReport rep = properness_check(u, F, M);
      contained = contained && rep.contained;
      tables.push_back({{"F", fkeys},
                        {"M", str(M)},
                        {"N", rep.N},
                        {"window", rep.window_size},
                        {"sublevel", rep.sublevel.size()},
                        {"box", rep.box_size},
                        {"contained", rep.contained}});
    }
  }

  CommandResult r;
  r.json = {{"group", ev.wreath->name()},
            {"phi", u.phi().label()},
            {"psi", u.psi_description()},
            {"samples", samples},
            {"seed", opt.seed},
            {"max_Q", have_q ? str(max_q) : "none"},
            {"gram_failures", gram_failures},
            {"invariance_checks", samples},
            {"invariance_failures", invariance_failures},
            {"properness_tables", tables}};
  bool ok = invariance_failures == 0 && gram_failures == 0 && contained;
  std::ostringstream os;
  os << ev.wreath->name() << ", phi = " << u.phi().label() << ", psi = " << u.psi_description() << "\n";
  os << "Gram samples " << samples << ", max Q = " << r.json["max_Q"].get<std::string>() << ", positive: " << gram_failures
     << "\n";
  os << "shift invariance samples " << samples << ", failures: " << invariance_failures << "\n";
  os << "properness windows " << tables.size() << ", containment " << (contained ? "holds" : "fails");

  if (!args.empty()) {
    const FamElement x = base_element(ev, args[0]);
    const Rational value = u.u(x);
    const auto supp = fam.support(x);
    nlohmann::json pairs = nlohmann::json::array();
    for (auto h : supp)
      for (auto k : supp)
        if (h != k)
          pairs.push_back({{"h", fam.format_key(h)},
                           {"k", fam.format_key(k)},
                           {"psi", u.psi_between(h, k)},
                           {"phi", str(u.v_pair(h, k, x))}});
    nlohmann::json el = {{"literal", fam.format(x)}, {"support", key_set(fam, supp)}, {"u", str(value)},
                         {"pairs_in_support", pairs}};
    os << "\nu(" << fam.format(x) << ") = " << value << ", support " << key_set(fam, supp);
    if (G.is_finite()) {
      const Rational direct = u.u_direct(x);
      el["u_direct"] = str(direct);
      ok = ok && direct == value;
      os << ", direct double sum " << direct;
    }
    r.json["element"] = el;
  }
  r.ok = ok;
  r.text = os.str();
  return r;
}

}  // namespace detail

inline const std::vector<std::string>& verbs() {
  static const std::vector<std::string> v{"order", "tensor", "abelianization", "derived", "lcs", "mult",
                                          "inv",   "support", "iso-check",     "verify",  "cnd-report"};
  return v;
}

/// Runs one verb. Parse, evaluation and argument errors come back as
/// ok = false with the diagnostic in `text`.
inline CommandResult run_command(const std::string& verb, const std::string& expr, const std::vector<std::string>& args,
                                 const CommandOptions& opt = {}) {
  using namespace detail;
  try {
    if (verb == "verify") return run_verify(args, opt);
    if (std::find(verbs().begin(), verbs().end(), verb) == verbs().end()) throw CommandError("unknown verb '" + verb + "'");
    const Evaluated ev = evaluate(expr);
    const GroupHandle& g = ev.group;
    if (verb == "order") {
      want_args(verb, args, 0, 0);
      return simple(g.order().str());
    }
    if (verb == "tensor") {
      want_args(verb, args, 0, 1);
      if (args.empty()) {
        if (!ev.nil2) throw CommandError("tensor with one expression needs nil2(A, B)");
        return simple(ev.nil2->tensor_canonical().str());
      }
      const Evaluated other = evaluate(args[0]);
      return simple(tensor(g.abelianization(), other.group.abelianization()).str());
    }
    if (verb == "abelianization") {
      want_args(verb, args, 0, 0);
      return simple(canonical_form(g.abelianization()).str());
    }
    if (verb == "derived") {
      want_args(verb, args, 0, 0);
      want_finite(g, opt.max_order);
      auto der = derived_subgroup_elements(g, opt.max_order + 1);
      EnumeratedGroup e(subgroup_generated(g, der, "[G,G]"), opt.max_order);
      std::string text = "order " + std::to_string(e.size());
      text += e.is_abelian() ? ", " + abelian_invariants(e).str() : ", nonabelian";
      return simple(text);
    }
    if (verb == "lcs") {
      want_args(verb, args, 0, 0);
      want_finite(g, opt.max_order);
      auto terms = lower_central_series_elements(g, opt.max_order + 1);
      std::string text;
      for (const auto& t : terms) text += (text.empty() ? "" : ", ") + std::to_string(t.size());
      auto cls = nilpotency_class_of(terms);
      text += cls ? "; class " + std::to_string(*cls) : "; not nilpotent";
      return simple(text);
    }
    if (verb == "mult") {
      want_args(verb, args, 2, 2);
      return simple(g.format(g.mul(element(g, args[0]), element(g, args[1]))));
    }
    if (verb == "inv") {
      want_args(verb, args, 1, 1);
      return simple(g.format(g.inv(element(g, args[0]))));
    }
    if (verb == "support") {
      want_args(verb, args, 1, 1);
      const FamElement x = base_element(ev, args[0]);
      const FamilyGroup& fam = ev.family ? *ev.family : ev.wreath->base();
      return simple(key_set(fam, fam.support(x)));
    }
    if (verb == "iso-check") {
      want_args(verb, args, 1, 1);
      const Evaluated other = evaluate(args[0]);
      want_finite(g, opt.max_order);
      want_finite(other.group, opt.max_order);
      EnumeratedGroup a(g, opt.max_order), b(other.group, opt.max_order);
      auto iso = find_isomorphism(a, b);
      CommandResult r = simple(iso ? "isomorphic" : "not isomorphic");
      r.ok = iso.has_value();
      if (iso) {
        nlohmann::json gens = nlohmann::json::object();
        for (auto s : a.generator_indices())
          gens[g.format(a.element(s))] = other.group.format(b.element(iso->map[s]));
        r.json["generator_images"] = gens;
      }
      return r;
    }
    return run_cnd_report(ev, args, opt);
  } catch (const std::exception& e) {
    CommandResult r;
    r.ok = false;
    r.text = std::string("error: ") + e.what();
    r.json = {{"error", e.what()}};
    if (auto pe = dynamic_cast<const ParseError*>(&e)) r.json["offset"] = pe->offset();
    return r;
  }
}

/// Splits "verb arg1 | arg2" into the verb and its '|'-separated arguments.
inline std::pair<std::string, std::vector<std::string>> split_verb(std::string_view text) {
  text = nilprod::detail::trim(text);
  const std::size_t sp = text.find_first_of(" \t");
  std::string verb(text.substr(0, sp));
  std::vector<std::string> args;
  if (sp != std::string_view::npos) {
    std::string_view rest = nilprod::detail::trim(text.substr(sp));
    if (!rest.empty())
      for (auto part : nilprod::detail::split_top(rest, '|')) args.emplace_back(nilprod::detail::trim(part));
  }
  return {verb, args};
}

}  // namespace nilprod::cli
