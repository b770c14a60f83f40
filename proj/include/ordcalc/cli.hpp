#pragma once

// The ordcalc command line. run() is callable in-process; tools/ordcalc.cpp only forwards argv.
//
// Exit codes: 0 VALID / YES, 1 INVALID / NO, 2 UNKNOWN, 3 usage, parse or I/O error.
// check-proof: 0 accepted, 1 rejected. crosscheck: 0 all agree, 1 otherwise.

#include <algorithm>
#include <atomic>
#include <fstream>
#include <iomanip>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "ordcalc/calculus.hpp"
#include "ordcalc/decide.hpp"
#include "ordcalc/freegroup.hpp"
#include "ordcalc/rightorder.hpp"
#include "ordcalc/sampling.hpp"
#include "ordcalc/serialize.hpp"
#include "ordcalc/term.hpp"

namespace ordcalc::cli {

inline constexpr int kExitValid = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitUnknown = 2;
inline constexpr int kExitError = 3;

inline int exit_code(Status s) {
  switch (s) {
    case Status::Valid: return kExitValid;
    case Status::Invalid: return kExitInvalid;
    case Status::Unknown: return kExitUnknown;
  }
  return kExitError;
}

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::vector<std::string> split_any(const std::string& text, std::string_view seps) {
  std::vector<std::string> parts{""};
  for (char c : text) {
    if (seps.find(c) != std::string_view::npos)
      parts.emplace_back();
    else
      parts.back() += c;
  }
  return parts;
}

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

/// Conjuncts of a goal: either "t_1 | ... | t_n" or "e <= term".
inline std::vector<std::vector<ReducedWord>> parse_goal(const std::string& text, int arity) {
  std::string t = trim(text);
  if (t.rfind("e", 0) == 0) {
    std::string rest = trim(std::string_view(t).substr(1));
    if (rest.rfind("<=", 0) == 0) {
      auto nf = normalize(parse_term(std::string_view(rest).substr(2), arity));
      return nf.conjuncts;
    }
  }
  std::vector<ReducedWord> words;
  for (const auto& part : split_any(t, "|")) {
    if (trim(part).empty()) throw ParseError("empty sequent", 0);
    words.push_back(parse_word(part, arity));
  }
  return {words};
}

inline std::vector<ReducedWord> parse_word_list(const std::string& text, int arity) {
  std::vector<ReducedWord> words;
  for (const auto& part : split_any(text, ",|")) {
    if (trim(part).empty()) throw ParseError("empty word in list", 0);
    words.push_back(parse_word(part, arity));
  }
  return words;
}

inline void write_file(const std::string& path, const std::string& content, std::ostream& stdout_stream) {
  if (path == "-") {
    stdout_stream << content;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed for " + path);
}

inline Json read_json(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  try {
    return Json::parse(f);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("not valid JSON: ") + e.what());
  }
}

inline Status combine(Status a, Status b) {
  if (a == Status::Invalid || b == Status::Invalid) return Status::Invalid;
  if (a == Status::Unknown || b == Status::Unknown) return Status::Unknown;
  return Status::Valid;
}

inline Json witness_json(std::span<const ReducedWord> words, const Verdict& v) {
  return std::visit(
      [&](const auto& c) -> Json {
        using C = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<C, Derivation> || std::is_same_v<C, std::monostate>)
          return refutation_to_json(words, v.evidence);
        else
          return to_json(c);
      },
      v.certificate);
}

/// Re-verifies every conjunct witness in a decision file.
inline std::optional<std::string> verify_decision_file(const Json& j) {
  try {
    check_schema(j, "decision");
    for (const auto& c : detail::array_field(j, "conjuncts")) {
      auto goal = words_from_json(detail::array_field(c, "goal"));
      if (auto err = verify_witness(detail::field(c, "witness"), goal)) return err;
    }
  } catch (const std::exception& e) {
    return std::string(e.what());
  }
  return std::nullopt;
}

struct DecideOptions {
  std::string variety = "lgroup";
  std::string input;
  std::string proof_path;
  std::string witness_path;
  bool verify_witness = false;
  int arity = 0;
  std::optional<std::size_t> bound_l;
  std::optional<std::string> pivots;
  std::string engine = "cs";
  bool report_to_err = false;  // keeps stdout for a proof written to "-"
};

inline int cmd_decide(const DecideOptions& o, std::ostream& stdout_stream, std::ostream& err) {
  std::ostream& out = o.report_to_err ? err : stdout_stream;
  auto variety = variety_from_name(o.variety);
  if (!variety) throw UsageError("unknown variety '" + o.variety + "' (abelian, lgroup, representable)");
  if ((o.bound_l || o.pivots) && *variety != Variety::Representable)
    throw UsageError("--bound-L and --pivots apply only to --variety representable");
  if (o.engine != "cs" && o.engine != "hm") throw UsageError("unknown engine '" + o.engine + "' (cs, hm)");
  if (o.engine != "cs" && *variety != Variety::LGroup) throw UsageError("--engine applies only to --variety lgroup");

  auto conjuncts = parse_goal(o.input, o.arity);
  int arity = o.arity;
  for (const auto& c : conjuncts) arity = effective_arity(c, arity);

  RgBounds bounds;
  if (o.bound_l) bounds.conjugator_length = *o.bound_l;
  if (o.pivots) bounds.pivots = parse_word_list(*o.pivots, arity);

  Status overall = Status::Valid;
  ProofFile proof;
  proof.arity = arity;
  Json decision;
  decision["schema"] = kSchema;
  decision["kind"] = "decision";
  decision["variety"] = o.variety;
  decision["arity"] = arity;
  decision["conjuncts"] = Json::array();
  for (const auto& words : conjuncts) {
    Verdict v;
    switch (*variety) {
      case Variety::Abelian: v = validity_abelian(words, arity); break;
      case Variety::LGroup: v = o.engine == "hm" ? decide_lg_hm(words, arity) : decide_lg_cs(words, arity); break;
      case Variety::Representable: v = decide_rg(words, arity, bounds); break;
    }
    overall = combine(overall, v.status);
    out << status_name(v.status) << "  " << format_hypersequent(goal_of(words));
    if (v.calculus) out << "  [" << calculus_name(*v.calculus) << "]";
    out << "\n";
    if (v.status == Status::Valid) {
      proof.calculus = *v.calculus;
      proof.conjuncts.push_back({goal_of(words), *v.derivation()});
    }
    Json entry;
    entry["goal"] = words_to_json(words);
    entry["status"] = std::string(status_name(v.status));
    entry["witness"] = witness_json(words, v);
    decision["conjuncts"].push_back(std::move(entry));
  }
  if (conjuncts.size() > 1) out << "overall: " << status_name(overall) << "\n";

  if (!o.proof_path.empty()) {
    if (overall == Status::Valid)
      write_file(o.proof_path, dump(to_json(proof)), stdout_stream);
    else
      err << "no proof written: goal is " << status_name(overall) << "\n";
  }
  if (!o.witness_path.empty()) write_file(o.witness_path, dump(decision), stdout_stream);
  if (o.verify_witness) {
    Json reread = o.witness_path.empty() || o.witness_path == "-" ? decision : read_json(o.witness_path);
    if (auto problem = verify_decision_file(reread)) {
      err << "witness verification failed: " << *problem << "\n";
      return kExitError;
    }
    out << "witness verified\n";
  }
  return exit_code(overall);
}

struct OrderExtendOptions {
  std::string kind = "right";
  std::string input;
  std::string witness_path;
  bool verify_witness = false;
  int arity = 0;
  std::optional<std::size_t> bound_l;
};

inline int cmd_order_extend(const OrderExtendOptions& o, std::ostream& out, std::ostream& err) {
  if (o.kind != "right" && o.kind != "total") throw UsageError("unknown kind '" + o.kind + "' (right, total)");
  if (o.bound_l && o.kind != "total") throw UsageError("--bound-L applies only to --kind total");
  auto words = parse_word_list(o.input, o.arity);
  for (const auto& w : words)
    if (w.is_identity()) throw UsageError("the identity cannot be strictly positive");
  const int arity = effective_arity(words, o.arity);

  Json report;
  report["schema"] = kSchema;
  report["kind"] = "order-extension";
  report["order"] = o.kind;
  report["words"] = words_to_json(words);
  Status s;
  if (o.kind == "right") {
    auto r = extend_right_order(words, arity);
    if (auto* order = std::get_if<TruncatedRightOrder>(&r)) {
      s = Status::Invalid;
      report["witness"] = to_json(*order);
    } else {
      s = Status::Valid;
      report["witness"] = refutation_to_json(words, std::get<LgRefutationPtr>(r));
    }
  } else {
    RgBounds bounds;
    if (o.bound_l) bounds.conjugator_length = *o.bound_l;
    Verdict v = decide_rg(words, arity, bounds);
    s = v.status;
    report["witness"] = witness_json(words, v);
  }
  // Extending is the failure of validity.
  const char* answer = s == Status::Valid ? "NO" : s == Status::Invalid ? "YES" : "UNKNOWN";
  report["answer"] = answer;
  out << answer << "\n";
  if (s == Status::Invalid) {
    if (o.kind == "right") {
      const auto& w = report["witness"];
      out << "N = " << w["N"].get<std::size_t>() << ", positive: ";
      bool first = true;
      for (const auto& e : w["elements"]) {
        out << (first ? "" : ", ") << e.get<std::string>();
        first = false;
      }
      out << "\n";
    } else {
      out << "abelian order from assignment " << report["witness"]["assignment"].dump() << " (negated)\n";
    }
  }
  if (!o.witness_path.empty()) write_file(o.witness_path, dump(report), out);
  if (o.verify_witness) {
    if (auto problem = verify_witness(report["witness"], words)) {
      err << "witness verification failed: " << *problem << "\n";
      return kExitError;
    }
    out << "witness verified\n";
  }
  switch (s) {
    case Status::Invalid: return 0;
    case Status::Valid: return 1;
    case Status::Unknown: return 2;
  }
  return kExitError;
}

inline int cmd_check_proof(const std::string& path, const std::optional<std::string>& calculus, std::ostream& out,
                           std::ostream& err) {
  ProofFile f = proof_from_json(read_json(path));
  Calculus calc = f.calculus;
  if (calculus) {
    auto c = calculus_from_name(*calculus);
    if (!c) throw UsageError("unknown calculus '" + *calculus + "'");
    calc = *c;
  }
  if (f.conjuncts.empty()) throw SchemaError("proof file has no conjuncts");
  bool ok = true;
  for (std::size_t i = 0; i < f.conjuncts.size(); ++i) {
    CheckReport r = check(calc, f.conjuncts[i].derivation, f.conjuncts[i].goal);
    if (r.accepted()) {
      out << "conjunct " << i << ": accepted (" << r.nodes << " nodes, " << calculus_name(calc) << ")\n";
      continue;
    }
    ok = false;
    out << "conjunct " << i << ": REJECTED at " << r.errors.front().path << "\n";
    for (const auto& e : r.errors) err << "  " << e.path << ": " << error_kind_name(e.kind) << ": " << e.message << "\n";
  }
  out << (ok ? "ACCEPTED" : "REJECTED") << "\n";
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Cross-check corpus

struct CrosscheckOptions {
  int arity = 2;
  int max_length = 2;
  int max_size = 3;
  unsigned jobs = 1;
  std::size_t samples = 100;
};

/// Nonempty subsets (as sorted index lists) of size <= max_size of the nonidentity words of
/// length <= max_length.
inline std::vector<std::vector<ReducedWord>> crosscheck_corpus(int arity, int max_length, int max_size) {
  std::vector<ReducedWord> pool;
  if (arity >= 1 && max_length >= 1)
    for (auto& w : ball(arity, max_length))
      if (!w.is_identity()) pool.push_back(std::move(w));
  std::vector<std::vector<ReducedWord>> out;
  std::vector<ReducedWord> cur;
  auto rec = [&](auto&& self, std::size_t start) -> void {
    if (!cur.empty()) out.push_back(cur);
    if (static_cast<int>(cur.size()) == max_size) return;
    for (std::size_t i = start; i < pool.size(); ++i) {
      cur.push_back(pool[i]);
      self(self, i + 1);
      cur.pop_back();
    }
  };
  if (max_size >= 1) rec(rec, 0);
  return out;
}

struct CrosscheckTally {
  std::size_t instances = 0, valid = 0, invalid = 0;
  std::size_t agree = 0, dichotomy = 0;
  std::size_t witnesses = 0, witnesses_ok = 0;
  std::size_t proofs = 0, proofs_ok = 0;
  std::size_t soundness_violations = 0;
  std::vector<std::string> failures;

  bool clean() const {
    return agree == instances && dichotomy == instances && witnesses_ok == witnesses && proofs_ok == proofs &&
           soundness_violations == 0;
  }
};

inline void crosscheck_instance(std::span<const ReducedWord> words, int arity, std::size_t samples,
                                std::uint64_t seed, CrosscheckTally& t) {
  ++t.instances;
  Verdict cs = decide_lg_cs(words, arity);
  Verdict hm = decide_lg_hm(words, arity);
  const std::string name = format_hypersequent(goal_of(words));
  if (cs.status == hm.status)
    ++t.agree;
  else
    t.failures.push_back("cs/hm disagree on " + name);
  (cs.status == Status::Valid ? t.valid : t.invalid) += 1;

  auto r = extend_right_order(words, arity);
  bool extends = std::holds_alternative<TruncatedRightOrder>(r);
  if (extends == (cs.status == Status::Invalid))
    ++t.dichotomy;
  else
    t.failures.push_back("dichotomy fails on " + name);
  if (extends) {
    ++t.witnesses;
    const auto& order = std::get<TruncatedRightOrder>(r);
    bool ok = !verify_truncated(order);
    for (const auto& w : words) ok = ok && order.contains(w);
    if (ok)
      ++t.witnesses_ok;
    else
      t.failures.push_back("bad witness for " + name);
  }
  for (const Verdict* v : {&cs, &hm}) {
    if (v->status != Status::Valid) continue;
    ++t.proofs;
    if (check(*v->calculus, *v->derivation(), goal_of(words)).accepted())
      ++t.proofs_ok;
    else
      t.failures.push_back("proof rejected for " + name);
  }
  if (cs.status == Status::Valid && samples > 0) {
    std::mt19937_64 rng(seed);
    if (find_negative_assignment(words, arity, samples, rng)) {
      ++t.soundness_violations;
      t.failures.push_back("VALID but negative in Z: " + name);
    }
  }
}

inline CrosscheckTally run_crosscheck(const CrosscheckOptions& o) {
  auto corpus = crosscheck_corpus(o.arity, o.max_length, o.max_size);
  const unsigned jobs = std::max(1u, o.jobs);
  std::vector<CrosscheckTally> parts(jobs);
  std::atomic<std::size_t> next{0};
  const std::uint64_t seed = sampling_seed();
  auto worker = [&](unsigned id) {
    for (std::size_t i; (i = next.fetch_add(1)) < corpus.size();)
      crosscheck_instance(corpus[i], o.arity, o.samples, seed + i, parts[id]);
  };
  std::vector<std::thread> threads;
  for (unsigned j = 1; j < jobs; ++j) threads.emplace_back(worker, j);
  worker(0);
  for (auto& th : threads) th.join();
  CrosscheckTally total;
  for (auto& p : parts) {
    total.instances += p.instances;
    total.valid += p.valid;
    total.invalid += p.invalid;
    total.agree += p.agree;
    total.dichotomy += p.dichotomy;
    total.witnesses += p.witnesses;
    total.witnesses_ok += p.witnesses_ok;
    total.proofs += p.proofs;
    total.proofs_ok += p.proofs_ok;
    total.soundness_violations += p.soundness_violations;
    total.failures.insert(total.failures.end(), p.failures.begin(), p.failures.end());
  }
  return total;
}

inline int cmd_crosscheck(const CrosscheckOptions& o, std::ostream& out, std::ostream& err) {
  auto t = run_crosscheck(o);
  auto row = [&](const char* label, std::size_t a, std::size_t b) {
    out << std::left << std::setw(22) << label << a << "/" << b << "\n";
  };
  out << std::left << std::setw(22) << "instances" << t.instances << "\n";
  out << std::left << std::setw(22) << "valid" << t.valid << "\n";
  out << std::left << std::setw(22) << "invalid" << t.invalid << "\n";
  row("cs/hm agreement", t.agree, t.instances);
  row("dichotomy", t.dichotomy, t.instances);
  row("witnesses verified", t.witnesses_ok, t.witnesses);
  row("proofs accepted", t.proofs_ok, t.proofs);
  out << std::left << std::setw(22) << "soundness violations" << t.soundness_violations << "\n";
  for (const auto& f : t.failures) err << f << "\n";
  return t.clean() ? 0 : 1;
}

// ---------------------------------------------------------------------------

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decide l-group equations and check hypersequent proofs", "ordcalc"};
  app.require_subcommand(1);

  DecideOptions dec;
  auto add_decide_flags = [](CLI::App* sub, DecideOptions& d) {
    sub->add_option("--variety", d.variety, "abelian | lgroup | representable")->capture_default_str();
    sub->add_option("--witness", d.witness_path, "write the decision witnesses to this file");
    sub->add_flag("--verify-witness", d.verify_witness, "re-read and re-check the witnesses");
    sub->add_option("--arity", d.arity, "number of generators (default: inferred)");
    sub->add_option("--bound-L", d.bound_l, "conjugator length bound (representable)");
    sub->add_option("--pivots", d.pivots, "pivot words, comma separated (representable)");
    sub->add_option("--engine", d.engine, "cs | hm (lgroup)")->capture_default_str();
    sub->add_option("goal", d.input, "t_1 | ... | t_n, or e <= term")->required();
  };
  auto* decide = app.add_subcommand("decide", "decide validity of e <= t_1 v ... v t_n");
  add_decide_flags(decide, dec);
  decide->add_option("--proof", dec.proof_path, "write the derivation to this file");

  DecideOptions prv;
  prv.proof_path = "-";
  auto* prove = app.add_subcommand("prove", "decide and write the derivation (stdout by default)");
  add_decide_flags(prove, prv);
  prove->add_option("--proof,-o", prv.proof_path, "derivation file")->capture_default_str();

  OrderExtendOptions ext;
  auto* extend = app.add_subcommand("order-extend", "does a finite subset extend to a (right) order");
  extend->add_option("--kind", ext.kind, "right | total")->capture_default_str();
  extend->add_option("--witness", ext.witness_path, "write the witness to this file");
  extend->add_flag("--verify-witness", ext.verify_witness, "re-check the witness");
  extend->add_option("--arity", ext.arity, "number of generators (default: inferred)");
  extend->add_option("--bound-L", ext.bound_l, "conjugator length bound (total)");
  extend->add_option("words", ext.input, "words separated by , or |")->required();

  std::string proof_file;
  std::optional<std::string> calculus;
  auto* checkp = app.add_subcommand("check-proof", "check a derivation file");
  checkp->add_option("--calculus", calculus, "check under this calculus instead of the declared one");
  checkp->add_option("file", proof_file)->required();

  CrosscheckOptions cc;
  auto* cross = app.add_subcommand("crosscheck", "compare the two l-group procedures on a small corpus");
  cross->add_option("--arity", cc.arity)->capture_default_str();
  cross->add_option("--max-length", cc.max_length)->capture_default_str();
  cross->add_option("--max-size", cc.max_size)->capture_default_str();
  cross->add_option("--jobs", cc.jobs)->capture_default_str();
  cross->add_option("--samples", cc.samples, "random Z assignments per VALID instance")->capture_default_str();

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }

  try {
    if (decide->parsed()) return cmd_decide(dec, out, err);
    if (prove->parsed()) {
      prv.report_to_err = prv.proof_path == "-";
      return cmd_decide(prv, out, err);
    }
    if (extend->parsed()) return cmd_order_extend(ext, out, err);
    if (checkp->parsed()) return cmd_check_proof(proof_file, calculus, out, err);
    if (cross->parsed()) return cmd_crosscheck(cc, out, err);
  } catch (const ParseError& e) {
    err << "parse error at " << e.position() << ": " << e.what() << "\n";
  } catch (const SchemaError& e) {
    err << "schema error: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitError;
}

}  // namespace ordcalc::cli
