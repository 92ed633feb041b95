#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "cwb/suites.hpp"

using namespace cwb;
using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "cwb 0.1.0";

enum Exit { kOk = 0, kConfig = 1, kBudget = 2, kFailed = 3 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Counts written as digits, 1e6, or 10^6.
std::uint64_t parse_count(const std::string& flag, const std::string& text) {
  auto bad = [&] { return ConfigError("--" + flag + ": not a count: " + text); };
  auto digits = [&](const std::string& s) {
    if (s.empty() || s.size() > 19 || s.find_first_not_of("0123456789") != std::string::npos) throw bad();
    return std::stoull(s);
  };
  std::uint64_t base = 0, exp = 0;
  if (auto e = text.find_first_of("eE"); e != std::string::npos) {
    base = digits(text.substr(0, e));
    exp = digits(text.substr(e + 1));
  } else if (auto c = text.find('^'); c != std::string::npos) {
    if (digits(text.substr(0, c)) != 10) throw bad();
    base = 1;
    exp = digits(text.substr(c + 1));
  } else {
    return digits(text);
  }
  if (exp > 18) throw bad();
  std::uint64_t v = base;
  for (std::uint64_t i = 0; i < exp; ++i) {
    if (v > UINT64_MAX / 10) throw bad();
    v *= 10;
  }
  return v;
}

Natural parse_natural(const std::string& text) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
    throw ConfigError("not a natural number: " + text);
  return Natural(mpz_class(text));
}

Json nat_json(const Natural& n) { return n.is_small() ? Json(n.u64()) : Json(digest(n)); }

/// JSONL writer: header first, then events with nondecreasing stages.
class Trace {
 public:
  Trace(const Json& config, const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ConfigError("cannot open " + path);
    }
    line(Json{{"config", config}, {"version", kVersion}});
  }

  void event(std::uint64_t stage, const std::string& name, Json data = Json::object()) {
    stage_ = std::max(stage_, stage);
    line(Json{{"stage", stage_}, {"event", name}, {"data", std::move(data)}});
  }

 private:
  void line(const Json& j) {
    std::ostream& os = file_ ? *file_ : std::cout;
    os << j.dump() << '\n';
  }

  std::unique_ptr<std::ofstream> file_;
  std::uint64_t stage_ = 0;
};

struct RunConfig {
  std::string fuel = "100000", budget = "1000000", stages = "10000", k, oracle = "exact", out, seed = "2024";
  // command specific
  std::string program, index, input = "0", x = "0", file, probe = "0..10", point, I, space, list = "tails:5",
                                candidate, c;
  std::vector<std::string> A;

  std::uint64_t fuel_n() const { return parse_count("fuel", fuel); }
  std::uint64_t budget_n() const { return parse_count("budget", budget); }
  std::uint64_t stages_n() const { return parse_count("stages", stages); }
  std::uint64_t seed_n() const { return parse_count("seed", seed); }
  std::uint64_t k_or(std::uint64_t d) const { return k.empty() ? d : parse_count("k", k); }

  /// Every limit in force, echoed into the header.
  Json header(const std::string& command) const {
    Json j{{"command", command},      {"fuel", fuel_n()},  {"budget", budget_n()}, {"stages", stages_n()},
           {"k", k.empty() ? Json() : Json(parse_count("k", k))}, {"oracle", oracle}, {"seed", seed_n()}};
    auto put = [&](const char* key, const std::string& v) {
      if (!v.empty()) j[key] = v;
    };
    put("program", program);
    if (command == "eval") j["input"] = input;
    if (command == "smn") j["x"] = x;
    if (command == "fixpoint") j["probe"] = probe;
    put("index", index);
    put("point", point);
    put("I", I);
    put("space", space);
    put("candidate", candidate);
    put("c", c);
    if (!A.empty()) j["A"] = A;
    return j;
  }
};

// ---------------------------------------------------------------------------
// Descriptors

/// c.e. sets of indices: empty, all, contains:n[,m...], meets:c[,d...],
/// tail:m, friedberg, index:e, program:<text>.
StagedSet parse_staged_set(const std::string& text) {
  using namespace dsl;
  auto colon = text.find(':');
  std::string head = text.substr(0, colon), arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  auto numbers = [&] {
    std::vector<std::uint64_t> out;
    std::stringstream ss(arg);
    for (std::string part; std::getline(ss, part, ',');) out.push_back(parse_count(head, part));
    if (out.empty()) throw ConfigError("empty list in " + text);
    return out;
  };
  if (text == "empty") return {encode(mu(succ()))};
  if (text == "all") return {Natural(0)};
  if (text == "friedberg") return {curated_friedberg().index_set};
  if (head == "contains") {
    std::optional<T> all;
    auto ns = numbers();
    for (std::size_t i = ns.size(); i-- > 0;) {
      T one = comp(univ(), pr(id(), ns[i] == 0 ? zero() : lit(ns[i])));
      all = all ? pr(one, *all) : one;
    }
    return {encode(*all)};
  }
  if (head == "meets") return {meets_codes(numbers())};
  if (head == "tail") return {tail_index_set(parse_count("tail", arg))};
  if (head == "index") return {parse_natural(arg)};
  if (head == "program") return {encode(parse(arg))};
  throw ConfigError("unknown set descriptor: " + text);
}

Point need_point(const RunConfig& cfg, const std::string& fallback) {
  return parse_point(cfg.point.empty() ? fallback : cfg.point);
}

Json upset_json(const UpSet& u) {
  Json a = Json::array(), t = Json::array();
  for (const auto& x : u.a) a.push_back(nat_json(x));
  for (auto x : u.t) t.push_back(x);
  return Json{{"a", a}, {"t", t}, {"set", u.set}, {"code", nat_json(u.code())}};
}

Json verdict_json(const Verdict& v) {
  Json j{{"accepted", v.accepted}, {"stage", v.stage}, {"queries", v.queries}};
  if (v.via) j["via"] = upset_json(*v.via);
  return j;
}

Json witness_json(const RefutationWitness& w) {
  Json t = Json::object();
  for (const auto& [k, v] : w.transcript) t[k] = v;
  return Json{{"clause", w.clause}, {"transcript", t}, {"replay", w.replay ? w.replay() : false}};
}

std::vector<std::uint64_t> checkpoints(std::uint64_t last) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = 10; s < last; s *= 10) out.push_back(s);
  out.push_back(last);
  return out;
}

// ---------------------------------------------------------------------------
// Program-level commands

Natural program_of(const RunConfig& cfg) {
  if (!cfg.program.empty()) return encode(parse(cfg.program));
  if (!cfg.index.empty()) return parse_natural(cfg.index);
  throw ConfigError("give a program with -p or an index with --index");
}

int cmd_eval(const RunConfig& cfg) {
  Natural e = program_of(cfg);
  Natural n = parse_natural(cfg.input);
  Trace tr(cfg.header("eval"), cfg.out);
  EvalResult r = eval(e, n, cfg.fuel_n());
  tr.event(r.steps, "result", {{"halted", r.halted}, {"value", r.halted ? nat_json(r.value) : Json()}, {"steps", r.steps}});
  return r.halted ? kOk : kBudget;
}

int cmd_smn(const RunConfig& cfg) {
  Natural e = program_of(cfg);
  Natural x = parse_natural(cfg.x);
  Trace tr(cfg.header("smn"), cfg.out);
  Natural s = smn(e, x);
  tr.event(0, "index", {{"index", nat_json(s)}, {"program", print(decode(s))}});
  return kOk;
}

std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& text) {
  auto dots = text.find("..");
  if (dots == std::string::npos) {
    auto v = parse_count("probe", text);
    return {v, v};
  }
  auto lo = parse_count("probe", text.substr(0, dots)), hi = parse_count("probe", text.substr(dots + 2));
  if (lo > hi || hi - lo > 100000) throw ConfigError("--probe: bad range " + text);
  return {lo, hi};
}

int cmd_fixpoint(const RunConfig& cfg) {
  std::string text = cfg.program;
  if (!cfg.file.empty()) {
    std::ifstream in(cfg.file);
    if (!in) throw ConfigError("cannot read " + cfg.file);
    std::stringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  if (text.empty() && cfg.index.empty()) throw ConfigError("give a transformer with -f, -p or --index");
  Natural f = text.empty() ? parse_natural(cfg.index) : encode(parse(text));
  auto [lo, hi] = parse_range(cfg.probe);
  Trace tr(cfg.header("fixpoint"), cfg.out);
  Natural e;
  try {
    e = fixed_point(f, cfg.fuel_n());
  } catch (const FixedPointError& err) {
    tr.event(0, "budget-report", {{"reason", err.what()}});
    return kBudget;
  }
  EvalResult fe = eval(f, e, cfg.fuel_n());
  tr.event(0, "fixed-point", {{"index", nat_json(e)}, {"transformed", nat_json(fe.value)}});
  bool all = true;
  for (std::uint64_t n = lo; n <= hi; ++n) {
    EvalResult a = eval(e, n, cfg.fuel_n()), b = eval(fe.value, n, cfg.fuel_n());
    bool agree = a.halted == b.halted && (!a.halted || a.value == b.value);
    all = all && agree;
    tr.event(0, "probe",
             {{"n", n},
              {"self", a.halted ? nat_json(a.value) : Json()},
              {"transformed", b.halted ? nat_json(b.value) : Json()},
              {"agree", agree}});
  }
  tr.event(0, "summary", {{"agree", all}});
  return kOk;
}

// ---------------------------------------------------------------------------
// Constructions

using Construct = std::function<int(const RunConfig&, Trace&)>;

int summary(Trace& tr, std::uint64_t stage, bool accepted, Json data = Json::object()) {
  data["verdict"] = accepted ? "accepted" : "no verdict within budget";
  tr.event(stage, "summary", std::move(data));
  return accepted ? kOk : kBudget;
}

int c_lemma_ext(const RunConfig& cfg, Trace& tr) {
  StagedSet A = parse_staged_set(cfg.A.empty() ? "all" : cfg.A.front());
  auto U = lemma_ext_Uk(A, cfg.k_or(3));
  std::set<std::string> seen;
  for (std::uint64_t s : checkpoints(cfg.stages_n()))
    for (const UpSet& u : U.emit(1, s)) {
      Json j = upset_json(u);
      if (seen.insert(j.dump()).second) tr.event(s, "emit", j);
    }
  tr.event(cfg.stages_n(), "summary", {{"emissions", seen.size()}});
  return kOk;
}

std::vector<Natural> markov_universe(const Point& p) {
  std::vector<Natural> uni = {nbar_point_name(p)};
  if (p.space == SpaceId::NBar && p.n) uni.push_back(Programs::get().odd);
  return uni;
}

int c_markov_to_k(const RunConfig& cfg, Trace& tr) {
  Point p = need_point(cfg, "nbar:24");
  MarkovToK M(parse_staged_set(cfg.I.empty() ? "friedberg" : cfg.I), p.space, markov_universe(p));
  auto v = M.run(cfg.k_or(3), point_filter(p), cfg.budget_n());
  tr.event(v.stage, "verdict", verdict_json(v));
  return summary(tr, v.stage, v.accepted);
}

int c_nce(const RunConfig& cfg, Trace& tr) {
  std::vector<std::string> descs = cfg.A.empty() ? std::vector<std::string>{"contains:0", "contains:0,1"} : cfg.A;
  std::vector<StagedSet> chain;
  for (const auto& d : descs) chain.push_back(parse_staged_set(d));
  const auto& S = suites::curated_sets();
  std::vector<std::pair<std::string, Natural>> uni = {{"empty", suites::loop()}, {"{0}", S.single0}, {"all", S.everything}};
  std::vector<Natural> codes;
  for (auto& [_, e] : uni) codes.push_back(e);
  validate_chain(chain, codes, 10000);
  auto fam = std::make_shared<const ChainFamily>(chain_family(chain));
  ChainOpenSets U(fam, codes, codes);
  const std::uint64_t s = cfg.stages_n();
  std::vector<std::vector<UpSet>> levels;
  for (std::size_t i = 1; i <= chain.size(); ++i) {
    levels.push_back(U.emit(i, s));
    for (const UpSet& u : levels.back()) {
      Json j = upset_json(u);
      j["level"] = i;
      tr.event(s, "emit", j);
    }
  }
  Json members = Json::object();
  for (auto& [label, e] : uni) {
    bool in = in_difference(levels, [&](std::uint64_t x) { return eval(e, x, s).halted; });
    members[label] = in;
    tr.event(s, "member", {{"set", label}, {"in_difference", in}});
  }
  tr.event(s, "summary", {{"levels", chain.size()}, {"members", members}});
  return kOk;
}

int c_sigma2(const RunConfig& cfg, Trace& tr) {
  Point p = need_point(cfg, "nbar:2");
  if (p.space != SpaceId::NBar || !p.n) throw ConfigError("sigma2 takes a finite point of the extended naturals");
  Natural i = Programs::nbar_name(*p.n);
  Sigma2Builder B({StagedSet{Natural(0)}}, {StagedSet{Natural(0)}}, i, cfg.k_or(10));
  const std::uint64_t s = cfg.stages_n();
  auto pairs = B.pairs(s);
  for (std::size_t n = 0; n < pairs.size(); ++n)
    tr.event(s, "pair", {{"n", n}, {"U", pairs[n].U.text()}, {"V", pairs[n].V.text()}, {"upgraded", pairs[n].upgraded}});
  Json C = Json::array();
  for (std::optional<std::uint64_t> x : std::vector<std::optional<std::uint64_t>>{0, 1, 2, 3, 4, std::nullopt}) {
    Point q = Point::nbar(x);
    bool in = B.in_C(q, s);
    tr.event(s, "member", {{"point", to_text(q)}, {"in_C", in}});
    if (in) C.push_back(to_text(q));
  }
  tr.event(s, "summary", {{"C", C}});
  return kOk;
}

int c_dense(const RunConfig& cfg, Trace& tr) {
  SpaceId space = cfg.space.empty() || cfg.space == "nbar" ? SpaceId::NBar
                  : cfg.space == "sierp"                   ? SpaceId::Sierp
                                                           : throw ConfigError("dense: space must be nbar or sierp");
  std::vector<Natural> uni;
  for (std::uint64_t c : {0, 49, 2, 4}) uni.push_back(Programs::finite_set({c}));
  DenseSequence D(parse_staged_set(cfg.I.empty() ? "friedberg" : cfg.I), space, uni);
  const std::uint64_t s = cfg.stages_n();
  auto em = D.emit(s);
  for (const auto& e : em)
    tr.event(e.stage, "point", {{"a", nat_json(e.a)}, {"t", e.t}, {"j", e.j}, {"point", to_text(e.point)}});
  auto ne = D.nonempty(s);
  return summary(tr, s, ne.has_value(), {{"points", em.size()}});
}

int cantor_verdict(Trace& tr, const CantorVerdict& v, Json extra) {
  Json j{{"accepted", v.accepted}, {"stage", v.stage}, {"bit_queries", v.bit_queries}, {"scanned", v.scanned},
         {"reason", v.reason}};
  for (auto& [key, val] : extra.items()) j[key] = val;
  tr.event(v.stage, "verdict", j);
  return summary(tr, v.stage, v.accepted);
}

int c_friedberg_cantor(const RunConfig& cfg, Trace& tr) {
  Point p = need_point(cfg, "cantor:0^w");
  std::uint64_t k = cfg.k_or(4);
  auto v = friedberg_cantor(k, point_filter(p), cfg.budget_n());
  return cantor_verdict(tr, v, {{"window", std::uint64_t(1) << (k + 2)}});
}

int c_notsigma2(const RunConfig& cfg, Trace& tr) {
  Point p = need_point(cfg, "cantor:0^w");
  std::uint64_t c = cfg.c.empty() ? notsigma2_c0().value : parse_count("c", cfg.c);
  auto v = notsigma2_semidecider(cfg.k_or(4), point_filter(p), c, cfg.budget_n());
  return cantor_verdict(tr, v, {{"c", c}, {"c0", notsigma2_c0().value}});
}

int c_friedberg_order(const RunConfig& cfg, Trace& tr) {
  MarkovToK M(StagedSet{curated_friedberg().index_set}, SpaceId::NBar, {Programs::get().odd});
  try {
    auto fo = friedberg_order(M, cfg.k_or(3), cfg.budget_n());
    for (std::size_t k = 0; k < fo.p.size(); ++k) tr.event(0, "threshold", {{"k", k}, {"p", fo.p[k]}});
    tr.event(0, "summary", {{"p", fo.p}, {"h", nat_json(fo.h)}});
    return kOk;
  } catch (const OrderStalled& e) {
    tr.event(cfg.budget_n(), "budget-report", {{"reason", e.what()}});
    return kBudget;
  }
}

int c_nbar_friedberg(const RunConfig& cfg, Trace& tr) {
  Point p = need_point(cfg, "nbar:24");
  NBarFriedberg F(curated_friedberg().h);
  auto v = F.run(cfg.k_or(6), point_filter(p), cfg.budget_n());
  tr.event(v.stage, "verdict", verdict_json(v));
  return summary(tr, v.stage, v.accepted);
}

int c_anti_enum(const RunConfig& cfg, Trace& tr) {
  if (cfg.list.rfind("tails:", 0) != 0) throw ConfigError("anti-enum: --list must be tails:<n>");
  std::uint64_t n = parse_count("list", cfg.list.substr(6));
  if (n == 0 || n > 16) throw ConfigError("anti-enum: between 1 and 16 tails");
  std::vector<StagedSet> tails;
  for (std::uint64_t i = 0; i < n; ++i) tails.push_back(StagedSet{tail_index_set(i)});
  AntiEnumeration AE(tails);
  std::uint64_t found = 0;
  for (std::size_t i = 0; i < n; ++i) {
    auto w = AE.witness(i, cfg.budget_n());
    if (!w) {
      tr.event(0, "budget-report", {{"tail", i}});
      continue;
    }
    ++found;
    Json j = witness_json(*w);
    j["tail"] = i;
    tr.event(0, "witness", j);
  }
  tr.event(0, "summary", {{"witnesses", found}, {"tails", n}});
  return found == n ? kOk : kBudget;
}

int adversary_outcome(Trace& tr, const AdversaryOutcome& out) {
  if (const auto* w = std::get_if<RefutationWitness>(&out)) {
    tr.event(0, "refutation", witness_json(*w));
    tr.event(0, "summary", {{"verdict", "refuted"}});
    return kOk;
  }
  const auto& b = std::get<BudgetReport>(out);
  tr.event(b.spent, "budget-report", {{"reason", b.reason}, {"spent", b.spent}});
  return kBudget;
}

int c_adversary_converter(const RunConfig& cfg, Trace& tr) {
  std::string c = cfg.candidate.empty() ? "constant-zero" : cfg.candidate;
  Converter cand = c == "constant-zero"      ? constant_zero_converter()
                   : c == "first-consistent" ? first_consistent_converter()
                   : c == "greedy"           ? greedy_converter()
                                             : throw ConfigError("unknown converter candidate: " + c);
  return adversary_outcome(tr, converter_adversary(cand, std::min<std::uint64_t>(cfg.budget_n(), 1 << 20), cfg.fuel_n()));
}

int c_adversary_learner(const RunConfig& cfg, Trace& tr) {
  std::string c = cfg.candidate.empty() ? "seen-so-far" : cfg.candidate;
  Learner cand = c == "seen-so-far"             ? seen_so_far_learner()
                 : c.rfind("constant:", 0) == 0 ? constant_learner(parse_natural(c.substr(9)))
                                                : throw ConfigError("unknown learner candidate: " + c);
  return adversary_outcome(tr, learner_adversary(cand, cfg.k_or(5), cfg.budget_n(), std::min<std::uint64_t>(cfg.fuel_n(), 20000)));
}

HaltingOracle oracle_of(const RunConfig& cfg, const RelativeUniverse& U) {
  if (cfg.oracle == "exact") return U.exact_oracle();
  if (cfg.oracle.rfind("bounded:", 0) == 0) return HaltingOracle::bounded(parse_count("oracle", cfg.oracle.substr(8)));
  throw ConfigError("--oracle must be exact or bounded:<s>");
}

int c_relative_k(const RunConfig& cfg, Trace& tr) {
  Point p = need_point(cfg, "cantor:0^w");
  auto U = zero_partial_one_universe();
  HaltingOracle H = oracle_of(cfg, U);
  auto v = relative_k(zero_sequence_decider(), H, point_filter(p), U.programs, U.partial_probe, cfg.budget_n());
  Json part = Json::object();
  for (std::size_t i = 0; i < v.partition.size(); ++i) part[U.labels[i]] = role_name(v.partition[i]);
  tr.event(v.stage, "verdict",
           {{"accepted", v.accepted}, {"stage", v.stage}, {"partition", part}, {"oracle", v.oracle},
            {"approximate", v.approximate}, {"bit_queries", v.bit_queries}, {"oracle_queries", v.oracle_queries}});
  return summary(tr, v.stage, v.accepted);
}

int emissions(Trace& tr, std::uint64_t s, const std::vector<BaireEmission>& em, const TCoordinates& T) {
  std::uint64_t compatible = 0;
  for (const auto& e : em) {
    bool c = e.u.size() <= T.size() && T.compatible(e.u);
    compatible += c;
    tr.event(s, "emit", {{"u", e.u}, {"code", nat_json(e.code)}, {"branch", e.branch}, {"T_compatible", c}});
  }
  tr.event(s, "summary", {{"emissions", em.size()}, {"T_compatible", compatible}, {"covers_depth3_values5", covers(em, 3, 5)}});
  return kOk;
}

int c_sierp_ob(const RunConfig& cfg, Trace& tr) {
  auto T = TCoordinates::sierp();
  Natural e;
  if (!cfg.index.empty()) e = parse_natural(cfg.index);
  else e = need_point(cfg, "sierp:bot").top ? T.entry(1).index : T.entry(0).index;
  SierpToOB F(e, T);
  tr.event(0, "coordinate", {{"e", nat_json(e)}, {"coordinate", F.coordinate()}});
  std::uint64_t s = cfg.stages_n();
  return emissions(tr, s, F.emit(s), T);
}

int c_cantor_ob_g(const RunConfig& cfg, Trace& tr) {
  Point p = need_point(cfg, "cantor:0^w");
  CantorToOBG G(point_filter(p), zero_partial_one_universe());
  std::uint64_t s = cfg.stages_n();
  return emissions(tr, s, G.emit(s), G.coords());
}

const std::vector<std::pair<std::string, Construct>>& constructs() {
  static const std::vector<std::pair<std::string, Construct>> c = {
      {"lemma-ext", c_lemma_ext},
      {"markov-to-k", c_markov_to_k},
      {"nce", c_nce},
      {"sigma2", c_sigma2},
      {"dense", c_dense},
      {"friedberg-cantor", c_friedberg_cantor},
      {"notsigma2", c_notsigma2},
      {"friedberg-order", c_friedberg_order},
      {"nbar-friedberg", c_nbar_friedberg},
      {"anti-enum", c_anti_enum},
      {"adversary-converter", c_adversary_converter},
      {"adversary-learner", c_adversary_learner},
      {"relative-k", c_relative_k},
      {"sierp-ob", c_sierp_ob},
      {"cantor-ob-g", c_cantor_ob_g},
  };
  return c;
}

int cmd_construct(const std::string& id, const RunConfig& cfg) {
  for (const auto& [name, fn] : constructs())
    if (name == id) {
      Json h = cfg.header("construct");
      h["id"] = id;
      Trace tr(h, cfg.out);
      return fn(cfg, tr);
    }
  throw ConfigError("unknown construction id: " + id);
}

// ---------------------------------------------------------------------------

int cmd_check(const std::string& id, const std::string& report, const RunConfig& cfg) {
  std::vector<const Suite*> chosen;
  if (id == "all") {
    for (const Suite& s : all_suites()) chosen.push_back(&s);
  } else if (const Suite* s = find_suite(id)) {
    chosen.push_back(s);
  } else {
    throw ConfigError("unknown suite: " + id);
  }
  SuiteConfig sc{cfg.seed_n()};
  Json suites = Json::array();
  bool all = true;
  for (const Suite* s : chosen) {
    SuiteResult r = run_suite(*s, sc);
    Json items = Json::array();
    for (const Assertion& a : r.assertions) {
      std::cout << (a.passed ? "PASS " : "FAIL ") << r.id << ": " << a.name;
      if (!a.detail.empty()) std::cout << " (" << a.detail << ")";
      std::cout << '\n' << std::flush;
      items.push_back({{"name", a.name}, {"passed", a.passed}, {"detail", a.detail}});
    }
    all = all && r.passed();
    suites.push_back({{"id", r.id}, {"summary", s->summary}, {"passed", r.passed()}, {"assertions", items}});
  }
  if (!report.empty()) {
    std::ofstream out(report);
    if (!out) throw ConfigError("cannot open " + report);
    Json j{{"version", kVersion}, {"config", {{"suite", id}, {"seed", sc.seed}}}, {"passed", all}, {"suites", suites}};
    out << j.dump(2) << '\n';
  }
  return all ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Computability workbench"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string construct_id, suite_id, report;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--fuel", cfg.fuel, "step ceiling per run");
    sub->add_option("--budget", cfg.budget, "total budget");
    sub->add_option("--stages", cfg.stages, "last stage");
    sub->add_option("--k", cfg.k, "complexity or level bound");
    sub->add_option("--oracle", cfg.oracle, "exact | bounded:<s>");
    sub->add_option("--out", cfg.out, "trace file (default stdout)");
    sub->add_option("--seed", cfg.seed, "seed for property suites");
  };

  auto* ev = app.add_subcommand("eval", "run a program on an input");
  ev->add_option("-p,--program", cfg.program, "program text");
  ev->add_option("--index", cfg.index, "program index");
  ev->add_option("-n,--input", cfg.input, "input");
  common(ev);

  auto* sm = app.add_subcommand("smn", "index of the program with its first argument fixed");
  sm->add_option("-p,--program", cfg.program, "program text");
  sm->add_option("--index", cfg.index, "program index");
  sm->add_option("-x", cfg.x, "fixed first argument");
  common(sm);

  auto* fp = app.add_subcommand("fixpoint", "fixed point of a total transformer");
  fp->add_option("-f,--file", cfg.file, "file holding the transformer's program text");
  fp->add_option("-p,--program", cfg.program, "transformer text");
  fp->add_option("--index", cfg.index, "transformer index");
  fp->add_option("--probe", cfg.probe, "inputs lo..hi");
  common(fp);

  auto* co = app.add_subcommand("construct", "run a construction and trace it");
  co->add_option("id", construct_id, "construction id")->required();
  co->add_option("--point", cfg.point, "curated point");
  co->add_option("--A", cfg.A, "c.e. index set descriptor (repeat for a chain)");
  co->add_option("--I", cfg.I, "index set descriptor");
  co->add_option("--space", cfg.space, "nbar | sierp");
  co->add_option("--list", cfg.list, "tails:<n>");
  co->add_option("--candidate", cfg.candidate, "adversary candidate");
  co->add_option("--index", cfg.index, "program index");
  co->add_option("--c", cfg.c, "constant for notsigma2");
  common(co);

  auto* ch = app.add_subcommand("check", "run an acceptance suite");
  ch->add_option("suite", suite_id, "suite id or all")->required();
  ch->add_option("--report", report, "JSON report file");
  common(ch);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*ev) return cmd_eval(cfg);
    if (*sm) return cmd_smn(cfg);
    if (*fp) return cmd_fixpoint(cfg);
    if (*co) return cmd_construct(construct_id, cfg);
    if (*ch) return cmd_check(suite_id, report, cfg);
  } catch (const ParseError& e) {
    std::cerr << "cwb: " << e.what() << '\n';
    return kConfig;
  } catch (const ConfigError& e) {
    std::cerr << "cwb: " << e.what() << '\n';
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "cwb: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "cwb: " << e.what() << '\n';
    return kBudget;
  }
  return kConfig;
}
