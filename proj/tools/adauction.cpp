#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "adauction/budget.hpp"
#include "adauction/gen.hpp"
#include "adauction/io.hpp"
#include "adauction/landscape.hpp"
#include "adauction/markov.hpp"
#include "adauction/oracles.hpp"
#include "adauction/slots.hpp"

namespace io = adauction::io;
using adauction::Rat;
using io::Json;

namespace {

struct Output {
  std::string path;  // empty = stdout

  void write(const std::string& text) const {
    if (path.empty()) {
      std::cout << text;
      return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write output file '" + path + "'");
    out << text;
  }
};

/// Resolves --input against the working directory first, then against
/// ADAUCTION_FIXTURES.
std::filesystem::path resolve_input(const std::string& given) {
  namespace fs = std::filesystem;
  if (fs::exists(given)) return given;
  if (const char* dir = std::getenv("ADAUCTION_FIXTURES")) {
    const fs::path candidate = fs::path(dir) / given;
    if (fs::exists(candidate)) return candidate;
  }
  throw std::runtime_error("input file not found: '" + given + "'");
}

Json load_json(const std::string& given) {
  std::ifstream in(resolve_input(given));
  Json j;
  in >> j;
  return j;
}

std::string jsonl(const std::vector<Json>& records) {
  std::string out;
  for (const auto& r : records) out += r.dump() + "\n";
  return out;
}

/// Plain-text table with left-aligned, width-padded columns.
std::string render_table(const std::vector<std::string>& header,
                         const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << row[c] << std::string(width[c] - row[c].size(), ' ');
      out << (c + 1 < row.size() ? "  " : "");
    }
    out << "\n";
  };
  emit(header);
  std::vector<std::string> rule;
  for (auto w : width) rule.push_back(std::string(w, '-'));
  emit(rule);
  for (const auto& row : rows) emit(row);
  return out.str();
}

struct CommonFlags {
  std::string input;
  std::string output;
  std::optional<int> decimals;
  std::string format = "table";

  io::NumberFormat fmt() const { return io::NumberFormat{decimals}; }
  bool machine() const { return format == "json"; }
};

void add_common(CLI::App* cmd, CommonFlags& flags, bool needs_input = true) {
  auto* in = cmd->add_option("--input", flags.input, "instance file (JSON)");
  if (needs_input) in->required();
  cmd->add_option("--output", flags.output, "write here instead of stdout");
  cmd->add_option("--decimals", flags.decimals, "render numbers as fixed-point decimals");
  cmd->add_option("--format", flags.format, "output format")
      ->check(CLI::IsMember({"table", "json"}));
}

adauction::DeviationGrid parse_grid(const std::string& spec) {
  if (spec.empty()) return adauction::DeviationGrid::standard();
  adauction::DeviationGrid grid;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) grid.multipliers.push_back(Rat::parse(tok));
  return grid;
}

int cmd_landscape(const CommonFlags& flags) {
  const auto auction = io::parse_query_auction(load_json(flags.input));
  const adauction::Landscape landscape = adauction::build_landscape(auction);
  const adauction::Landscape hull = adauction::convex_hull(landscape);
  const Json rows = io::landscape_table(landscape, hull, flags.fmt());

  if (flags.machine()) {
    std::vector<Json> records;
    for (const auto& row : rows) {
      Json r{{"type", "point"}};
      r.update(row);
      records.push_back(r);
    }
    Output{flags.output}.write(jsonl(records));
  } else {
    std::vector<std::vector<std::string>> table;
    for (const auto& row : rows) {
      const std::string hi = row["bid_max"].is_null() ? "inf" : row["bid_max"].get<std::string>();
      table.push_back({"[" + row["bid_min"].get<std::string>() + ", " + hi + ")",
                       row["cpc"].get<std::string>(), row["cost"].get<std::string>(),
                       row["clicks"].get<std::string>(),
                       row["on_hull"].get<bool>() ? "yes" : "no"});
    }
    Output{flags.output}.write(
        render_table({"bid range", "cpc", "cost", "clicks", "hull"}, table));
  }
  return 0;
}

int cmd_budget(const CommonFlags& flags, const std::string& strategy, const std::string& budget_str,
               int sweep, const std::string& adjust_bid, const std::string& observed_spend,
               const std::string& delta_str) {
  const io::BudgetInstance instance = io::parse_budget_instance(load_json(flags.input));
  const io::NumberFormat fmt = flags.fmt();
  const Rat budget = budget_str.empty() ? instance.budget : Rat::parse(budget_str);

  if (!adjust_bid.empty() || !observed_spend.empty()) {
    if (adjust_bid.empty() || observed_spend.empty())
      throw std::runtime_error("--adjust-bid and --observed-spend go together");
    const Rat delta = delta_str.empty() ? Rat(1, 10) : Rat::parse(delta_str);
    const Rat next =
        adauction::daily_adjustment_step(Rat::parse(adjust_bid), Rat::parse(observed_spend),
                                         budget, delta);
    Json record{{"type", "adjusted_bid"}, {"bid", fmt(next)}};
    Output{flags.output}.write(flags.machine() ? record.dump() + "\n"
                                               : "adjusted bid: " + fmt(next) + "\n");
    return 0;
  }

  std::vector<adauction::Landscape> reachable;
  for (std::size_t q = 0; q < instance.graph.queries().size(); ++q) {
    if (!instance.graph.keywords_of_query(q).empty())
      reachable.push_back(instance.graph.queries()[q].landscape);
  }

  auto solve = [&](const Rat& b) {
    struct Row {
      Rat single, two, opt;
    } row;
    row.single = adauction::best_uniform_single_bid(instance.graph, b).expected_traffic;
    row.two = adauction::best_uniform_two_bid(instance.graph, b).expected_traffic;
    row.opt = adauction::per_query_knapsack_opt(reachable, b).traffic;
    return row;
  };

  if (sweep > 0) {
    Rat max_cost(0);
    for (const auto& l : reachable) max_cost += l.top().cost;
    std::vector<Json> records;
    std::vector<std::vector<std::string>> table;
    for (int i = 0; i <= sweep; ++i) {
      const Rat b = max_cost * Rat(i) / Rat(sweep);
      const auto row = solve(b);
      const Rat ratio = row.opt.is_zero() ? Rat(1) : row.two / row.opt;
      records.push_back(Json{{"type", "sweep"},
                             {"budget", fmt(b)},
                             {"single_bid", fmt(row.single)},
                             {"two_bid", fmt(row.two)},
                             {"query_opt", fmt(row.opt)},
                             {"two_over_opt", fmt(ratio)}});
      table.push_back({fmt(b), fmt(row.single), fmt(row.two), fmt(row.opt), fmt(ratio)});
    }
    Output{flags.output}.write(
        flags.machine() ? jsonl(records)
                        : render_table({"budget", "single-bid", "two-bid", "query-opt", "ratio"},
                                       table));
    return 0;
  }

  Json record;
  if (strategy == "opt") {
    record = io::knapsack_to_json(adauction::per_query_knapsack_opt(reachable, budget), fmt);
  } else if (strategy == "single") {
    record = io::strategy_to_json(adauction::best_uniform_single_bid(instance.graph, budget), fmt);
  } else {
    record = io::strategy_to_json(adauction::best_uniform_two_bid(instance.graph, budget), fmt);
  }
  record["budget"] = fmt(budget);
  if (flags.machine()) {
    record.erase("per_query");
    Json typed{{"type", "strategy"}};
    typed.update(record);
    Output{flags.output}.write(typed.dump() + "\n");
  } else {
    std::ostringstream out;
    out << "strategy: " << record["strategy"].get<std::string>() << "\n";
    if (record.contains("atoms")) {
      for (const auto& atom : record["atoms"])
        out << "  bid " << atom["bid"].get<std::string>() << " with weight "
            << atom["weight"].get<std::string>() << "\n";
    }
    out << "expected spend:   " << record["expected_spend"].get<std::string>() << "\n";
    out << "expected traffic: " << record["expected_traffic"].get<std::string>() << "\n";
    Output{flags.output}.write(out.str());
  }
  return 0;
}

int cmd_slots(const CommonFlags& flags, const std::string& mechanism) {
  const io::LoadedSlots loaded = io::parse_slot_instance(load_json(flags.input));
  adauction::SlotOutcome outcome;
  if (mechanism == "gfp") {
    outcome = adauction::gfp_multi(loaded.declared, loaded.supply);
  } else if (loaded.budgets_only) {
    outcome = adauction::ps_multi_budgets_only(loaded.declared, loaded.supply);
  } else {
    outcome = adauction::ps_general(loaded.declared, loaded.supply);
  }

  const Json out = io::slot_outcome_to_json(outcome, loaded, flags.fmt());
  if (flags.machine()) {
    std::vector<Json> records;
    for (const auto& b : out["bidders"]) {
      Json r{{"type", "bidder"}};
      r.update(b);
      records.push_back(r);
    }
    for (const auto& b : out["blocks"]) {
      Json r{{"type", "block"}};
      r.update(b);
      records.push_back(r);
    }
    for (const auto& e : out["schedule"]) {
      Json r{{"type", "schedule"}};
      r.update(e);
      records.push_back(r);
    }
    records.push_back(Json{{"type", "revenue"}, {"revenue", out["revenue"]}});
    Output{flags.output}.write(jsonl(records));
  } else {
    std::ostringstream text;
    std::vector<std::vector<std::string>> rows;
    for (const auto& b : out["bidders"])
      rows.push_back({b["id"].get<std::string>(), b["clicks"].get<std::string>(),
                      b["price"].get<std::string>(), b["spend"].get<std::string>()});
    text << render_table({"bidder", "clicks", "price", "spend"}, rows);
    if (!out["blocks"].empty()) {
      text << "\n";
      std::vector<std::vector<std::string>> brows;
      for (const auto& b : out["blocks"]) {
        std::string ids;
        for (const auto& id : b["bidders"]) ids += (ids.empty() ? "" : ",") + id.get<std::string>();
        brows.push_back({b["price"].get<std::string>(), ids,
                         std::to_string(b["first_slot"].get<std::size_t>()),
                         std::to_string(b["slots"].get<std::size_t>())});
      }
      text << render_table({"block price", "bidders", "first slot", "slot count"}, brows);
    }
    text << "\n";
    std::vector<std::vector<std::string>> srows;
    for (const auto& e : out["schedule"])
      srows.push_back({e["bidder"].get<std::string>(),
                       std::to_string(e["slot"].get<std::size_t>()),
                       e["start"].get<std::string>(), e["end"].get<std::string>()});
    text << render_table({"bidder", "slot", "start", "end"}, srows);
    text << "\nrevenue: " << out["revenue"].get<std::string>() << "\n";
    Output{flags.output}.write(text.str());
  }
  return 0;
}

int cmd_markov(const CommonFlags& flags) {
  const io::LoadedMarkov loaded = io::parse_markov_instance(load_json(flags.input));
  const adauction::MarkovOutcome outcome = adauction::markov_vcg_outcome(loaded.instance, loaded.k);
  const Json out = io::markov_outcome_to_json(outcome, loaded.instance, flags.fmt());
  if (flags.machine()) {
    std::vector<Json> records;
    records.push_back(
        Json{{"type", "assignment"}, {"order", out["assignment"]}, {"efficiency", out["efficiency"]}});
    for (const auto& b : out["bidders"]) {
      Json r{{"type", "bidder"}};
      r.update(b);
      records.push_back(r);
    }
    Output{flags.output}.write(jsonl(records));
  } else {
    std::ostringstream text;
    text << "assignment:";
    for (const auto& id : out["assignment"]) text << " " << id.get<std::string>();
    text << "\nefficiency: " << out["efficiency"].get<std::string>() << "\n\n";
    std::vector<std::vector<std::string>> rows;
    for (const auto& b : out["bidders"])
      rows.push_back({b["id"].get<std::string>(), b["click_prob"].get<std::string>(),
                      b["payment"].get<std::string>(), b["price_per_click"].get<std::string>()});
    text << render_table({"bidder", "click prob", "payment", "price/click"}, rows);
    Output{flags.output}.write(text.str());
  }
  return 0;
}

int cmd_audit(const CommonFlags& flags, const std::string& mechanism, const std::string& grid_arg) {
  const adauction::DeviationGrid grid = parse_grid(grid_arg);
  std::vector<adauction::Deviation> deviations;
  std::vector<std::string> ids;

  if (mechanism == "markov-vcg") {
    const io::LoadedMarkov loaded = io::parse_markov_instance(load_json(flags.input));
    deviations = adauction::markov_vcg_audit(loaded.instance, loaded.k, grid);
    for (const auto& b : loaded.instance.bidders()) ids.push_back(b.id);
  } else {
    const io::LoadedSlots loaded = io::parse_slot_instance(load_json(flags.input));
    adauction::SlotMechanism mech;
    if (mechanism == "gfp") {
      mech = loaded.supply.size() == 1 ? adauction::SlotMechanism::GfpSingle
                                       : adauction::SlotMechanism::GfpMulti;
    } else if (mechanism == "ps-budgets" || (mechanism == "ps" && loaded.budgets_only)) {
      mech = adauction::SlotMechanism::PsBudgetsOnly;
    } else if (mechanism == "ps" && loaded.supply.size() == 1) {
      mech = adauction::SlotMechanism::PsSingle;
    } else {
      mech = adauction::SlotMechanism::PsGeneral;
    }
    deviations = adauction::slot_truthfulness_audit(
        mech, adauction::SlotInstance{loaded.truthful, loaded.supply}, grid);
    for (const auto& b : loaded.declared) ids.push_back(b.id);
  }

  const Json rows = io::deviations_to_json(deviations, ids, flags.fmt());
  if (flags.machine()) {
    std::vector<Json> records;
    for (const auto& d : rows) {
      Json r{{"type", "deviation"}};
      r.update(d);
      records.push_back(r);
    }
    records.push_back(Json{{"type", "summary"}, {"deviations", deviations.size()}});
    Output{flags.output}.write(jsonl(records));
  } else {
    std::ostringstream text;
    if (deviations.empty()) {
      text << "no profitable deviations\n";
    } else {
      std::vector<std::vector<std::string>> table;
      for (const auto& d : rows)
        table.push_back({d["bidder"].get<std::string>(), d["declared_bid"].get<std::string>(),
                         d["declared_budget"].get<std::string>(),
                         d["truthful_utility"].get<std::string>(),
                         d["deviant_utility"].get<std::string>()});
      text << render_table({"bidder", "declared bid", "declared budget", "truthful", "deviant"},
                           table);
    }
    Output{flags.output}.write(text.str());
  }
  return deviations.empty() ? 0 : 1;
}

int cmd_gen(const CommonFlags& flags, const std::string& kind, std::uint64_t seed, std::size_t n,
            std::size_t slots, std::size_t keywords, std::size_t queries, std::size_t k,
            bool budgets_only) {
  Json out;
  if (kind == "slots") {
    const auto instance = budgets_only ? adauction::gen_budget_only_slot_instance(seed, n, slots)
                                       : adauction::gen_slot_instance(seed, n, slots);
    out = adauction::slot_instance_to_json(instance, !budgets_only);
  } else if (kind == "markov") {
    out = adauction::markov_instance_to_json(adauction::gen_markov_instance(seed, n), k);
  } else {
    out = adauction::budget_instance_to_json(adauction::gen_budget_instance(seed, keywords, queries));
  }
  Output{flags.output}.write(out.dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sponsored-search auction toolkit"};
  app.require_subcommand(1);

  CommonFlags landscape_flags;
  auto* landscape = app.add_subcommand("landscape", "bid landscape and hull of one query auction");
  add_common(landscape, landscape_flags);

  CommonFlags budget_flags;
  std::string strategy = "two", budget_str, adjust_bid, observed_spend, delta_str;
  int sweep = 0;
  auto* budget = app.add_subcommand("budget", "uniform bidding strategies over a keyword graph");
  add_common(budget, budget_flags);
  budget->add_option("--strategy", strategy, "single | two | opt")
      ->check(CLI::IsMember({"single", "two", "opt"}));
  budget->add_option("--budget", budget_str, "override the instance budget");
  budget->add_option("--sweep", sweep, "emit a table over N+1 budget levels");
  budget->add_option("--adjust-bid", adjust_bid, "current uniform bid to adjust");
  budget->add_option("--observed-spend", observed_spend, "spend observed at that bid");
  budget->add_option("--delta", delta_str, "daily adjustment factor (default 1/10)");

  CommonFlags slots_flags;
  std::string mechanism = "ps";
  auto* slots = app.add_subcommand("slots", "run a slot auction mechanism");
  add_common(slots, slots_flags);
  slots->add_option("--mechanism", mechanism, "gfp | ps")
      ->check(CLI::IsMember({"gfp", "ps"}));

  CommonFlags markov_flags;
  auto* markov = app.add_subcommand("markov", "optimal assignment under the scanning-user model");
  add_common(markov, markov_flags);

  CommonFlags audit_flags;
  std::string audit_mechanism = "ps", grid_arg;
  auto* audit = app.add_subcommand("audit", "grid search for profitable misreports");
  add_common(audit, audit_flags);
  audit->add_option("--mechanism", audit_mechanism, "gfp | ps | ps-budgets | markov-vcg")
      ->check(CLI::IsMember({"gfp", "ps", "ps-budgets", "markov-vcg"}));
  audit->add_option("--grid", grid_arg, "comma-separated multiplier levels (default 8 levels)");

  CommonFlags gen_flags;
  std::string kind = "slots";
  std::uint64_t seed = 0;
  std::size_t n = 3, gen_slots = 2, keywords = 3, queries = 3, k = 2;
  bool budgets_only = false;
  auto* gen = app.add_subcommand("gen", "generate a random instance file");
  add_common(gen, gen_flags, false);
  gen->add_option("--kind", kind, "slots | markov | budget")
      ->check(CLI::IsMember({"slots", "markov", "budget"}));
  gen->add_option("--seed", seed, "generator seed")->required();
  gen->add_option("--bidders", n, "bidder count");
  gen->add_option("--slots", gen_slots, "slot count");
  gen->add_option("--keywords", keywords, "keyword count");
  gen->add_option("--queries", queries, "query count");
  gen->add_option("--k", k, "position count for markov instances");
  gen->add_flag("--budgets-only", budgets_only, "omit bids from slot instances");

  CLI11_PARSE(app, argc, argv);

  try {
    if (landscape->parsed()) return cmd_landscape(landscape_flags);
    if (budget->parsed())
      return cmd_budget(budget_flags, strategy, budget_str, sweep, adjust_bid, observed_spend,
                        delta_str);
    if (slots->parsed()) return cmd_slots(slots_flags, mechanism);
    if (markov->parsed()) return cmd_markov(markov_flags);
    if (audit->parsed()) return cmd_audit(audit_flags, audit_mechanism, grid_arg);
    if (gen->parsed())
      return cmd_gen(gen_flags, kind, seed, n, gen_slots, keywords, queries, k, budgets_only);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
