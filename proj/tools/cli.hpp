#pragma once

// The `ualg` command surface. run_command takes the arguments after the
// program name and returns the exit code plus captured stdout/stderr, so
// tests drive it in-process.
//
// Exit codes: 0 success or true verdict, 1 false verdict, 2 usage, parse
// or input error.

#include <cstdint>
#include <cstdlib>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <ualg/ualg.hpp>

namespace ualg::cli {

  using Json = nlohmann::ordered_json;

  struct Result {
    int         exit = 0;
    std::string out;
    std::string err;
  };

  namespace detail {

    struct Globals {
      bool                         json    = false;
      std::optional<std::uint64_t> budget;
      std::uint64_t                seed    = 0;
      unsigned                     workers = 1;

      Exec exec() const {
        return Exec{workers};
      }
      std::uint64_t budget_or(std::uint64_t fallback) const {
        return budget ? *budget : fallback;
      }
      SearchOptions search(SearchMode mode = SearchMode::list) const {
        SearchOptions o;
        o.mode   = mode;
        o.budget = budget_or(o.budget);
        o.exec   = exec();
        return o;
      }
    };

    // Thrown for usage problems found after CLI11 parsing.
    struct Usage : Error {
      using Error::Error;
    };

    inline std::vector<std::string> split_list(std::string const& s) {
      std::vector<std::string> out;
      std::string              cur;
      for (char c : s) {
        if (c == ',') {
          if (!cur.empty()) {
            out.push_back(cur);
          }
          cur.clear();
        } else if (c != ' ') {
          cur += c;
        }
      }
      if (!cur.empty()) {
        out.push_back(cur);
      }
      return out;
    }

    inline std::vector<FiniteAlgebra> load(std::string const& path) {
      std::string text = read_file(path);
      try {
        return parse_algebra_file(text);
      } catch (ParseError const& e) {
        throw ParseError(e.line(), e.column(), path + ": " + e.message());
      }
    }

    inline EquationSet load_equations(std::string const& path) {
      std::string text = read_file(path);
      std::string stem = path.substr(path.find_last_of('/') + 1);
      stem             = stem.substr(0, stem.find('.'));
      try {
        return parse_equation_file(text, stem.empty() ? "equations" : stem);
      } catch (ParseError const& e) {
        throw ParseError(e.line(), e.column(), path + ": " + e.message());
      }
    }

    inline std::string join(std::vector<std::string> const& xs, char const* sep = " ") {
      std::string out;
      for (auto const& x : xs) {
        out += (out.empty() ? "" : sep) + x;
      }
      return out;
    }

    inline std::vector<std::string> names(FiniteAlgebra const& alg, ElementSet const& s) {
      std::vector<std::string> out;
      for (Element e : s) {
        out.push_back(alg.element_name(e));
      }
      return out;
    }

    inline Json names_json(FiniteAlgebra const& alg, ElementSet const& s) {
      Json j = Json::array();
      for (Element e : s) {
        j.push_back(alg.element_name(e));
      }
      return j;
    }

    inline Json map_json(FiniteAlgebra const& src, FiniteAlgebra const& dst, Map const& m) {
      Json j = Json::object();
      for (Element e = 0; e < src.size(); ++e) {
        j[src.element_name(e)] = dst.element_name(m[e]);
      }
      return j;
    }

    inline std::string map_text(FiniteAlgebra const& src, FiniteAlgebra const& dst,
                                Map const& m) {
      std::string out;
      for (Element e = 0; e < src.size(); ++e) {
        out += (e ? ", " : "") + src.element_name(e) + "->" + dst.element_name(m[e]);
      }
      return out;
    }

    inline Json signature_json(Signature const& sig) {
      Json j = Json::array();
      for (auto const& s : sig) {
        j.push_back({{"name", s.name}, {"arity", s.arity}});
      }
      return j;
    }

    inline Json witness_json(FiniteAlgebra const& src, FiniteAlgebra const& dst,
                             HomCheck const& c) {
      if (!c.witness) {
        return nullptr;
      }
      auto const& w = *c.witness;
      Json        args = Json::array();
      for (Element a : w.args) {
        args.push_back(src.element_name(a));
      }
      return {{"op", src.signature()[w.op].to_string()},
              {"args", args},
              {"lhs", dst.element_name(w.lhs)},
              {"rhs", dst.element_name(w.rhs)}};
    }

    inline std::string witness_text(FiniteAlgebra const& src, FiniteAlgebra const& dst,
                                    HomCheck const& c) {
      auto const& w = *c.witness;
      return src.signature()[w.op].name + "(" + join(names(src, ElementSet(w.args.begin(), w.args.end())), ", ")
             + "): f(o(z)) = " + dst.element_name(w.lhs) + " but o(f(z)) = "
             + dst.element_name(w.rhs);
    }

    inline Json report_json(FiniteAlgebra const& alg, SatisfactionReport const& r) {
      Json eqs = Json::array();
      for (auto const& v : r.verdicts) {
        Json e = {{"label", v.label}, {"equation", v.text}, {"holds", v.result.holds}};
        if (v.result.counterexample) {
          Json b = Json::object();
          for (std::size_t i = 0; i < v.variables.size(); ++i) {
            b[v.variables[i]] = alg.element_name((*v.result.counterexample)[i]);
          }
          e["counterexample"] = b;
          e["lhs"]            = alg.element_name(v.result.lhs_value);
          e["rhs"]            = alg.element_name(v.result.rhs_value);
        }
        eqs.push_back(e);
      }
      return {{"algebra", r.algebra},
              {"equations", r.equations},
              {"all_pass", r.all_pass()},
              {"results", eqs}};
    }

    inline void report_text(std::ostream& out, FiniteAlgebra const& alg,
                            SatisfactionReport const& r) {
      std::size_t pass = 0;
      for (auto const& v : r.verdicts) {
        pass += v.result.holds;
      }
      out << r.algebra << " against " << r.equations << ": " << pass << "/"
          << r.verdicts.size() << " equations hold\n";
      for (auto const& v : r.verdicts) {
        out << (v.result.holds ? "  ok    " : "  FAIL  ");
        if (!v.label.empty()) {
          out << "[" << v.label << "] ";
        }
        out << v.text;
        if (v.result.counterexample) {
          out << "   at";
          for (std::size_t i = 0; i < v.variables.size(); ++i) {
            out << " " << v.variables[i] << "="
                << alg.element_name((*v.result.counterexample)[i]);
          }
          out << " (" << alg.element_name(v.result.lhs_value) << " vs "
              << alg.element_name(v.result.rhs_value) << ")";
        }
        out << "\n";
      }
    }

    inline std::vector<EpSequence> parse_gens(FiniteAlgebra const&            alg,
                                              std::vector<std::string> const& texts) {
      std::vector<EpSequence> gens;
      for (auto const& t : texts) {
        gens.push_back(parse_ep(alg, t));
      }
      return gens;
    }

    inline Json ext_json(GeneratedExtension const& ext) {
      Json members = Json::array();
      for (std::size_t i = 0; i < ext.members.size(); ++i) {
        members.push_back({{"name", ext.view.element_name(static_cast<Element>(i))},
                           {"sequence", ext.members[i].to_string()}});
      }
      Json gens = Json::array();
      for (auto const& g : ext.generators) {
        gens.push_back(g.to_string());
      }
      return {{"base", ext.base.name()},
              {"generators", gens},
              {"window", {{"preperiod", ext.window_pre}, {"period", ext.window_per}}},
              {"members", members},
              {"algebra", serialize(ext.view)}};
    }

  }  // namespace detail

  inline Result run_command(std::vector<std::string> args) {
    using namespace detail;
    std::ostringstream out, err;
    Globals            g;

    CLI::App app{"Finite universal algebra toolkit", "ualg"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_flag("--json", g.json, "Machine-readable JSON output");
    app.add_option("--budget", g.budget, "Search node / member budget")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", g.seed, "Seed for sampled checks");
    app.add_option("--workers", g.workers, "Worker threads")->check(CLI::Range(1u, 256u));

    std::string file, file2, alg_name, algs, term_text, bind, set, keep, preset_name;
    std::string prefix = "p", elems, new_name, image, from, to;
    std::size_t arity = 1, gens_n = 1, bound = 1, image_bound = 1;
    std::uint64_t index = 0;
    bool        report = false, count = false, first = false, list = false, verify = false;
    std::vector<std::string> gen_texts;

    auto* check = app.add_subcommand("check", "Parse and validate an algebra file");
    check->add_option("file", file)->required();

    auto* eval = app.add_subcommand("eval", "Evaluate a term under a binding");
    eval->add_option("file", file)->required();
    eval->add_option("--algebra", alg_name);
    eval->add_option("--term", term_text)->required();
    eval->add_option("--bind", bind, "x=e1,y=e2");

    auto* sat = app.add_subcommand("satisfies", "Check equations on an algebra");
    sat->add_option("file", file)->required();
    sat->add_option("equations", file2);
    sat->add_option("--preset", preset_name);
    sat->add_option("--algebra", alg_name);

    auto* gen = app.add_subcommand("gen", "Generate a subalgebra");
    gen->add_option("file", file)->required();
    gen->add_option("--algebra", alg_name);
    gen->add_option("--set", set, "Comma-separated seed elements");
    gen->add_flag("--report", report, "Also run the directed-union check");

    auto* fin = app.add_subcommand("finiteness", "Minimum generating set and subuniverse lattice");
    fin->add_option("file", file)->required();
    fin->add_option("--algebra", alg_name);

    auto* clone = app.add_subcommand("clone", "n-ary term operations");
    clone->add_option("file", file)->required();
    clone->add_option("--algebra", alg_name);
    clone->add_option("--arity", arity)->check(CLI::Range(1, 8));

    auto* homs = app.add_subcommand("homs", "Enumerate homomorphisms");
    homs->add_option("file", file)->required();
    homs->add_option("--from", from)->required();
    homs->add_option("--to", to)->required();
    auto* f_count = homs->add_flag("--count", count);
    auto* f_first = homs->add_flag("--first", first);
    auto* f_list  = homs->add_flag("--list", list);
    f_count->excludes(f_first)->excludes(f_list);
    f_first->excludes(f_list);

    auto* iso = app.add_subcommand("iso", "Isomorphism test");
    iso->add_option("file", file)->required();
    iso->add_option("--algebras", algs, "A,B")->required();

    auto* retr = app.add_subcommand("retracts", "Retractions onto a subuniverse");
    retr->add_option("file", file)->required();
    retr->add_option("--algebra", alg_name);
    retr->add_option("--image", image)->required();

    auto* red = app.add_subcommand("reduct", "Forget operations");
    red->add_option("file", file)->required();
    red->add_option("--algebra", alg_name);
    red->add_option("--keep", keep)->required();
    red->add_option("--name", new_name);

    auto* prod = app.add_subcommand("product", "Direct product over fresh urelements");
    prod->add_option("file", file)->required();
    prod->add_option("--algebras", algs)->required();
    auto* o_prefix = prod->add_option("--prefix", prefix);
    auto* o_elems  = prod->add_option("--elements", elems);
    o_prefix->excludes(o_elems);
    prod->add_option("--name", new_name);
    prod->add_flag("--verify", verify, "Check the universal property against the factors and the product");

    auto* fr = app.add_subcommand("free-retract", "Retraction search on a truncated free semigroup");
    fr->add_option("--gens", gens_n)->required()->check(CLI::Range(1, 26));
    fr->add_option("--bound", bound)->required()->check(CLI::PositiveNumber);
    fr->add_option("--image-bound", image_bound)->required()->check(CLI::PositiveNumber);

    auto* rp = app.add_subcommand("rp", "Eventually periodic reduced power");
    rp->require_subcommand(1);
    auto add_rp = [&](char const* name, char const* desc) {
      auto* c = rp->add_subcommand(name, desc);
      c->add_option("file", file)->required();
      c->add_option("--algebra", alg_name);
      c->add_option("--gen", gen_texts, "e.g. \"pre b1 | per b2 b1\" (repeatable)");
      return c;
    };
    auto* rp_adj = add_rp("adjoin", "Closure of the constants and the generators");
    auto* rp_ret = add_rp("retract", "Coordinate-evaluation retraction");
    rp_ret->add_option("--index", index);
    auto* rp_pre = add_rp("preserve", "Equation preservation on the generated extension");
    rp_pre->add_option("equations", file2);
    rp_pre->add_option("--preset", preset_name);

    auto* pre = app.add_subcommand("preset", "Print a preset equation file");
    pre->add_option("name", preset_name)->required();

    if (char const* env = std::getenv("UALG_BUDGET")) {
      try {
        g.budget = std::stoull(env);
      } catch (std::exception const&) {
        err << "ignoring malformed UALG_BUDGET\n";
      }
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
      app.parse(reversed);
    } catch (CLI::CallForHelp const&) {
      out << app.help();
      return {0, out.str(), err.str()};
    } catch (CLI::ParseError const& e) {
      err << "error: " << e.what() << "\n" << app.help();
      return {2, out.str(), err.str()};
    }

    auto pick = [&](std::vector<FiniteAlgebra> const& all) -> FiniteAlgebra const& {
      return select_algebra(all, alg_name);
    };
    auto equations = [&]() -> EquationSet {
      if (!preset_name.empty() && !file2.empty()) {
        throw Usage("give an equation file or --preset, not both");
      }
      if (!preset_name.empty()) {
        return preset(preset_name == "boolean" ? "boolean-algebra" : preset_name);
      }
      if (file2.empty()) {
        throw Usage("missing equation file or --preset");
      }
      return load_equations(file2);
    };
    auto emit = [&](Json const& j) { out << j.dump(2) << "\n"; };

    int code = 0;
    try {
      if (check->parsed()) {
        auto all = load(file);
        Json j   = Json::array();
        for (auto const& a : all) {
          j.push_back({{"name", a.name()},
                       {"elements", a.carrier()},
                       {"signature", signature_json(a.signature())}});
          if (!g.json) {
            out << a.name() << ": " << a.size() << " element"
                << (a.size() == 1 ? "" : "s") << "; " << a.signature().to_string()
                << "\n";
          }
        }
        if (g.json) {
          emit({{"file", file}, {"algebras", j}});
        } else {
          out << all.size() << " algebra" << (all.size() == 1 ? "" : "s") << " ok\n";
        }
      } else if (eval->parsed()) {
        auto                     all = load(file);
        auto const&              a   = pick(all);
        std::vector<std::string> vars;
        Binding                  binding;
        for (auto const& item : split_list(bind)) {
          auto eq = item.find('=');
          if (eq == std::string::npos) {
            throw Usage("malformed binding '" + item + "' (expected var=element)");
          }
          vars.push_back(item.substr(0, eq));
          binding.push_back(a.element(item.substr(eq + 1)));
        }
        Term    t = parse_term(term_text, vars);
        Element v = eval_term(a, t, binding);
        if (g.json) {
          Json b = Json::object();
          for (std::size_t i = 0; i < vars.size(); ++i) {
            b[vars[i]] = a.element_name(binding[i]);
          }
          emit({{"algebra", a.name()},
                {"term", t.to_string(vars)},
                {"binding", b},
                {"value", a.element_name(v)}});
        } else {
          out << a.element_name(v) << "\n";
        }
      } else if (sat->parsed()) {
        auto        all = load(file);
        auto const& a   = pick(all);
        auto        eqs = equations();
        auto        r   = satisfies_all(a, eqs, g.exec());
        if (g.json) {
          emit(report_json(a, r));
        } else {
          report_text(out, a, r);
        }
        code = r.all_pass() ? 0 : 1;
      } else if (gen->parsed()) {
        auto        all  = load(file);
        auto const& a    = pick(all);
        auto        seed = a.elements(split_list(set));
        auto        res  = generate(a, seed, g.exec());
        std::optional<bool> directed;
        if (report) {
          directed = directed_union_check(a, seed, 256, g.seed);
        }
        if (g.json) {
          Json stages = Json::array();
          for (auto const& s : res.trace.stages) {
            stages.push_back(names_json(a, s));
          }
          Json j = {{"algebra", a.name()},
                    {"seed", names_json(a, res.trace.seed)},
                    {"members", names_json(a, res.members())},
                    {"empty", res.empty()},
                    {"stages", stages},
                    {"fixpoint", res.trace.fixpoint}};
          if (directed) {
            j["directed_union"] = *directed;
          }
          emit(j);
        } else {
          for (std::size_t i = 0; i < res.trace.stages.size(); ++i) {
            out << "A" << i << " = {" << join(names(a, res.trace.stages[i]), ", ")
                << "}\n";
          }
          if (res.empty()) {
            out << "generated: empty, not an algebra\n";
          } else {
            out << "generated: {" << join(names(a, res.members()), ", ") << "}\n";
          }
          if (directed) {
            out << "directed union: " << (*directed ? "holds" : "FAILS") << "\n";
          }
        }
        code = directed && !*directed ? 1 : 0;
      } else if (fin->parsed()) {
        auto        all = load(file);
        auto const& a   = pick(all);
        auto        r   = finiteness_report(a);
        if (g.json) {
          Json j = {{"algebra", a.name()},
                    {"minimum_generating_set", names_json(a, r.minimum_generating_set)},
                    {"locally_finite", r.locally_finite},
                    {"finitely_generated", r.finitely_generated}};
          if (r.lattice) {
            Json subs = Json::array(), covers = Json::array();
            for (auto const& s : r.lattice->members) {
              subs.push_back(names_json(a, s));
            }
            for (auto [lo, hi] : r.lattice->covers) {
              covers.push_back({lo, hi});
            }
            j["subuniverses"] = subs;
            j["covers"]       = covers;
          }
          emit(j);
        } else {
          out << "minimum generating set: {"
              << join(names(a, r.minimum_generating_set), ", ") << "}\n";
          out << "locally finite: yes; finitely generated: yes\n";
          if (r.lattice) {
            out << r.lattice->members.size() << " subuniverses:\n";
            for (auto const& s : r.lattice->members) {
              out << "  {" << join(names(a, s), ", ") << "}\n";
            }
          } else {
            out << "subuniverse lattice skipped (more than 5 elements)\n";
          }
        }
      } else if (clone->parsed()) {
        auto        all  = load(file);
        auto const& a    = pick(all);
        auto        frag = clone_n(a, arity, g.budget_or(1u << 16));
        if (g.json) {
          Json members = Json::array();
          for (std::size_t i = 0; i < frag.size(); ++i) {
            Json table = Json::array();
            for (Element e : frag.tables[i]) {
              table.push_back(a.element_name(e));
            }
            members.push_back({{"witness", frag.witnesses[i].to_string(frag.variables)},
                               {"table", table}});
          }
          emit({{"algebra", a.name()},
                {"arity", arity},
                {"complete", frag.complete},
                {"count", frag.size()},
                {"members", members}});
        } else {
          out << "Clo_" << arity << "(" << a.name() << "): " << frag.size() << " member"
              << (frag.size() == 1 ? "" : "s") << (frag.complete ? "" : " (budget hit, partial)")
              << "\n";
          for (std::size_t i = 0; i < frag.size(); ++i) {
            std::vector<std::string> t;
            for (Element e : frag.tables[i]) {
              t.push_back(a.element_name(e));
            }
            out << "  " << frag.witnesses[i].to_string(frag.variables) << "  [" << join(t)
                << "]\n";
          }
        }
        code = frag.complete ? 0 : 2;
      } else if (homs->parsed()) {
        auto        all  = load(file);
        auto const& src  = select_algebra(all, from);
        auto const& dst  = select_algebra(all, to);
        SearchMode  mode = count ? SearchMode::count : first ? SearchMode::first : SearchMode::list;
        auto        r    = enumerate_homomorphisms(src, dst, g.search(mode));
        if (g.json) {
          Json maps = Json::array();
          for (auto const& m : r.maps) {
            maps.push_back(map_json(src, dst, m));
          }
          Json j = {{"from", src.name()}, {"to", dst.name()}, {"count", r.count}};
          if (mode != SearchMode::count) {
            j["maps"] = maps;
          }
          emit(j);
        } else {
          if (mode == SearchMode::first) {
            out << (r.maps.empty() ? "no homomorphism" : map_text(src, dst, r.maps.front()))
                << "\n";
          } else {
            out << r.count << " homomorphism" << (r.count == 1 ? "" : "s") << " "
                << src.name() << " -> " << dst.name() << "\n";
            for (auto const& m : r.maps) {
              out << "  " << map_text(src, dst, m) << "\n";
            }
          }
        }
        code = r.count > 0 ? 0 : 1;
      } else if (iso->parsed()) {
        auto all  = load(file);
        auto pair = split_list(algs);
        if (pair.size() != 2) {
          throw Usage("--algebras needs exactly two names");
        }
        auto const& a = select_algebra(all, pair[0]);
        auto const& b = select_algebra(all, pair[1]);
        auto        m = check_isomorphism(a, b, g.search());
        if (g.json) {
          emit({{"a", a.name()},
                {"b", b.name()},
                {"isomorphic", m.has_value()},
                {"map", m ? map_json(a, b, m->map()) : Json(nullptr)}});
        } else if (m) {
          out << "isomorphic: " << map_text(a, b, m->map()) << "\n";
        } else {
          out << "not isomorphic\n";
        }
        code = m ? 0 : 1;
      } else if (retr->parsed()) {
        auto        all = load(file);
        auto const& a   = pick(all);
        auto        img = a.elements(split_list(image));
        auto        rs  = find_retractions(a, img, g.search());
        if (g.json) {
          Json maps = Json::array();
          for (auto const& r : rs) {
            maps.push_back(map_json(a, a, r.map()));
          }
          emit({{"algebra", a.name()},
                {"image", names_json(a, img)},
                {"retract", !rs.empty()},
                {"retractions", maps}});
        } else {
          out << rs.size() << " retraction" << (rs.size() == 1 ? "" : "s") << " onto {"
              << join(names(a, img), ", ") << "}\n";
          for (auto const& r : rs) {
            out << "  " << map_text(a, a, r.map()) << "\n";
          }
        }
        code = rs.empty() ? 1 : 0;
      } else if (red->parsed()) {
        auto        all = load(file);
        auto const& a   = pick(all);
        auto        r   = reduct(a, split_list(keep), new_name);
        if (g.json) {
          emit({{"algebra", serialize(r)}});
        } else {
          out << serialize(r);
        }
      } else if (prod->parsed()) {
        auto                       all = load(file);
        std::vector<FiniteAlgebra> factors;
        for (auto const& n : split_list(algs)) {
          factors.push_back(select_algebra(all, n));
        }
        if (factors.empty()) {
          throw Usage("--algebras needs at least one name");
        }
        Naming naming{prefix, split_list(elems)};
        auto   p = direct_product(factors, naming, new_name);
        std::optional<UniversalPropertyReport> up;
        if (verify) {
          auto apices = p.factors;
          apices.push_back(p.product);
          up = verify_universal_property(p, apices, 100'000, g.search());
        }
        if (g.json) {
          Json relabel = Json::object();
          for (Element e = 0; e < p.product.size(); ++e) {
            Json t = Json::array();
            for (std::size_t i = 0; i < p.factors.size(); ++i) {
              t.push_back(p.factors[i].element_name(p.tuples[e][i]));
            }
            relabel[p.product.element_name(e)] = t;
          }
          Json projections = Json::array();
          for (std::size_t i = 0; i < p.factors.size(); ++i) {
            projections.push_back({{"factor", p.factors[i].name()},
                                   {"map", map_json(p.product, p.factors[i],
                                                    p.projections[i].map())}});
          }
          Json j = {{"algebra", serialize(p.product)},
                    {"relabel", relabel},
                    {"projections", projections}};
          if (up) {
            Json apices = Json::array();
            for (auto const& v : up->apices) {
              apices.push_back({{"apex", v.apex},
                                {"cones", v.cones},
                                {"all_mediate", v.all_mediate},
                                {"uniqueness", to_string(v.uniqueness)}});
            }
            j["universal_property"] = {{"passed", up->passed()}, {"apices", apices}};
          }
          emit(j);
        } else {
          out << serialize(p.product);
          if (up) {
            for (auto const& v : up->apices) {
              out << "# apex " << v.apex << ": " << v.cones << " cones, mediation "
                  << (v.all_mediate ? "ok" : "FAILED") << ", uniqueness "
                  << to_string(v.uniqueness) << "\n";
            }
          }
        }
        code = up && !up->passed() ? 1 : 0;
      } else if (fr->parsed()) {
        TruncatedFreeSemigroup t(default_generators(gens_n), bound,
                                 g.budget_or(TruncatedFreeSemigroup::default_budget));
        auto r    = search_bounded_retraction(t, image_bound);
        auto word = [&](std::optional<TruncatedFreeSemigroup::Word> w) -> Json {
          return w ? Json(t.name(*w)) : Json(nullptr);
        };
        if (g.json) {
          Json steps = Json::array();
          for (auto const& s : r.transcript) {
            Json j = {{"kind", to_string(s.kind)}, {"word", t.name(s.word)}};
            if (s.left) {
              j["split"] = {t.name(*s.left), t.name(*s.right)};
            }
            if (s.kind != StepKind::backtrack) {
              j["image"]        = word(s.image);
              j["image_length"] = s.forced_length;
            }
            steps.push_back(j);
          }
          Json j = {{"generators", t.generators()},
                    {"bound", t.bound()},
                    {"image_bound", r.image_bound},
                    {"elements", t.size()},
                    {"retraction", r.map.has_value()}};
          if (r.map) {
            Json m = Json::object();
            for (TruncatedFreeSemigroup::Word w = 0; w < t.size(); ++w) {
              m[t.name(w)] = t.name((*r.map)[w]);
            }
            j["map"] = m;
          } else {
            j["contradiction_length"] = r.contradiction_length
                                            ? Json(*r.contradiction_length)
                                            : Json(nullptr);
          }
          j["transcript"]           = steps;
          j["transcript_truncated"] = r.transcript_truncated;
          emit(j);
        } else {
          out << "words of length <= " << t.bound() << " over " << join(t.generators(), ",")
              << ": " << t.size() << " elements; image bound " << r.image_bound << "\n";
          for (auto const& s : r.transcript) {
            if (s.kind == StepKind::fixed) {
              continue;
            }
            out << "  " << to_string(s.kind) << " " << t.name(s.word);
            if (s.left) {
              out << " = " << t.name(*s.left) << "." << t.name(*s.right) << " forces length "
                  << s.forced_length;
            } else if (s.kind == StepKind::chosen) {
              out << " -> " << t.name(*s.image);
            }
            if (s.kind == StepKind::forced) {
              out << " -> " << t.name(*s.image);
            }
            out << "\n";
          }
          if (r.map) {
            out << "retraction found\n";
          } else {
            out << "no retraction";
            if (r.contradiction_length) {
              out << "; first contradiction at length " << *r.contradiction_length;
            }
            out << "\n";
          }
        }
        code = r.map ? 0 : 1;
      } else if (rp->parsed()) {
        auto        all  = load(file);
        auto const& a    = pick(all);
        auto        gens = parse_gens(a, gen_texts);
        if (rp_adj->parsed()) {
          auto ext = adjoin_generate(a, gens, g.budget_or(100'000), "r", g.exec());
          if (g.json) {
            emit(ext_json(ext));
          } else {
            out << ext.members.size() << " members\n";
            for (std::size_t i = 0; i < ext.members.size(); ++i) {
              out << "  " << ext.view.element_name(static_cast<Element>(i)) << " = "
                  << ext.members[i].to_string() << "\n";
            }
            out << serialize(ext.view);
          }
        } else if (rp_ret->parsed()) {
          auto ext = adjoin_generate(a, gens, g.budget_or(100'000), "r", g.exec());
          auto r   = coordinate_retraction(ext, index);
          bool ok  = r.check.ok && r.fixes_standard_copy;
          if (g.json) {
            emit({{"index", index},
                  {"map", map_json(ext.view, ext.view, r.map.map())},
                  {"homomorphism", r.check.ok},
                  {"witness", witness_json(ext.view, ext.view, r.check)},
                  {"fixes_standard_copy", r.fixes_standard_copy}});
          } else {
            out << "coordinate " << index << ": " << map_text(ext.view, ext.view, r.map.map())
                << "\n";
            out << "homomorphism: " << (r.check.ok ? "yes" : "NO") << "; fixes standard copy: "
                << (r.fixes_standard_copy ? "yes" : "NO") << "\n";
            if (!r.check.ok) {
              out << "  " << witness_text(ext.view, ext.view, r.check) << "\n";
            }
          }
          code = ok ? 0 : 1;
        } else if (rp_pre->parsed()) {
          auto eqs = equations();
          auto r   = preservation_suite(a, eqs, gens, g.budget_or(100'000), g.exec());
          if (g.json) {
            auto ext = adjoin_generate(a, gens, g.budget_or(100'000), "r", g.exec());
            emit({{"members", r.members},
                  {"base", report_json(a, r.base)},
                  {"extension", report_json(ext.view, r.extension)}});
          } else {
            out << "extension of " << a.name() << " has " << r.members << " members\n";
            std::size_t pass = 0;
            for (auto const& v : r.extension.verdicts) {
              pass += v.result.holds;
            }
            out << pass << "/" << r.extension.verdicts.size()
                << " equations hold on the extension\n";
          }
          code = r.all_pass() ? 0 : 1;
        }
      } else if (pre->parsed()) {
        auto eqs = preset(preset_name == "boolean" ? "boolean-algebra" : preset_name);
        if (g.json) {
          Json list = Json::array();
          for (auto const& e : eqs.equations) {
            list.push_back({{"label", e.label}, {"variables", e.variables}, {"equation", e.to_string()}});
          }
          emit({{"name", eqs.name}, {"equations", list}});
        } else {
          out << serialize(eqs);
        }
      }
    } catch (ParseError const& e) {
      err << "parse error: " << e.what() << "\n";
      return {2, out.str(), err.str()};
    } catch (BudgetExceeded const& e) {
      err << "budget exceeded: " << e.what() << "\n";
      return {2, out.str(), err.str()};
    } catch (Usage const& e) {
      err << "error: " << e.what() << "\n";
      return {2, out.str(), err.str()};
    } catch (Error const& e) {
      err << "error: " << e.what() << "\n";
      return {2, out.str(), err.str()};
    }
    return {code, out.str(), err.str()};
  }

}  // namespace ualg::cli
