#include "seqguess/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "seqguess/io.hpp"

namespace seqguess {

namespace {

std::vector<std::string> splitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// "true" selects every value, a positive integer exactly one, "false" none.
int tristate(const std::string& flag, const std::string& v) {
  if (v.empty() || v == "false") return 0;
  if (v == "true") return -1;
  try {
    std::size_t used = 0;
    int n = std::stoi(v, &used);
    if (used == v.size() && n > 0) return n;
  } catch (const std::exception&) {
  }
  throw UsageError(flag + " expects true, false or a positive integer, got '" + v + "'");
}

bool boolValue(const std::string& flag, const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw UsageError(flag + " expects true or false, got '" + v + "'");
}

std::string readFile(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::uint64_t parseSeed(const std::string& what, const std::string& s) {
  try {
    std::size_t used = 0;
    unsigned long long v = std::stoull(s, &used, 10);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError(what + " is not an unsigned integer: '" + s + "'");
}

}  // namespace

int runCli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Guess defining equations of sequences from their first terms.", "seqguess"};
  std::vector<std::string> inline_;
  std::string classes = "rat,pade,prec,holo,alg";
  std::string param;
  bool q = false;
  std::optional<int> maxShift, maxDerivative, maxPower, maxDegree, maxLevel;
  std::string homogeneous, somos, allDegrees;
  int mixedDegree = 0, safety = 1;
  std::string check = "det";
  bool all = false, noExtra = false, json = false, debug = false;
  std::string operators, names, file, bfile, seed;
  unsigned threads = 1;

  app.add_option("terms", inline_, "Terms, e.g. 0,1,4,9 (read from stdin when absent)");
  app.add_option("--class", classes,
                 "Comma separated guessers tried in order: rat, pade, prec, rec, holo, alg, ade, fe")
      ->capture_default_str();
  app.add_flag("--q", q, "q-analogue mode (parameter defaults to q)");
  app.add_option("--param", param, "Name of the parameter appearing in the terms");
  auto* ms = app.add_option("--max-shift", maxShift, "Largest shift (recurrences)");
  app.add_option("--max-derivative", maxDerivative, "Largest derivative (differential equations)")
      ->excludes(ms);
  app.add_option("--max-power", maxPower, "Largest total degree in f");
  app.add_option("--max-degree", maxDegree, "Largest degree of a coefficient polynomial");
  app.add_flag("--homogeneous{true}", homogeneous, "Homogeneous equations: true or a degree");
  app.add_flag("--somos{true}", somos, "Somos-type equations: true or a weight");
  app.add_flag("--all-degrees{true}", allDegrees,
               "Try every degree vector (default true for rat and pade)");
  app.add_option("--mixed-degree", mixedDegree, "Largest power of q^n multiplying f (q-mode)");
  app.add_option("--max-level", maxLevel, "Largest number of nested operators");
  app.add_option("--safety", safety, "Extra conditions beyond the unknown count")
      ->capture_default_str();
  app.add_option("--check", check, "Verification: det, mc or skip")
      ->check(CLI::IsMember({"det", "mc", "skip", "deterministic", "montecarlo"}))
      ->capture_default_str();
  app.add_flag("--all", all, "Return every solution, not just the first found");
  app.add_flag("--no-extra-check", noExtra,
               "Return the complete basis instead of only guesses fitting all terms");
  app.add_option("--operators", operators, "Operators to recurse with: sum, product");
  app.add_option("--names", names, "Function, index and variable names, e.g. f,n,x");
  app.add_flag("--json", json, "Print JSON instead of text");
  app.add_flag("--debug", debug, "Trace progress on stderr");
  app.add_option("--seed", seed, "Seed for prime and point choices (also SEQGUESS_SEED)");
  app.add_option("--threads", threads, "Worker threads for modular images")->capture_default_str();
  auto* fo = app.add_option("--file", file, "Read terms from a file");
  app.add_option("--bfile", bfile, "Read terms from an OEIS b-file")->excludes(fo);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kFound : kUsage;
  }

  try {
    GuessOptions opts;
    if (maxShift) opts.maxOrder = maxShift;
    if (maxDerivative) opts.maxOrder = maxDerivative;
    opts.maxPower = maxPower;
    opts.maxDegree = maxDegree;
    opts.maxLevel = maxLevel;
    opts.homogeneous = tristate("--homogeneous", homogeneous);
    opts.somos = tristate("--somos", somos);
    if (!allDegrees.empty()) opts.allDegrees = boolValue("--all-degrees", allDegrees);
    opts.maxMixedDegree = mixedDegree;
    opts.safety = safety;
    if (check == "det" || check == "deterministic") {
      opts.check = CheckMode::Deterministic;
    } else if (check == "mc" || check == "montecarlo") {
      opts.check = CheckMode::MonteCarlo;
    } else {
      opts.check = CheckMode::Skip;
    }
    opts.checkExtraValues = !noExtra;
    opts.one = !all;
    opts.q = q;
    opts.threads = std::max(1u, threads);
    if (q && param.empty()) param = "q";
    if (!param.empty()) opts.names.param = param;
    if (!names.empty()) {
      auto ns = splitList(names);
      if (ns.empty() || ns.size() > 3) throw UsageError("--names expects up to three names f,n,x");
      opts.names.function = ns[0];
      if (ns.size() > 1) opts.names.index = ns[1];
      if (ns.size() > 2) opts.names.variable = ns[2];
    }
    if (!seed.empty()) {
      opts.seed = parseSeed("--seed", seed);
    } else if (const char* env = std::getenv("SEQGUESS_SEED"); env && *env) {
      opts.seed = parseSeed("SEQGUESS_SEED", env);
    }
    if (debug) opts.debug = [&err](const std::string& s) { err << s << '\n'; };

    std::vector<GuessClass> cls;
    for (const auto& c : splitList(classes)) {
      auto k = parseClassName(c);
      if (!k) throw UsageError("unknown class '" + c + "'");
      cls.push_back(*k);
    }
    if (cls.empty()) throw UsageError("--class is empty");
    Operators ops;
    for (const auto& o : splitList(operators)) {
      if (o == "sum") {
        ops.sum = true;
      } else if (o == "product") {
        ops.product = true;
      } else {
        throw UsageError("unknown operator '" + o + "'");
      }
    }

    ParsedSequence seq;
    if (!bfile.empty()) {
      seq = parseBFile(readFile(bfile), param);
    } else if (!file.empty()) {
      seq = parseSequence(readFile(file), param);
    } else if (!inline_.empty()) {
      std::string joined;
      for (const auto& a : inline_) joined += (joined.empty() ? "" : " ") + a;
      seq = parseSequence(joined, param);
    } else {
      std::ostringstream ss;
      ss << in.rdbuf();
      seq = parseSequence(ss.str(), param);
    }
    if (debug) err << "terms: " << seq.terms.size() << ", offset " << seq.offset << '\n';

    nlohmann::json results = nlohmann::json::array();
    std::vector<std::string> lines;
    if (ops.sum || ops.product) {
      for (const auto& e : guessWithOperators(seq.terms, cls, ops, opts)) {
        results.push_back(toJson(e));
        lines.push_back(renderText(e, opts.names));
      }
    } else {
      for (GuessClass c : cls) {
        if (debug) err << "class " << className(c) << '\n';
        for (const auto& r : guess(seq.terms, c, opts)) {
          results.push_back(toJson(r));
          lines.push_back(renderText(r));
        }
        if (opts.one && !lines.empty()) break;
      }
    }

    if (json) {
      nlohmann::json doc;
      doc["schema_version"] = kJsonSchemaVersion;
      doc["offset"] = seq.offset;
      doc["terms"] = seq.terms.size();
      doc["results"] = results;
      out << doc.dump(2) << '\n';
    } else {
      if (seq.offset != 0 && !lines.empty()) {
        out << "# index 0 below is index " << seq.offset << " of the input\n";
      }
      for (const auto& l : lines) out << l << '\n';
      if (lines.empty()) out << "no guess\n";
    }
    return lines.empty() ? kNoGuess : kFound;
  } catch (const UsageError& e) {
    err << "seqguess: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "seqguess: aborted: " << e.what() << '\n';
    return kAbort;
  }
}

}  // namespace seqguess
