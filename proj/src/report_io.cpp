#include "symosc/report_io.hpp"

#include <json.hpp>

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace symosc {

using nlohmann::json;

double parse_lambda_expr(const std::string& text) {
  constexpr double kPi = 3.14159265358979323846;
  size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto parse_atom = [&]() -> double {
    skip_ws();
    if (pos >= text.size()) throw ContractViolation("lambda expression: truncated");
    if (text[pos] == 'P' || text[pos] == 'p') {
      if (pos + 1 < text.size() && (text[pos + 1] == 'I' || text[pos + 1] == 'i')) {
        pos += 2;
        return kPi;
      }
      throw ContractViolation("lambda expression: bad symbol in '" + text + "'");
    }
    size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text.substr(pos), &used);
    } catch (const std::exception&) {
      throw ContractViolation("lambda expression: bad number in '" + text + "'");
    }
    pos += used;
    return v;
  };
  skip_ws();
  double sign = 1.0;
  while (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    if (text[pos] == '-') sign = -sign;
    ++pos;
    skip_ws();
  }
  double value = parse_atom();
  for (;;) {
    skip_ws();
    if (pos >= text.size()) break;
    const char op = text[pos];
    if (op != '*' && op != '/') {
      throw ContractViolation("lambda expression: unexpected '" +
                              std::string(1, op) + "' in '" + text + "'");
    }
    ++pos;
    const double rhs = parse_atom();
    if (op == '*') {
      value *= rhs;
    } else {
      value /= rhs;
    }
  }
  return sign * value;
}

namespace {

double lambda_field(const json& j, const char* key) {
  if (!j.contains(key)) {
    throw ContractViolation(std::string("config: missing interval field ") + key);
  }
  const auto& v = j.at(key);
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_lambda_expr(v.get<std::string>());
  throw ContractViolation(std::string("config: interval field ") + key +
                          " must be a number or expression string");
}

json report_json(const CountReport& rep) {
  json terms = json::object();
  for (const auto& [name, value] : rep.terms) terms[name] = value;
  json events = json::array();
  for (const LabeledEvent& ev : rep.events) {
    events.push_back({{"target", ev.target},
                      {"k", ev.k},
                      {"lambda0", ev.lambda0},
                      {"multiplicity", ev.multiplicity}});
  }
  return json{{"method", rep.method}, {"a", rep.a},     {"b", rep.b},
              {"terms", terms},       {"jump_events", events},
              {"total", rep.total}};
}

CountReport report_from(const json& j) {
  CountReport rep;
  rep.method = j.at("method").get<std::string>();
  rep.a = j.at("a").get<double>();
  rep.b = j.at("b").get<double>();
  rep.total = j.at("total").get<long>();
  for (const auto& [name, value] : j.at("terms").items()) {
    rep.terms.emplace_back(name, value.get<long>());
  }
  for (const auto& ev : j.at("jump_events")) {
    rep.events.push_back({ev.at("target").get<std::string>(),
                          ev.at("k").get<int>(),
                          ev.at("lambda0").get<double>(),
                          ev.at("multiplicity").get<int>()});
  }
  return rep;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const std::exception& e) {
    throw ContractViolation(std::string("config: invalid JSON: ") + e.what());
  }
  RunConfig cfg;
  cfg.schema_version = j.value("schema_version", 1);
  if (cfg.schema_version != 1) {
    throw ContractViolation("config: unsupported schema_version");
  }
  if (!j.contains("family")) throw ContractViolation("config: missing family");
  const json& jf = j.at("family");
  cfg.family.kind = jf.value("kind", std::string("trig"));
  cfg.family.n = jf.value("n", 1);
  cfg.family.N = jf.value("N", 5);
  cfg.family.seed = jf.value("seed", 1ULL);
  cfg.family.factors = jf.value("factors", 1);
  if (j.contains("interval")) {
    cfg.a = lambda_field(j.at("interval"), "a");
    cfg.b = lambda_field(j.at("interval"), "b");
  }
  if (!(cfg.a < cfg.b)) throw ContractViolation("config: need a < b");
  if (j.contains("methods")) {
    for (const auto& m : j.at("methods")) {
      cfg.methods.push_back(CountMethod::parse(m.get<std::string>()));
    }
  }
  if (j.contains("tolerances")) {
    const json& jt = j.at("tolerances");
    cfg.tolerances.tol_rank = jt.value("tol_rank", cfg.tolerances.tol_rank);
    cfg.tolerances.tol_eig = jt.value("tol_eig", cfg.tolerances.tol_eig);
    cfg.tolerances.tol_symp = jt.value("tol_symp", cfg.tolerances.tol_symp);
    cfg.tolerances.delta_probe =
        jt.value("delta_probe", cfg.tolerances.delta_probe);
    cfg.tolerances.lambda_min_gap =
        jt.value("lambda_min_gap", cfg.tolerances.lambda_min_gap);
    cfg.tolerances.validate();
  }
  if (j.contains("output")) {
    cfg.out_path = j.at("output").value("path", std::string());
    cfg.format = j.at("output").value("format", std::string("json"));
  }
  if (cfg.format != "json" && cfg.format != "csv") {
    throw ContractViolation("config: format must be json or csv");
  }
  cfg.verify = j.value("verify", false);
  if (j.contains("scan")) {
    cfg.scan_target = j.at("scan").value("target", std::string("B"));
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractViolation("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string report_to_json(const CountReport& rep) {
  return report_json(rep).dump(2);
}

std::string reports_to_json(const std::vector<CountReport>& reps) {
  json arr = json::array();
  for (const CountReport& r : reps) arr.push_back(report_json(r));
  return arr.dump(2);
}

CountReport report_from_json(const std::string& text) {
  return report_from(json::parse(text));
}

std::vector<CountReport> reports_from_json(const std::string& text) {
  std::vector<CountReport> out;
  for (const auto& j : json::parse(text)) out.push_back(report_from(j));
  return out;
}

std::string reports_to_csv(const std::vector<CountReport>& reps) {
  std::ostringstream os;
  os.precision(17);
  os << "method,a,b,total,terms,jump_events\n";
  for (const CountReport& r : reps) {
    os << r.method << "," << r.a << "," << r.b << "," << r.total << ",";
    for (size_t i = 0; i < r.terms.size(); ++i) {
      os << (i ? "|" : "") << r.terms[i].first << "=" << r.terms[i].second;
    }
    os << ",";
    for (size_t i = 0; i < r.events.size(); ++i) {
      const LabeledEvent& ev = r.events[i];
      os << (i ? "|" : "") << ev.target << ":" << ev.k << ":" << ev.lambda0
         << ":" << ev.multiplicity;
    }
    os << "\n";
  }
  return os.str();
}

std::vector<CountReport> reports_from_csv(const std::string& text) {
  std::vector<CountReport> out;
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);  // header
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ls(line);
    std::string col;
    while (std::getline(ls, col, ',')) cols.push_back(col);
    if (cols.size() < 4) throw ContractViolation("csv: malformed row");
    cols.resize(6);
    CountReport rep;
    rep.method = cols[0];
    rep.a = std::stod(cols[1]);
    rep.b = std::stod(cols[2]);
    rep.total = std::stol(cols[3]);
    if (!cols[4].empty()) {
      std::stringstream ts(cols[4]);
      std::string item;
      while (std::getline(ts, item, '|')) {
        const auto eq = item.find('=');
        rep.terms.emplace_back(item.substr(0, eq),
                               std::stol(item.substr(eq + 1)));
      }
    }
    if (!cols[5].empty()) {
      std::stringstream es(cols[5]);
      std::string item;
      while (std::getline(es, item, '|')) {
        std::vector<std::string> f;
        std::stringstream fs(item);
        std::string piece;
        while (std::getline(fs, piece, ':')) f.push_back(piece);
        if (f.size() != 4) throw ContractViolation("csv: malformed event");
        rep.events.push_back(
            {f[0], std::stoi(f[1]), std::stod(f[2]), std::stoi(f[3])});
      }
    }
    out.push_back(std::move(rep));
  }
  return out;
}

std::string events_to_json(const std::vector<LabeledEvent>& events) {
  json arr = json::array();
  for (const LabeledEvent& ev : events) {
    arr.push_back({{"target", ev.target},
                   {"k", ev.k},
                   {"lambda0", ev.lambda0},
                   {"multiplicity", ev.multiplicity}});
  }
  return arr.dump(2);
}

std::string events_to_csv(const std::vector<LabeledEvent>& events) {
  std::ostringstream os;
  os.precision(17);
  os << "target,k,lambda0,multiplicity\n";
  for (const LabeledEvent& ev : events) {
    os << ev.target << "," << ev.k << "," << ev.lambda0 << ","
       << ev.multiplicity << "\n";
  }
  return os.str();
}

}  // namespace symosc
