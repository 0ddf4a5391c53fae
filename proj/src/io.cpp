#include "ivmech/io.hpp"

#include "ivmech/error.hpp"

#include <fstream>
#include <sstream>

namespace ivmech {

namespace {

Rational rational_of(const Json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  throw Error(ErrorCode::ParseError, "expected a \"p/q\" string or an integer, got " + v.dump());
}

Json rational_json(const Rational& q, bool decimal) {
  if (!decimal) return to_string(q);
  return Json{{"exact", to_string(q)}, {"decimal", to_decimal(q)}};
}

// entries[i][idx] for agent i in canonical profile order.
std::vector<Rational> read_table(const Json& doc, const char* key, int n, int k) {
  ProfileSpace sp(n, k);
  const Json& rows = doc.at(key);
  if (!rows.is_array() || rows.size() != static_cast<std::size_t>(n)) {
    throw Error(ErrorCode::ParseError, std::string(key) + " must hold one array per agent");
  }
  std::vector<Rational> table;
  table.reserve(n * sp.size());
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != sp.size()) {
      throw Error(ErrorCode::ParseError, std::string(key) + " rows must hold k^n = " + std::to_string(sp.size()) +
                                             " entries");
    }
    for (const auto& v : row) table.push_back(rational_of(v));
  }
  return table;
}

Json table_json(const ProfileSpace& sp, const std::vector<Rational>& table, bool decimal) {
  Json rows = Json::array();
  for (int i = 0; i < sp.n(); ++i) {
    Json row = Json::array();
    for (std::size_t idx = 0; idx < sp.size(); ++idx) row.push_back(rational_json(table[i * sp.size() + idx], decimal));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

std::pair<int, int> read_shape(const Json& doc) {
  try {
    int n = doc.at("n").get<int>();
    int k = doc.at("k").get<int>();
    if (n < 1 || k < 1) throw Error(ErrorCode::ParseError, "n and k must be positive");
    return {n, k};
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

template <typename F>
auto guarded(F&& f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

}  // namespace

InstanceFile parse_instance(const std::string& text) {
  Json doc = parse_json(text);
  auto [n, k] = read_shape(doc);
  std::string mode = guarded([&] { return doc.at("mode").get<std::string>(); });
  auto table = guarded([&] { return read_table(doc, "entries", n, k); });
  InstanceFile out;
  if (mode == "ratios") {
    out.from_ratios = true;
    out.instance = values_from_ratios(Ratios(n, k, std::move(table)), Mode::Good);
  } else if (mode == "good" || mode == "chore") {
    out.instance = Instance(n, k, mode == "good" ? Mode::Good : Mode::Chore, std::move(table));
  } else {
    throw Error(ErrorCode::ParseError, "mode must be good, chore or ratios, got " + mode);
  }
  return out;
}

Json instance_to_json(const Instance& inst) {
  return Json{{"n", inst.n()},
              {"k", inst.k()},
              {"mode", mode_name(inst.mode())},
              {"entries", table_json(inst.space(), inst.table(), false)}};
}

Json ratios_to_json(const Ratios& rho) {
  return Json{{"n", rho.n()}, {"k", rho.k()}, {"mode", "ratios"}, {"entries", table_json(rho.space(), rho.table(), false)}};
}

AllocationRule parse_allocation(const std::string& text) {
  Json doc = parse_json(text);
  auto [n, k] = read_shape(doc);
  auto table = guarded([&] { return read_table(doc, "x", n, k); });
  return AllocationRule(n, k, std::move(table));
}

Json allocation_to_json(const AllocationRule& x, bool decimal) {
  return Json{{"n", x.n()}, {"k", x.k()}, {"x", table_json(x.space(), x.table(), decimal)}};
}

Json payments_to_json(const PaymentRule& p, bool decimal) {
  return Json{{"n", p.space().n()}, {"k", p.space().k()}, {"p", table_json(p.space(), p.table(), decimal)}};
}

Json report_to_json(const SolveReport& report, bool decimal, bool timing) {
  const auto& sp = report.allocation.space();
  Json out{{"target", target_name(report.target)}, {"path", path_name(report.path)}, {"ratio", to_string(report.ratio)}};
  if (decimal) out["ratio_decimal"] = to_decimal(report.ratio);
  out["allocation"] = allocation_to_json(report.allocation, decimal);
  Json cert;
  if (const auto* c = std::get_if<ConflictPair>(&report.certificate)) {
    cert = {{"kind", "conflict_pair"},
            {"source", sp.format(c->source)},
            {"sink", sp.format(c->sink)},
            {"bound", to_string(c->bound)}};
  } else if (const auto* m = std::get_if<MatchingCertificate>(&report.certificate)) {
    Json edges = Json::array();
    for (auto [a, b] : m->edges) edges.push_back({sp.format(a), sp.format(b)});
    Json must = Json::array();
    for (auto v : m->must_match) must.push_back(sp.format(v));
    cert = {{"kind", "matching"}, {"gamma", to_string(m->gamma)}, {"edges", edges}, {"must_match", must}};
  } else if (const auto* l = std::get_if<LpCertificate>(&report.certificate)) {
    Json basis = Json::array();
    for (auto b : l->basis) basis.push_back(b);
    cert = {{"kind", "lp_vertex"}, {"objective", to_string(l->objective)}, {"basis", basis}};
  } else {
    cert = {{"kind", "none"}};
  }
  out["certificate"] = cert;
  if (timing) out["wall_ms"] = report.wall_ms;
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path);
  out << text;
}

}  // namespace ivmech
