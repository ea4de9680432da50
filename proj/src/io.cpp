#include "discop/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "discop/error.hpp"
#include "discop/indexing.hpp"

namespace discop::io {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << content;
  if (!out) throw ParseError("write failed for " + path);
}

// Splits into lines, dropping a trailing empty line; keeps 1-based
// numbering for error messages.
std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) {
      if (start < text.size()) lines.push_back(text.substr(start));
      break;
    }
    std::string line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t end = line.find(sep, start);
    if (end == std::string::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(std::move(tok));
  return out;
}

struct Location {
  const std::string& path;
  std::size_t line;   // 1-based
  std::size_t column; // 1-based, 0 = unknown

  std::string str() const {
    std::string s = path + " line " + std::to_string(line);
    if (column > 0) s += " column " + std::to_string(column);
    return s;
  }
};

double parse_double_at(const std::string& token, const Location& where) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw ParseError(where.str() + ": bad number '" + token + "'");
  return v;
}

long parse_int_at(const std::string& token, const Location& where) {
  long v = 0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw ParseError(where.str() + ": bad integer '" + token + "'");
  return v;
}

double parse_finite_at(const std::string& token, const Location& where) {
  double v = parse_double_at(token, where);
  if (!std::isfinite(v))
    throw ParseError(where.str() + ": non-finite value '" + token + "'");
  return v;
}

// Header "TAG M=<int> L=<int>".
std::pair<int, int> parse_header(const std::string& path,
                                 const std::vector<std::string>& lines,
                                 const std::string& tag) {
  if (lines.empty())
    throw ParseError(path + " line 1: empty file, expected " + tag +
                     " header");
  auto tokens = split_ws(lines[0]);
  if (tokens.size() != 3 || tokens[0] != tag ||
      tokens[1].rfind("M=", 0) != 0 || tokens[2].rfind("L=", 0) != 0)
    throw ParseError(path + " line 1: expected '" + tag +
                     " M=<int> L=<int>', got '" + lines[0] + "'");
  Location loc{path, 1, 0};
  long M = parse_int_at(tokens[1].substr(2), loc);
  long L = parse_int_at(tokens[2].substr(2), loc);
  if (M < 1 || L < 1)
    throw ParseError(path + " line 1: M and L must be positive");
  return {static_cast<int>(M), static_cast<int>(L)};
}

// Values after the header, one or more per line, exactly `expect` total.
std::vector<double> parse_values(const std::string& path,
                                 const std::vector<std::string>& lines,
                                 std::size_t first_line, std::size_t expect) {
  std::vector<double> values;
  values.reserve(expect);
  for (std::size_t i = first_line; i < lines.size(); ++i) {
    const auto tokens = split_ws(lines[i]);
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      if (values.size() == expect)
        throw ParseError(path + " line " + std::to_string(i + 1) +
                         ": more than " + std::to_string(expect) + " values");
      values.push_back(parse_double_at(tokens[t], {path, i + 1, t + 1}));
    }
  }
  if (values.size() != expect)
    throw ParseError(path + ": expected " + std::to_string(expect) +
                     " values, found " + std::to_string(values.size()));
  return values;
}

std::string render_block(const std::vector<double>& values) {
  std::string out;
  for (double v : values) {
    out += render(v);
    out += '\n';
  }
  return out;
}

}  // namespace

std::string render(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw ParseError("failed to render double");
  return std::string(buf, ptr);
}

double parse_double(const std::string& token) {
  return parse_double_at(token, {token, 1, 0});
}

GridFunction read_grid(const std::string& path) {
  auto lines = split_lines(read_file(path));
  auto [M, L] = parse_header(path, lines, "GRIDFN");
  const std::size_t expect =
      checked_dense_size(static_cast<std::size_t>(M) + 1, L);
  return GridFunction(M, L, parse_values(path, lines, 1, expect));
}

void write_grid(const std::string& path, const GridFunction& f) {
  std::string out = "GRIDFN M=" + std::to_string(f.resolution()) +
                    " L=" + std::to_string(f.dimension()) + "\n";
  out += render_block(f.values());
  write_file(path, out);
}

StochasticArray read_array(const std::string& path) {
  auto lines = split_lines(read_file(path));
  auto [M, L] = parse_header(path, lines, "STOCHARR");
  const std::size_t expect =
      checked_dense_size(static_cast<std::size_t>(M), L);
  return StochasticArray(M, L, parse_values(path, lines, 1, expect));
}

void write_array(const std::string& path, const StochasticArray& a) {
  std::string out = "STOCHARR M=" + std::to_string(a.resolution()) +
                    " L=" + std::to_string(a.dimension()) + "\n";
  out += render_block(a.entries());
  write_file(path, out);
}

RankMatrix read_rank_matrix(const std::string& path) {
  auto lines = split_lines(read_file(path));
  auto [M, L] = parse_header(path, lines, "RANKMAT");
  std::vector<int> ranks;
  ranks.reserve(static_cast<std::size_t>(M) * L);
  std::size_t row = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto tokens = split_ws(lines[i]);
    if (tokens.empty()) continue;
    if (row == static_cast<std::size_t>(M))
      throw ParseError(path + " line " + std::to_string(i + 1) +
                       ": more than M rows");
    if (tokens.size() != static_cast<std::size_t>(L))
      throw ParseError(path + " line " + std::to_string(i + 1) + ": expected " +
                       std::to_string(L) + " integers");
    for (const auto& tok : tokens)
      ranks.push_back(
          static_cast<int>(parse_int_at(tok, {path, i + 1, 0})));
    ++row;
  }
  if (row != static_cast<std::size_t>(M))
    throw ParseError(path + ": expected " + std::to_string(M) + " rank rows");
  RankMatrix r(M, L, std::move(ranks));
  r.validate();
  return r;
}

void write_rank_matrix(const std::string& path, const RankMatrix& r) {
  std::string out = "RANKMAT M=" + std::to_string(r.members()) +
                    " L=" + std::to_string(r.dimension()) + "\n";
  for (int m = 0; m < r.members(); ++m) {
    for (int l = 0; l < r.dimension(); ++l) {
      if (l) out += ' ';
      out += std::to_string(r(m, l));
    }
    out += '\n';
  }
  write_file(path, out);
}

DiscreteSubcopula read_subcopula(const std::string& path) {
  auto lines = split_lines(read_file(path));
  auto [M, L] = parse_header(path, lines, "SUBCOP");
  if (lines.size() < static_cast<std::size_t>(L) + 1)
    throw ParseError(path + ": expected " + std::to_string(L) +
                     " domain lines after the header");
  std::vector<std::vector<int>> domains(static_cast<std::size_t>(L));
  std::size_t expect = 1;
  for (int l = 0; l < L; ++l) {
    auto tokens = split_ws(lines[static_cast<std::size_t>(l) + 1]);
    if (tokens.empty())
      throw ParseError(path + " line " + std::to_string(l + 2) +
                       ": empty domain");
    for (const auto& tok : tokens)
      domains[l].push_back(
          static_cast<int>(parse_int_at(tok, {path, static_cast<std::size_t>(l) + 2, 0})));
    expect *= domains[l].size();
  }
  auto values =
      parse_values(path, lines, static_cast<std::size_t>(L) + 1, expect);
  return DiscreteSubcopula(M, std::move(domains), std::move(values));
}

void write_subcopula(const std::string& path, const DiscreteSubcopula& ds) {
  std::string out = "SUBCOP M=" + std::to_string(ds.resolution()) +
                    " L=" + std::to_string(ds.dimension()) + "\n";
  for (const auto& dom : ds.domains()) {
    for (std::size_t i = 0; i < dom.size(); ++i) {
      if (i) out += ' ';
      out += std::to_string(dom[i]);
    }
    out += '\n';
  }
  out += render_block(ds.values());
  write_file(path, out);
}

SampleSet read_samples_csv(const std::string& path) {
  auto lines = split_lines(read_file(path));
  if (lines.empty()) throw ParseError(path + " line 1: empty file");
  auto header = split(lines[0], ',');
  if (header.size() < 2 || header[0] != "m")
    throw ParseError(path + " line 1: expected header 'm,dim1,...'");
  const int L = static_cast<int>(header.size()) - 1;

  std::vector<double> points;
  int M = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto fields = split(lines[i], ',');
    if (fields.size() != header.size())
      throw ParseError(path + " line " + std::to_string(i + 1) + ": expected " +
                       std::to_string(header.size()) + " fields");
    for (int l = 0; l < L; ++l)
      points.push_back(parse_finite_at(fields[static_cast<std::size_t>(l) + 1],
                                       {path, i + 1, static_cast<std::size_t>(l) + 2}));
    ++M;
  }
  if (M == 0) throw ParseError(path + ": no sample rows");
  return SampleSet{M, L, std::move(points)};
}

void write_samples_csv(const std::string& path, const SampleSet& s) {
  std::string out = "m";
  for (int l = 1; l <= s.L; ++l) out += ",dim" + std::to_string(l);
  out += '\n';
  for (int m = 0; m < s.M; ++m) {
    out += std::to_string(m + 1);
    for (int l = 0; l < s.L; ++l) {
      out += ',';
      out += render(s(m, l));
    }
    out += '\n';
  }
  write_file(path, out);
}

DiscreteJointDistribution read_joint_csv(const std::string& path, int M) {
  auto lines = split_lines(read_file(path));
  if (lines.empty()) throw ParseError(path + " line 1: empty file");
  auto header = split(lines[0], ',');
  if (header.size() < 2 || header.back() != "mass" ||
      header[0].rfind("x", 0) != 0)
    throw ParseError(path + " line 1: expected header 'x1,...,xL,mass'");
  const int L = static_cast<int>(header.size()) - 1;

  struct Row {
    std::vector<double> point;
    double mass;
    std::size_t line;
  };
  std::vector<Row> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto fields = split(lines[i], ',');
    if (fields.size() != header.size())
      throw ParseError(path + " line " + std::to_string(i + 1) + ": expected " +
                       std::to_string(header.size()) + " fields");
    Row row;
    row.line = i + 1;
    for (int l = 0; l < L; ++l)
      row.point.push_back(
          parse_finite_at(fields[static_cast<std::size_t>(l)],
                          {path, i + 1, static_cast<std::size_t>(l) + 1}));
    row.mass = parse_finite_at(fields.back(), {path, i + 1, header.size()});
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(path + ": no mass rows");

  std::vector<std::vector<double>> supports(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l) {
    for (const auto& row : rows) supports[l].push_back(row.point[l]);
    std::sort(supports[l].begin(), supports[l].end());
    supports[l].erase(std::unique(supports[l].begin(), supports[l].end()),
                      supports[l].end());
  }

  std::size_t total = 1;
  for (const auto& s : supports) total *= s.size();
  std::vector<double> masses(total, 0.0);
  std::vector<char> seen(total, 0);
  for (const auto& row : rows) {
    std::size_t lin = 0;
    for (int l = 0; l < L; ++l) {
      auto it = std::lower_bound(supports[l].begin(), supports[l].end(),
                                 row.point[l]);
      lin = lin * supports[l].size() +
            static_cast<std::size_t>(it - supports[l].begin());
    }
    if (seen[lin])
      throw ParseError(path + " line " + std::to_string(row.line) +
                       ": duplicate support point");
    seen[lin] = 1;
    masses[lin] = row.mass;
  }
  try {
    return DiscreteJointDistribution::from_masses(M, std::move(supports),
                                                  masses);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void write_joint_csv(const std::string& path,
                     const DiscreteJointDistribution& j) {
  const int L = j.dimension();
  std::string out;
  for (int l = 1; l <= L; ++l) out += "x" + std::to_string(l) + ",";
  out += "mass\n";

  std::vector<int> idx(static_cast<std::size_t>(L), 0);
  std::size_t lin = 0;
  bool more = true;
  while (more) {
    if (j.counts()[lin] > 0) {
      for (int l = 0; l < L; ++l) {
        out += render(j.supports()[l][static_cast<std::size_t>(idx[l])]);
        out += ',';
      }
      out += render(j.mass(lin));
      out += '\n';
    }
    ++lin;
    more = false;
    for (int l = L - 1; l >= 0; --l) {
      if (idx[l] + 1 < static_cast<int>(j.supports()[l].size())) {
        ++idx[l];
        more = true;
        break;
      }
      idx[l] = 0;
    }
  }
  write_file(path, out);
}

StepCDF read_margin_csv(const std::string& path, int M) {
  auto lines = split_lines(read_file(path));
  if (lines.empty()) throw ParseError(path + " line 1: empty file");
  auto header = split(lines[0], ',');
  if (header.size() != 2 || header[0] != "value" || header[1] != "level")
    throw ParseError(path + " line 1: expected header 'value,level'");
  std::vector<double> support;
  std::vector<int> levels;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto fields = split(lines[i], ',');
    if (fields.size() != 2)
      throw ParseError(path + " line " + std::to_string(i + 1) +
                       ": expected 2 fields");
    support.push_back(parse_finite_at(fields[0], {path, i + 1, 1}));
    levels.push_back(
        static_cast<int>(parse_int_at(fields[1], {path, i + 1, 2})));
  }
  try {
    return StepCDF(M, std::move(support), std::move(levels));
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void write_margin_csv(const std::string& path, const StepCDF& f) {
  std::string out = "value,level\n";
  for (std::size_t i = 0; i < f.support().size(); ++i) {
    out += render(f.support()[i]);
    out += ',';
    out += std::to_string(f.levels()[i]);
    out += '\n';
  }
  write_file(path, out);
}

EnsembleDataset read_ensemble_csv(const std::string& path,
                                  const std::string& value_column) {
  auto lines = split_lines(read_file(path));
  if (lines.empty()) throw ParseError(path + " line 1: empty file");
  auto header = split(lines[0], ',');
  if (header.size() < 5 || header[0] != "variable" ||
      header[1] != "location" || header[2] != "lead_time" ||
      header[3] != "member")
    throw ParseError(path +
                     " line 1: expected header "
                     "'variable,location,lead_time,member,value[,...]'");
  std::size_t value_idx = header.size();
  for (std::size_t c = 4; c < header.size(); ++c)
    if (header[c] == value_column) value_idx = c;
  if (value_idx == header.size())
    throw ParseError(path + " line 1: no column named '" + value_column + "'");

  struct Cell {
    double value;
    std::size_t line;
  };
  std::vector<MarginId> margins;
  std::map<std::string, int> margin_index;
  std::vector<std::map<int, Cell>> cells;  // per margin: member -> value
  int max_member = 0;

  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    auto fields = split(lines[i], ',');
    if (fields.size() != header.size())
      throw ParseError(path + " line " + std::to_string(i + 1) + ": expected " +
                       std::to_string(header.size()) + " fields");
    MarginId id{fields[0], fields[1], fields[2]};
    const std::string key = id.str();
    auto [it, inserted] =
        margin_index.try_emplace(key, static_cast<int>(margins.size()));
    if (inserted) {
      margins.push_back(id);
      cells.emplace_back();
    }
    const int margin = it->second;
    const long member = parse_int_at(fields[3], {path, i + 1, 4});
    if (member < 1)
      throw ParseError(path + " line " + std::to_string(i + 1) +
                       ": member index must be >= 1");
    const double v =
        parse_finite_at(fields[value_idx], {path, i + 1, value_idx + 1});
    auto [cit, cinserted] =
        cells[static_cast<std::size_t>(margin)].try_emplace(
            static_cast<int>(member), Cell{v, i + 1});
    if (!cinserted)
      throw ParseError(path + " line " + std::to_string(i + 1) +
                       ": duplicate cell for margin " + key + " member " +
                       std::to_string(member) + " (first at line " +
                       std::to_string(cit->second.line) + ")");
    max_member = std::max(max_member, static_cast<int>(member));
  }
  if (margins.empty()) throw ParseError(path + ": no data rows");

  const int M = max_member;
  const int L = static_cast<int>(margins.size());
  std::vector<double> values(static_cast<std::size_t>(M) * L);
  for (int l = 0; l < L; ++l) {
    for (int m = 1; m <= M; ++m) {
      auto it = cells[static_cast<std::size_t>(l)].find(m);
      if (it == cells[static_cast<std::size_t>(l)].end())
        throw ParseError(path + ": missing member " + std::to_string(m) +
                         " for margin " + margins[static_cast<std::size_t>(l)].str());
      values[static_cast<std::size_t>(l) * M + static_cast<std::size_t>(m - 1)] =
          it->second.value;
    }
  }
  return EnsembleDataset(std::move(margins), M, std::move(values));
}

void write_ensemble_csv(const std::string& path, const EnsembleDataset& e) {
  std::string out = "variable,location,lead_time,member,value\n";
  for (int l = 0; l < e.num_margins(); ++l) {
    const auto& id = e.margin_ids()[static_cast<std::size_t>(l)];
    for (int m = 0; m < e.members(); ++m) {
      out += id.variable + "," + id.location + "," + id.lead_time + "," +
             std::to_string(m + 1) + "," + render(e.value(m, l)) + '\n';
    }
  }
  write_file(path, out);
}

void write_ecc_csv(const std::string& path, const EnsembleDataset& raw,
                   const EnsembleDataset& ecc) {
  if (raw.members() != ecc.members() ||
      raw.num_margins() != ecc.num_margins() ||
      !(raw.margin_ids() == ecc.margin_ids()))
    throw ValidationError("ecc output does not match the raw ensemble shape");
  std::string out = "variable,location,lead_time,member,value,ecc_value\n";
  for (int l = 0; l < raw.num_margins(); ++l) {
    const auto& id = raw.margin_ids()[static_cast<std::size_t>(l)];
    for (int m = 0; m < raw.members(); ++m) {
      out += id.variable + "," + id.location + "," + id.lead_time + "," +
             std::to_string(m + 1) + "," + render(raw.value(m, l)) + "," +
             render(ecc.value(m, l)) + '\n';
    }
  }
  write_file(path, out);
}

std::vector<std::pair<MarginId, PredictiveMargin>> read_margins_json(
    const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (!doc.is_array())
    throw ParseError(path + ": expected a JSON array of margin records");

  std::vector<std::pair<MarginId, PredictiveMargin>> out;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& rec = doc[i];
    try {
      MarginId id{rec.at("variable").get<std::string>(),
                  rec.at("location").get<std::string>(),
                  rec.at("lead_time").get<std::string>()};
      const auto& dist = rec.at("dist");
      const std::string type = dist.at("type").get<std::string>();
      if (type == "gaussian") {
        out.emplace_back(std::move(id),
                         PredictiveMargin::gaussian(
                             dist.at("mean").get<double>(),
                             dist.at("sd").get<double>()));
      } else if (type == "empirical") {
        out.emplace_back(std::move(id),
                         PredictiveMargin::empirical(
                             dist.at("samples").get<std::vector<double>>()));
      } else {
        throw ParseError(path + ": margin record " + std::to_string(i + 1) +
                         ": unknown dist type '" + type + "'");
      }
    } catch (const json::exception& e) {
      throw ParseError(path + ": margin record " + std::to_string(i + 1) +
                       ": " + e.what());
    }
  }
  return out;
}

std::string ecc_report_to_json(const EccReport& report) {
  json doc;
  doc["preserved"] = report.preservation.preserved;
  doc["template_hash"] = report.template_hash;
  doc["sample_ties"] = !report.preservation.tied_margins.empty();
  json margins = json::array();
  for (const auto& m : report.per_margin) {
    json rec;
    rec["id"] = {{"variable", m.id.variable},
                 {"location", m.id.location},
                 {"lead_time", m.id.lead_time}};
    rec["min"] = m.min;
    rec["max"] = m.max;
    margins.push_back(std::move(rec));
  }
  doc["per_margin"] = std::move(margins);
  return doc.dump(2) + "\n";
}

void write_ecc_report_json(const std::string& path, const EccReport& report) {
  write_file(path, ecc_report_to_json(report));
}

std::string axiom_report_to_json(const AxiomReport& report) {
  json doc;
  doc["passed"] = report.passed;
  json violations = json::array();
  for (const auto& v : report.violations) {
    json rec;
    rec["axiom"] = axiom_name(v.axiom);
    rec["where"] = v.where;
    if (v.axis >= 0) rec["axis"] = v.axis + 1;
    rec["observed"] = v.observed;
    rec["required"] = v.required;
    violations.push_back(std::move(rec));
  }
  doc["violations"] = std::move(violations);
  return doc.dump(2) + "\n";
}

}  // namespace discop::io
