#include "flocksim/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "flocksim/errors.hpp"

namespace flocksim {

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

std::vector<std::string> axis_names(int p) {
  if (p == 3) return {"x", "y", "z"};
  std::vector<std::string> names;
  for (int k = 1; k <= p; ++k) names.push_back(std::to_string(k));
  return names;
}

}  // namespace

void emit_csv(const SimLog& log, const std::filesystem::path& path) {
  if (log.t.empty()) throw ContractViolation("emit_csv: empty log");
  if (log.diag.v_total.size() != log.t.size())
    throw ContractViolation("emit_csv: log has no diagnostics series");
  const int n = log.n;
  const int p = static_cast<int>(log.agents.front().front().q.size());
  const int ptheta =
      static_cast<int>(log.ctrl.front().front().theta_hat.size());
  const auto ax = axis_names(p);

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("emit_csv: cannot open " + path.string());

  std::vector<std::string> header;
  header.push_back("t");
  for (const auto& a : ax) header.push_back("q0_" + a);
  for (const auto& a : ax) header.push_back("qd0_" + a);
  for (int i = 1; i <= n; ++i) {
    const std::string si = std::to_string(i);
    for (const auto& a : ax) header.push_back("q" + si + "_" + a);
    for (const auto& a : ax) header.push_back("qd" + si + "_" + a);
    for (const auto& a : ax) header.push_back("v" + si + "_" + a);
    if (ptheta == 1) {
      header.push_back("theta" + si);
    } else {
      for (int k = 1; k <= ptheta; ++k)
        header.push_back("theta" + si + "_" + std::to_string(k));
    }
    if (log.adaptive_gains) {
      for (int j = 0; j <= n; ++j) {
        if (j == i) continue;
        header.push_back("alpha" + si + "_" + std::to_string(j));
      }
      header.push_back("beta" + si);
    }
  }
  header.insert(header.end(), {"V1", "V2", "V3", "V"});
  for (int i = 1; i <= n; ++i)
    header.push_back("velerr_" + std::to_string(i));
  header.insert(header.end(),
                {"min_dist", "lambda_min_H", "edges_added", "edges_lost"});

  for (std::size_t c = 0; c < header.size(); ++c)
    out << header[c] << (c + 1 < header.size() ? "," : "\n");

  // cumulative distinct edge changes relative to the t = 0 graph
  std::set<std::pair<int, int>> initial;
  for (const auto& [i, j] : log.initial_edges) initial.insert({i + 1, j + 1});
  for (int i = 0; i < n; ++i)
    if (i < static_cast<int>(log.initial_leader_adj.size()) &&
        log.initial_leader_adj[i])
      initial.insert({0, i + 1});

  std::size_t next_event = 0;
  std::set<std::pair<int, int>> added, lost;
  for (std::size_t k = 0; k < log.t.size(); ++k) {
    while (next_event < log.events.size() &&
           log.events[next_event].t <= log.t[k]) {
      const auto& ev = log.events[next_event++];
      const std::pair<int, int> pair{ev.a, ev.b};
      if (ev.added && !initial.count(pair)) added.insert(pair);
      if (!ev.added && initial.count(pair)) lost.insert(pair);
    }
    std::vector<double> row;
    row.push_back(log.t[k]);
    for (int c = 0; c < p; ++c) row.push_back(log.leader[k].q(c));
    for (int c = 0; c < p; ++c) row.push_back(log.leader[k].qd(c));
    for (int i = 0; i < n; ++i) {
      const auto& a = log.agents[k][i];
      const auto& ct = log.ctrl[k][i];
      for (int c = 0; c < p; ++c) row.push_back(a.q(c));
      for (int c = 0; c < p; ++c) row.push_back(a.qd(c));
      for (int c = 0; c < p; ++c) row.push_back(ct.v(c));
      for (int c = 0; c < ptheta; ++c) row.push_back(ct.theta_hat(c));
      if (log.adaptive_gains) {
        for (int j = 0; j <= n; ++j) {
          if (j == i + 1) continue;
          row.push_back(ct.alpha(j));
        }
        row.push_back(ct.beta);
      }
    }
    row.push_back(log.diag.v1[k]);
    row.push_back(log.diag.v2[k]);
    row.push_back(log.diag.v3[k]);
    row.push_back(log.diag.v_total[k]);
    for (int i = 0; i < n; ++i) row.push_back(log.diag.vel_err[k][i]);
    row.push_back(log.diag.min_dist[k]);
    row.push_back(log.diag.lambda_min_h[k]);
    row.push_back(static_cast<double>(added.size()));
    row.push_back(static_cast<double>(lost.size()));

    for (std::size_t c = 0; c < row.size(); ++c)
      out << fmt(row[c]) << (c + 1 < row.size() ? "," : "\n");
  }
  if (!out) throw ConfigError("emit_csv: write failed for " + path.string());
}

int CsvTable::col(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end())
    throw ConfigError("csv: missing column '" + name + "'");
  return static_cast<int>(it - header.begin());
}

bool CsvTable::has_col(const std::string& name) const {
  return std::find(header.begin(), header.end(), name) != header.end();
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("read_csv: cannot open " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line))
    throw ConfigError("read_csv: empty file " + path.string());
  std::stringstream head(line);
  std::string cell;
  while (std::getline(head, cell, ',')) table.header.push_back(cell);
  table.columns.resize(table.header.size());
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::stringstream row(line);
    std::size_t c = 0;
    while (std::getline(row, cell, ',')) {
      if (c >= table.columns.size())
        throw ConfigError("read_csv: extra cells at line " +
                          std::to_string(lineno));
      table.columns[c++].push_back(std::strtod(cell.c_str(), nullptr));
    }
    if (c != table.columns.size())
      throw ConfigError("read_csv: short row at line " + std::to_string(lineno));
  }
  return table;
}

}  // namespace flocksim
