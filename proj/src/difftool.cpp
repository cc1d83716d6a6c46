#include "gvf/difftool.hpp"

#include <algorithm>
#include <queue>

namespace gvf {

namespace {

std::string valueText(const Program &p, ValueId v) {
  const Value &val = p.value(v);
  return p.function(val.func).name + ":" + val.name;
}

std::vector<ValueId> programValues(const Program &p) {
  std::vector<ValueId> out;
  for (ValueId v = 1; v < p.values.size(); ++v)
    if (!p.value(v).isAux)
      out.push_back(v);
  return out;
}

} // namespace

std::set<ValuePair> analysisDependencePairs(const ProgramAnalysis &pa,
                                            SolverMode mode) {
  std::set<ValuePair> pairs;
  for (ValueId w : programValues(pa.program)) {
    Label def = pa.program.value(w).defLabel;
    if (!pa.graph.hasNode(w, def))
      continue;
    NodeId seed = pa.graph.findNode(w, def);
    TraverseConfig cfg;
    cfg.forward = false;
    cfg.mode = mode;
    auto res = traverse(pa.graph, *pa.guards, seed, cfg);
    for (const auto &[n, g] : res.admitted) {
      (void)g;
      ValueId v = pa.graph.node(n).value;
      if (v != w && !pa.program.value(v).isAux)
        pairs.insert({v, w});
    }
  }
  return pairs;
}

std::set<ValuePair> oracleDependencePairs(const OracleResult &oracle,
                                          const Program &p) {
  std::set<ValuePair> pairs;
  for (const auto &[pair, assigns] : oracle.dependence) {
    (void)assigns;
    if (!p.value(pair.first).isAux && !p.value(pair.second).isAux)
      pairs.insert(pair);
  }
  return pairs;
}

std::set<std::pair<Label, Label>>
reportOriginPairs(const std::vector<BugReport> &reports) {
  std::set<std::pair<Label, Label>> out;
  for (const auto &r : reports)
    out.insert({r.firstOrigin, r.secondOrigin});
  return out;
}

bool reachableUnderAssignment(const ProgramAnalysis &pa, ValueId src,
                              ValueId dst,
                              const std::vector<bool> &assignment) {
  // nodes of src seed the search; any node of dst accepts
  std::vector<NodeId> seeds;
  for (NodeId n = 0; n < pa.graph.nodeCount(); ++n)
    if (pa.graph.node(n).value == src)
      seeds.push_back(n);
  std::set<NodeId> seen(seeds.begin(), seeds.end());
  std::queue<NodeId> work;
  for (NodeId n : seeds)
    work.push(n);
  while (!work.empty()) {
    NodeId n = work.front();
    work.pop();
    if (pa.graph.node(n).value == dst)
      return true;
    for (uint32_t ei : pa.graph.outEdges(n)) {
      const VFGEdge &e = pa.graph.edges()[ei];
      if (!pa.guards->eval(e.guard, assignment))
        continue;
      if (seen.insert(e.dst).second)
        work.push(e.dst);
    }
  }
  return false;
}

DiffReport diffAgainstOracle(const ProgramAnalysis &pa,
                             const OracleResult &oracle,
                             uint32_t perAssignmentSampleLimit) {
  DiffReport report;
  const Program &p = pa.program;
  report.hadHavoc = false;
  for (const auto &f : p.functions)
    for (const auto &bb : f.blocks)
      for (const auto &st : bb.stmts)
        if (st.kind == StmtKind::Havoc)
          report.hadHavoc = true;

  auto oraclePairs = oracleDependencePairs(oracle, p);
  auto semiPairs = analysisDependencePairs(pa, SolverMode::Semi);
  auto fullPairs = analysisDependencePairs(pa, SolverMode::Full);

  for (const auto &pr : oraclePairs) {
    if (!semiPairs.count(pr))
      report.violations.push_back("dependence missed (semi): " +
                                  valueText(p, pr.first) + " -> " +
                                  valueText(p, pr.second));
    if (!fullPairs.count(pr))
      report.violations.push_back("dependence missed (full): " +
                                  valueText(p, pr.first) + " -> " +
                                  valueText(p, pr.second));
  }
  for (const auto &pr : fullPairs)
    if (!semiPairs.count(pr))
      report.violations.push_back("full mode found a pair semi missed: " +
                                  valueText(p, pr.first) + " -> " +
                                  valueText(p, pr.second));
  if (!report.hadHavoc) {
    for (const auto &pr : fullPairs)
      if (!oraclePairs.count(pr))
        report.violations.push_back("spurious dependence (full): " +
                                    valueText(p, pr.first) + " -> " +
                                    valueText(p, pr.second));
  }

  // per-assignment witnesses for a sample of oracle pairs
  uint32_t sampled = 0;
  for (const auto &[pr, assigns] : oracle.dependence) {
    if (p.value(pr.first).isAux || p.value(pr.second).isAux)
      continue;
    if (sampled++ >= perAssignmentSampleLimit)
      break;
    for (uint32_t idx : assigns) {
      auto assignment = oracle.assignmentOf(idx, pa.guards->atomCount());
      if (!reachableUnderAssignment(pa, pr.first, pr.second, assignment)) {
        report.violations.push_back(
            "no satisfied path for " + valueText(p, pr.first) + " -> " +
            valueText(p, pr.second) + " under assignment " +
            std::to_string(idx));
        break;
      }
    }
  }

  auto semiReports = reportOriginPairs(checkDoubleFree(pa, SolverMode::Semi));
  auto fullReports = reportOriginPairs(checkDoubleFree(pa, SolverMode::Full));
  for (const auto &df : oracle.doubleFrees) {
    if (!semiReports.count(df))
      report.violations.push_back("double free missed (semi): l" +
                                  std::to_string(df.first) + ",l" +
                                  std::to_string(df.second));
    if (!fullReports.count(df))
      report.violations.push_back("double free missed (full): l" +
                                  std::to_string(df.first) + ",l" +
                                  std::to_string(df.second));
  }
  for (const auto &df : fullReports)
    if (!semiReports.count(df))
      report.violations.push_back("full-mode report missing from semi: l" +
                                  std::to_string(df.first) + ",l" +
                                  std::to_string(df.second));
  if (!report.hadHavoc) {
    for (const auto &df : fullReports)
      if (!oracle.doubleFrees.count(df))
        report.violations.push_back("spurious double free (full): l" +
                                    std::to_string(df.first) + ",l" +
                                    std::to_string(df.second));
  }

  // producer containment per value with oracle-recorded producers
  for (const auto &[v, oracleProducers] : oracle.producers) {
    if (p.value(v).isAux)
      continue;
    Label def = p.value(v).defLabel;
    if (!pa.graph.hasNode(v, def))
      continue;
    NodeId seed = pa.graph.findNode(v, def);
    auto full = thinSlice(pa, seed, SolverMode::Full);
    auto semi = thinSlice(pa, seed, SolverMode::Semi);
    for (Label l : full.producers)
      if (!semi.producers.count(l)) {
        report.violations.push_back("full slice exceeds semi slice at " +
                                    valueText(p, v));
        break;
      }
    for (Label l : oracleProducers) {
      if (!full.producers.count(l)) {
        report.violations.push_back("producer missed for " + valueText(p, v) +
                                    ": l" + std::to_string(l));
        break;
      }
    }
  }
  return report;
}

} // namespace gvf
