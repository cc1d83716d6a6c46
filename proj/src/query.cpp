#include "gvf/query.hpp"

#include <algorithm>
#include <sstream>

#include "gvf/diag.hpp"

namespace gvf {

SliceResult thinSlice(const ProgramAnalysis &pa, NodeId seed,
                      SolverMode mode) {
  if (seed >= pa.graph.nodeCount())
    throw QueryError("unknown slice seed");
  TraverseConfig cfg;
  cfg.forward = false;
  cfg.mode = mode;
  auto res = traverse(pa.graph, *pa.guards, seed, cfg);
  SliceResult slice;
  slice.seed = seed;
  slice.visitedPaths = res.visits;
  for (const auto &[n, g] : res.admitted) {
    (void)g;
    slice.producers.insert(pa.graph.node(n).label);
  }
  slice.producers.insert(pa.graph.node(seed).label);
  return slice;
}

std::map<NodeId, GuardId> answerAliasPairs(const ProgramAnalysis &pa,
                                           NodeId src, SolverMode mode) {
  if (src >= pa.graph.nodeCount())
    throw QueryError("unknown query node");
  std::map<NodeId, GuardId> out;
  for (bool forward : {false, true}) {
    TraverseConfig cfg;
    cfg.forward = forward;
    cfg.mode = mode;
    auto res = traverse(pa.graph, *pa.guards, src, cfg);
    for (const auto &[n, g] : res.admitted) {
      if (n == src)
        continue;
      auto it = out.find(n);
      if (it == out.end())
        out.emplace(n, g);
      else
        it->second = pa.guards->disj(it->second, g);
    }
  }
  return out;
}

namespace {

struct SiteInfo {
  const FreeSite *site;
  NodeId operandNode;
};

std::string nodeName(const ProgramAnalysis &pa, NodeId n) {
  const VFGNode &vn = pa.graph.node(n);
  const Value &v = pa.program.value(vn.value);
  return pa.program.function(v.func).name + ":" + v.name + "@l" +
         std::to_string(vn.label);
}

} // namespace

std::vector<BugReport> checkDoubleFree(const ProgramAnalysis &pa,
                                       SolverMode mode) {
  GuardStore &gs = *pa.guards;
  std::vector<SiteInfo> sites;
  std::set<NodeId> targets;
  for (const auto &fs : pa.freeSites) {
    Label def = pa.program.value(fs.operand).defLabel;
    if (!pa.graph.hasNode(fs.operand, def))
      continue;
    NodeId n = pa.graph.findNode(fs.operand, def);
    sites.push_back({&fs, n});
    targets.insert(n);
  }
  if (sites.empty())
    return {};

  // candidate sources: definitions nothing flows into
  std::vector<NodeId> roots;
  for (NodeId n = 0; n < pa.graph.nodeCount(); ++n)
    if (pa.graph.inEdges(n).empty())
      roots.push_back(n);
  std::sort(roots.begin(), roots.end(), [&](NodeId a, NodeId b) {
    return nodeName(pa, a) < nodeName(pa, b);
  });

  std::map<std::pair<Label, Label>, BugReport> byOriginPair;
  for (NodeId root : roots) {
    TraverseConfig cfg;
    cfg.forward = true;
    cfg.mode = mode;
    cfg.trackArrivals = true;
    cfg.targets = &targets;
    auto res = traverse(pa.graph, gs, root, cfg);
    if (res.arrivals.empty())
      continue;
    for (size_t i = 0; i < sites.size(); ++i) {
      auto a1 = res.arrivals.find(sites[i].operandNode);
      if (a1 == res.arrivals.end())
        continue;
      for (size_t k = i + 1; k < sites.size(); ++k) {
        auto a2 = res.arrivals.find(sites[k].operandNode);
        if (a2 == res.arrivals.end())
          continue;
        auto originKey =
            std::make_pair(std::min(sites[i].site->origin, sites[k].site->origin),
                           std::max(sites[i].site->origin, sites[k].site->origin));
        if (byOriginPair.count(originKey))
          continue;
        for (const auto &w1 : a1->second) {
          bool reported = false;
          for (const auto &w2 : a2->second) {
            // flows must leave callee scopes through the same call sites,
            // otherwise they describe different instances
            if (w1.exitSig != w2.exitSig)
              continue;
            GuardId cond = gs.simplify(
                gs.conj(gs.conj(w1.guard, w2.guard),
                        gs.conj(sites[i].site->pathCond,
                                sites[k].site->pathCond)));
            SatVerdict verdict = mode == SolverMode::Full
                                     ? gs.fullSat(cond)
                                     : gs.semiDecide(cond);
            if (verdict == SatVerdict::UNSAT)
              continue;
            BugReport report;
            report.firstFree =
                std::min(sites[i].site->label, sites[k].site->label);
            report.secondFree =
                std::max(sites[i].site->label, sites[k].site->label);
            report.firstOrigin = originKey.first;
            report.secondOrigin = originKey.second;
            report.sharedSource = root;
            report.condition = cond;
            for (uint32_t ei : w1.path)
              report.trace.push_back(
                  pa.graph.node(pa.graph.edges()[ei].dst).label);
            for (uint32_t ei : w2.path)
              report.trace.push_back(
                  pa.graph.node(pa.graph.edges()[ei].dst).label);
            byOriginPair.emplace(originKey, std::move(report));
            reported = true;
            break;
          }
          if (reported)
            break;
        }
      }
    }
  }
  std::vector<BugReport> out;
  for (auto &[key, report] : byOriginPair) {
    (void)key;
    out.push_back(std::move(report));
  }
  std::sort(out.begin(), out.end(), [](const BugReport &a, const BugReport &b) {
    return std::make_pair(a.firstOrigin, a.secondOrigin) <
           std::make_pair(b.firstOrigin, b.secondOrigin);
  });
  return out;
}

std::string formatReports(const ProgramAnalysis &pa,
                          const std::vector<BugReport> &reports,
                          const std::string &file) {
  std::ostringstream os;
  for (const auto &r : reports) {
    os << "DF " << file << ":l" << r.firstOrigin << " " << file << ":l"
       << r.secondOrigin << " cond=" << pa.guards->text(r.condition)
       << " trace=";
    for (size_t i = 0; i < r.trace.size(); ++i)
      os << (i ? "," : "") << "l" << r.trace[i];
    os << "\n";
  }
  return os.str();
}

std::string formatSlice(const ProgramAnalysis &pa, const SliceResult &slice) {
  std::ostringstream os;
  const VFGNode &n = pa.graph.node(slice.seed);
  os << "SLICE " << pa.program.value(n.value).name << "@l" << n.label
     << " ->";
  std::vector<Label> labels(slice.producers.begin(), slice.producers.end());
  std::sort(labels.begin(), labels.end());
  for (size_t i = 0; i < labels.size(); ++i)
    os << (i ? "," : " ") << "l" << labels[i];
  os << "\n";
  return os.str();
}

NodeId resolveSeed(const ProgramAnalysis &pa, const std::string &spec) {
  std::string name = spec;
  Label label = 0;
  auto at = spec.find('@');
  if (at != std::string::npos) {
    name = spec.substr(0, at);
    std::string l = spec.substr(at + 1);
    if (!l.empty() && l[0] == 'l')
      l = l.substr(1);
    label = static_cast<Label>(std::strtoul(l.c_str(), nullptr, 10));
  }
  for (const auto &f : pa.program.functions) {
    ValueId v = pa.program.findValue(f.id, name);
    if (!v)
      continue;
    Label def = label ? label : pa.program.value(v).defLabel;
    if (pa.graph.hasNode(v, def))
      return pa.graph.findNode(v, def);
  }
  throw QueryError("unknown seed '" + spec + "'");
}

} // namespace gvf
