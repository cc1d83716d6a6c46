#pragma once

#include <memory>
#include <string>

#include "gvf/inter.hpp"

namespace gvf {

struct PipelineOptions {
  int unrollK = 2;
  int recursionDepth = 2;
  unsigned jobs = 1;
  AnalysisOptions analysis;
};

// parse -> unroll -> lower -> bottom-up analysis -> frozen graph
std::unique_ptr<ProgramAnalysis> analyzeText(const std::string &text,
                                             const PipelineOptions &opts = {});

// parse -> unroll -> lower, no analysis (the oracle's input form)
Program loadProgram(const std::string &text, int unrollK = 2,
                    int recursionDepth = 2);

std::string statsText(const ProgramAnalysis &pa);

} // namespace gvf
