#pragma once

#include <string>
#include <vector>

#include "specfid/cobol/ast.hpp"
#include "specfid/probes/facts.hpp"

namespace specfid::probes {

struct ObservabilityVerdict {
    bool accepted = true;
    std::vector<std::string> rejected_terms;  // banned-lexicon hits, in lexicon order
};

// The frozen default term list; Definition-style categories made concrete.
std::vector<std::string> default_banned_lexicon();

// One term per line, '#' comments and blank lines skipped.
std::vector<std::string> load_lexicon(const std::string& path);

// Accepts iff the rendered truth contains no banned term (case-insensitive,
// word-boundary; multiword terms match consecutive tokens, and a trailing
// "code"/"codes" also matches a bare number, so "status code" catches
// "status 35") and mentions no paragraph name from the AST.
ObservabilityVerdict observability_filter(const GraphFact& fact,
                                          const std::vector<std::string>& lexicon,
                                          const std::vector<std::string>& paragraph_names);

// Paragraph and section names of the program, for the filter.
std::vector<std::string> paragraph_names(const cobol::Program& program);

// The only path from graphs to emitted facts: enumerate, then drop every
// fact the observability filter rejects.
std::vector<GraphFact> observable_facts(const cobol::Program& program,
                                        const graph::Acfg& acfg, const graph::Dfg& dfg,
                                        const graph::Sdg& sdg, Channel channel,
                                        const std::vector<std::string>& lexicon);

}  // namespace specfid::probes
