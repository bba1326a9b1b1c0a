#include "pcs/docgen.hpp"

#include <fstream>

#include "pcs/errors.hpp"

namespace pcs {

std::string doc_scaffold_text() {
  return R"(# PCS analysis documentation

Fill in each section below. The narrative is part of the analysis: every
judgment call (perturbation choices, screening rule, data cleaning steps)
should be stated and argued for so that reviewers can evaluate the evidence.

## Domain problem formulation

TODO: State the real-world question and prior work around it. Explain how
the question is translated into a concrete data-analysis problem, and which
model or analysis output will be read as the answer.

## Data collection and storage

TODO: Describe how the data were generated, the design of the collection
process, and why these data bear on the question. Say where the data live
and how others can obtain them.

## Data cleaning and preprocessing

TODO: Record every step that turns raw data into the analysis matrix, with
the reasoning behind each. If more than one defensible preprocessing choice
exists, run the alternatives and report how the results move.

## Exploratory data analysis

TODO: Summarize the preliminary looks at the data that shaped modeling
decisions, with the code and figures that support them.

## Modeling and post-hoc analysis

TODO: Run the stability analysis here. Declare the prediction target, the
data and model perturbations with their justification, the screening rule,
and the stability metric. For hypothesis-style questions, state the null
data-generation rule and compare observed and null perturbation results.

## Interpretation of results

TODO: Translate the numerical results back into domain terms. State the
conclusions or recommendations and the limits of what this analysis can
support.
)";
}

void write_doc_scaffold(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << doc_scaffold_text();
  if (!out) throw DataError("write failed for " + path.string());
}

}  // namespace pcs
