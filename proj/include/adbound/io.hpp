#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "adbound/model.hpp"

namespace adbound {

/// A parsed model file: BAYES files give belief networks, MARKOV files with
/// 0/1 tables give constraint problems.
using Model = std::variant<BeliefNetwork, CspProblem>;

/// Domains and factor list of either model kind.
const Domains& model_domains(const Model& m);
const std::vector<Factor>& model_factors(const Model& m);

/// UAI-style text format. Throws InputError carrying the offending line.
Model read_model(std::istream& in);
Model parse_model(const std::string& path);

/// Writes with full double precision so parse(write(m)) == m.
void write_model(std::ostream& out, const Model& m);
void write_model(const Model& m, const std::string& path);

/// Evidence: a count followed by (variable, value) pairs.
Evidence read_evidence(std::istream& in);
Evidence parse_evidence(const std::string& path);
void write_evidence(std::ostream& out, const Evidence& ev);

}  // namespace adbound
