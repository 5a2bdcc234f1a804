/// \file compile.hpp
/// Options and statistics shared by the boolean and Gaussian compilers.

#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "oss/model.hpp"

namespace oss {

/// Form of the parent-to-child message update.
///
/// `consistent` is the update that agrees with exact conditioning and is the
/// default. `alternate` keeps a second algebraic form of the same update for
/// comparison: in the boolean solver it mixes the child's conditionals with the
/// unnormalised weight p·Πf' instead of the posterior of the parent; in the
/// Gaussian solver it applies the squared edge weight inversely (multiplying
/// outgoing precision, dividing incoming). Both variants coincide only in
/// special cases (normalised evidence weight, or a² = 1).
enum class MessageRule { consistent, alternate };

std::string_view to_string(MessageRule rule);
MessageRule parse_message_rule(std::string_view text);

struct CompileOptions {
  unsigned threads = 1;
  MessageRule rule = MessageRule::consistent;
};

struct TableStat {
  NodeId node;
  std::size_t entries = 0;
  double capacity = 0.0;  ///< product of grid sizes
};

struct CompileStats {
  std::vector<TableStat> tables;  ///< one per node, in compile order
};

}  // namespace oss
