#include "oss/compile.hpp"

#include <stdexcept>
#include <string>

namespace oss {

std::string_view to_string(MessageRule rule) {
  return rule == MessageRule::consistent ? "consistent" : "alternate";
}

MessageRule parse_message_rule(std::string_view text) {
  if (text == "consistent") return MessageRule::consistent;
  if (text == "alternate") return MessageRule::alternate;
  throw std::invalid_argument("unknown message rule: " + std::string(text));
}

}  // namespace oss
